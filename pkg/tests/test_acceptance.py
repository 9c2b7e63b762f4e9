"""Acceptance criteria 1-8, each at its stated tolerance.

Every test prints one PASS/FAIL line. Run directly for the summary alone:

    python tests/test_acceptance.py
"""

import math
import sys

import numpy as np
import pytest

from crouzeix_lab.conformal import (
    EllipseMapSeries,
    QuinticMap,
    admissible_quintic_grid,
    bicirc_profile_verify,
    boundary_derivative_identity,
    ellipse_constants,
    square_transform,
    verify_symmetry,
)
from crouzeix_lab.crouzeix import (
    cauchy_transform_numeric,
    crouzeix_ratio,
    psi_closed_form,
    ratio_search,
    verify_cp_bound,
)
from crouzeix_lab.matrices import nr_boundary, op_norm, poly_apply
from crouzeix_lab.numerics import Polynomial

pytestmark = pytest.mark.acceptance

B_GRID = np.geomspace(0.05, 20, 25)
CANON = np.array([[1, 2], [0, -1]], dtype=complex)
NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)
PROFILE_GRID = np.linspace(0.0, 0.999, 10**4)


def criterion_1():
    worst_weak, worst_strict = math.inf, math.inf
    for b in B_GRID:
        rho, phi1, phip0 = ellipse_constants(b, eps=1e-14)
        worst_weak = min(worst_weak, 2 / rho - phi1)
        worst_strict = min(worst_strict, phip0 - 2 / rho)
    ok = worst_weak >= -1e-12 and worst_strict > 0
    return ok, f"min(2/rho - phi(1)) = {worst_weak:.3e}, min(phi'(0) - 2/rho) = {worst_strict:.3e}"


def criterion_2():
    worst_prod, worst_cp, worst_eq, worst_phi = 0.0, 0.0, 0.0, 0.0
    for b in B_GRID:
        rep = verify_cp_bound(b)
        by_name = {c.name: c for c in rep.checks}
        worst_prod = max(worst_prod, -by_name["psi(A) phi(A) = (1 - phi(1)/phi'(0)) I"].margin)
        worst_cp = max(worst_cp, rep.cp_norm)
        worst_eq = max(worst_eq, abs(rep.phi_norm - rep.phi1 * rep.rho))
        worst_phi = max(worst_phi, rep.phi_norm)
    ok = worst_prod <= 1e-12 and worst_cp <= 2 + 1e-8 and worst_eq <= 1e-12 and worst_phi <= 2 + 1e-10
    return ok, (f"product residual {worst_prod:.2e}, max cp norm {worst_cp:.10f}, "
                f"| ||phi(A)|| - phi(1) rho | {worst_eq:.2e}, max ||phi(A)|| {worst_phi:.10f}")


def criterion_3():
    match_ok, doubling_ok = True, True
    parts = []
    for z in (0.3, 0.5j, -0.4 + 0.2j):
        exact = psi_closed_form(1.0, z)
        e4096 = abs(cauchy_transform_numeric(1.0, z, 4096) - exact)
        e8192 = abs(cauchy_transform_numeric(1.0, z, 8192) - exact)
        match_ok &= e4096 <= 1e-6
        doubling_ok &= e8192 <= e4096 / 3
        parts.append(f"z={z}: {e4096:.1e} -> {e8192:.1e}")
    return match_ok and doubling_ok, f"match {match_ok}, doubling {doubling_ok}; " + "; ".join(parts)


def criterion_4():
    worst = math.inf
    failures = []
    maps = [(f"inverse b={b}", EllipseMapSeries(b).inverse) for b in (0.2, 1.0, 5.0)]
    maps += [(f"quintic {a:.4g},{b:.4g}", QuinticMap(a, b)) for a, b in admissible_quintic_grid()]
    for label, f in maps:
        margins = bicirc_profile_verify(f, PROFILE_GRID, tol=1e-8)
        worst = min(worst, min(v for k, v in margins.items() if k != "passed"))
        if not margins["passed"]:
            failures.append(label)
    return not failures, f"{len(maps)} maps, worst margin {worst:.3e}, failures {failures}"


def criterion_5():
    r_grid = np.linspace(0, 1, 202)[1:-1]
    theta_grid = 2 * math.pi * np.arange(200) / 200
    q = QuinticMap(0.25, 0.05)
    sym = verify_symmetry(q, "bicirc", r_grid, theta_grid, 1e-10)
    rng = np.random.default_rng(0)
    ident = max(abs(l - r) for l, r in (boundary_derivative_identity(q, t) for t in rng.uniform(0, math.pi / 2, 100)))
    squares = [verify_symmetry(square_transform(QuinticMap(a, b).polynomial), "circular", r_grid, theta_grid, 1e-10).passed
               for a, b in admissible_quintic_grid()]
    ok = sym.passed and ident <= 1e-6 and all(squares)
    return ok, (f"bicirc worst {sym.worst_violation:.2e}, identity error {ident:.2e}, "
                f"circular squares {sum(squares)}/{len(squares)}")


def criterion_6():
    z = nr_boundary(CANON, 360).points
    # pointwise distance to the ellipse (sqrt 2, 1): compare with its radial point
    t = np.angle(z)
    r_ell = 1 / np.sqrt(np.cos(t) ** 2 / 2 + np.sin(t) ** 2)
    err_ellipse = float(np.max(np.abs(np.abs(z) - r_ell)))
    err_circle = float(np.max(np.abs(np.abs(nr_boundary(NILPOTENT, 360).points) - 1)))
    ok = err_ellipse <= 1e-8 and err_circle <= 1e-10
    return ok, f"ellipse error {err_ellipse:.2e}, circle error {err_circle:.2e}"


def criterion_7():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        d = int(rng.integers(1, 7))
        p = Polynomial(rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1))
        worst = max(worst, crouzeix_ratio(A, p))
    best = ratio_search(NILPOTENT, 1, restarts=32, seed=0).best_ratio
    ok = worst <= 2 + 1e-6 and best >= 1.999
    return ok, f"max random ratio {worst:.6f}, nilpotent search {best:.15f}"


def criterion_8():
    disk = abs(crouzeix_ratio(NILPOTENT, Polynomial([0, 1])) - 2)
    norm = abs(op_norm(CANON) - (1 + math.sqrt(2)))
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        coeffs = np.zeros(2 * int(rng.integers(1, 6)), dtype=complex)
        coeffs[1::2] = rng.normal(size=len(coeffs) // 2) + 1j * rng.normal(size=len(coeffs) // 2)
        p = Polynomial(coeffs)
        worst = max(worst, float(np.max(np.abs(poly_apply(p, CANON) - p(1.0) * CANON))))
    ok = disk <= 1e-12 and norm <= 1e-12 and worst <= 1e-12
    return ok, f"disk ratio error {disk:.1e}, norm error {norm:.1e}, odd calculus error {worst:.1e}"


CRITERIA = {
    1: ("ellipse constants chain", criterion_1),
    2: ("2x2 pipeline norm bound", criterion_2),
    3: ("Cauchy transform oracle", criterion_3),
    4: ("axis profiles", criterion_4),
    5: ("bi-circular quintic", criterion_5),
    6: ("numerical range shapes", criterion_6),
    7: ("ratio bounded by 2", criterion_7),
    8: ("exact spot values", criterion_8),
}


def _line(n, ok, detail):
    return f"criterion {n} [{CRITERIA[n][0]}]: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n][1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for n, (_, fn) in CRITERIA.items():
        ok, detail = fn()
        results.append(ok)
        print(_line(n, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
