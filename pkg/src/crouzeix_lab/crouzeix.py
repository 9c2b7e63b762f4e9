"""The 2x2 Crouzeix bound, numerically: phi(A), psi(A), the
Crouzeix-Palencia norm bound, the key scalar inequalities, and a search for
polynomials with large Crouzeix ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conformal import EllipseMapSeries, ellipse_constants
from .errors import DegenerateRange, InvalidParameter, InvalidPolynomial, OutOfDomain
from .matrices import _as_2x2, canonicalize_2x2, nr_boundary, op_norm, poly_apply
from .numerics import (
    CurveSamples,
    Polynomial,
    as_complex,
    circle_curve,
    max_modulus_on_curve,
    segment_curve,
)

SEARCH_STEPS = 500
INIT_RANGE = 2.0


def canonical_matrix(b: float) -> np.ndarray:
    """[[1, 2b], [0, -1]]: numerical range is the ellipse with foci +-1 and semi-minor axis b."""
    return np.array([[1.0, 2.0 * b], [0.0, -1.0]], dtype=complex)


def phi_psi_of_A(b: float, eps: float = 1e-14):
    """Return ``(phi(A), psi(A))`` for the canonical matrix with parameter ``b``.

    phi(A) = phi(1) A because phi is odd and A has eigenvalues +-1;
    psi(A) = phi(A)^{-1} - A^{-1} / phi'(0).
    """
    _, phi1, phip0 = ellipse_constants(b, eps)
    A = canonical_matrix(b)
    phiA = phi1 * A
    psiA = np.linalg.inv(phiA) - np.linalg.inv(A) / phip0
    return phiA, psiA


@dataclass
class Check:
    name: str
    passed: bool
    margin: float


@dataclass
class ProofReport:
    b: float
    rho: float
    phi1: float
    phip0: float
    cp_norm: float
    product_scalar: float
    phi_norm: float
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed


def verify_cp_bound(b: float, eps: float = 1e-14) -> ProofReport:
    """Run the 2x2 proof chain for the canonical matrix with parameter ``b``.

    Margins are signed so that a non-negative margin means the check holds
    without using its tolerance.
    """
    rho, phi1, phip0 = ellipse_constants(b, eps)
    phiA, psiA = phi_psi_of_A(b, eps)
    cp_norm = op_norm(phiA + psiA.conj().T)
    product_scalar = 1.0 - phi1 / phip0
    product_residual = float(np.max(np.abs(psiA @ phiA - product_scalar * np.eye(2))))
    phi_norm = op_norm(phiA)
    two_over_rho = 2.0 / rho

    checks = [
        Check("phi(1) <= phi'(0)", phip0 - phi1 >= -1e-12, phip0 - phi1),
        Check("phi(1) <= 2/rho", two_over_rho - phi1 >= -1e-12, two_over_rho - phi1),
        Check("2/rho < phi'(0)", phip0 - two_over_rho > 0, phip0 - two_over_rho),
        Check("psi(A) phi(A) = (1 - phi(1)/phi'(0)) I", product_residual <= 1e-12, -product_residual),
        Check("||phi(A) + psi(A)*|| <= 2", cp_norm <= 2 + 1e-8, 2 - cp_norm),
        Check("||phi(A)|| = phi(1) rho", abs(phi_norm - phi1 * rho) <= 1e-10, -abs(phi_norm - phi1 * rho)),
        Check("||phi(A)|| <= 2", phi_norm <= 2 + 1e-10, 2 - phi_norm),
        Check("||phi(A)||^2 + 2(1 - phi(1)/phi'(0)) <= 4",
              phi_norm**2 + 2 * product_scalar <= 4 + 1e-8, 4 - phi_norm**2 - 2 * product_scalar),
    ]
    return ProofReport(float(b), rho, phi1, phip0, cp_norm, product_scalar, phi_norm, checks)


def psi_closed_form(b: float, z, eps: float = 1e-14) -> complex:
    """1/phi(z) - 1/(phi'(0) z), with its removable value 0 at z = 0."""
    z = as_complex(z)
    if z == 0:
        return 0j
    m = EllipseMapSeries(b, eps)
    _, _, phip0 = ellipse_constants(b, eps)
    return 1.0 / m(z) - 1.0 / (phip0 * z)


def cauchy_transform_numeric(b: float, z, m_nodes: int = 4096, eps: float = 1e-14) -> complex:
    """Trapezoidal value of (1/2 pi i) \\oint conj(phi(zeta)) / (zeta - z) d zeta
    over the ellipse boundary zeta(t) = a cos t + i b sin t."""
    z = as_complex(z)
    if m_nodes < 64:
        raise InvalidParameter("need at least 64 quadrature nodes")
    m = EllipseMapSeries(b, eps)
    if (z.real / m.a) ** 2 + (z.imag / m.b) ** 2 >= 1.0:
        raise OutOfDomain("z must lie strictly inside the ellipse")
    t = 2 * math.pi * np.arange(m_nodes) / m_nodes
    zeta = m.a * np.cos(t) + 1j * m.b * np.sin(t)
    dzeta = -m.a * np.sin(t) + 1j * m.b * np.cos(t)
    integrand = np.conj(m(zeta)) / (zeta - z) * dzeta
    return complex(np.sum(integrand) * (2 * math.pi / m_nodes) / (2j * math.pi))


# ---------------------------------------------------------------------------
# Crouzeix ratio
# ---------------------------------------------------------------------------

def range_boundary(A, m_boundary: int = 512) -> CurveSamples:
    """Boundary of W(A) for a non-scalar 2x2 matrix, with its degenerate shapes handled."""
    A = _as_2x2(A)
    cf = canonicalize_2x2(A)
    if cf.kind == "scalar":
        raise DegenerateRange("W(A) is a single point")
    if cf.kind == "segment":
        return segment_curve(cf.beta + cf.alpha, cf.beta - cf.alpha, m_boundary)
    if cf.kind == "disk":
        return circle_curve(cf.b, m_boundary, cf.beta)
    return nr_boundary(A, m_boundary)


def _ratio_on(A, p: Polynomial, curve: CurveSamples) -> float:
    num = op_norm(poly_apply(p, A))
    den, _ = max_modulus_on_curve(p, curve, refine=True)
    return num / den


def crouzeix_ratio(A, p: Polynomial, m_boundary: int = 512) -> float:
    """||p(A)|| / max_{W(A)} |p|, with the maximum refined by golden section."""
    if p.is_zero():
        raise InvalidPolynomial("the zero polynomial has no Crouzeix ratio")
    A = _as_2x2(A)
    return _ratio_on(A, p, range_boundary(A, m_boundary))


@dataclass
class RatioReport:
    matrix: np.ndarray
    degree: int
    best_ratio: float
    best_poly: Polynomial
    evaluations: int
    seed: int


def _coordinate_search(objective, x, steps):
    """Maximise ``objective`` by coordinate moves with step halving."""
    fx = objective(x)
    evals = 1
    step = 1.0
    improved_in_sweep = False
    n = len(x)
    for s in range(steps):
        i = s % n
        for sign in (1.0, -1.0):
            y = x.copy()
            y[i] += sign * step
            fy = objective(y)
            evals += 1
            if fy > fx:
                x, fx = y, fy
                improved_in_sweep = True
                break
        if i == n - 1:
            if not improved_in_sweep:
                step *= 0.5
            improved_in_sweep = False
    return x, fx, evals


def _monic(x: np.ndarray) -> Polynomial:
    k = len(x) // 2
    return Polynomial([*(x[:k] + 1j * x[k:]), 1.0])


def ratio_search(A, degree: int, restarts: int = 32, seed: int = 0,
                 steps: int = SEARCH_STEPS, m_boundary: int = 512) -> RatioReport:
    """Search monic polynomials of degree 1..``degree`` for a large Crouzeix ratio.

    Every degree up to ``degree`` is searched with the same per-(seed, degree,
    restart) starting points, so the result never decreases with ``degree``.
    The returned ratio is a lower bound for the supremum over polynomials.
    """
    if degree < 0 or restarts < 1:
        raise InvalidParameter("need degree >= 0 and restarts >= 1")
    A = _as_2x2(A)
    curve = range_boundary(A, m_boundary)
    pts = curve.points

    best_poly = Polynomial([1.0])
    best = _ratio_on(A, best_poly, curve)
    evaluations = 1

    def objective(x):
        p = _monic(x)
        den = np.max(np.abs(p(pts)))
        if den == 0:
            return -math.inf
        return op_norm(poly_apply(p, A)) / den

    for k in range(1, degree + 1):
        for r in range(restarts):
            rng = np.random.default_rng([seed & (2**64 - 1), k, r])
            x0 = rng.uniform(-INIT_RANGE, INIT_RANGE, 2 * k)
            x, _, evals = _coordinate_search(objective, x0, steps)
            p = _monic(x)
            val = _ratio_on(A, p, curve)
            evaluations += evals + 1
            if val > best:
                best, best_poly = val, p
    return RatioReport(A, degree, best, best_poly, evaluations, seed)
