"""Conformal maps: the ellipse-to-disk series, odd quintic maps, profile
domains, and verifiers for the Jack condition and (bi-)circular symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    HypothesisViolated,
    InternalConsistency,
    InvalidParameter,
    InvalidProfile,
    NoConvergence,
    NotOdd,
    OutOfDomain,
)
from .numerics import CurveSamples, Polynomial, poly_eval, profile_margin

MAX_TERMS = 100_000
DOMAIN_SLACK = 1e-12
NEWTON_MAX_ITER = 100


# ---------------------------------------------------------------------------
# Ellipse -> disk map
# ---------------------------------------------------------------------------

def _series_length(rho: float, eps: float) -> int:
    log_rho = math.log(rho)
    n = max(8, math.ceil(math.log(2.0 / eps) / (4.0 * log_rho)))
    # on the boundary |T_2n| ~ rho**(2n)/2, so the tail there decays like
    # rho**(-2n); size N so that the whole boundary tail is below eps
    q = 1.0 - rho ** -2.0
    n = max(n, math.ceil(math.log(2.0 / (eps * q)) / (2.0 * log_rho)))
    if n > MAX_TERMS:
        raise NoConvergence(f"ellipse series needs {n} terms (cap {MAX_TERMS})")
    return n


@dataclass(frozen=True)
class EllipseMapSeries:
    """Truncated Chebyshev-exponential series for the conformal map of the
    ellipse x^2/a^2 + y^2/b^2 < 1 (foci at +-1) onto the unit disk.

    phi(z) = (2z/rho) exp(sum_n 2(-1)^n T_2n(z) / (n (1 + rho^4n)))
    """

    b: float
    eps: float = 1e-14

    def __post_init__(self):
        b = float(self.b)
        if not (math.isfinite(b) and b > 0):
            raise InvalidParameter(f"semi-minor axis must be positive, got {self.b!r}")
        if not (0 < self.eps <= 1e-6):
            raise InvalidParameter(f"eps must lie in (0, 1e-6], got {self.eps!r}")
        object.__setattr__(self, "b", b)

    @property
    def a(self) -> float:
        return math.hypot(self.b, 1.0)

    @property
    def rho(self) -> float:
        return self.a + self.b

    @property
    def n_terms(self) -> int:
        return _series_length(self.rho, self.eps)

    def coefficients(self) -> np.ndarray:
        """c_n = 2(-1)^n / (n (1 + rho^4n)) for n = 1..N, overflow-free."""
        n = np.arange(1, self.n_terms + 1, dtype=float)
        q = np.exp(-4.0 * n * math.log(self.rho))
        return 2.0 * (-1.0) ** n / n * (q / (1.0 + q))

    def contains(self, z, slack: float = DOMAIN_SLACK) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return (z.real / self.a) ** 2 + (z.imag / self.b) ** 2 <= 1.0 + slack

    def __call__(self, z):
        return phi_eval(self, z)

    def inverse(self, w, tol: float = 1e-12):
        return phi_inverse(self, w, tol)


def _exponent(m: EllipseMapSeries, z: np.ndarray, coeffs: np.ndarray, derivative: bool):
    """Return S(z) = sum c_n T_2n(z) and, optionally, S'(z).

    T_2n(z) = T_n(2z^2 - 1); both T_n(u) and T_n'(u) run on forward recurrences.
    """
    u = 2.0 * z * z - 1.0
    t_prev, t_cur = np.ones_like(u), u.copy()
    d_prev, d_cur = np.zeros_like(u), np.ones_like(u)
    s = np.zeros_like(u)
    ds = np.zeros_like(u)
    for c in coeffs:
        s += c * t_cur
        if derivative:
            ds += c * d_cur
            d_prev, d_cur = d_cur, 2.0 * t_cur + 2.0 * u * d_cur - d_prev
        t_prev, t_cur = t_cur, 2.0 * u * t_cur - t_prev
    return s, ds * 4.0 * z


def _phi_raw(m: EllipseMapSeries, z: np.ndarray, coeffs: np.ndarray):
    s, _ = _exponent(m, z, coeffs, derivative=False)
    return (2.0 / m.rho) * z * np.exp(s)


def _phi_and_derivative(m: EllipseMapSeries, z: np.ndarray, coeffs: np.ndarray):
    s, ds = _exponent(m, z, coeffs, derivative=True)
    e = (2.0 / m.rho) * np.exp(s)
    return z * e, e * (1.0 + z * ds)


def phi_eval(m: EllipseMapSeries, z):
    """Evaluate the ellipse-to-disk map at ``z`` (scalar or array).

    Points on the closed ellipse are accepted with slack 1e-12; anything
    further out raises :class:`OutOfDomain`.
    """
    scalar = np.isscalar(z)
    zz = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(zz)):
        raise InvalidParameter("non-finite argument")
    if not np.all(m.contains(zz)):
        raise OutOfDomain("argument lies outside the closed ellipse")
    out = _phi_raw(m, zz, m.coefficients())
    return complex(out) if scalar else out


def ellipse_constants(b: float, eps: float = 1e-14):
    """Return ``(rho, phi(1), phi'(0))`` from their closed-form series.

    Raises :class:`InternalConsistency` if 0 < phi(1) <= 2/rho < phi'(0)
    fails beyond 1e-12.
    """
    m = EllipseMapSeries(b, eps)
    rho = m.rho
    c = m.coefficients()
    n = np.arange(1, len(c) + 1)
    # T_2n(1) = 1 and T_2n(0) = (-1)^n
    phi1 = 2.0 / rho * math.exp(math.fsum(c))
    phip0 = 2.0 / rho * math.exp(math.fsum(c * (-1.0) ** n))
    if not (phi1 > 0 and phi1 <= 2.0 / rho + 1e-12 and 2.0 / rho < phip0):
        raise InternalConsistency(
            f"phi(1)={phi1!r}, 2/rho={2 / rho!r}, phi'(0)={phip0!r} out of order"
        )
    return rho, phi1, phip0


def _ray_start(m: EllipseMapSeries, w: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Points on the rays arg(w) where |phi| = |w|, found by bisection."""
    target = np.abs(w)
    direction = np.where(target > 0, w / np.where(target > 0, target, 1.0), 1.0)
    lo = np.zeros(w.shape)
    hi = 1.0 / np.sqrt((direction.real / m.a) ** 2 + (direction.imag / m.b) ** 2)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        inside = np.abs(_phi_raw(m, mid * direction, coeffs)) < target
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi) * direction


def _newton(m, z, w, coeffs, outer_ok):
    """Damped vectorised Newton for phi(z) = w; failed entries come back as NaN.

    A step is halved until the residual drops (up to 40 times); tiny steps
    are always accepted so roundoff-level residuals do not stall the loop.
    """
    z = z.copy()
    with np.errstate(all="ignore"):
        res = np.abs(_phi_raw(m, z, coeffs) - w)
    active = np.isfinite(res)
    z[~active] = np.nan
    for _ in range(NEWTON_MAX_ITER):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        za, wa, ra = z[idx], w[idx], res[idx]
        with np.errstate(all="ignore"):
            f, d = _phi_and_derivative(m, za, coeffs)
            step = (f - wa) / d
        scale = np.maximum(np.abs(za), 1e-300)
        lam = np.ones(len(idx))
        accepted = np.zeros(len(idx), dtype=bool)
        znew, rnew = za.copy(), ra.copy()
        for _ in range(40):
            todo = ~accepted & np.isfinite(step)
            if not todo.any():
                break
            zt = za[todo] - lam[todo] * step[todo]
            with np.errstate(all="ignore"):
                rt = np.abs(_phi_raw(m, zt, coeffs) - wa[todo])
            tiny = np.abs(lam[todo] * step[todo]) <= 1e-10 * scale[todo]
            ok = np.isfinite(rt) & outer_ok(zt) & ((rt < ra[todo]) | tiny)
            t_idx = np.flatnonzero(todo)
            znew[t_idx[ok]], rnew[t_idx[ok]] = zt[ok], rt[ok]
            accepted[t_idx[ok]] = True
            lam[t_idx[~ok]] *= 0.5
        z[idx], res[idx] = znew, rnew
        # quadratic convergence: after a relative step of 1e-12 the error is ~1e-24
        with np.errstate(invalid="ignore"):
            done = np.abs(lam * step) <= 1e-12 * scale
        stalled = ~accepted
        active[idx[done | stalled]] = False
    return z


def phi_inverse(m: EllipseMapSeries, w, tol: float = 1e-12):
    """Solve phi(z) = w for |w| < 1 by Newton's method from the guess a*w.

    Points where Newton leaves the region of convergence restart from the
    point on the ray arg(w) with the right modulus. Raises
    :class:`NoConvergence` if the residual still exceeds ``tol``.
    """
    scalar = np.isscalar(w)
    ww = np.atleast_1d(np.asarray(w, dtype=complex)).ravel()
    shape = np.shape(w)
    if not np.all(np.isfinite(ww)):
        raise InvalidParameter("non-finite argument")
    if np.any(np.abs(ww) >= 1.0):
        raise OutOfDomain("phi_inverse needs |w| < 1")
    coeffs = m.coefficients()
    # the series converges inside the confocal ellipse with parameter rho^2;
    # stay well inside it
    big = m.rho ** 1.5
    big_a, big_b = (big + 1 / big) / 2, (big - 1 / big) / 2

    def outer_ok(z):
        return (z.real / big_a) ** 2 + (z.imag / big_b) ** 2 < 1.0

    z0 = ww * m.a
    outside = ~m.contains(z0, slack=0.0)
    if outside.any():
        z0[outside] = _ray_start(m, ww[outside], coeffs)
    z = _newton(m, z0, ww, coeffs, outer_ok)

    def residual(zv, wv):
        with np.errstate(all="ignore"):
            r = np.abs(_phi_raw(m, zv, coeffs) - wv)
        return np.where(np.isfinite(r), r, np.inf)

    res = residual(z, ww)
    retry = ~(res <= tol) & ~outside
    if retry.any():
        z[retry] = _newton(m, _ray_start(m, ww[retry], coeffs), ww[retry], coeffs, outer_ok)
        res[retry] = residual(z[retry], ww[retry])
    failed = ~(res <= tol)
    if failed.any():
        k = int(np.flatnonzero(failed)[0])
        raise NoConvergence(f"phi_inverse failed at w={complex(ww[k])!r}", residual=float(res[k]))
    if scalar:
        return complex(z[0])
    return z.reshape(shape)


# ---------------------------------------------------------------------------
# Odd quintic maps z + a z^3 - b z^5
# ---------------------------------------------------------------------------

def quintic_admissible(a: float, b: float) -> bool:
    if not (a > 0 and b > 0):
        raise InvalidParameter("quintic parameters must be positive")
    return 3 * a + 5 * b <= 1 and a * b + 4 * b <= a


@dataclass(frozen=True)
class QuinticMap:
    """The map z + a z^3 - b z^5 for admissible (a, b)."""

    a: float
    b: float

    def __post_init__(self):
        if not quintic_admissible(self.a, self.b):
            raise InvalidParameter(f"quintic parameters ({self.a}, {self.b}) are not admissible")

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial([0, 1, 0, self.a, 0, -self.b])

    def __call__(self, z):
        return poly_eval(self.polynomial, z)


def admissible_quintic_grid(n_a: int = 10, n_b: int = 5):
    """Admissible (a, b) pairs: ``n_a`` values of a, ``n_b`` fractions of the largest admissible b."""
    pairs = []
    for a in np.linspace(0.02, 0.32, n_a):
        b_max = min((1 - 3 * a) / 5, a / (a + 4)) * (1 - 1e-9)
        for frac in np.linspace(1.0 / n_b, 1.0, n_b):
            pairs.append((float(a), float(b_max * frac)))
    return pairs


def boundary_derivative_identity(q: QuinticMap, theta: float):
    """Compare d/dtheta |f(e^{i theta})|^2 by central differences with its closed form."""
    h = 1e-5
    p = q.polynomial
    g = lambda t: abs(poly_eval(p, complex(math.cos(t), math.sin(t)))) ** 2  # noqa: E731
    lhs = (g(theta + h) - g(theta - h)) / (2 * h)
    rhs = -4 * math.sin(2 * theta) * (q.a - q.a * q.b - 4 * q.b * math.cos(2 * theta))
    return lhs, rhs


def square_transform(f: Polynomial) -> Polynomial:
    """For odd ``f`` return ``g`` with g(z^2) = f(z)^2."""
    if any(abs(c) > 1e-14 for c in f.coeffs[0::2]):
        raise NotOdd("square_transform needs an odd polynomial")
    c = np.array(f.coeffs, dtype=complex)
    c[0::2] = 0
    sq = np.convolve(c, c)
    return Polynomial(sq[0::2])


# ---------------------------------------------------------------------------
# Domains generated by a decreasing radial profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProfileDomain:
    """Samples of a non-increasing radius R(theta) on [0, pi/2]."""

    thetas: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        th = np.array(self.thetas, dtype=float)
        r = np.array(self.radii, dtype=float)
        if th.ndim != 1 or th.shape != r.shape or len(th) < 2:
            raise InvalidProfile("thetas and radii must be 1-D, equal length, at least 2 samples")
        if not np.all(np.diff(th) > 0):
            raise InvalidProfile("thetas must be strictly increasing")
        if abs(th[0]) > 1e-12 or abs(th[-1] - math.pi / 2) > 1e-12:
            raise InvalidProfile("thetas must span [0, pi/2]")
        if not np.all(np.isfinite(r)) or np.any(r <= 0):
            raise InvalidProfile("radii must be finite and positive")
        if np.any(np.diff(r) > 0):
            raise InvalidProfile("radii must be non-increasing")
        th.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "radii", r)

    @classmethod
    def from_function(cls, radius: Callable[[np.ndarray], np.ndarray], n: int = 1025):
        th = np.linspace(0.0, math.pi / 2, n)
        return cls(th, radius(th))

    def radius(self, theta):
        """R at any angle, folded into the first quadrant."""
        t = np.mod(np.asarray(theta, dtype=float), math.pi)
        t = np.where(t > math.pi / 2, math.pi - t, t)
        return np.interp(t, self.thetas, self.radii)


def bicirc_from_profile(d: ProfileDomain, m: int) -> CurveSamples:
    """Boundary of the doubly symmetric domain with first-quadrant trace r = R(theta).

    The quarter profile is sampled once and mirrored exactly, so ``m`` must
    be a multiple of 4.
    """
    if m < 4 or m % 4:
        raise InvalidParameter("number of boundary points must be a positive multiple of 4")
    q = m // 4
    ang = (math.pi / 2) * np.arange(q + 1) / q
    quarter = d.radius(ang) * np.exp(1j * ang)
    quarter[0] = quarter[0].real
    quarter[q] = 1j * quarter[q].imag
    j = np.arange(q)
    pts = np.concatenate([
        quarter[j],
        -np.conj(quarter[q - j]),
        -quarter[j],
        np.conj(quarter[q - j]),
    ])
    params = 2 * math.pi * np.arange(m) / m

    def fn(t):
        t = np.asarray(t, dtype=float)
        return d.radius(t) * np.exp(1j * t)

    return CurveSamples(params, pts, param_fn=fn, period=2 * math.pi)


def map_circle(f: Callable, m: int, radius: float = 1.0) -> CurveSamples:
    """Image of the circle |z| = radius under ``f``, sampled at m angles."""
    t = 2 * math.pi * np.arange(m) / m

    def fn(s):
        return np.asarray(f(radius * np.exp(1j * np.asarray(s, dtype=float))), dtype=complex)

    return CurveSamples(t, fn(t), param_fn=fn, period=2 * math.pi)


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------

@dataclass
class SymmetryReport:
    mode: str
    passed: bool
    worst_violation: float
    worst_check: str
    worst_r: float
    worst_theta: float
    tol: float

    def __bool__(self):
        return self.passed


def verify_symmetry(f: Callable, mode: str, r_grid: Sequence[float],
                    theta_grid: Sequence[float], tol: float = 1e-10) -> SymmetryReport:
    """Check the Jack condition, circular or bi-circular symmetry of ``f`` on a polar grid.

    Violations are measured as the amount by which an inequality fails
    (before the tolerance is applied); the report carries the largest one.
    """
    if mode not in ("jack", "circular", "bicirc"):
        raise InvalidParameter(f"unknown symmetry mode {mode!r}")
    r = np.asarray(r_grid, dtype=float)
    th = np.asarray(theta_grid, dtype=float)
    if r.size == 0 or th.size == 0:
        raise InvalidParameter("grids must be nonempty")
    if np.any(r <= 0) or np.any(r >= 1):
        raise InvalidParameter("radii must lie in (0, 1)")

    z = r[:, None] * np.exp(1j * th[None, :])
    fz = np.asarray(f(z), dtype=complex)
    mod = np.abs(fz)
    ref = np.abs(np.asarray(f(r.astype(complex)), dtype=complex))[:, None]

    checks = {"jack": (mod - ref, None)}
    if mode in ("circular", "bicirc"):
        checks["conjugate-reflection"] = (np.abs(np.asarray(f(np.conj(z))) - np.conj(fz)), None)
    if mode == "circular":
        sel = np.flatnonzero((th >= -1e-15) & (th <= math.pi + 1e-15))
        if sel.size >= 2:
            order = sel[np.argsort(th[sel])]
            diffs = np.diff(mod[:, order], axis=1)
            checks["decreasing-on-[0,pi]"] = (diffs, order[1:])
    if mode == "bicirc":
        lower = np.abs(np.asarray(f(1j * r.astype(complex)), dtype=complex))[:, None]
        checks["imaginary-axis-lower-bound"] = (lower - mod, None)
        checks["odd-reflection"] = (np.abs(np.asarray(f(-z)) + fz), None)

    worst, worst_name, worst_loc = -math.inf, "", (float("nan"), float("nan"))
    for name, (viol, cols) in checks.items():
        k = np.unravel_index(int(np.argmax(viol)), viol.shape)
        v = float(viol[k])
        if v > worst:
            col = cols[k[1]] if cols is not None else k[1]
            worst, worst_name, worst_loc = v, name, (float(r[k[0]]), float(th[col]))
    return SymmetryReport(mode, worst <= tol, worst, worst_name, worst_loc[0], worst_loc[1], tol)


@dataclass
class SchwarzJackReport:
    passed: bool
    symmetry: SymmetryReport
    margins: dict
    max_imag: float
    r_max: float
    tol: float

    def __bool__(self):
        return self.passed


def schwarz_jack_verify(f: Callable, grid: Sequence[float], tol: float = 1e-8,
                        theta_grid: Optional[Sequence[float]] = None,
                        jack_radii: int = 200) -> SchwarzJackReport:
    """Check the Jack condition together with positivity, monotonicity and
    convexity of ``f`` on the uniform grid ``grid`` in [0, r_max].

    The Jack check uses at most ``jack_radii`` radii taken evenly from the grid;
    ``margins`` records the smallest observed margin for each profile property.
    """
    grid = np.asarray(grid, dtype=float)
    f0 = complex(np.asarray(f(np.array([0j])))[0])
    if abs(f0) > tol:
        raise HypothesisViolated(f"f(0) = {f0!r} is not zero")
    if theta_grid is None:
        theta_grid = 2 * math.pi * np.arange(128) / 128
    radii = grid[grid > 0]
    if radii.size > jack_radii:
        radii = radii[np.linspace(0, radii.size - 1, jack_radii).round().astype(int)]
    sym = verify_symmetry(f, "jack", radii, theta_grid, tol)

    vals = np.asarray(f(grid.astype(complex)), dtype=complex)
    max_imag = float(np.max(np.abs(vals.imag)))
    margins = {m: profile_margin(grid, vals.real, m) for m in ("positive", "increasing", "convex")}
    passed = sym.passed and max_imag <= tol and all(v >= -tol for v in margins.values())
    return SchwarzJackReport(passed, sym, margins, max_imag, float(grid[-1]), tol)


def axis_profiles(f: Callable, grid: Sequence[float]):
    """Return (f(x), -i f(iy)) sampled on ``grid``, as real arrays."""
    g = np.asarray(grid, dtype=float).astype(complex)
    along_x = np.asarray(f(g), dtype=complex).real
    along_y = (-1j * np.asarray(f(1j * g), dtype=complex)).real
    return along_x, along_y


def bicirc_profile_verify(f: Callable, grid: Sequence[float], tol: float = 1e-8) -> dict:
    """Margins for x -> f(x) (positive, increasing, convex) and y -> -i f(iy)
    (positive, increasing, concave), plus an overall ``passed`` flag."""
    x_vals, y_vals = axis_profiles(f, grid)
    margins = {f"x:{m}": profile_margin(grid, x_vals, m) for m in ("positive", "increasing", "convex")}
    margins.update({f"y:{m}": profile_margin(grid, y_vals, m) for m in ("positive", "increasing", "concave")})
    margins["passed"] = all(v >= -tol for v in margins.values())
    return margins


__all__ = [
    "EllipseMapSeries", "QuinticMap", "ProfileDomain", "SymmetryReport", "SchwarzJackReport",
    "ellipse_constants", "phi_eval", "phi_inverse", "quintic_admissible", "admissible_quintic_grid",
    "boundary_derivative_identity", "square_transform", "bicirc_from_profile", "map_circle",
    "verify_symmetry", "schwarz_jack_verify", "axis_profiles", "bicirc_profile_verify",
]
