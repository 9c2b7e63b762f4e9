"""Scalar, polynomial, Chebyshev and sampling primitives.

Complex scalars are plain Python ``complex`` values (or numpy complex arrays
where an operation is vectorised). Everything here is a pure function of its
inputs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import InvalidGrid, InvalidParameter

ArrayLike = Union[complex, float, np.ndarray]

GOLDEN_ITERATIONS = 60
_INVGOLD = (math.sqrt(5.0) - 1.0) / 2.0

PROFILE_MODES = ("positive", "increasing", "convex", "concave")


def as_complex(z) -> complex:
    """Coerce ``z`` to a finite Python complex, rejecting NaN and infinities."""
    try:
        w = complex(z)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"not a complex scalar: {z!r}") from exc
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise InvalidParameter(f"non-finite complex scalar: {z!r}")
    return w


# ---------------------------------------------------------------------------
# Chebyshev polynomials
# ---------------------------------------------------------------------------

def cheb_eval(n: int, z: ArrayLike) -> ArrayLike:
    """Evaluate the Chebyshev polynomial T_n at ``z`` by the three-term recurrence.

    Valid for complex arguments anywhere in the plane, not just on [-1, 1].
    """
    if n < 0:
        raise InvalidParameter("Chebyshev degree must be non-negative")
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    t_prev = np.ones_like(z)
    if n == 0:
        out = t_prev
    else:
        t_cur = z.copy()
        for _ in range(n - 1):
            t_prev, t_cur = t_cur, 2.0 * z * t_cur - t_prev
        out = t_cur
    return complex(out) if scalar else out


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Complex polynomial sum_k coeffs[k] * z**k.

    Trailing zero coefficients are stripped on construction; the zero
    polynomial is stored as the single coefficient 0.
    """

    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        cs = [as_complex(c) for c in coeffs]
        if not cs:
            raise InvalidParameter("a polynomial needs at least one coefficient")
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    def __call__(self, z):
        return poly_eval(self, z)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


def poly_eval(p: Polynomial, z: ArrayLike) -> ArrayLike:
    """Horner evaluation; ``z`` may be a scalar or a numpy array."""
    scalar = np.isscalar(z)
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return complex(acc) if scalar else acc


def poly_derivative(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial([0])
    return Polynomial([k * c for k, c in enumerate(p.coeffs) if k > 0])


def poly_multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    out = [0j] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Polynomial(out)


def poly_affine(p: Polynomial, alpha: complex, beta: complex) -> Polynomial:
    """Return the polynomial z -> p((z - beta) / alpha)."""
    alpha = as_complex(alpha)
    if alpha == 0:
        raise InvalidParameter("alpha must be nonzero")
    # expand by Horner in the polynomial ring
    lin = Polynomial([-as_complex(beta) / alpha, 1.0 / alpha])
    acc = Polynomial([0])
    for c in reversed(p.coeffs):
        acc = poly_multiply(acc, lin)
        acc = Polynomial([acc.coeffs[0] + c, *acc.coeffs[1:]])
    return acc


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveSamples:
    """Ordered samples (param, point) of a curve.

    ``param_fn``, when given, evaluates the underlying curve at arbitrary
    parameters (used by refinement). ``period`` marks a closed curve whose
    parameter wraps around.
    """

    params: np.ndarray
    points: np.ndarray
    param_fn: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False)
    period: Optional[float] = None

    def __post_init__(self):
        params = np.array(self.params, dtype=float)
        points = np.array(self.points, dtype=complex)
        if params.ndim != 1 or points.shape != params.shape:
            raise InvalidParameter("params and points must be 1-D and of equal length")
        if len(params) < 3:
            raise InvalidParameter("a curve needs at least 3 samples")
        if not np.all(np.diff(params) > 0):
            raise InvalidParameter("curve parameters must be strictly increasing")
        if not (np.all(np.isfinite(params)) and np.all(np.isfinite(points))):
            raise InvalidParameter("curve samples must be finite")
        params.flags.writeable = False
        points.flags.writeable = False
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.params)


def circle_curve(radius: float, m: int, center: complex = 0.0) -> CurveSamples:
    center = as_complex(center)

    def fn(t):
        return center + radius * np.exp(1j * np.asarray(t, dtype=float))

    t = 2 * np.pi * np.arange(m) / m
    return CurveSamples(t, fn(t), param_fn=fn, period=2 * np.pi)


def ellipse_curve(a: float, b: float, m: int, center: complex = 0.0,
                  angle: float = 0.0) -> CurveSamples:
    """Ellipse with semi-axes ``a`` (along direction ``angle``) and ``b``."""
    rot = cmath.exp(1j * angle)
    center = as_complex(center)

    def fn(t):
        t = np.asarray(t, dtype=float)
        return center + rot * (a * np.cos(t) + 1j * b * np.sin(t))

    t = 2 * np.pi * np.arange(m) / m
    return CurveSamples(t, fn(t), param_fn=fn, period=2 * np.pi)


def segment_curve(z0: complex, z1: complex, m: int) -> CurveSamples:
    z0, z1 = as_complex(z0), as_complex(z1)

    def fn(s):
        s = np.asarray(s, dtype=float)
        return z0 + s * (z1 - z0)

    s = np.linspace(0.0, 1.0, m)
    return CurveSamples(s, fn(s), param_fn=fn)


def _golden_max(g: Callable[[float], float], lo: float, hi: float):
    c = hi - _INVGOLD * (hi - lo)
    d = lo + _INVGOLD * (hi - lo)
    gc, gd = g(c), g(d)
    for _ in range(GOLDEN_ITERATIONS):
        if gc >= gd:
            hi, d, gd = d, c, gc
            c = hi - _INVGOLD * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + _INVGOLD * (hi - lo)
            gd = g(d)
    return (gc, c) if gc >= gd else (gd, d)


def max_modulus_on_curve(p: Callable, curve: CurveSamples, refine: bool = False):
    """Return ``(max |p|, parameter)`` over the samples of ``curve``.

    With ``refine`` the bracketing interval around the best sample is searched
    by golden section, through ``curve.param_fn`` when available and along the
    straight chords otherwise. The refined value never undercuts the sampled one.
    """
    vals = np.abs(np.asarray(p(curve.points), dtype=complex))
    k = int(np.argmax(vals))
    best, best_t = float(vals[k]), float(curve.params[k])
    if not refine:
        return best, best_t

    params, points = curve.params, curve.points
    n = len(params)
    if curve.period is not None:
        lo = params[k - 1] - (curve.period if k == 0 else 0.0)
        hi = params[(k + 1) % n] + (curve.period if k == n - 1 else 0.0)
    else:
        lo = params[max(k - 1, 0)]
        hi = params[min(k + 1, n - 1)]

    if curve.param_fn is not None:
        fn = curve.param_fn
    else:
        ext_t = params
        ext_z = points
        if curve.period is not None:
            ext_t = np.concatenate([[params[-1] - curve.period], params, [params[0] + curve.period]])
            ext_z = np.concatenate([[points[-1]], points, [points[0]]])

        def fn(t):
            re = np.interp(t, ext_t, ext_z.real)
            im = np.interp(t, ext_t, ext_z.imag)
            return re + 1j * im

    def g(t):
        return float(abs(complex(np.asarray(p(np.asarray(fn(np.array([t])))))[0])))

    val, t = _golden_max(g, float(lo), float(hi))
    if val > best:
        best = val
        best_t = t
        if curve.period is not None:
            best_t = t % curve.period
    return best, best_t


# ---------------------------------------------------------------------------
# 1-D profile checks
# ---------------------------------------------------------------------------

def _uniform_step(grid: np.ndarray) -> float:
    steps = np.diff(grid)
    h = (grid[-1] - grid[0]) / (len(grid) - 1)
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-8 * h:
        raise InvalidGrid("convexity checks need a uniform increasing grid")
    return float(h)


def profile_margin(grid: Sequence[float], values: Sequence[float], mode: str) -> float:
    """Smallest observed margin for ``mode``; non-negative means the property holds.

    positive: min of values after the first sample; increasing: min first
    difference; convex/concave: min of (+/-) second difference divided by h**2.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.shape != values.shape or grid.ndim != 1:
        raise InvalidGrid("grid and values must be 1-D and of equal length")
    if len(grid) < 2 or not np.all(np.diff(grid) > 0):
        raise InvalidGrid("grid must be strictly increasing")
    if mode == "positive":
        return float(np.min(values[1:]))
    if mode == "increasing":
        return float(np.min(np.diff(values)))
    if mode in ("convex", "concave"):
        if len(grid) < 3:
            raise InvalidGrid("convexity checks need at least 3 samples")
        h = _uniform_step(grid)
        d2 = values[2:] - 2.0 * values[1:-1] + values[:-2]
        if mode == "concave":
            d2 = -d2
        return float(np.min(d2) / h**2)
    raise InvalidParameter(f"unknown profile mode {mode!r}")


def profile_check(grid: Sequence[float], values: Sequence[float],
                  mode: Union[str, Iterable[str]], tol: float = 1e-8) -> bool:
    """Check a sampled 1-D profile for positivity, monotonicity, convexity or concavity.

    ``mode`` may be a single name or several (all must hold). Second differences
    get the slack ``tol * h**2``, first differences and values the slack ``tol``.
    """
    modes = (mode,) if isinstance(mode, str) else tuple(mode)
    return all(profile_margin(grid, values, m) >= -tol for m in modes)
