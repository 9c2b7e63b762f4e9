"""Small dense complex matrices: 2x2 Schur form and canonical reduction,
numerical ranges by the support-function method, polynomial functional
calculus and operator norms.

Matrices are numpy complex arrays; ``Matrix2`` is just a 2x2 one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NoConvergence
from .numerics import CurveSamples, Polynomial

MAX_DIM = 8
COINCIDENCE_RTOL = 1e-10
POWER_RTOL = 1e-14
POWER_MAX_ITER = 10_000


def as_matrix(M, square: bool = True) -> np.ndarray:
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or (square and A.shape[0] != A.shape[1]):
        raise InvalidParameter(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidParameter("matrix entries must be finite")
    return A


def matrix2(a11, a12, a21, a22) -> np.ndarray:
    return as_matrix([[a11, a12], [a21, a22]])


def _as_2x2(A) -> np.ndarray:
    A = as_matrix(A)
    if A.shape != (2, 2):
        raise InvalidParameter(f"expected a 2x2 matrix, got shape {A.shape}")
    return A


def eig2(A) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix from a cancellation-avoiding quadratic formula."""
    A = _as_2x2(A)
    a, b, c, d = A[0, 0], A[0, 1], A[1, 0], A[1, 1]
    tr = a + d
    det = a * d - b * c
    s = cmath.sqrt((a - d) ** 2 + 4 * b * c)
    # add the root pointing the same way as the trace, recover the other from det
    if (tr.conjugate() * s).real < 0:
        s = -s
    lam1 = (tr + s) / 2
    lam2 = det / lam1 if lam1 != 0 else tr - lam1
    return complex(lam1), complex(lam2)


def schur_2x2(A):
    """Return ``(U, T)`` with U unitary, T upper triangular and U* A U = T."""
    A = _as_2x2(A)
    lam1, _ = eig2(A)
    v_a = np.array([A[0, 1], lam1 - A[0, 0]])
    v_b = np.array([lam1 - A[1, 1], A[1, 0]])
    v = v_a if np.linalg.norm(v_a) >= np.linalg.norm(v_b) else v_b
    nv = np.linalg.norm(v)
    if nv == 0:
        v = np.array([1.0 + 0j, 0j])
    else:
        v = v / nv
    U = np.array([[v[0], -np.conj(v[1])], [v[1], np.conj(v[0])]])
    T = U.conj().T @ A @ U
    T[1, 0] = 0
    return U, T


@dataclass(frozen=True)
class CanonicalForm:
    """Reduction of a 2x2 matrix by affine maps and a unitary similarity.

    generic: u* ((A - beta)/alpha) u = [[1, 2b], [0, -1]].
    segment: A normal with distinct eigenvalues beta +- alpha; b = 0.
    disk: a double eigenvalue beta; W(A) is the disk of radius b about beta.
    scalar: A = beta I.

    The phase of the generic off-diagonal entry is normalised to be positive
    real by a diagonal unitary factor folded into ``u``.
    """

    b: float
    alpha: complex
    beta: complex
    u: np.ndarray
    kind: str

    def reconstruct(self) -> np.ndarray:
        """Rebuild A from the canonical data (generic kind)."""
        core = np.array([[1.0, 2 * self.b], [0.0, -1.0]], dtype=complex)
        return self.alpha * (self.u @ core @ self.u.conj().T) + self.beta * np.eye(2)


def canonicalize_2x2(A) -> CanonicalForm:
    A = _as_2x2(A)
    U, T = schur_2x2(A)
    lam1, lam2, c = T[0, 0], T[1, 1], T[0, 1]
    thr = COINCIDENCE_RTOL * max(np.linalg.norm(A, 2), np.finfo(float).tiny)
    distinct = abs(lam1 - lam2) >= thr
    coupled = abs(c) >= thr
    beta = complex((lam1 + lam2) / 2)
    if distinct:
        alpha = complex((lam1 - lam2) / 2)
        if not coupled:
            return CanonicalForm(0.0, alpha, beta, U, "segment")
        ratio = c / alpha
        phase = ratio / abs(ratio)
        D = np.diag([1.0 + 0j, np.conj(phase)])
        return CanonicalForm(float(abs(c) / (2 * abs(alpha))), alpha, beta, U @ D, "generic")
    if coupled:
        return CanonicalForm(float(abs(c) / 2), 1.0 + 0j, beta, U, "disk")
    return CanonicalForm(0.0, 1.0 + 0j, beta, U, "scalar")


@dataclass(frozen=True)
class EllipseParams:
    center: complex
    focus1: complex
    focus2: complex
    semi_major: float
    semi_minor: float

    def curve(self, m: int) -> CurveSamples:
        from .numerics import ellipse_curve

        d = self.focus1 - self.focus2
        angle = cmath.phase(d) if d != 0 else 0.0
        return ellipse_curve(self.semi_major, self.semi_minor, m, self.center, angle)


def ellipse_params_2x2(A) -> EllipseParams:
    """Closed-form numerical-range ellipse of a 2x2 matrix: foci at the eigenvalues."""
    A = _as_2x2(A)
    lam1, lam2 = eig2(A)
    excess = float(np.sum(np.abs(A) ** 2) - abs(lam1) ** 2 - abs(lam2) ** 2)
    minor = math.sqrt(max(excess, 0.0)) / 2
    major = math.hypot(minor, abs(lam1 - lam2) / 2)
    return EllipseParams((lam1 + lam2) / 2, lam1, lam2, major, minor)


# ---------------------------------------------------------------------------
# Numerical range
# ---------------------------------------------------------------------------

def _support_points_2x2(A: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Boundary points <A x, x> for the top eigenvectors x of Re(e^{-i theta} A)."""
    rot = np.exp(-1j * theta)
    p = (rot * A[0, 0]).real
    r = (rot * A[1, 1]).real
    q = (rot * A[0, 1] + np.conj(rot * A[1, 0])) / 2
    mu = (p + r) / 2 + np.sqrt(((p - r) / 2) ** 2 + np.abs(q) ** 2)
    va = np.stack([q, mu - p])
    vb = np.stack([mu - r, np.conj(q)])
    na = np.linalg.norm(va, axis=0)
    nb = np.linalg.norm(vb, axis=0)
    v = np.where(na >= nb, va, vb)
    nv = np.maximum(na, nb)
    flat = nv == 0
    v[:, flat] = np.array([[1.0], [0.0]])
    nv = np.where(flat, 1.0, nv)
    v = v / nv
    Av = A @ v
    return np.sum(np.conj(v) * Av, axis=0)


def _support_points_general(A: np.ndarray, theta: np.ndarray) -> np.ndarray:
    out = np.empty(theta.shape, dtype=complex)
    for k, t in enumerate(theta.ravel()):
        B = np.exp(-1j * t) * A
        H = (B + B.conj().T) / 2
        _, vecs = np.linalg.eigh(H)
        x = vecs[:, -1]
        out.flat[k] = np.vdot(x, A @ x)
    return out


def nr_boundary(A, m: int = 360) -> CurveSamples:
    """Sample the boundary of the numerical range W(A) at m support directions."""
    A = as_matrix(A)
    n = A.shape[0]
    if n > MAX_DIM:
        raise InvalidParameter(f"matrices beyond dimension {MAX_DIM} are not supported")
    if m < 8:
        raise InvalidParameter("nr_boundary needs at least 8 directions")
    support = _support_points_2x2 if n == 2 else _support_points_general

    def fn(t):
        return support(A, np.asarray(t, dtype=float))

    theta = 2 * math.pi * np.arange(m) / m
    return CurveSamples(theta, fn(theta), param_fn=fn, period=2 * math.pi)


def nr_radius_bound(A, theta) -> np.ndarray:
    """Largest eigenvalue of Re(e^{-i theta} A): the support function of W(A)."""
    A = as_matrix(A)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.empty(theta.shape)
    for k, t in enumerate(theta):
        B = np.exp(-1j * t) * A
        out[k] = np.linalg.eigvalsh((B + B.conj().T) / 2)[-1]
    return out


# ---------------------------------------------------------------------------
# Functional calculus and norms
# ---------------------------------------------------------------------------

def poly_apply(p: Polynomial, A) -> np.ndarray:
    """p(A) by Horner's rule with matrix products."""
    A = as_matrix(A)
    eye = np.eye(A.shape[0], dtype=complex)
    acc = np.zeros_like(A)
    for c in reversed(p.coeffs):
        acc = acc @ A + c * eye
    return acc


def op_norm(M) -> float:
    """Spectral norm: closed form for 2x2, power iteration on M* M otherwise."""
    M = as_matrix(M)
    if M.shape == (2, 2):
        t = float(np.sum(np.abs(M) ** 2))
        det = abs(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
        disc = max((t - 2 * det) * (t + 2 * det), 0.0)
        return math.sqrt((t + math.sqrt(disc)) / 2)
    G = M.conj().T @ M
    if not np.any(G):
        return 0.0
    x = G[:, int(np.argmax(np.linalg.norm(G, axis=0)))].copy()
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(POWER_MAX_ITER):
        y = G @ x
        lam_new = float(np.vdot(x, y).real)
        ny = np.linalg.norm(y)
        if ny == 0:
            return 0.0
        x = y / ny
        if abs(lam_new - lam) <= POWER_RTOL * abs(lam_new):
            return math.sqrt(lam_new)
        lam = lam_new
    raise NoConvergence("power iteration did not converge", residual=abs(lam_new - lam))
