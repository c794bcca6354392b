"""Independent brute-force and closed-form references.

Nothing in this module reuses the grid-plus-refinement machinery of
``numrange``: the 2x2 reference comes from the elliptical range theorem,
the sampling bound from Monte Carlo over unit vectors, and the
orthogonality scan from a plain polar grid over the perturbation
parameter with a fixed-resolution support sweep. These are the oracles
that the fast paths are validated against, so they deliberately stay
simple and slow.

Randomness: every generator draws from numpy's PCG64 (the 64-bit
permuted-congruential generator, fully specified and stable across
platforms and numpy versions), so a seed pins the exact instance stream
bit-for-bit. Draw order is documented per method.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .linalg import DimensionError, as_matrix

__all__ = [
    "sample_radius_lower",
    "ellipse_radius_2x2",
    "direct_lambda_scan",
    "generators",
    "InstanceGenerator",
]

_TWO_PI = 2.0 * math.pi
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def sample_radius_lower(T, samples: int, seed: int) -> float:
    """Monte Carlo lower bound: max of |<Tx, x>| over random unit vectors.

    Vectors are standard complex Gaussians, normalized. The result never
    exceeds the numerical radius; it is a bound, not an estimator.
    """
    samples = int(samples)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    T = as_matrix(T)
    n = T.shape[0]
    rng = np.random.Generator(np.random.PCG64(seed))
    best = 0.0
    left = samples
    while left > 0:
        k = min(left, 16384)
        Z = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
        nrm = np.linalg.norm(Z, axis=1)
        nrm[nrm == 0.0] = 1.0
        X = Z / nrm[:, None]
        vals = np.abs(np.einsum("si,si->s", np.conj(X), X @ T.T))
        best = max(best, float(vals.max()))
        left -= k
    return best


def ellipse_radius_2x2(T) -> float:
    """Numerical radius of a 2x2 matrix from the elliptical range theorem.

    W(T) is an ellipse with foci at the eigenvalues mu1, mu2 and minor
    semi-axis b with b^2 = (trace(T*T) - |mu1|^2 - |mu2|^2) / 4. The
    radius is the farthest point of that ellipse from the origin, found
    by maximizing |z(t)| over the ellipse parameter (dense grid plus
    golden-section polish down to 1e-12).
    """
    T = as_matrix(T)
    if T.shape != (2, 2):
        raise DimensionError("ellipse_radius_2x2 requires a 2x2 matrix")
    a11, a12 = complex(T[0, 0]), complex(T[0, 1])
    a21, a22 = complex(T[1, 0]), complex(T[1, 1])
    tr = a11 + a22
    det = a11 * a22 - a12 * a21
    disc = cmath.sqrt(0.25 * tr * tr - det)
    mu1 = 0.5 * tr + disc
    mu2 = 0.5 * tr - disc
    gram = (
        abs(a11) ** 2 + abs(a12) ** 2 + abs(a21) ** 2 + abs(a22) ** 2
    )  # trace(T*T)
    b2 = 0.25 * (gram - abs(mu1) ** 2 - abs(mu2) ** 2)
    b = math.sqrt(max(b2, 0.0))
    center = 0.5 * (mu1 + mu2)
    focal = 0.5 * (mu1 - mu2)
    c = abs(focal)
    a = math.sqrt(c * c + b * b)
    # rotate the major axis onto the real line
    rot = focal / c if c > 0.0 else 1.0 + 0.0j
    g = center * rot.conjugate()
    p, q = g.real, g.imag

    def dist2(t: float) -> float:
        return (p + a * math.cos(t)) ** 2 + (q + b * math.sin(t)) ** 2

    grid = 720
    ts = [(_TWO_PI * k) / grid for k in range(grid)]
    vals = [dist2(t) for t in ts]
    k = max(range(grid), key=vals.__getitem__)
    lo = ts[k] - _TWO_PI / grid
    hi = ts[k] + _TWO_PI / grid
    xb, fb = ts[k], vals[k]
    h = hi - lo
    cpt = lo + _INV_PHI2 * h
    dpt = lo + _INV_PHI * h
    fc, fd = dist2(cpt), dist2(dpt)
    while h > 1e-13:
        if fc > fb:
            xb, fb = cpt, fc
        if fd > fb:
            xb, fb = dpt, fd
        if fc > fd:
            hi, dpt, fd = dpt, cpt, fc
            h = hi - lo
            cpt = lo + _INV_PHI2 * h
            fc = dist2(cpt)
        else:
            lo, cpt, fc = cpt, dpt, fd
            h = hi - lo
            dpt = lo + _INV_PHI * h
            fd = dist2(dpt)
    return math.sqrt(max(fb, 0.0))


def _grid_omega(M: np.ndarray, phis: np.ndarray) -> float:
    """Support-sweep radius on a fixed angle grid, no refinement."""
    ph = np.exp(1j * phis)
    E = ph[:, None, None] * M[None, :, :]
    H = 0.5 * (E + np.conj(np.swapaxes(E, 1, 2)))
    n = M.shape[0]
    if n == 2:
        d0 = H[:, 0, 0].real
        d1 = H[:, 1, 1].real
        b = H[:, 0, 1]
        hi = 0.5 * (d0 + d1) + np.sqrt(0.25 * (d0 - d1) ** 2 + b.real**2 + b.imag**2)
    else:
        hi = np.linalg.eigvalsh(H)[:, -1]
    return float(hi.max())


def direct_lambda_scan(
    T, S, epsilon: float, grid_r: int = 32, grid_theta: int = 64
) -> tuple[float, complex]:
    """Polar-grid minimum of the orthogonality margin over lambda.

    Evaluates F(lambda) = omega^2(T + lambda S) - omega^2(T)
    + 2 eps |lambda| omega(T) omega(S) on r in (0, 2 omega(T)/omega(S)]
    times grid_theta angles, with every radius taken from a plain
    1024-angle support sweep. Returns (min margin, argmin lambda).
    A negative margin witnesses a violation of the orthogonality
    inequality at that lambda.
    """
    grid_r = int(grid_r)
    grid_theta = int(grid_theta)
    if grid_r < 16 or grid_theta < 16:
        raise ValueError("grids must be at least 16")
    T = as_matrix(T)
    S = as_matrix(S)
    eps = float(epsilon)
    phis = np.arange(1024) * (_TWO_PI / 1024)
    wT = _grid_omega(T, phis)
    wS = _grid_omega(S, phis)
    if wS == 0.0:
        return 0.0, 0j
    r_hi = 2.0 * wT / wS if wT > 0.0 else 1.0
    best = math.inf
    best_lam = 0j
    for i in range(1, grid_r + 1):
        r = r_hi * i / grid_r
        for j in range(grid_theta):
            lam = r * cmath.exp(1j * _TWO_PI * j / grid_theta)
            w = _grid_omega(T + lam * S, phis)
            margin = w * w - wT * wT + 2.0 * eps * r * wT * wS
            if margin < best:
                best = margin
                best_lam = lam
    return best, best_lam


class InstanceGenerator:
    """Deterministic stream of random test instances.

    One PCG64 stream drives all draws; the per-method draw order below
    is part of the reproducibility contract.

    - complex Gaussian blocks are drawn as one ``standard_normal``
      call of shape (2, n, n) (real block first, then imaginary),
      combined as (re + i*im)/sqrt(2) so entries are standard complex
      Gaussian (unit complex variance);
    - vectors draw shape (2, n) the same way.
    """

    def __init__(self, seed: int):
        self._rng = np.random.Generator(np.random.PCG64(seed))

    def matrix(self, n: int) -> np.ndarray:
        """General complex Gaussian matrix."""
        z = self._rng.standard_normal((2, n, n))
        return ((z[0] + 1j * z[1]) / math.sqrt(2.0)).astype(np.complex128)

    def hermitian(self, n: int) -> np.ndarray:
        """Hermitian (A + A*) / 2 of a Gaussian draw; exactly Hermitian."""
        A = self.matrix(n)
        return 0.5 * (A + np.conj(A.T))

    def positive(self, n: int, unit_norm: bool = False) -> np.ndarray:
        """Positive semidefinite A*A, optionally scaled to unit spectral norm."""
        A = self.matrix(n)
        P = np.conj(A.T) @ A
        if unit_norm:
            top = float(np.linalg.eigvalsh(P)[-1])
            if top > 0.0:
                P = P / top
        return P

    def unitary(self, n: int) -> np.ndarray:
        """Unitary matrix from orthonormalizing a Gaussian draw."""
        A = self.matrix(n)
        Q, R = np.linalg.qr(A)
        d = np.diagonal(R).copy()
        d[d == 0.0] = 1.0
        return Q * (d / np.abs(d))[None, :].conj()

    def unit_vector(self, n: int) -> np.ndarray:
        """Uniform random unit vector (normalized complex Gaussian)."""
        z = self._rng.standard_normal((2, n))
        v = (z[0] + 1j * z[1]) / math.sqrt(2.0)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            v = np.zeros(n, dtype=np.complex128)
            v[0] = 1.0
            return v
        return v / nrm

    def nilpotent_rank_one(self, n: int) -> np.ndarray:
        """Rank-one x (x) y with <x, y> = 0, hence a square-zero matrix."""
        if n < 2:
            raise ValueError("nilpotent rank-one needs n >= 2")
        while True:
            x = self.unit_vector(n)
            y = self.unit_vector(n)
            y = y - x * np.vdot(x, y)
            nrm = float(np.linalg.norm(y))
            if nrm > 1e-8:
                y = y / nrm
                return np.outer(x, np.conj(y))


def generators(seed: int) -> InstanceGenerator:
    """Deterministic instance streams for the given 64-bit seed."""
    return InstanceGenerator(seed)
