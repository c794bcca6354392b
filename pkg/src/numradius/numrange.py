"""Numerical range quantities of a dense complex matrix.

Everything reduces to the support function of the numerical range
W(T) = {<Tx, x> : ||x|| = 1}: with the rotated Hermitian part
H_theta = (e^{i theta} T + e^{-i theta} T*) / 2, the largest eigenvalue
lambda_max(H_theta) is the support function of W(T) in direction
-theta, so

    omega(T) = max_theta lambda_max(H_theta)      (numerical radius)
    c(T)     = max(0, max_theta lambda_min(H_theta))   (Crawford number)

and the support point at angle theta is <T x_theta, x_theta> for a top
eigenvector x_theta of H_theta (equivalently e^{-i theta} times the
tangency point of the rotated range). That rotation convention is fixed
here once; every other module and all tests use it.

The theta maximization runs a coarse grid first (lambda_max(H_theta) is
Lipschitz in theta with constant ||T||, but may be multimodal), then
golden-section refinement of every competitive grid bracket. Sweep
results are memoized per matrix because downstream derivative and
orthogonality code re-evaluates the same profiles heavily.
"""

from __future__ import annotations

import cmath
import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import _eig
from .linalg import as_matrix

__all__ = [
    "GRID_DEFAULT",
    "RadiusResult",
    "MaximizerSet",
    "DegenerateMatrixError",
    "numerical_radius",
    "crawford_number",
    "boundary_points",
    "maximizers",
    "radius_enclosure",
]

GRID_DEFAULT = 1024

_TWO_PI = 2.0 * math.pi
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


class DegenerateMatrixError(ValueError):
    """The zero matrix was passed where it makes every vector optimal."""


@dataclass(frozen=True)
class RadiusResult:
    """Numerical radius with its optimizing angle and certificate.

    Attributes
    ----------
    omega : float
        The numerical radius.
    theta_star : float
        Angle in [0, 2pi) attaining the support-function maximum.
    maximizer : np.ndarray
        Unit vector with ``|<T maximizer, maximizer>| = omega`` (within
        the requested tolerance).
    enclosure : tuple[float, float]
        Interval [lower, upper] containing the true radius, of width at
        most the requested tolerance.
    """

    omega: float
    theta_star: float
    maximizer: np.ndarray
    enclosure: tuple[float, float]


@dataclass(frozen=True)
class MaximizerSet:
    """Support angles attaining the radius, with top eigenvectors.

    ``pairs`` holds (theta, unit vector) tuples; every vector satisfies
    ``|<T x, x>| >= omega - 10 * tol`` for the tolerance passed to
    :func:`maximizers`.
    """

    pairs: tuple[tuple[float, np.ndarray], ...]
    omega: float

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def angles(self) -> tuple[float, ...]:
        return tuple(theta for theta, _ in self.pairs)


# ---------------------------------------------------------------------------
# support-profile machinery (internal)


class _Profile:
    """Cached theta-sweep of one matrix: grid curves plus refined peaks."""

    __slots__ = (
        "T",
        "n",
        "grid",
        "thetas",
        "hi",
        "lo",
        "lip",
        "omega",
        "theta_star",
        "maximizer",
        "width",
        "peaks",
        "is_zero",
    )

    T: np.ndarray
    n: int
    grid: int
    thetas: np.ndarray
    hi: np.ndarray
    lo: np.ndarray
    lip: float
    omega: float
    theta_star: float
    maximizer: np.ndarray
    width: float
    peaks: list[tuple[float, float]]
    is_zero: bool


def _lammax_fn(T: np.ndarray):
    """Fast scalar theta -> lambda_max(H_theta(T)) for golden refinement."""
    n = T.shape[0]
    if n == 1:
        t00 = complex(T[0, 0])

        def f1(theta: float) -> float:
            return (cmath.exp(1j * theta) * t00).real

        return f1
    if n == 2:
        t00 = complex(T[0, 0])
        t11 = complex(T[1, 1])
        t01 = complex(T[0, 1])
        t10 = complex(T[1, 0])

        def f2(theta: float) -> float:
            e = cmath.exp(1j * theta)
            a = (e * t00).real
            d = (e * t11).real
            b = 0.5 * (e * t01 + (e * t10).conjugate())
            return 0.5 * (a + d) + math.hypot(0.5 * (a - d), abs(b))

        return f2

    def fn(theta: float) -> float:
        E = cmath.exp(1j * theta) * T
        H = 0.5 * (E + np.conj(E.T))
        return float(np.linalg.eigvalsh(H)[-1])

    return fn


def _lammin_fn(T: np.ndarray):
    """Scalar theta -> lambda_min(H_theta(T))."""
    neg = _lammax_fn(-T)

    def f(theta: float) -> float:
        return -neg(theta)

    return f


def _sweep_extremes(T: np.ndarray, thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(lambda_min, lambda_max) of H_theta(T) for every angle in thetas."""
    ph = np.exp(1j * thetas)
    E = ph[:, None, None] * T[None, :, :]
    H = 0.5 * (E + np.conj(np.swapaxes(E, 1, 2)))
    return _eig.extremes_batch(H)


def _golden_max(f, a: float, b: float, width: float, seed_best: tuple[float, float]):
    """Golden-section maximization on [a, b] down to bracket `width`.

    Returns the best evaluated point (x, f(x)); never worse than
    ``seed_best``, which lets callers seed with a known grid value.
    """
    xb, fb = seed_best
    h = b - a
    if h <= width:
        m = 0.5 * (a + b)
        fm = f(m)
        return (m, fm) if fm > fb else (xb, fb)
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(120):
        if fc > fb:
            xb, fb = c, fc
        if fd > fb:
            xb, fb = d, fd
        if h <= width:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INV_PHI * h
            fd = f(d)
    return xb, fb


def _cyclic_local_max_groups(vals: np.ndarray) -> list[tuple[int, int]]:
    """Index groups (start, end inclusive, cyclic) of local maxima.

    A group is a maximal run of equal values that weakly dominates both
    neighbors. Runs crossing the wrap point are merged.
    """
    g = vals.size
    left = np.roll(vals, 1)
    right = np.roll(vals, -1)
    is_max = (vals >= left) & (vals >= right)
    idx = np.flatnonzero(is_max)
    if idx.size == 0:
        return []
    groups: list[list[int]] = [[int(idx[0]), int(idx[0])]]
    for i in idx[1:]:
        if i == groups[-1][1] + 1:
            groups[-1][1] = int(i)
        else:
            groups.append([int(i), int(i)])
    # merge a run that wraps around 0
    if len(groups) > 1 and groups[0][0] == 0 and groups[-1][1] == g - 1:
        groups[0][0] = groups[-1][0] - g
        groups.pop()
    return [(s, e) for s, e in groups]


_PROFILE_CACHE: OrderedDict = OrderedDict()
_PROFILE_CACHE_CAP = 1024


def _profile(T: np.ndarray, grid: int = GRID_DEFAULT, tol: float = 1e-10) -> _Profile:
    """Sweep + refine one matrix; memoized on (matrix bytes, grid, tol)."""
    key = (T.tobytes(), T.shape[0], int(grid), float(tol))
    hit = _PROFILE_CACHE.get(key)
    if hit is not None:
        _PROFILE_CACHE.move_to_end(key)
        return hit

    p = _Profile()
    p.T = T
    n = p.n = T.shape[0]
    p.grid = int(grid)
    p.thetas = np.arange(p.grid) * (_TWO_PI / p.grid)
    p.is_zero = not T.any()
    if p.is_zero:
        p.hi = np.zeros(p.grid)
        p.lo = np.zeros(p.grid)
        p.lip = 0.0
        p.omega = 0.0
        p.theta_star = 0.0
        e1 = np.zeros(n, dtype=np.complex128)
        e1[0] = 1.0
        p.maximizer = e1
        p.width = 0.0
        p.peaks = [(0.0, 0.0)]
    else:
        p.lo, p.hi = _sweep_extremes(T, p.thetas)
        p.lip = _eig.spectral_norm_fast(T)
        h = _TWO_PI / p.grid
        omega_grid = float(p.hi.max())
        keep = omega_grid - 2.0 * p.lip * h
        f = _lammax_fn(T)
        width_target = tol / max(p.lip, 1e-300)
        peaks: list[tuple[float, float]] = []
        for s, e in _cyclic_local_max_groups(p.hi):
            gv = float(p.hi[s % p.grid])
            if gv < keep:
                continue
            a = (s - 1) * h
            b = (e + 1) * h
            if b - a >= _TWO_PI:
                # flat curve: the grid already resolves it
                peaks.append((p.thetas[int(np.argmax(p.hi))], omega_grid))
                continue
            x0 = 0.5 * (s + e) * h
            xb, fb = _golden_max(f, a, b, width_target, (x0, gv))
            peaks.append((xb % _TWO_PI, fb))
        if not peaks:
            k = int(np.argmax(p.hi))
            peaks = [(float(p.thetas[k]), omega_grid)]
        p.peaks = sorted(peaks)
        p.omega = max(v for _, v in peaks)
        tie = 1e-12 * max(1.0, p.omega)
        p.theta_star = min(th for th, v in peaks if v >= p.omega - tie)
        p.width = min(width_target, h)
        E = cmath.exp(1j * p.theta_star) * T
        H = 0.5 * (E + np.conj(E.T))
        w, V = _eig.eigh_single(H)
        p.maximizer = np.ascontiguousarray(V[:, -1])

    _PROFILE_CACHE[key] = p
    if len(_PROFILE_CACHE) > _PROFILE_CACHE_CAP:
        _PROFILE_CACHE.popitem(last=False)
    return p


def _omega_of(T: np.ndarray, grid: int = GRID_DEFAULT) -> float:
    """Internal shortcut: the radius of a canonical matrix."""
    return _profile(T, grid).omega


# ---------------------------------------------------------------------------
# public operations


def numerical_radius(T, tol: float = 1e-10) -> RadiusResult:
    """Numerical radius omega(T) = sup of |<Tx, x>| over unit vectors.

    Computed as max over theta of lambda_max(H_theta) on a 1024-point
    grid with golden-section refinement of every competitive bracket.
    The enclosure is certified by the Lipschitz bound
    |lambda_max(H_a) - lambda_max(H_b)| <= ||T|| |a - b| applied to the
    final refinement bracket.

    The zero matrix returns omega = 0, theta_star = 0, maximizer = e1.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    T = as_matrix(T)
    p = _profile(T, GRID_DEFAULT, tol)
    upper = p.omega + p.lip * p.width
    return RadiusResult(
        omega=p.omega,
        theta_star=p.theta_star % _TWO_PI,
        maximizer=p.maximizer,
        enclosure=(p.omega, upper),
    )


def crawford_number(T, tol: float = 1e-10) -> float:
    """Crawford number c(T): the distance from 0 to the numerical range.

    Equals max(0, max over theta of lambda_min(H_theta)) by convexity of
    W(T); the inner maximization reuses the grid sweep plus golden
    refinement.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    T = as_matrix(T)
    p = _profile(T, GRID_DEFAULT, tol)
    if p.is_zero:
        return 0.0
    best_grid = float(p.lo.max())
    if best_grid + 2.0 * p.lip * (_TWO_PI / p.grid) < 0.0:
        # the whole sweep stays clearly below zero: 0 is interior
        return 0.0
    h = _TWO_PI / p.grid
    f = _lammin_fn(T)
    width_target = tol / max(p.lip, 1e-300)
    keep = best_grid - 2.0 * p.lip * h
    best = best_grid
    for s, e in _cyclic_local_max_groups(p.lo):
        gv = float(p.lo[s % p.grid])
        if gv < keep:
            continue
        a = (s - 1) * h
        b = (e + 1) * h
        if b - a >= _TWO_PI:
            continue
        x0 = 0.5 * (s + e) * h
        _, fb = _golden_max(f, a, b, width_target, (x0, gv))
        best = max(best, fb)
    return max(0.0, best)


def boundary_points(T, count: int) -> list[complex]:
    """Support points of W(T) at `count` equispaced support angles.

    Each point is <T x_theta, x_theta> for a top eigenvector x_theta of
    H_theta; every returned p has |p| <= omega(T).
    """
    count = int(count)
    if count < 3:
        raise ValueError("count must be at least 3")
    T = as_matrix(T)
    out: list[complex] = []
    for j in range(count):
        theta = _TWO_PI * j / count
        E = cmath.exp(1j * theta) * T
        H = 0.5 * (E + np.conj(E.T))
        _, V = _eig.eigh_single(H)
        x = V[:, -1]
        out.append(complex(np.vdot(x, T @ x)))
    return out


def maximizers(T, tol: float = 1e-8) -> MaximizerSet:
    """All support angles attaining the radius within tol, with vectors.

    Returns one entry per grid-distinct angle whose lambda_max(H_theta)
    reaches omega(T) - tol, plus the refined optimum itself. When the
    top eigenspace at an angle is degenerate a single basis vector is
    reported for it.

    Raises
    ------
    DegenerateMatrixError
        For the zero matrix (every vector trivially maximizes).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    T = as_matrix(T)
    if not T.any():
        raise DegenerateMatrixError("zero matrix: every unit vector is a maximizer")
    p = _profile(T, GRID_DEFAULT)
    cut = p.omega - tol
    cand = [float(th) for th, v in p.peaks if v >= cut]
    cand.extend(float(th) for th, v in zip(p.thetas, p.hi) if v >= cut)
    cand.sort()
    angles: list[float] = []
    for th in cand:
        if angles and th - angles[-1] < 1e-7:
            continue
        angles.append(th)
    # wrap-around duplicate (theta ~ 0 vs theta ~ 2pi)
    if len(angles) > 1 and angles[0] + _TWO_PI - angles[-1] < 1e-7:
        angles.pop()
    pairs = []
    for th in angles:
        E = cmath.exp(1j * th) * T
        H = 0.5 * (E + np.conj(E.T))
        _, V = _eig.eigh_single(H)
        pairs.append((th % _TWO_PI, np.ascontiguousarray(V[:, -1])))
    return MaximizerSet(pairs=tuple(pairs), omega=p.omega)


def radius_enclosure(T, grid: int) -> tuple[float, float]:
    """Certified interval containing omega(T) from a pure grid sweep.

    lower is the grid maximum of lambda_max(H_theta); upper adds the
    unconditional Lipschitz slack ||T|| * pi / grid (the farthest any
    angle can sit from the grid is pi/grid). No unimodality assumption.
    """
    grid = int(grid)
    if grid < 8:
        raise ValueError("grid must be at least 8")
    T = as_matrix(T)
    if not T.any():
        return (0.0, 0.0)
    thetas = np.arange(grid) * (_TWO_PI / grid)
    _, hi = _sweep_extremes(T, thetas)
    lower = float(hi.max())
    upper = lower + _eig.spectral_norm_fast(T) * math.pi / grid
    return (lower, upper)
