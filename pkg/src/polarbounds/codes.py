"""Spherical codes: built-in configurations, moments, design strength,
inner-product fingerprints and covering quantities."""
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
import math
import re

import numpy as np
from scipy.linalg import helmert
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from .errors import PreconditionError
from .orthopoly import JacobiFamily, split_tau

MAX_MOMENT_DEGREE = 24
MOMENT_TOL = 1e-9
CLUSTER_TOL = 1e-9
NORM_TOL = 1e-12
CSV_NORM_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SphericalCode:
    points: np.ndarray
    name: str = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, ndmin=2)
        if pts.shape[0] == 0:
            raise PreconditionError("a code needs at least one point")
        norms = np.linalg.norm(pts, axis=1)
        bad = np.abs(norms - 1.0) > NORM_TOL
        if bad.any():
            i = int(np.argmax(bad))
            raise PreconditionError(f"point {i} has norm {norms[i]!r}, not 1")
        if pts.shape[0] > 1:
            d2 = 2.0 - 2.0 * np.clip(pts @ pts.T, -1.0, 1.0)
            np.fill_diagonal(d2, np.inf)
            if np.sqrt(max(d2.min(), 0.0)) <= 1e-9:
                raise PreconditionError("code points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[1]

    @property
    def N(self):
        return self.points.shape[0]

    def __len__(self):
        return self.N

    def __repr__(self):
        return f"SphericalCode({self.name or 'unnamed'}, n={self.n}, N={self.N})"

    @cached_property
    def gram(self):
        g = np.clip(self.points @ self.points.T, -1.0, 1.0)
        np.fill_diagonal(g, 1.0)
        g.setflags(write=False)
        return g

    def rotated(self, Q):
        return SphericalCode(self.points @ np.asarray(Q).T, self.name)


@dataclass(frozen=True)
class DesignProfile:
    moments: np.ndarray  # M_1 .. M_maxdeg
    strength: int
    index_set: frozenset
    N: int


@dataclass(frozen=True)
class InnerProductLevels:
    levels: np.ndarray
    counts: np.ndarray
    values: np.ndarray  # sorted raw inner products


@dataclass(frozen=True)
class CoverResult:
    value: float
    witness: np.ndarray
    method: str  # "hull" (facet distances) or "multistart"


# --------------------------------------------------------------------------
# built-in configurations
# --------------------------------------------------------------------------

def simplex(n):
    """n + 1 unit vectors in R^n with mutual inner product -1/n."""
    if n < 1:
        raise PreconditionError("simplex needs n >= 1")
    pts = helmert(n + 1).T  # rows of H are an orthonormal basis of 1-perp
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    return SphericalCode(pts, f"simplex:{n}")


def cross_polytope(n):
    eye = np.eye(n)
    return SphericalCode(np.vstack([eye, -eye]), f"cross_polytope:{n}")


def _sign_orbit(v):
    """All sign changes of the nonzero entries of v."""
    nz = [i for i, x in enumerate(v) if x != 0]
    out = []
    for mask in range(2 ** len(nz)):
        w = list(v)
        for j, i in enumerate(nz):
            if mask >> j & 1:
                w[i] = -w[i]
        out.append(w)
    return out


def cube3():
    r = 1.0 / math.sqrt(3.0)
    return SphericalCode(np.array(_sign_orbit([r, r, r])), "cube3")


def cell24():
    r = 1.0 / math.sqrt(2.0)
    pts = set()
    for p in set(permutations([r, r, 0.0, 0.0])):
        for w in _sign_orbit(list(p)):
            pts.add(tuple(w))
    return SphericalCode(np.array(sorted(pts)), "cell24")


def _is_even(perm):
    perm = list(perm)
    swaps = 0
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            swaps += 1
    return swaps % 2 == 0


def cell600():
    """The 120 vertices of the 600-cell (unit quaternions of the binary icosahedral group)."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    pts = []
    pts += [list(r) for r in np.vstack([np.eye(4), -np.eye(4)])]
    pts += _sign_orbit([0.5, 0.5, 0.5, 0.5])
    base = [phi / 2, 0.5, 0.5 / phi, 0.0]
    for perm in permutations(range(4)):
        if _is_even(perm):
            pts += _sign_orbit([base[perm[i]] for i in range(4)])
    pts = np.array(pts)
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return SphericalCode(pts, "cell600")


_FIXED = {"cube3": cube3, "cell24": cell24, "cell600": cell600}
_PARAM = {"simplex": simplex, "cross_polytope": cross_polytope}
BUILTIN_NAMES = ("simplex:<n>", "cross_polytope:<n>", "cube3", "cell24", "cell600")


def builtin(name):
    """Parse ``cube3``, ``cell24``, ``cell600``, ``simplex:n`` / ``simplex(n)``, ``cross_polytope:n``."""
    key = name.strip().lower().replace("-", "_")
    if key in _FIXED:
        return _FIXED[key]()
    m = re.fullmatch(r"(simplex|cross_polytope)\s*[:(]\s*(\d+)\s*\)?", key)
    if m:
        return _PARAM[m.group(1)](int(m.group(2)))
    raise PreconditionError(f"unknown code {name!r}; built-ins: {', '.join(BUILTIN_NAMES)}")


# --------------------------------------------------------------------------
# CSV ingestion
# --------------------------------------------------------------------------

def read_csv(path, name=None):
    """One point per row, comma separated; lines starting with '#' are ignored."""
    try:
        pts = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    except ValueError as exc:
        raise PreconditionError(f"malformed point file {path}: {exc}") from None
    norms = np.linalg.norm(pts, axis=1)
    bad = np.abs(norms - 1.0) > CSV_NORM_TOL
    if bad.any():
        i = int(np.argmax(bad))
        raise PreconditionError(f"{path}: row {i} has norm {norms[i]:.9g}; points must be unit vectors")
    return SphericalCode(pts / norms[:, None], name or str(path))


def write_csv(code, path):
    header = f"{code.name or 'code'} n={code.n} N={code.N}"
    np.savetxt(path, code.points, delimiter=",", header=header, fmt="%.17g")


# --------------------------------------------------------------------------
# moments and design strength
# --------------------------------------------------------------------------

def moments(code, maxdeg=MAX_MOMENT_DEGREE):
    """M_i = sum_{x,y} P_i^(n)(x.y) for i = 1..maxdeg, with strength and index set."""
    if not 1 <= maxdeg <= MAX_MOMENT_DEGREE:
        raise PreconditionError(f"maxdeg must be in 1..{MAX_MOMENT_DEGREE}, got {maxdeg}")
    levels = _cluster(code.gram.ravel(), CLUSTER_TOL)
    vals = JacobiFamily(code.n).values(maxdeg, levels.levels)
    M = vals[1:] @ levels.counts.astype(np.float64)
    zero = np.abs(M) <= MOMENT_TOL * code.N ** 2
    strength = int(np.argmin(zero)) if not zero.all() else maxdeg
    index_set = frozenset(int(i) + 1 for i in np.nonzero(zero)[0])
    return DesignProfile(M, strength, index_set, code.N)


def dgs_bound(n, tau):
    """Delsarte-Goethals-Seidel lower bound on the size of a tau-design."""
    k, eps = split_tau(tau)
    return math.comb(n + k - 2 + eps, n - 1) + math.comb(n + k - 2, n - 1)


def centroid(code):
    return code.points.mean(axis=0)


# --------------------------------------------------------------------------
# inner products and covering quantities
# --------------------------------------------------------------------------

def _cluster(values, tol):
    v = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if v.size == 0:
        return InnerProductLevels(np.zeros(0), np.zeros(0, dtype=int), v)
    breaks = np.nonzero(np.diff(v) > tol)[0] + 1
    groups = np.split(v, breaks)
    levels = np.array([g.mean() for g in groups])
    counts = np.array([g.size for g in groups])
    return InnerProductLevels(levels, counts, v)


def inner_products(x, code, tol=CLUSTER_TOL):
    """Sorted multiset T(x, C) and its clustered levels."""
    x = np.asarray(x, dtype=np.float64)
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise PreconditionError("x must be a unit vector")
    return _cluster(np.clip(code.points @ x, -1.0, 1.0), tol)


def _min_support(points):
    """min over unit x of max_y x.y, exact when the origin is interior to the hull.

    The support function of a polytope containing the origin is minimized at
    facet normals, with value the facet's distance to the origin.
    """
    n = points.shape[1]
    if points.shape[0] <= n:
        return None
    try:
        hull = ConvexHull(points)
    except QhullError:
        return None
    offsets = -hull.equations[:, -1]
    if offsets.min() <= 1e-12:
        return None
    i = int(np.argmin(offsets))
    normal = hull.equations[i, :-1]
    return float(offsets[i]), normal / np.linalg.norm(normal)


def _smoothed_multistart(points, seed=0, starts=256):
    """Fallback: minimize the log-sum-exp smoothing of max_y x.y on the sphere."""
    rng = np.random.default_rng(seed)
    n = points.shape[1]
    X = rng.standard_normal((starts, n))
    X = np.vstack([X, -points])
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    for temp in (1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4):
        for _ in range(200):
            G = X @ points.T
            G -= G.max(axis=1, keepdims=True)
            P = np.exp(G / temp)
            P /= P.sum(axis=1, keepdims=True)
            grad = P @ points
            grad -= np.sum(grad * X, axis=1, keepdims=True) * X
            X = X - 0.5 * temp * grad / max(temp, 1e-2)
            X /= np.linalg.norm(X, axis=1, keepdims=True)
    vals = (X @ points.T).max(axis=1)
    best = np.argsort(vals)[:4]
    out = [_polish_minimax(points, X[i]) for i in best]
    return min(out, key=lambda r: r[0])


def _polish_minimax(points, x0):
    """Epigraph form: min z subject to z >= x.y for all y and |x| = 1."""
    n = points.shape[1]
    v0 = np.append(x0, np.max(points @ x0))
    cons = [
        {"type": "ineq", "fun": lambda v: v[-1] - points @ v[:n], "jac": lambda v: np.hstack([-points, np.ones((len(points), 1))])},
        {"type": "eq", "fun": lambda v: v[:n] @ v[:n] - 1.0, "jac": lambda v: np.append(2 * v[:n], 0.0)},
    ]
    res = minimize(lambda v: v[-1], v0, jac=lambda v: np.eye(n + 1)[-1], constraints=cons,
                   method="SLSQP", options={"ftol": 1e-15, "maxiter": 200})
    x = res.x[:n] / np.linalg.norm(res.x[:n])
    val = float(np.max(points @ x))
    val0 = float(np.max(points @ x0))
    return (val, x) if val <= val0 else (val0, x0)


def s_of_code(code, seed=0):
    """s_C = min_x max_y x.y (cosine of the covering radius) with a witness x."""
    got = _min_support(code.points)
    if got is not None:
        return CoverResult(got[0], got[1], "hull")
    val, x = _smoothed_multistart(code.points, seed=seed)
    return CoverResult(val, x, "multistart")


def is_centered(code, tol=1e-8):
    """True iff some x has every |x.y| <= 1/sqrt(n); returns (flag, witness)."""
    n = code.n
    sym = np.vstack([code.points, -code.points])
    got = _min_support(sym)
    if got is None:
        # hull of C and -C is flat: a direction orthogonal to its span works
        _, sv, vt = np.linalg.svd(sym)
        if np.sum(sv > 1e-12) < n:
            return True, vt[-1]
        val, x = _smoothed_multistart(sym)
    else:
        val, x = got
    return bool(val <= 1.0 / math.sqrt(n) + tol), x
