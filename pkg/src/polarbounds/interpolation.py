"""Hermite interpolation at simple and double nodes, plus admissibility checks."""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import DomainError, PreconditionError
from .orthopoly import Polynomial

# tables larger than this are formed in extended precision
_EXTENDED_ABOVE = 13


@dataclass(frozen=True, eq=False)
class NodeMultiset:
    nodes: np.ndarray
    multiplicities: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        mult = np.asarray(self.multiplicities, dtype=int)
        if nodes.shape != mult.shape:
            raise PreconditionError("nodes and multiplicities differ in length")
        if np.any(np.diff(nodes) <= 0):
            raise PreconditionError("interpolation nodes must be strictly ascending")
        if np.any((mult < 1) | (mult > 2)):
            raise PreconditionError("multiplicities must be 1 or 2")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "multiplicities", mult)

    @property
    def count(self):
        return int(self.multiplicities.sum())

    def expanded(self):
        return np.repeat(self.nodes, self.multiplicities)


@dataclass(frozen=True, eq=False)
class Interpolant:
    poly: Polynomial
    nodeset: NodeMultiset
    divided_differences: np.ndarray

    def __call__(self, t):
        """Evaluate through the Newton form (nested multiplication)."""
        z = self.nodeset.expanded()
        c = self.divided_differences
        t = np.asarray(t, dtype=np.float64)
        out = np.full(t.shape, c[-1])
        for j in range(c.size - 2, -1, -1):
            out = out * (t - z[j]) + c[j]
        return out


@dataclass
class AdmissibilityReport:
    kind: str  # "lower" or "upper"
    passed: bool
    degree_ok: bool
    worst_t: float
    worst_violation: float  # > 0 means f crosses h
    tolerance: float
    interval: tuple


def _extended_divided_differences(z, f, df):
    z = z.astype(np.longdouble)
    col = f.astype(np.longdouble)
    df = df.astype(np.longdouble)
    m = z.size
    coef = np.empty(m, dtype=np.longdouble)
    coef[0] = col[0]
    for j in range(1, m):
        new = np.empty(m - j, dtype=np.longdouble)
        for i in range(m - j):
            dz = z[i + j] - z[i]
            new[i] = df[i] if dz == 0 else (col[i + 1] - col[i]) / dz
        col = new
        coef[j] = col[0]
    return coef


def _newton_to_monomial(coef, z):
    out = np.array([coef[-1]], dtype=np.longdouble)
    for j in range(coef.size - 2, -1, -1):
        shifted = np.zeros(out.size + 1, dtype=np.longdouble)
        shifted[1:] = out
        shifted[:-1] -= z[j] * out
        shifted[0] += coef[j]
        out = shifted
    return out.astype(np.float64)


def hermite(h, nodeset):
    """Interpolate h at every node and h' at the double nodes (Newton form)."""
    if not isinstance(nodeset, NodeMultiset):
        nodeset = NodeMultiset(*nodeset)
    if nodeset.count > 41:
        raise PreconditionError(f"{nodeset.count} interpolation conditions exceed the cap of 41")
    z = nodeset.expanded()
    f = np.asarray(h(z), dtype=np.float64)
    df = np.zeros_like(z)
    double = np.repeat(nodeset.multiplicities == 2, nodeset.multiplicities)
    if double.any():
        df[double] = h.derivative(1, z[double])
    if not (np.all(np.isfinite(f)) and np.all(np.isfinite(df))):
        bad = z[~(np.isfinite(f) & np.isfinite(df))]
        raise DomainError(f"{getattr(h, 'name', h)} is not finite at node(s) {bad.tolist()}")
    if z.size > _EXTENDED_ABOVE:
        coef_ext = _extended_divided_differences(z, f, df)
        poly = Polynomial(_newton_to_monomial(coef_ext, z.astype(np.longdouble)))
        coef = coef_ext.astype(np.float64)
    else:
        coef = _kernels.divided_differences(z, f, df)
        poly = Polynomial(_newton_to_monomial(coef.astype(np.longdouble), z.astype(np.longdouble)))
    return Interpolant(poly, nodeset, coef)


def chebyshev_points(a, b, m):
    k = np.arange(m)
    x = np.cos((2 * k + 1) * np.pi / (2 * m))[::-1]
    return np.concatenate(([a], 0.5 * (a + b) + 0.5 * (b - a) * x, [b]))


def _scan(gap, a, b, npts):
    """Smallest value of ``gap`` on [a, b]: dense Chebyshev scan then local refinement."""
    t = chebyshev_points(a, b, npts)
    with np.errstate(all="ignore"):
        g = np.asarray(gap(t), dtype=np.float64)
    g = np.where(np.isnan(g), np.inf, g)
    order = np.argsort(g)[:8]
    best_t, best = float(t[order[0]]), float(g[order[0]])
    for i in order:
        lo, hi = t[max(i - 1, 0)], t[min(i + 1, t.size - 1)]
        if hi <= lo:
            continue
        res = minimize_scalar(lambda x: float(gap(np.array([x]))[0]), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-13})
        if np.isfinite(res.fun) and res.fun < best:
            best, best_t = float(res.fun), float(res.x)
    return best_t, best


def _tolerance(f, a, b, tol):
    t = chebyshev_points(a, b, 64)
    return tol * max(1.0, float(np.max(np.abs(f(t)))))


def check_lower_admissible(f, h, tau, npts=4096, tol=1e-9):
    """f must have degree <= tau and stay below h on [-1, 1]."""
    f = f if isinstance(f, Polynomial) else Polynomial(f)
    t, gap = _scan(lambda x: h(x) - f(x), -1.0, 1.0, npts)
    eps = _tolerance(f, -1.0, 1.0, tol)
    degree_ok = f.degree <= tau
    return AdmissibilityReport("lower", degree_ok and gap >= -eps, degree_ok, t, -gap, eps, (-1.0, 1.0))


def check_upper_admissible(f, h, tau, s, npts=4096, tol=1e-9):
    """f must have degree <= tau and stay above h on [-1, s]."""
    if not (-1.0 < s <= 1.0):
        raise PreconditionError(f"s must lie in (-1, 1], got {s!r}")
    f = f if isinstance(f, Polynomial) else Polynomial(f)
    t, gap = _scan(lambda x: f(x) - h(x), -1.0, float(s), npts)
    eps = _tolerance(f, -1.0, float(s), tol)
    degree_ok = f.degree <= tau
    return AdmissibilityReport("upper", degree_ok and gap >= -eps, degree_ok, t, -gap, eps, (-1.0, float(s)))
