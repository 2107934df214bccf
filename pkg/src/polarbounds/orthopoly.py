"""Gegenbauer and adjacent Jacobi polynomials normalized to 1 at t = 1.

The measure throughout is d mu_n(t) = gamma_n (1 - t^2)^((n-3)/2) dt on
[-1, 1], normalized to total mass one.  ``JacobiFamily(n, a, b)`` carries the
Jacobi parameters alpha = a + (n-3)/2, beta = b + (n-3)/2.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

from . import _kernels
from .errors import NumericFailure, PreconditionError, UnsupportedDegreeError

MAX_DEGREE = 40
# internal rules (exact integration of products) may go past the public cap
_MAX_RULE_SIZE = 96


def split_tau(tau):
    """Write tau = 2k - 1 + eps with k >= 1 and eps in {0, 1}."""
    tau = int(tau)
    if tau < 1:
        raise PreconditionError(f"design strength must be >= 1, got {tau}")
    eps = 1 - tau % 2
    return (tau + 1 - eps) // 2, eps


def gamma_n(n):
    """Normalizing constant of the weight (1 - t^2)^((n-3)/2)."""
    if n < 2:
        raise PreconditionError(f"dimension must be >= 2, got {n}")
    return math.exp(math.lgamma(n / 2) - math.lgamma((n - 1) / 2)) / math.sqrt(math.pi)


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Real polynomial stored by ascending monomial coefficients."""

    coeffs: np.ndarray
    # (n, a, b, k) when built from a JacobiFamily; lets roots() use the recurrence
    family: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=np.float64)).copy()
        nz = np.nonzero(c)[0]
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_roots(cls, roots):
        return cls(npoly.polyfromroots(roots))

    @classmethod
    def monomial(cls, k):
        c = np.zeros(k + 1)
        c[k] = 1.0
        return cls(c)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, t):
        if self.family is not None and self.degree > 12:
            n, a, b, k = self.family
            t = np.asarray(t, dtype=np.float64)
            p, _ = JacobiFamily(n, a, b).value_and_derivative(k, t)
            return p.reshape(t.shape) if t.ndim else float(p[0])
        return npoly.polyval(t, self.coeffs)

    def deriv(self, m=1):
        if self.degree < m:
            return Polynomial(np.zeros(1))
        return Polynomial(npoly.polyder(self.coeffs, m))

    def __add__(self, other):
        if np.isscalar(other):
            other = Polynomial([other])
        return Polynomial(npoly.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-self.coeffs)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(npoly.polymul(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * float(other))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Polynomial(self.coeffs / float(c))

    def gegenbauer_coeffs(self, n):
        return gegenbauer_coefficients(self, n)

    def __repr__(self):
        return f"Polynomial({np.array2string(self.coeffs, precision=6)})"


def _check_degree(k, cap=MAX_DEGREE):
    if k < 0:
        raise PreconditionError(f"degree must be non-negative, got {k}")
    if k > cap:
        raise UnsupportedDegreeError(f"degree {k} exceeds the supported cap {cap}")


@dataclass(frozen=True)
class JacobiFamily:
    n: int
    a: int = 0
    b: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError(f"dimension must be >= 2, got {self.n}")
        if self.a not in (0, 1) or self.b not in (0, 1):
            raise PreconditionError("adjacent parameters a, b must lie in {0, 1}")

    @property
    def alpha(self):
        return self.a + (self.n - 3) / 2

    @property
    def beta(self):
        return self.b + (self.n - 3) / 2

    def values(self, kmax, t):
        """Table of P_0..P_kmax at ``t`` (shape (kmax+1, len(t))), normalized at 1."""
        t = np.ravel(np.asarray(t, dtype=np.float64))
        tab = _kernels.jacobi_table(kmax, self.alpha, self.beta, np.append(t, 1.0))
        return tab[:, :-1] / tab[:, -1:]

    def value_and_derivative(self, k, t):
        t = np.ravel(np.asarray(t, dtype=np.float64))
        p, d = _kernels.jacobi_with_deriv(k, self.alpha, self.beta, np.append(t, 1.0))
        return p[:-1] / p[-1], d[:-1] / p[-1]

    def polynomial(self, k):
        _check_degree(k, _MAX_RULE_SIZE)
        return _family_poly(self.n, self.a, self.b, k)

    def roots(self, k):
        _check_degree(k, _MAX_RULE_SIZE)
        return _family_roots(self.n, self.a, self.b, k)


@lru_cache(maxsize=None)
def _family_poly(n, a, b, k):
    fam = JacobiFamily(n, a, b)
    al, be = fam.alpha, fam.beta
    ab = al + be
    p0 = np.array([1.0])
    if k == 0:
        return Polynomial(p0)
    p1 = np.array([(al + 1.0) - (ab + 2.0) / 2.0, (ab + 2.0) / 2.0])
    for j in range(2, k + 1):
        c = 2.0 * j + ab
        a0 = 2.0 * j * (j + ab) * (c - 2.0)
        a1 = (c - 1.0) * c * (c - 2.0)
        a2 = (c - 1.0) * (al * al - be * be)
        a3 = 2.0 * (j + al - 1.0) * (j + be - 1.0) * c
        p2 = npoly.polysub(npoly.polymul([a2, a1], p1), a3 * p0) / a0
        p0, p1 = p1, p2
    return Polynomial(p1 / npoly.polyval(1.0, p1), family=(n, a, b, k))


@lru_cache(maxsize=None)
def _family_roots(n, a, b, k):
    if k == 0:
        return np.zeros(0)
    fam = JacobiFamily(n, a, b)

    def f(t):
        return fam.value_and_derivative(k, t)[0]

    def fd(t):
        return fam.value_and_derivative(k, t)

    r = _bracket_roots(f, fd, k, 1e-12)
    if r.size != k:
        raise NumericFailure(f"found {r.size} roots of P_{k}^({a},{b}) for n={n}, expected {k}")
    r.setflags(write=False)
    return r


def _bracket_roots(f, fd, degree, tol):
    """Sign-change bracketing on a cos-spaced grid, then guarded Newton."""
    m = 64 * max(degree, 1) + 1
    grid = np.cos(np.linspace(np.pi, 0.0, m))
    grid[0], grid[-1] = -1.0, 1.0
    vals = f(grid)
    found = []
    for i in range(m):
        if vals[i] == 0.0:
            found.append(grid[i])
    for i in range(m - 1):
        lo, hi = grid[i], grid[i + 1]
        if vals[i] * vals[i + 1] < 0.0:
            r = brentq(lambda x: float(f(np.array([x]))[0]), lo, hi, xtol=1e-16, rtol=1e-15, maxiter=200)
            for _ in range(3):
                v, d = fd(np.array([r]))
                if d[0] == 0.0 or v[0] == 0.0:
                    break
                step = v[0] / d[0]
                if lo <= r - step <= hi:
                    r -= step
            found.append(r)
    return np.array(sorted(found))


def roots(p):
    """Ascending real roots in [-1, 1] of a polynomial whose roots are simple and real.

    Raises NumericFailure if the count does not match the degree or a residual
    is too large.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    _check_degree(p.degree, _MAX_RULE_SIZE)
    if p.degree == 0:
        return np.zeros(0)
    if p.family is not None:
        return _family_roots(*p.family).copy()
    c = p.coeffs
    dc = npoly.polyder(c)

    def f(t):
        return npoly.polyval(t, c)

    def fd(t):
        return npoly.polyval(t, c), npoly.polyval(t, dc)

    scale = np.max(np.abs(c))
    r = _bracket_roots(f, fd, p.degree, 1e-12)
    # endpoints that are roots only up to rounding
    for e in (-1.0, 1.0):
        if abs(f(e)) <= 1e-13 * scale and not np.any(np.abs(r - e) < 1e-9):
            r = np.sort(np.append(r, e))
    res = np.abs(f(r)) if r.size else np.zeros(0)
    if r.size != p.degree or np.any(res > 1e-10 * scale):
        raise NumericFailure(
            f"root finding failed: {r.size} roots for degree {p.degree}, residuals {res.tolist()}")
    return r


def gegenbauer(n, k):
    """P_k^(n) in monomial form."""
    _check_degree(k)
    return JacobiFamily(n, 0, 0).polynomial(k)


def adjacent(n, a, b, k):
    """Adjacent polynomial P_k^(a,b) in monomial form."""
    _check_degree(k)
    return JacobiFamily(n, a, b).polynomial(k)


@lru_cache(maxsize=None)
def gauss_rule(n, m):
    """m-point Gauss rule for mu_n (exact through degree 2m - 1, weights sum to 1)."""
    _check_degree(m, _MAX_RULE_SIZE)
    fam = JacobiFamily(n, 0, 0)
    x = fam.roots(m)
    _, d = fam.value_and_derivative(m, x)
    w = 1.0 / ((1.0 - x * x) * d * d)
    w /= w.sum()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def rule_for_degree(n, degree):
    """Gauss rule for mu_n exact for polynomials of the given degree."""
    return gauss_rule(n, max(1, degree // 2 + 1))


def integrate(p, n):
    """gamma_n * int p(t) (1-t^2)^((n-3)/2) dt, exact for polynomials."""
    x, w = rule_for_degree(n, p.degree)
    return math.fsum(w * p(x))


def gegenbauer_values(n, kmax, t):
    return JacobiFamily(n, 0, 0).values(kmax, t)


@lru_cache(maxsize=None)
def _basis_matrix(n, d):
    """Monomial coefficients of P_0..P_d (columns), built in extended precision."""
    ld = np.longdouble
    fam = JacobiFamily(n, 0, 0)
    al, be = ld(fam.alpha), ld(fam.beta)
    ab = al + be
    M = np.zeros((d + 1, d + 1), dtype=ld)
    M[0, 0] = 1
    if d >= 1:
        M[0, 1] = (al + 1) - (ab + 2) / 2
        M[1, 1] = (ab + 2) / 2
    for j in range(2, d + 1):
        c = 2 * j + ab
        a0 = 2 * j * (j + ab) * (c - 2)
        a1 = (c - 1) * c * (c - 2)
        a2 = (c - 1) * (al * al - be * be)
        a3 = 2 * (j + al - 1) * (j + be - 1) * c
        M[1:, j] = a1 * M[:-1, j - 1]
        M[:, j] += a2 * M[:, j - 1] - a3 * M[:, j - 2]
        M[:, j] /= a0
    M /= M.sum(axis=0)  # column sums are the values at t = 1
    M.setflags(write=False)
    return M


def gegenbauer_coefficients(p, n):
    """Coefficients f_i with p = sum_i f_i P_i^(n), i = 0..deg(p).

    f_i = <p, P_i> / <P_i, P_i> under mu_n.  Evaluated as an exact change of
    basis (upper-triangular solve in extended precision), which equals the
    inner-product formula for polynomials and avoids quadrature rounding.
    """
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    d = p.degree
    _check_degree(d)
    M = _basis_matrix(n, d)
    c = p.coeffs.astype(np.longdouble)
    f = np.zeros(d + 1, dtype=np.longdouble)
    for i in range(d, -1, -1):
        f[i] = (c[i] - M[i, i + 1:] @ f[i + 1:]) / M[i, i]
    return f.astype(np.float64)


def from_gegenbauer(coeffs, n):
    f = np.asarray(coeffs, dtype=np.float64)
    _check_degree(f.size - 1)
    M = _basis_matrix(n, f.size - 1)
    return Polynomial((M @ f.astype(np.longdouble)).astype(np.float64))


def gegenbauer_series(coeffs, n, t):
    """Evaluate sum_i coeffs[i] P_i^(n)(t) through the recurrence."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    vals = gegenbauer_values(n, coeffs.size - 1, t)
    return (coeffs @ vals).reshape(t.shape)


def classical_gegenbauer_coefficients(p, n):
    """Coefficients on the classical basis C_i^(lam), lam = (n-2)/2 (n >= 3).

    C_i^(lam) = C_i^(lam)(1) * P_i^(n), so these are the normalized
    coefficients divided by C_i^(lam)(1) = binom(i + 2 lam - 1, i).
    """
    if n < 3:
        raise PreconditionError("classical Gegenbauer basis needs n >= 3")
    f = gegenbauer_coefficients(p, n)
    lam = (n - 2) / 2
    i = np.arange(f.size)
    at_one = np.exp([math.lgamma(j + 2 * lam) - math.lgamma(2 * lam) - math.lgamma(j + 1) for j in i])
    return f / at_one


def largest_root_fl(n, tau):
    """Largest root t_k^{0,eps} of P_k^(0,eps), with tau = 2k - 1 + eps."""
    k, eps = split_tau(tau)
    return float(JacobiFamily(n, 0, eps).roots(k)[-1])
