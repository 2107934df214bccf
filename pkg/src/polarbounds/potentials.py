"""Potential functions h(t) of the inner product t = x . y.

Built-ins carry closed-form derivatives of every order up to MAX_ORDER and a
kernel id so the batched potential sums can run inside the compiled loop.
"""
import math

import numpy as np

from . import _kernels
from .errors import PreconditionError
from .orthopoly import Polynomial

MAX_ORDER = 24

NONNEG, NONPOS, ZERO, UNKNOWN = "nonneg", "nonpos", "zero", "unknown"


class Potential:
    """h together with derivative access and sign metadata for its derivatives.

    ``derivs`` maps (order, t-array) -> values.  ``signs`` maps an order to
    one of ``nonneg``, ``nonpos``, ``zero``, ``unknown``; it may be a dict or
    a callable.
    """

    def __init__(self, name, derivs, *, max_order, continuous_at_one, signs=None, kernel=None):
        self.name = name
        self._derivs = derivs
        self.max_order = max_order
        self.continuous_at_one = continuous_at_one
        self._signs = signs if signs is not None else {}
        self.kernel = kernel  # (kind, params) for _kernels.potential_batch

    def __repr__(self):
        return f"Potential({self.name})"

    def __call__(self, t):
        return self.derivative(0, t)

    def derivative(self, order, t):
        if order < 0 or order > self.max_order:
            raise PreconditionError(f"{self.name}: derivative order {order} not available "
                                    f"(max {self.max_order})")
        scalar = np.ndim(t) == 0
        out = self._derivs(order, np.asarray(t, dtype=np.float64))
        return float(out) if scalar else np.asarray(out, dtype=np.float64)

    def high_derivative_sign(self, order):
        if callable(self._signs):
            return self._signs(order)
        return self._signs.get(order, UNKNOWN)

    def has_sign(self, order, sign):
        """True when the order-th derivative is known to have ``sign`` on (-1, 1)."""
        got = self.high_derivative_sign(order)
        return got == sign or got == ZERO

    def absolutely_monotone(self, order):
        return all(self.has_sign(j, NONNEG) for j in range(order + 1))


def riesz(m):
    """h(t) = (2 - 2t)^(-m/2), i.e. |x - y|^(-m)."""
    m = float(m)
    if m <= 0:
        raise PreconditionError(f"Riesz exponent must be positive, got {m}")

    def d(j, t):
        base = 2.0 - 2.0 * t
        c = 2.0 ** j * math.exp(math.lgamma(m / 2 + j) - math.lgamma(m / 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            safe = np.where(base > 0.0, base, 1.0)
            return np.where(base > 0.0, c * safe ** (-m / 2 - j), np.inf)

    return Potential(f"riesz:{m:g}", d, max_order=MAX_ORDER, continuous_at_one=False,
                     signs=lambda j: NONNEG, kernel=(_kernels.RIESZ, np.array([m])))


def gauss(c=2.0):
    """h(t) = exp(c (t - 1)); the default c = 2 is exp(-|x - y|^2)."""
    c = float(c)
    if c <= 0:
        raise PreconditionError(f"Gauss parameter must be positive, got {c}")

    def d(j, t):
        return c ** j * np.exp(c * (t - 1.0))

    name = "gauss" if c == 2.0 else f"gauss:{c:g}"
    return Potential(name, d, max_order=MAX_ORDER, continuous_at_one=True,
                     signs=lambda j: NONNEG, kernel=(_kernels.GAUSS, np.array([c])))


def logarithmic():
    """h(t) = -log(2 - 2t) / 2, i.e. log(1 / |x - y|)."""

    def d(j, t):
        base = 2.0 - 2.0 * t
        with np.errstate(divide="ignore", invalid="ignore"):
            safe = np.where(base > 0.0, base, 1.0)
            if j == 0:
                val = -0.5 * np.log(safe)
            else:
                val = 0.5 * math.factorial(j - 1) * (safe / 2.0) ** (-j)
            return np.where(base > 0.0, val, np.inf)

    return Potential("log", d, max_order=MAX_ORDER, continuous_at_one=False,
                     signs=lambda j: UNKNOWN if j == 0 else NONNEG,
                     kernel=(_kernels.LOG, np.zeros(1)))


def from_polynomial(p, name=None):
    """A polynomial used as a potential; derivative signs are read off on [-1, 1]."""
    if not isinstance(p, Polynomial):
        p = Polynomial(p)
    ders = [p]
    for _ in range(MAX_ORDER):
        ders.append(ders[-1].deriv())
    grid = np.cos(np.linspace(0.0, np.pi, 513))

    def sign(j):
        if j > MAX_ORDER:
            return ZERO
        dj = ders[j]
        if dj.degree == 0 and dj.coeffs[0] == 0.0:
            return ZERO
        v = dj(grid)
        if np.all(v >= 0.0):
            return NONNEG
        if np.all(v <= 0.0):
            return NONPOS
        return UNKNOWN

    def d(j, t):
        return ders[j](t) if j <= MAX_ORDER else np.zeros_like(t)

    return Potential(name or f"poly{p.degree}", d, max_order=MAX_ORDER, continuous_at_one=True,
                     signs=sign, kernel=(_kernels.POLY, p.coeffs.copy()))


def constant(c):
    return from_polynomial(Polynomial([float(c)]), name=f"const:{c:g}")


def sampled(values, *, signs=None, continuous_at_one=True, name="sampled", check=True, seed=0):
    """Wrap user callables ``values[j](t)`` for the j-th derivative.

    Consecutive supplied orders are cross-checked by Richardson-extrapolated
    central differences at 50 points in (-0.95, 0.95); a mismatch beyond
    relative 1e-5 raises PreconditionError naming the worst point.
    """
    values = dict(values)
    if 0 not in values:
        raise PreconditionError("sampled potential needs the value callable at order 0")
    top = max(values)
    if any(j not in values for j in range(top + 1)):
        raise PreconditionError("derivative orders must be supplied contiguously from 0")

    def d(j, t):
        return np.asarray(values[j](t), dtype=np.float64)

    pot = Potential(name, d, max_order=top, continuous_at_one=continuous_at_one,
                    signs=dict(signs or {}))
    if check and top >= 1:
        t, err = derivative_consistency(pot, range(1, top + 1), seed=seed)
        if err > 1e-5:
            raise PreconditionError(
                f"{name}: supplied derivatives disagree with finite differences "
                f"(worst relative error {err:.3g} at t = {t:.6f})")
    return pot


def derivative_consistency(pot, orders, npts=50, seed=0, step=1e-4):
    """Worst (t, relative error) between derivative(j) and differences of derivative(j-1)."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(-0.95, 0.95, npts)
    worst_t, worst = 0.0, 0.0
    for j in orders:

        def fd(hh):
            return (pot.derivative(j - 1, t + hh) - pot.derivative(j - 1, t - hh)) / (2 * hh)

        approx = (4.0 * fd(step / 2) - fd(step)) / 3.0
        exact = pot.derivative(j, t)
        err = np.abs(approx - exact) / np.maximum(np.abs(exact), 1.0)
        i = int(np.argmax(err))
        if err[i] > worst:
            worst, worst_t = float(err[i]), float(t[i])
    return worst_t, worst


def parse_potential(spec):
    """Parse ``name[:param]``: riesz:m, gauss[:c], log."""
    name, _, arg = spec.strip().partition(":")
    name = name.lower()
    try:
        if name in ("riesz", "newton") and arg:
            return riesz(float(arg))
        if name == "gauss":
            return gauss(float(arg)) if arg else gauss()
        if name == "log" and not arg:
            return logarithmic()
    except ValueError as exc:
        raise PreconditionError(f"bad potential parameter in {spec!r}: {exc}") from None
    raise PreconditionError(f"unknown potential {spec!r}; built-ins: riesz:<m>, gauss[:<c>], log")
