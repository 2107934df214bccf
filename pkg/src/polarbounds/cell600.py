"""Min-max polarization bound for the 600-cell.

The 600-cell is a 19-design except for degree 12, so the usual interpolant
is corrected inside Pi_16 intersected with the orthogonal complement of P_12:
g is the degree-15 Hermite interpolant of h at the multiset T of inner
products, and H = g - (g)_12 / (g_16)_12 * g_16 with g_16 the full node
product.  H >= h on [-1, 1], and 120 H_0 equals the potential at a vertex.
"""
import math

import numpy as np

from .errors import DomainError, PreconditionError
from .interpolation import _scan, hermite
from .orthopoly import Polynomial, gegenbauer_coefficients, integrate

N_600 = 120
DEGREE = 12
SQRT5 = math.sqrt(5.0)
# b_1 .. b_9, ascending
CELL600_INNER_PRODUCTS = np.array([
    -1.0, -(1 + SQRT5) / 4, -0.5, (1 - SQRT5) / 4, 0.0, (SQRT5 - 1) / 4, 0.5, (1 + SQRT5) / 4, 1.0,
])
CELL600_COUNTS = np.array([1, 12, 20, 12, 30, 12, 20, 12, 1])
# 1 at the endpoints, 2 at each interior inner product
CONTACT = np.array([1, 2, 2, 2, 2, 2, 2, 2, 1])
# classical-basis coefficients (g_j)_12, j = 12..16, in closed form
CLOSED_FORM_P12 = {
    12: 2.0 ** -12,
    13: (3 + SQRT5) / 2 ** 13,
    14: (15 + 3 * SQRT5) / 2 ** 15,
    15: 5 / 2 ** 14,
    16: 2.0 ** -14,
}


def multiset():
    return np.repeat(CELL600_INNER_PRODUCTS, CONTACT)


def _times_linear_u(c, a):
    """U-basis coefficients of (t - a) * sum_k c_k U_k, using t U_k = (U_{k+1} + U_{k-1}) / 2."""
    out = np.zeros(c.size + 1, dtype=c.dtype)
    out[1:] += c / 2
    out[:-2] += c[1:] / 2
    out[:-1] -= a * c
    return out


def partial_product_coefficients():
    """(g_j)_12 for g_j(t) = prod_{i <= j} (t - t_i), j = 12..16, classical basis.

    For n = 4 the classical basis is U_k.  The products are built factor by
    factor directly in that basis in extended precision, so no monomial
    cancellation enters.
    """
    r5 = np.sqrt(np.longdouble(5))
    one = np.longdouble(1)
    b = [-one, -(1 + r5) / 4, -one / 2, (1 - r5) / 4, 0 * one, (r5 - 1) / 4, one / 2, (1 + r5) / 4, one]
    T = np.repeat(np.array(b, dtype=np.longdouble), CONTACT)
    c = np.ones(1, dtype=np.longdouble)
    out = {}
    for j, a in enumerate(T, start=1):
        c = _times_linear_u(c, a)
        if j >= DEGREE:
            out[j] = float(c[DEGREE])
    return out


def _p12(p):
    f = gegenbauer_coefficients(p, 4)
    return float(f[DEGREE]) if f.size > DEGREE else 0.0


def multiplicity_value(h):
    vals = np.asarray(h(CELL600_INNER_PRODUCTS), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise DomainError(f"{h.name} must be finite on [-1, 1] for the 600-cell bound "
                          f"(not finite at {CELL600_INNER_PRODUCTS[~np.isfinite(vals)].tolist()})")
    return math.fsum(CELL600_COUNTS * vals)


def cell600_bound(h, npts=8192):
    """max_x U_h(x, C_600) for h absolutely monotone of order 16, with verification."""
    from .bounds import CELL600, BoundReport

    if not h.absolutely_monotone(16):
        bad = [j for j in range(17) if not h.has_sign(j, "nonneg")]
        raise PreconditionError(f"{h.name} must be absolutely monotone of order 16; "
                                f"orders {bad} are not declared non-negative")
    value = multiplicity_value(h)
    g = hermite(h, (CELL600_INNER_PRODUCTS, CONTACT))
    g16 = Polynomial.from_roots(multiset())
    H = g.poly - (_p12(g.poly) / _p12(g16)) * g16
    h12 = _p12(H)
    alt = N_600 * integrate(H, 4)
    t_worst, gap = _scan(lambda t: H(t) - h(t), -1.0, 1.0, npts)
    coeffs = partial_product_coefficients()
    diagnostics = {
        "p12_coefficients": coeffs,
        "H": H,
        "H_p12": float(h12),
        "min_gap": float(gap),
        "min_gap_at": float(t_worst),
        "dominates": bool(gap >= -1e-8),
        "p12_vanishes": bool(abs(h12) <= 1e-9),
        "relative_mismatch": abs(alt - value) / max(1.0, abs(value)),
    }
    flagged = not (diagnostics["dominates"] and diagnostics["p12_vanishes"]
                   and diagnostics["relative_mismatch"] <= 1e-7)
    return BoundReport(CELL600, value, N_600, None, g, None, alt, flagged, diagnostics)
