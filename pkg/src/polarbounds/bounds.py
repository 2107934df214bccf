"""Universal polarization bounds for spherical designs.

Every bound is N * sum_i w_i h(node_i) for a quadrature rule whose nodes do
not depend on h.  Each report also carries the Hermite interpolant that
certifies the bound, its admissibility check, and a second evaluation of the
value (N times the constant Gegenbauer coefficient of the interpolant, or a
closed form) so that the two can be compared.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from . import quadrature as Q
from .codes import dgs_bound, inner_products
from .errors import DomainError, PreconditionError
from .interpolation import check_lower_admissible, check_upper_admissible, hermite
from .orthopoly import integrate, largest_root_fl, split_tau
from .potentials import NONNEG, NONPOS, from_polynomial

PULB, PULB_NEG, PUUB, PUUB_S1, FL, CELL600 = "PULB", "PULB_NEG", "PUUB", "PUUB_S1", "FL", "CELL600"

AGREE_TOL = 1e-10


@dataclass
class BoundReport:
    kind: str
    value: float
    N: int
    rule: Q.QuadratureRule = None
    interpolant: object = None
    admissibility: object = None
    alt_value: float = None
    flagged: bool = False
    diagnostics: dict = field(default_factory=dict)
    label: str = "certified modulo floating point"

    @property
    def multiplicities(self):
        """N * w_i, the inner-product counts an attaining code must show."""
        return None if self.rule is None else self.N * self.rule.weights


@dataclass
class AttainmentReport:
    passed: bool
    integral: bool
    multiplicities: np.ndarray
    witness: np.ndarray = None
    levels: np.ndarray = None
    counts: np.ndarray = None
    reason: str = ""


def _finite_values(h, nodes):
    vals = np.asarray(h(nodes), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals)]
        raise DomainError(f"{h.name} is not finite at node(s) {bad.tolist()}")
    return vals


def _quadrature_value(N, rule, h):
    return N * math.fsum(rule.weights * _finite_values(h, rule.nodes))


def _agree(a, b, tol=AGREE_TOL):
    return abs(a - b) <= tol * max(1.0, abs(a))


def _require_sign(h, order, sign, what, other):
    if not h.has_sign(order, sign):
        got = h.high_derivative_sign(order)
        raise PreconditionError(
            f"{what} needs the derivative of order {order} of {h.name} to be {sign} "
            f"(declared: {got}); try {other}")


def _report(kind, N, rule, h, admissible_check):
    value = _quadrature_value(N, rule, h)
    H = hermite(h, (rule.nodes, rule.multiplicities()))
    alt = N * integrate(H.poly, rule.n)
    adm = admissible_check(H.poly)
    flagged = not _agree(value, alt) or not adm.passed
    return BoundReport(kind, value, N, rule, H, adm, alt, flagged)


def pulb(n, tau, N, h):
    """Lower bound on min_x U_h(x, C) over tau-designs C of size N."""
    _require_sign(h, tau + 1, NONNEG, "the lower bound", "pulb_negative")
    if N < dgs_bound(n, tau):
        raise PreconditionError(f"no {tau}-design of {N} points exists in dimension {n} "
                                f"(needs N >= {dgs_bound(n, tau)})")
    rule = Q.pulb_rule(n, tau)
    return _report(PULB, N, rule, h, lambda f: check_lower_admissible(f, h, tau))


def pulb_negative(n, tau, N, h):
    """Lower bound for potentials whose derivative of order tau + 1 is non-positive."""
    _require_sign(h, tau + 1, NONPOS, "the negative-derivative lower bound", "pulb")
    if N < dgs_bound(n, tau):
        raise PreconditionError(f"no {tau}-design of {N} points exists in dimension {n} "
                                f"(needs N >= {dgs_bound(n, tau)})")
    rule = Q.pulb_negative_rule(n, tau)
    return _report(PULB_NEG, N, rule, h, lambda f: check_lower_admissible(f, h, tau))


def puub(n, tau, N, s, h):
    """Upper bound on max_x U_h(x, C) for tau-designs with s_C <= s."""
    k, eps = split_tau(tau)
    _require_sign(h, 2 * k + eps, NONNEG, "the upper bound", "a potential with non-negative high derivatives")
    if not np.isfinite(h(float(s))):
        raise DomainError(f"{h.name} is not finite at s = {s!r}")
    rule = Q.puub_rule(n, tau, s)
    kind = PUUB_S1 if s == 1.0 else PUUB
    return _report(kind, N, rule, h, lambda f: check_upper_admissible(f, h, tau, s))


def fl_bound(n, tau):
    """Lower bound t_k^{0,eps} on s_C for tau-designs."""
    return largest_root_fl(n, tau)


def _check_sign_arg(sign):
    if sign not in (NONNEG, NONPOS):
        raise PreconditionError(f"sign must be {NONNEG!r} or {NONPOS!r}, got {sign!r}")


def simplex_bound(n, h, sign):
    """Closed form for the regular simplex: h(-1) + n h(1/n), or h(1) + n h(-1/n)."""
    _check_sign_arg(sign)
    if sign == NONNEG:
        rep = pulb(n, 2, n + 1, h)
        closed = float(h(-1.0)) + n * float(h(1.0 / n))
    else:
        rep = pulb_negative(n, 2, n + 1, h)
        closed = float(h(1.0)) + n * float(h(-1.0 / n))
    rep.diagnostics["closed_form"] = closed
    rep.flagged |= not _agree(rep.value, closed)
    return rep


def cross_polytope_bound(n, h, sign):
    """Closed form for the cross-polytope: n h(-1/sqrt n) + n h(1/sqrt n), or h(-1) + (2n-2) h(0) + h(1)."""
    _check_sign_arg(sign)
    if sign == NONNEG:
        rep = pulb(n, 3, 2 * n, h)
        r = 1.0 / math.sqrt(n)
        closed = n * float(h(-r)) + n * float(h(r))
    else:
        rep = pulb_negative(n, 3, 2 * n, h)
        closed = float(h(-1.0)) + (2 * n - 2) * float(h(0.0)) + float(h(1.0))
    rep.diagnostics["closed_form"] = closed
    rep.flagged |= not _agree(rep.value, closed)
    return rep


def check_attainment(code, report, seed=0):
    """Look for x whose inner products with C are the rule nodes with counts N w_i."""
    from .polarization import minimize

    if report.rule is None:
        raise PreconditionError("attainment needs a report with a quadrature rule")
    mult = report.N * report.rule.weights
    rounded = np.round(mult)
    integral = bool(np.all(np.abs(mult - rounded) <= 1e-8) and np.all(rounded >= 1)
                    and rounded.sum() == code.N)
    if not integral:
        return AttainmentReport(False, False, mult,
                                reason=f"N * w = {np.round(mult, 6).tolist()} are not positive integers")
    nodes = report.rule.nodes
    ann = from_polynomial(np.polynomial.polynomial.polyfromroots(np.repeat(nodes, 2)), "annihilator")
    res = minimize(code, ann, seed=seed)
    T = inner_products(res.witness, code, tol=1e-6)
    ok = (T.levels.size == nodes.size and np.allclose(T.levels, nodes, atol=1e-8)
          and np.array_equal(T.counts, rounded.astype(int)))
    reason = "" if ok else f"closest witness has levels {np.round(T.levels, 8).tolist()} with counts {T.counts.tolist()}"
    return AttainmentReport(ok, True, mult, res.witness, T.levels, T.counts, reason)


from .cell600 import cell600_bound, CELL600_INNER_PRODUCTS  # noqa: E402,F401
