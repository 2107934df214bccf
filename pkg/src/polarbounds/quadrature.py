"""Node/weight systems behind the universal polarization bounds.

Every rule integrates against mu_n and is exact up to its
``exactness_degree``; nodes never depend on the potential.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DegenerateRuleError, NumericFailure, PreconditionError
from .orthopoly import JacobiFamily, Polynomial, gauss_rule, largest_root_fl, roots, split_tau

PULB, PULB_NEG, PUUB = "PULB", "PULB_NEG", "PUUB"

_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    n: int
    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    kind: str
    epsilon: int
    s: float = None

    def integrate(self, f):
        """sum_i w_i f(node_i)."""
        return math.fsum(self.weights * np.asarray(f(self.nodes), dtype=np.float64))

    def multiplicities(self):
        """Hermite contact order of each node: 1 at -1, +1 and s, else 2."""
        m = np.full(self.nodes.size, 2, dtype=int)
        for i, x in enumerate(self.nodes):
            if x == -1.0 or x == 1.0 or (self.s is not None and x == self.s):
                m[i] = 1
        return m


@dataclass(frozen=True, eq=False)
class SignedMeasureBasis:
    """Monic polynomials orthogonal w.r.t. gamma_n (1+t)^(1-eps) (s-t) (1-t^2)^((n-3)/2) dt."""

    n: int
    s: float
    epsilon: int
    polys: tuple
    norms: np.ndarray

    def inner(self, p, q):
        return _signed_inner(self.n, self.s, self.epsilon, p, q, max(p.degree, q.degree))


def lagrange_weights(nodes, n):
    """w_i = gamma_n int l_i(t) (1-t^2)^((n-3)/2) dt for the Lagrange basis of ``nodes``."""
    nodes = np.asarray(nodes, dtype=np.float64)
    m = nodes.size
    x, w = gauss_rule(n, m + 1)  # exact through degree 2m + 1 >= 2 * #nodes
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise DegenerateRuleError(f"coincident quadrature nodes {nodes.tolist()}")
    denom = diff.prod(axis=1)
    out = np.empty(m)
    for i in range(m):
        others = np.delete(nodes, i)
        li = np.prod(x[:, None] - others[None, :], axis=1) / denom[i]
        out[i] = math.fsum(w * li)
    return out


def pulb_rule(n, tau):
    """Nodes: roots of (1+t)^eps P_k^(0,eps); weights from the Lagrange basis."""
    k, eps = split_tau(tau)
    nodes = np.array(JacobiFamily(n, 0, eps).roots(k))
    if eps == 1:
        nodes = np.concatenate(([-1.0], nodes))
    weights = lagrange_weights(nodes, n)
    return _make_rule(n, nodes, weights, tau, PULB, eps)


def pulb_negative_rule(n, tau):
    """Rule for potentials whose derivative of order tau+1 is non-positive."""
    k, eps = split_tau(tau)
    if eps == 0:
        inner = JacobiFamily(n, 1, 1).roots(k - 1)
        nodes = np.concatenate(([-1.0], inner, [1.0]))
    else:
        nodes = np.concatenate((JacobiFamily(n, 1, 0).roots(k), [1.0]))
    weights = lagrange_weights(nodes, n)
    return _make_rule(n, nodes, weights, tau, PULB_NEG, eps)


def _make_rule(n, nodes, weights, exactness, kind, eps, s=None):
    if np.any(weights <= 0.0):
        raise DegenerateRuleError(f"non-positive weight in {kind} rule: {weights.tolist()}")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise NumericFailure(f"{kind} weights sum to {weights.sum()!r}")
    nodes = np.array(nodes, dtype=np.float64)
    weights = np.array(weights, dtype=np.float64)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(n, nodes, weights, int(exactness), kind, eps, s)


def signed_threshold(n, tau):
    """Largest root of P_{k-1+eps}^(0,1-eps); -1 when that polynomial is constant."""
    k, eps = split_tau(tau)
    deg = k - 1 + eps
    if deg == 0:
        return -1.0
    return float(JacobiFamily(n, 0, 1 - eps).roots(deg)[-1])


def _signed_inner(n, s, eps, p, q, deg):
    x, w = gauss_rule(n, deg + 3)  # exact through 2 deg + 5 >= 2 deg + 2
    return math.fsum(w * p(x) * q(x) * (1.0 + x) ** (1 - eps) * (s - x))


def signed_basis(n, tau, s):
    """Modified Gram-Schmidt on 1, t, t^2, ... against the signed measure."""
    k, eps = split_tau(tau)
    thr = signed_threshold(n, tau)
    if not (s > thr + _SLACK):
        raise PreconditionError(
            f"s = {s!r} must exceed the positive-definiteness threshold {thr!r} "
            f"(largest root of P_{k - 1 + eps}^(0,{1 - eps}))")
    if s > 1.0 + 1e-15:
        raise PreconditionError(f"s = {s!r} must not exceed 1")
    top = k - 1 + eps
    x, w = gauss_rule(n, top + 3)
    wm = w * (1.0 + x) ** (1 - eps) * (s - x)
    polys, vals, norms = [], [], []
    for j in range(top + 1):
        q = Polynomial.monomial(j)
        qx = q(x)
        for i in range(j):
            c = math.fsum(wm * qx * vals[i]) / norms[i]
            q = q - c * polys[i]
            qx = qx - c * vals[i]
        polys.append(q)
        vals.append(qx)
        norms.append(math.fsum(wm * qx * qx))
    return SignedMeasureBasis(n, float(s), eps, tuple(polys), np.array(norms))


def puub_rule(n, tau, s):
    """Nodes -1 (eps = 0), the roots of q_{k-1+eps}^{s,1-eps}, and s."""
    k, eps = split_tau(tau)
    basis = signed_basis(n, tau, s)
    # s_C of a tau-design is at least the largest root of P_k^(0,eps); at that
    # root the weight at -1 (or an interior node) vanishes
    fl = largest_root_fl(n, tau)
    if s <= fl + _SLACK:
        raise DegenerateRuleError(
            f"s = {s!r} must exceed the covering bound {fl!r} for {tau}-designs in dimension {n}")
    top = basis.polys[-1]
    try:
        inner = roots(top) if top.degree > 0 else np.zeros(0)
    except NumericFailure:
        # some root of q lies outside [-1, 1]
        raise DegenerateRuleError(f"orthogonal polynomial for s = {s!r} has roots outside (-1, s)") from None
    if inner.size and not (inner[0] > -1.0 + _SLACK and inner[-1] < s - _SLACK):
        if inner[-1] >= s - _SLACK:
            raise DegenerateRuleError(
                f"s = {s!r} coincides with interior node {inner[-1]!r}")
        raise DegenerateRuleError(f"interior nodes {inner.tolist()} leave (-1, {s!r})")
    parts = ([-1.0],) if eps == 0 else ()
    nodes = np.concatenate(parts + (inner, [float(s)]))
    weights = lagrange_weights(nodes, n)
    return _make_rule(n, nodes, weights, 2 * k - 1 + eps, PUUB, eps, float(s))
