"""Discrete potentials U_h(x, C) = sum_y h(x.y) and their extrema on the sphere.

Extrema are found numerically: batched projected gradient descent with
Armijo backtracking from many seeds, then a Riemannian Newton polish of the
best candidates.  Results are heuristic; see ``ExtremumResult`` diagnostics.
"""
from dataclasses import dataclass
from itertools import combinations
import math

import numpy as np

from . import _kernels
from .errors import PreconditionError
from .potentials import NONNEG

MAX_ITER = 500
GRAD_TOL = 1e-10
RANDOM_STARTS = 512
SEED_BUDGET = 2000
POLISH_TOP = 8


@dataclass(frozen=True)
class ExtremumResult:
    value: float
    witness: np.ndarray
    kind: str  # "min" or "max"
    starts_used: int
    gradient_norm: float
    label: str = "numerical"


def potential_at(x, code, h):
    """U_h(x, C) with compensated summation; inf when x hits a singularity."""
    x = np.asarray(x, dtype=np.float64)
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise PreconditionError("x must be a unit vector")
    vals = np.asarray(h(np.clip(code.points @ x, -1.0, 1.0)), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        return math.inf
    return math.fsum(vals)


def _batch(X, code, h):
    """Potential values and Euclidean gradients for each row of X."""
    if h.kernel is not None:
        kind, params = h.kernel
        return _kernels.potential_batch(X, code.points, kind, np.asarray(params, dtype=np.float64))
    G = np.clip(X @ code.points.T, -1.0, 1.0)
    with np.errstate(all="ignore"):
        U = np.asarray(h(G)).sum(axis=1)
        grad = np.asarray(h.derivative(1, G)) @ code.points
    return U, grad


def _tangent(X, grad):
    return grad - np.sum(grad * X, axis=1, keepdims=True) * X


def _normalize(X):
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _seeds(code, rng):
    P = code.points
    N = P.shape[0]
    parts = [P, -P]
    budget = max(SEED_BUDGET - 2 * N, 0)
    pairs = list(combinations(range(N), 2))
    triples = list(combinations(range(N), 3)) if N <= 40 else []
    if len(pairs) + len(triples) > budget:
        # keep every pair when possible, then subsample the rest
        if len(pairs) > budget:
            idx = rng.choice(len(pairs), budget, replace=False)
            pairs, triples = [pairs[i] for i in np.sort(idx)], []
        else:
            left = budget - len(pairs)
            idx = rng.choice(len(triples), min(left, len(triples)), replace=False)
            triples = [triples[i] for i in np.sort(idx)]
    if pairs:
        parts.append(P[np.array(pairs)].sum(axis=1))
    if triples:
        parts.append(P[np.array(triples)].sum(axis=1))
    parts.append(rng.standard_normal((RANDOM_STARTS, code.n)))
    X = np.vstack(parts)
    keep = np.linalg.norm(X, axis=1) > 1e-9
    return _normalize(X[keep])


def _descend(X, code, h, sign):
    """Projected gradient on sign * U with per-row Armijo backtracking."""
    U, grad = _batch(X, code, h)
    F = sign * U
    ok = np.isfinite(F) & np.all(np.isfinite(grad), axis=1)
    X, F, grad = X[ok], F[ok], grad[ok]
    D = -sign * _tangent(X, grad)
    step = np.full(X.shape[0], 0.1)
    active = np.ones(X.shape[0], dtype=bool)
    for _ in range(MAX_ITER):
        gnorm2 = np.sum(D * D, axis=1)
        active &= np.sqrt(gnorm2) > GRAD_TOL
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        todo = idx
        for _ in range(40):
            Xc = _normalize(X[todo] + step[todo, None] * D[todo])
            Uc, gc = _batch(Xc, code, h)
            Fc = sign * Uc
            good = np.isfinite(Fc) & (Fc <= F[todo] - 1e-4 * step[todo] * gnorm2[todo])
            acc = todo[good]
            X[acc], F[acc] = Xc[good], Fc[good]
            D[acc] = -sign * _tangent(Xc[good], gc[good])
            step[acc] *= 2.0
            todo = todo[~good]
            step[todo] *= 0.5
            if todo.size == 0:
                break
        # rows whose step collapsed without progress are stationary to rounding
        active[todo] = False
    return X, F


def _riemannian_newton(x, code, h, sign, iters=8):
    """Polish a candidate with Newton steps in the tangent space at x."""
    P = code.points
    n = P.shape[1]
    for _ in range(iters):
        g = np.clip(P @ x, -1.0, 1.0)
        d1 = np.asarray(h.derivative(1, g))
        d2 = np.asarray(h.derivative(2, g))
        if not (np.all(np.isfinite(d1)) and np.all(np.isfinite(d2))):
            break
        egrad = d1 @ P
        ehess = (P.T * d2) @ P
        proj = np.eye(n) - np.outer(x, x)
        rgrad = proj @ egrad
        rhess = proj @ ehess @ proj - (x @ egrad) * proj
        if np.linalg.norm(rgrad) <= 1e-14:
            break
        # solve on the tangent space: basis from the projector
        basis = np.linalg.svd(proj)[0][:, : n - 1]
        Hb = basis.T @ rhess @ basis
        try:
            v = -np.linalg.solve(Hb, basis.T @ rgrad)
        except np.linalg.LinAlgError:
            break
        xn = x + basis @ v
        xn /= np.linalg.norm(xn)
        fx = sign * potential_at(x, code, h)
        fn = sign * potential_at(xn, code, h)
        gn = np.linalg.norm(_tangent(xn[None], _batch(xn[None], code, h)[1])[0])
        if not (np.isfinite(fn) and fn <= fx + 1e-12 * max(1.0, abs(fx))
                and gn < np.linalg.norm(rgrad)):
            break
        x = xn
    return x


def _extremum(code, h, sign, seed):
    rng = np.random.default_rng(seed)
    X0 = _seeds(code, rng)
    X, F = _descend(X0.copy(), code, h, sign)
    if X.shape[0] == 0:
        raise PreconditionError(f"{h.name} is not finite at any start point")
    order = np.argsort(F, kind="stable")
    cands = []
    for i in order[: 4 * POLISH_TOP]:
        x = X[i]
        if any(np.linalg.norm(x - c) < 1e-6 for c in cands):
            continue
        cands.append(_riemannian_newton(x, code, h, sign))
        if len(cands) == POLISH_TOP:
            break
    vals = np.array([sign * potential_at(c, code, h) for c in cands])
    best = vals.min()
    tied = [c for c, v in zip(cands, vals) if v <= best + 1e-12 * max(1.0, abs(best))]
    witness = min(tied, key=lambda c: tuple(np.round(c, 8)))
    value = potential_at(witness, code, h)
    gnorm = float(np.linalg.norm(_tangent(witness[None], _batch(witness[None], code, h)[1])[0]))
    return ExtremumResult(value, witness, "min" if sign > 0 else "max", int(X0.shape[0]), gnorm)


def minimize(code, h, seed=0):
    """Numerical Q_h(C) = min over the sphere of U_h(x, C)."""
    return _extremum(code, h, 1.0, seed)


def maximize(code, h, seed=0):
    """Numerical R_h(C) = max over the sphere of U_h(x, C); inf for singular h."""
    if not h.continuous_at_one and not np.isfinite(h(1.0)):
        witness = min(code.points, key=lambda c: tuple(np.round(c, 8)))
        return ExtremumResult(math.inf, np.array(witness), "max", 0, math.nan)
    return _extremum(code, h, -1.0, seed)


def one_design_optimum(n, N, h):
    """N h(0): the max-min optimum for N <= n points and convex increasing h."""
    if not 2 <= N <= n:
        raise PreconditionError(f"need 2 <= N <= n, got N={N}, n={n}")
    if not (h.has_sign(1, NONNEG) and h.has_sign(2, NONNEG)):
        raise PreconditionError(f"{h.name}: h' >= 0 and h'' >= 0 must be declared")
    return N * float(h(0.0))
