"""Hot inner loops, each with a numba version and a pure-numpy fallback.

Set ``POLARBOUNDS_DISABLE_NUMBA=1`` to force the numpy path (useful for
debugging and for comparing the two in ``benchmarks/``).  The numba path is
also skipped silently when numba is not importable.
"""
import os

import numpy as np

_DISABLE = os.environ.get("POLARBOUNDS_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLE:
        raise ImportError
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA

# potential kinds understood by potential_batch
RIESZ, GAUSS, LOG, POLY = 0, 1, 2, 3


# --------------------------------------------------------------------------
# Jacobi three-term recurrence (standard normalization)
# --------------------------------------------------------------------------

def _jacobi_table_np(kmax, alpha, beta, t):
    t = np.asarray(t, dtype=np.float64)
    out = np.empty((kmax + 1, t.size))
    out[0] = 1.0
    if kmax == 0:
        return out
    out[1] = (alpha + 1.0) + (alpha + beta + 2.0) * (t - 1.0) / 2.0
    ab = alpha + beta
    for k in range(2, kmax + 1):
        c = 2.0 * k + ab
        a0 = 2.0 * k * (k + ab) * (c - 2.0)
        a1 = (c - 1.0) * c * (c - 2.0)
        a2 = (c - 1.0) * (alpha * alpha - beta * beta)
        a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c
        out[k] = ((a1 * t + a2) * out[k - 1] - a3 * out[k - 2]) / a0
    return out


def _jacobi_with_deriv_np(k, alpha, beta, t):
    t = np.asarray(t, dtype=np.float64)
    p0 = np.ones_like(t)
    d0 = np.zeros_like(t)
    if k == 0:
        return p0, d0
    p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (t - 1.0) / 2.0
    d1 = np.full_like(t, (alpha + beta + 2.0) / 2.0)
    ab = alpha + beta
    for j in range(2, k + 1):
        c = 2.0 * j + ab
        a0 = 2.0 * j * (j + ab) * (c - 2.0)
        a1 = (c - 1.0) * c * (c - 2.0)
        a2 = (c - 1.0) * (alpha * alpha - beta * beta)
        a3 = 2.0 * (j + alpha - 1.0) * (j + beta - 1.0) * c
        p2 = ((a1 * t + a2) * p1 - a3 * p0) / a0
        d2 = ((a1 * t + a2) * d1 + a1 * p1 - a3 * d0) / a0
        p0, p1, d0, d1 = p1, p2, d1, d2
    return p1, d1


# --------------------------------------------------------------------------
# confluent divided differences (multiplicity <= 2)
# --------------------------------------------------------------------------

def _divided_differences_np(z, f, df):
    m = z.size
    col = f.astype(np.float64).copy()
    coef = np.empty(m)
    coef[0] = col[0]
    for j in range(1, m):
        new = np.empty(m - j)
        for i in range(m - j):
            dz = z[i + j] - z[i]
            if dz == 0.0:
                new[i] = df[i]
            else:
                new[i] = (col[i + 1] - col[i]) / dz
        col = new
        coef[j] = col[0]
    return coef


# --------------------------------------------------------------------------
# discrete potential U(x) = sum_y h(x.y) and its Euclidean gradient
# --------------------------------------------------------------------------

def _h_and_dh_np(g, kind, params):
    if kind == RIESZ:
        m = params[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            base = 2.0 - 2.0 * g
            h = np.where(base > 0.0, base ** (-m / 2.0), np.inf)
            dh = np.where(base > 0.0, m * base ** (-m / 2.0 - 1.0), np.inf)
    elif kind == GAUSS:
        c = params[0]
        h = np.exp(c * (g - 1.0))
        dh = c * h
    elif kind == LOG:
        with np.errstate(divide="ignore", invalid="ignore"):
            base = 2.0 - 2.0 * g
            h = np.where(base > 0.0, -0.5 * np.log(np.where(base > 0.0, base, 1.0)), np.inf)
            dh = np.where(base > 0.0, 1.0 / np.where(base > 0.0, base, 1.0), np.inf)
    else:
        h = np.polynomial.polynomial.polyval(g, params)
        dh = np.polynomial.polynomial.polyval(g, np.polynomial.polynomial.polyder(params)) \
            if params.size > 1 else np.zeros_like(g)
    return h, dh


def _potential_batch_np(X, Y, kind, params):
    g = np.clip(X @ Y.T, -1.0, 1.0)
    h, dh = _h_and_dh_np(g, kind, params)
    U = h.sum(axis=1)
    with np.errstate(invalid="ignore"):
        grad = dh @ Y
    return U, grad


if HAS_NUMBA:
    @njit(cache=True)
    def _jacobi_table_nb(kmax, alpha, beta, t):
        m = t.size
        out = np.empty((kmax + 1, m))
        ab = alpha + beta
        for i in range(m):
            out[0, i] = 1.0
        if kmax == 0:
            return out
        for i in range(m):
            out[1, i] = (alpha + 1.0) + (ab + 2.0) * (t[i] - 1.0) / 2.0
        # degree-outer loop keeps the inner loop contiguous
        for k in range(2, kmax + 1):
            c = 2.0 * k + ab
            a0 = 2.0 * k * (k + ab) * (c - 2.0)
            a1 = (c - 1.0) * c * (c - 2.0)
            a2 = (c - 1.0) * (alpha * alpha - beta * beta)
            a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c
            for i in range(m):
                out[k, i] = ((a1 * t[i] + a2) * out[k - 1, i] - a3 * out[k - 2, i]) / a0
        return out

    @njit(cache=True)
    def _jacobi_with_deriv_nb(k, alpha, beta, t):
        m = t.size
        p = np.empty(m)
        d = np.empty(m)
        ab = alpha + beta
        for i in range(m):
            x = t[i]
            p0, d0 = 1.0, 0.0
            if k == 0:
                p[i], d[i] = p0, d0
                continue
            p1 = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0
            d1 = (ab + 2.0) / 2.0
            for j in range(2, k + 1):
                c = 2.0 * j + ab
                a0 = 2.0 * j * (j + ab) * (c - 2.0)
                a1 = (c - 1.0) * c * (c - 2.0)
                a2 = (c - 1.0) * (alpha * alpha - beta * beta)
                a3 = 2.0 * (j + alpha - 1.0) * (j + beta - 1.0) * c
                p2 = ((a1 * x + a2) * p1 - a3 * p0) / a0
                d2 = ((a1 * x + a2) * d1 + a1 * p1 - a3 * d0) / a0
                p0, p1, d0, d1 = p1, p2, d1, d2
            p[i], d[i] = p1, d1
        return p, d

    @njit(cache=True)
    def _divided_differences_nb(z, f, df):
        m = z.size
        col = f.copy()
        coef = np.empty(m)
        coef[0] = col[0]
        for j in range(1, m):
            for i in range(m - j):
                dz = z[i + j] - z[i]
                if dz == 0.0:
                    col[i] = df[i]
                else:
                    col[i] = (col[i + 1] - col[i]) / dz
            coef[j] = col[0]
        return coef

    @njit(cache=True)
    def _potential_batch_nb(X, Y, kind, params):
        S, n = X.shape
        N = Y.shape[0]
        U = np.zeros(S)
        grad = np.zeros((S, n))
        npar = params.size
        for s in range(S):
            for j in range(N):
                g = 0.0
                for d in range(n):
                    g += X[s, d] * Y[j, d]
                if g > 1.0:
                    g = 1.0
                elif g < -1.0:
                    g = -1.0
                if kind == 0:
                    base = 2.0 - 2.0 * g
                    if base <= 0.0:
                        h, dh = np.inf, np.inf
                    else:
                        h = base ** (-params[0] / 2.0)
                        dh = params[0] * h / base
                elif kind == 1:
                    h = np.exp(params[0] * (g - 1.0))
                    dh = params[0] * h
                elif kind == 2:
                    base = 2.0 - 2.0 * g
                    if base <= 0.0:
                        h, dh = np.inf, np.inf
                    else:
                        h = -0.5 * np.log(base)
                        dh = 1.0 / base
                else:
                    h = params[npar - 1]
                    dh = 0.0
                    for c in range(npar - 2, -1, -1):
                        dh = dh * g + h
                        h = h * g + params[c]
                U[s] += h
                for d in range(n):
                    grad[s, d] += dh * Y[j, d]
        return U, grad


def jacobi_table(kmax, alpha, beta, t):
    """Values P_0..P_kmax of the standard-normalized Jacobi family at ``t``."""
    t = np.ascontiguousarray(np.ravel(t), dtype=np.float64)
    if USE_NUMBA:
        return _jacobi_table_nb(int(kmax), float(alpha), float(beta), t)
    return _jacobi_table_np(int(kmax), float(alpha), float(beta), t)


def jacobi_with_deriv(k, alpha, beta, t):
    t = np.ascontiguousarray(np.ravel(t), dtype=np.float64)
    if USE_NUMBA:
        return _jacobi_with_deriv_nb(int(k), float(alpha), float(beta), t)
    return _jacobi_with_deriv_np(int(k), float(alpha), float(beta), t)


def divided_differences(z, f, df):
    z = np.ascontiguousarray(z, dtype=np.float64)
    f = np.ascontiguousarray(f, dtype=np.float64)
    df = np.ascontiguousarray(df, dtype=np.float64)
    if USE_NUMBA:
        return _divided_differences_nb(z, f, df)
    return _divided_differences_np(z, f, df)


def potential_batch(X, Y, kind, params):
    """Return U(x) and the Euclidean gradient for each row x of ``X``."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    params = np.ascontiguousarray(params, dtype=np.float64)
    if USE_NUMBA:
        return _potential_batch_nb(X, Y, int(kind), params)
    return _potential_batch_np(X, Y, int(kind), params)
