import os
import subprocess
import sys

import numpy as np
import pytest

from polarbounds import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAS_NUMBA, reason="numba not available")


def unit_rows(m, n, rng):
    X = rng.standard_normal((m, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


@needs_numba
@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.5, 0.5), (1.5, 0.5), (-0.5, 0.5)])
def test_jacobi_table_parity(alpha, beta):
    t = np.cos(np.linspace(0, np.pi, 301))
    a = K._jacobi_table_np(30, alpha, beta, t)
    b = K._jacobi_table_nb(30, alpha, beta, t)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


@needs_numba
def test_jacobi_with_deriv_parity():
    t = np.linspace(-1, 1, 101)
    for k in (0, 1, 7, 25):
        a = K._jacobi_with_deriv_np(k, 1.0, 0.0, t)
        b = K._jacobi_with_deriv_nb(k, 1.0, 0.0, t)
        for u, v in zip(a, b):
            assert np.allclose(u, v, rtol=1e-12, atol=1e-12)


@needs_numba
def test_divided_differences_parity():
    rng = np.random.default_rng(0)
    z = np.repeat(np.sort(rng.uniform(-1, 1, 6)), 2)
    a = K._divided_differences_np(z, np.exp(z), np.exp(z))
    b = K._divided_differences_nb(z, np.exp(z), np.exp(z))
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("kind,params", [(K.RIESZ, [1.0]), (K.RIESZ, [2.0]), (K.GAUSS, [2.0]),
                                         (K.LOG, [0.0]), (K.POLY, [0.5, -1.0, 2.0, 0.25])])
def test_potential_batch_parity(kind, params):
    rng = np.random.default_rng(1)
    X = unit_rows(50, 4, rng)
    Y = unit_rows(24, 4, rng)
    p = np.array(params)
    Ua, Ga = K._potential_batch_np(X, Y, kind, p)
    Ub, Gb = K._potential_batch_nb(X, Y, kind, p)
    assert np.allclose(Ua, Ub, rtol=1e-12)
    assert np.allclose(Ga, Gb, rtol=1e-11, atol=1e-12)


def test_potential_batch_gradient_matches_finite_difference():
    rng = np.random.default_rng(2)
    Y = unit_rows(10, 3, rng)
    x = unit_rows(1, 3, rng)
    U, G = K.potential_batch(x, Y, K.GAUSS, np.array([2.0]))
    e = 1e-6
    for d in range(3):
        xp = x.copy()
        xp[0, d] += e
        xm = x.copy()
        xm[0, d] -= e
        fd = (K.potential_batch(xp, Y, K.GAUSS, np.array([2.0]))[0]
              - K.potential_batch(xm, Y, K.GAUSS, np.array([2.0]))[0]) / (2 * e)
        assert abs(fd[0] - G[0, d]) < 1e-7


def test_singular_row_is_inf():
    Y = np.eye(3)
    U, _ = K.potential_batch(Y[:1], Y, K.RIESZ, np.array([1.0]))
    assert U[0] == np.inf


def test_env_flag_selects_numpy():
    code = ("from polarbounds import _kernels as K; from polarbounds.bounds import pulb; "
            "from polarbounds.potentials import gauss; "
            "print(K.USE_NUMBA, repr(pulb(4, 5, 24, gauss()).value))")
    env = dict(os.environ, POLARBOUNDS_DISABLE_NUMBA="1")
    off = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    env.pop("POLARBOUNDS_DISABLE_NUMBA")
    on = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    flag_off, v_off = off.stdout.split()
    flag_on, v_on = on.stdout.split()
    assert flag_off == "False"
    assert flag_on == str(K.HAS_NUMBA)
    assert abs(float(v_off) - float(v_on)) < 1e-13
