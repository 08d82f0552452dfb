"""Tridiagonal kernels: compiled extension vs pure-Python twin."""

import os
import subprocess
import sys

import numpy as np
import pytest

from kwcflow._kernels import IMPLEMENTATION, thomas_solve
from kwcflow._kernels._fallback import thomas_solve as thomas_solve_py


def _random_system(rng, n):
    diag = 2.0 + rng.random(n)
    lower = -rng.random(n - 1)
    upper = -rng.random(n - 1)
    rhs = rng.standard_normal(n)
    return lower, diag, upper, rhs


@pytest.mark.parametrize("n", [3, 17, 129, 1025])
def test_matches_dense_solve(n):
    rng = np.random.default_rng(9)
    lower, diag, upper, rhs = _random_system(rng, n)
    dense = np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
    expected = np.linalg.solve(dense, rhs)
    np.testing.assert_allclose(thomas_solve(lower, diag, upper, rhs),
                               expected, atol=1e-10)


@pytest.mark.parametrize("n", [3, 64, 513])
def test_active_kernel_matches_fallback(n):
    rng = np.random.default_rng(10)
    lower, diag, upper, rhs = _random_system(rng, n)
    a = thomas_solve(lower, diag, upper, rhs)
    b = thomas_solve_py(lower, diag, upper, rhs)
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-14)


def test_zero_pivot_raises():
    with pytest.raises(ZeroDivisionError):
        thomas_solve(np.array([1.0]), np.array([0.0, 1.0]),
                     np.array([1.0]), np.array([1.0, 1.0]))


def test_compiled_extension_is_active():
    # the build compiles the extension; only the env override selects python
    assert IMPLEMENTATION == "cython"


def test_env_var_forces_python_fallback():
    code = "from kwcflow._kernels import IMPLEMENTATION; print(IMPLEMENTATION)"
    env = dict(os.environ, KWCFLOW_FORCE_PYTHON_KERNELS="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
