# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tridiagonal kernels (hot path of the implicit steppers)."""

import numpy as np

cimport numpy as cnp

IMPLEMENTATION = "cython"


def thomas_solve(
    double[::1] lower,
    double[::1] diag,
    double[::1] upper,
    double[::1] rhs,
):
    """Thomas algorithm; see the pure-Python twin for the contract."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef cnp.ndarray[double, ndim=1] x_arr = np.empty(n)
    cdef double[::1] x = x_arr
    cdef double[::1] c = np.empty(n - 1)
    cdef double[::1] d = np.empty(n)
    cdef double piv
    cdef Py_ssize_t i

    piv = diag[0]
    if piv == 0.0:
        raise ZeroDivisionError("singular tridiagonal system")
    c[0] = upper[0] / piv
    d[0] = rhs[0] / piv
    for i in range(1, n - 1):
        piv = diag[i] - lower[i - 1] * c[i - 1]
        if piv == 0.0:
            raise ZeroDivisionError("singular tridiagonal system")
        c[i] = upper[i] / piv
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / piv
    piv = diag[n - 1] - lower[n - 2] * c[n - 2]
    if piv == 0.0:
        raise ZeroDivisionError("singular tridiagonal system")
    d[n - 1] = (rhs[n - 1] - lower[n - 2] * d[n - 2]) / piv
    x[n - 1] = d[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x_arr
