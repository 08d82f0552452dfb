"""Pure-Python tridiagonal kernels, used when the compiled extension is
unavailable.  Same contracts as the Cython versions."""

import numpy as np

IMPLEMENTATION = "python"


def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system by the Thomas algorithm.

    lower: subdiagonal (n-1), diag: diagonal (n), upper: superdiagonal (n-1).
    Raises ZeroDivisionError on a vanishing pivot (cannot happen for the
    diagonally dominant systems assembled by the steppers).
    """
    n = diag.shape[0]
    c = np.empty(n - 1)
    d = np.empty(n)
    x = np.empty(n)
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
    return x
