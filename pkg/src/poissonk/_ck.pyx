# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the order-k scaled pmf recurrence.

The recurrence h[n] = (lam/n) * sum_{j=1}^{min(n,k)} j*h[n-j], h[0] = 1 is the
hot inner loop of every table build, mode search and parameter scan.
"""

from libc.math cimport log, isfinite


def scaled_pmf_fill(int k, double lam, double[::1] h):
    """Fill ``h`` with the scaled pmf in linear space.

    Returns 0 on success, or the first index whose value is no longer a
    finite double (overflow).
    """
    cdef Py_ssize_t n_max = h.shape[0] - 1
    cdef Py_ssize_t n, j, m
    cdef double s
    h[0] = 1.0
    for n in range(1, n_max + 1):
        m = n if n < k else k
        s = 0.0
        for j in range(1, m + 1):
            s += j * h[n - j]
        h[n] = (lam / n) * s
        if not isfinite(h[n]):
            return n
    return 0


def scaled_pmf_log_fill(int k, double lam, double[::1] out, double[::1] buf):
    """Fill ``out`` with log h[n] using a rescaled rolling window.

    ``buf`` is scratch space of length >= k+1. The recurrence is linear in h,
    so the rolling window of the last k values is periodically rescaled to
    keep it inside double range; the accumulated scale is folded into the
    emitted logarithms.
    """
    cdef Py_ssize_t n_max = out.shape[0] - 1
    cdef Py_ssize_t width = k + 1
    cdef Py_ssize_t n, j, m, idx
    cdef double s, offset, g
    offset = 0.0
    buf[0] = 1.0
    out[0] = 0.0
    for n in range(1, n_max + 1):
        m = n if n < k else k
        s = 0.0
        for j in range(1, m + 1):
            s += j * buf[(n - j) % width]
        g = (lam / n) * s
        if g > 1e250:
            # rescale the live window so the next steps stay finite
            for j in range(width):
                buf[j] /= g
            offset += log(g)
            g = 1.0
        buf[n % width] = g
        out[n] = log(g) + offset if g > 0.0 else -1e400
    return 0
