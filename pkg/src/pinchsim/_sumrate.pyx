# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sum-rate kernel: the hot loop of the activation search.

Same contract as pinchsim._sumrate_py.set_sum_rate.
"""

from libc.math cimport log2
from libc.stdlib cimport free, malloc


def set_sum_rate(const double complex[:, ::1] amp, const Py_ssize_t[:] sel,
                 double scale, double noise, const double[:] alpha):
    cdef Py_ssize_t n_users = amp.shape[0]
    cdef Py_ssize_t n_sel = sel.shape[0]
    cdef Py_ssize_t n, i, j
    cdef double complex z
    cdef double g, tail, total
    cdef double *gains = <double *> malloc(n_users * sizeof(double))
    if gains == NULL:
        raise MemoryError()
    try:
        for n in range(n_users):
            z = 0
            for i in range(n_sel):
                z = z + amp[n, sel[i]]
            gains[n] = scale * (z.real * z.real + z.imag * z.imag)
        # insertion sort, ascending; N is small
        for i in range(1, n_users):
            g = gains[i]
            j = i
            while j > 0 and gains[j - 1] > g:
                gains[j] = gains[j - 1]
                j -= 1
            gains[j] = g
        total = 0.0
        tail = 0.0
        for i in range(n_users - 1, -1, -1):
            total += log2(1.0 + alpha[i] * gains[i] / (gains[i] * tail + noise))
            tail += alpha[i]
        return total
    finally:
        free(gains)
