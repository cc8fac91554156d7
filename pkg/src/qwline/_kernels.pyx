# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled hot kernel for the lattice walk map.

Contract documented in qwline._kernels_py (the fallback implementation).
"""

COMPILED = True


def run_map(double complex[::1] ra, double complex[::1] la,
            double complex[::1] rb, double complex[::1] lb,
            double c, double s,
            Py_ssize_t lo, Py_ssize_t hi, Py_ssize_t steps):
    cdef double complex[::1] sr = ra, sl = la, dr = rb, dl = lb, tmp
    cdef Py_ssize_t t, x
    cdef int which = 0
    for t in range(steps):
        lo -= 1
        hi += 1
        for x in range(lo, hi + 1):
            dr[x] = c * sr[x + 1] + s * sl[x + 1]
            dl[x] = s * sr[x - 1] - c * sl[x - 1]
        tmp = sr; sr = dr; dr = tmp
        tmp = sl; sl = dl; dl = tmp
        which ^= 1
    return which, lo, hi
