# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
import numpy as np
cimport numpy as cnp
from libc.math cimport hypot
from libc.stdlib cimport malloc, free

cnp.import_array()


def abs_poly(re, im, exps, cre, cim):
    """``|f(z)|`` for every row ``z = re + i*im`` of the (N, n) sample block."""
    cdef double[:, ::1] R = np.ascontiguousarray(re, dtype=np.float64)
    cdef double[:, ::1] I = np.ascontiguousarray(im, dtype=np.float64)
    cdef cnp.int64_t[:, ::1] E = np.ascontiguousarray(exps, dtype=np.int64)
    cdef double[::1] CR = np.ascontiguousarray(cre, dtype=np.float64)
    cdef double[::1] CI = np.ascontiguousarray(cim, dtype=np.float64)
    cdef Py_ssize_t N = R.shape[0], n = R.shape[1], T = E.shape[0]
    out = np.empty(N, dtype=np.float64)
    cdef double[::1] O = out
    cdef Py_ssize_t s, t, j, k, e, stride
    cdef double sr, si, tr, ti, pr, pi, tmp
    cdef cnp.int64_t emax = 0
    for t in range(T):
        for j in range(n):
            if E[t, j] > emax:
                emax = E[t, j]
    stride = emax + 1
    # powers z_j^k for the current point, interleaved re/im
    cdef double *pw = <double *> malloc(2 * n * stride * sizeof(double))
    if pw == NULL:
        raise MemoryError()
    try:
        with nogil:
            for s in range(N):
                for j in range(n):
                    pw[2 * j * stride] = 1.0
                    pw[2 * j * stride + 1] = 0.0
                    for k in range(1, stride):
                        pr = pw[2 * (j * stride + k - 1)]
                        pi = pw[2 * (j * stride + k - 1) + 1]
                        pw[2 * (j * stride + k)] = pr * R[s, j] - pi * I[s, j]
                        pw[2 * (j * stride + k) + 1] = pr * I[s, j] + pi * R[s, j]
                sr = 0.0
                si = 0.0
                for t in range(T):
                    tr = CR[t]
                    ti = CI[t]
                    for j in range(n):
                        e = E[t, j]
                        if e == 0:
                            continue
                        pr = pw[2 * (j * stride + e)]
                        pi = pw[2 * (j * stride + e) + 1]
                        tmp = tr * pr - ti * pi
                        ti = tr * pi + ti * pr
                        tr = tmp
                    sr = sr + tr
                    si = si + ti
                O[s] = hypot(sr, si)
    finally:
        free(pw)
    return out
