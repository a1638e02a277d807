# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration and eigenvalue kernels.

Same contracts as ``_pykernels``: lexicographic enumeration with digit 0
most significant, and a witness that is replaced only when a candidate beats
the current witness value by more than ``tol``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot, INFINITY

cnp.import_array()


def sync_search(w, double tol=1e-12):
    cdef double[:, :, :, ::1] W = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t n = W.shape[0], k = W.shape[2]
    cdef Py_ssize_t d, y, a
    cdef double inc, v
    cdef double best = -INFINITY, wbest = -INFINITY
    witness = np.zeros(n, dtype=np.int64)
    if n == 0:
        return 0.0, witness
    cdef long long[::1] wit = witness
    cdef long long[::1] f = np.full(n, -1, dtype=np.int64)
    cdef double[::1] part = np.zeros(n + 1)
    d = 0
    while d >= 0:
        f[d] += 1
        if f[d] >= k:
            f[d] = -1
            d -= 1
            continue
        a = f[d]
        inc = W[d, d, a, a]
        for y in range(d):
            inc += W[d, y, a, f[y]] + W[y, d, f[y], a]
        part[d + 1] = part[d] + inc
        if d == n - 1:
            v = part[n]
            if v > best:
                best = v
            if v > wbest + tol:
                wbest = v
                for y in range(n):
                    wit[y] = f[y]
        else:
            d += 1
    return best, witness


def alice_search(w, double tol=1e-12):
    cdef double[:, :, :, ::1] W = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t na = W.shape[0], nb = W.shape[1], ka = W.shape[2], kb = W.shape[3]
    cdef Py_ssize_t d, y, b, a, x
    cdef double v, m
    cdef double best = -INFINITY, wbest = -INFINITY
    witness = np.zeros(na, dtype=np.int64)
    if na == 0:
        return 0.0, witness
    cdef long long[::1] wit = witness
    cdef long long[::1] f = np.full(na, -1, dtype=np.int64)
    # s[d] holds sum_{x<d} W[x, :, f(x), :]
    cdef double[:, :, ::1] s = np.zeros((na + 1, nb, kb))
    d = 0
    while d >= 0:
        f[d] += 1
        if f[d] >= ka:
            f[d] = -1
            d -= 1
            continue
        a = f[d]
        for y in range(nb):
            for b in range(kb):
                s[d + 1, y, b] = s[d, y, b] + W[d, y, a, b]
        if d == na - 1:
            v = 0.0
            for y in range(nb):
                m = s[na, y, 0]
                for b in range(1, kb):
                    if s[na, y, b] > m:
                        m = s[na, y, b]
                v += m
            if v > best:
                best = v
            if v > wbest + tol:
                wbest = v
                for x in range(na):
                    wit[x] = f[x]
        else:
            d += 1
    return best, witness


def jacobi_eigh(m, int max_sweeps=100, double rel_tol=1e-12):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] arr = np.array(m, dtype=np.float64, order="C", copy=True)
    cdef double[:, ::1] A = arr
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] varr = np.eye(n)
    cdef double[:, ::1] V = varr
    cdef Py_ssize_t p, q, i
    cdef double apq, theta, t, c, s, x, yv, off, scale = 0.0, thresh
    cdef int sweeps = 0, sweep
    for p in range(n):
        for q in range(n):
            scale += A[p, q] * A[p, q]
    thresh = rel_tol * sqrt(scale)
    for sweep in range(1, max_sweeps + 1):
        sweeps = sweep
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += A[p, q] * A[p, q]
        if sqrt(off) <= thresh:
            sweeps = sweep - 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                if fabs(apq) < 1e-300:
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if theta >= 0:
                    t = 1.0 / (theta + hypot(1.0, theta))
                else:
                    t = -1.0 / (-theta + hypot(1.0, theta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    x = A[i, p]
                    yv = A[i, q]
                    A[i, p] = c * x - s * yv
                    A[i, q] = s * x + c * yv
                for i in range(n):
                    x = A[p, i]
                    yv = A[q, i]
                    A[p, i] = c * x - s * yv
                    A[q, i] = s * x + c * yv
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(n):
                    x = V[i, p]
                    yv = V[i, q]
                    V[i, p] = c * x - s * yv
                    V[i, q] = s * x + c * yv
    evals = np.diag(arr).copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], np.ascontiguousarray(varr[:, order]), sweeps
