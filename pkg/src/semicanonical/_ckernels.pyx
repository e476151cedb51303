# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of ``_purekernels``; int64 only, callers guard magnitudes."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def irreducible_mask(cands, facets):
    cdef i64[:, ::1] X = np.ascontiguousarray(cands, dtype=np.int64).reshape(len(cands), -1)
    cdef i64[:, ::1] F = np.ascontiguousarray(facets, dtype=np.int64).reshape(len(facets), -1)
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = F.shape[0]
    cdef i64[:, ::1] V = np.zeros((n, k), dtype=np.int64)
    cdef Py_ssize_t i, j, r, t
    cdef i64 s
    cdef bint red, ok
    for i in range(n):
        for r in range(k):
            s = 0
            for t in range(d):
                s += F[r, t] * X[i, t]
            V[i, r] = s
    out = np.ones(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] O = out
    for i in range(n):
        red = False
        for j in range(n):
            if j == i:
                continue
            ok = True
            for r in range(k):
                if V[i, r] < V[j, r]:
                    ok = False
                    break
            if ok:
                red = True
                break
        if red:
            O[i] = 0
    return [bool(b) for b in out]


def box_points(A, c, lo, hi):
    cdef Py_ssize_t d = len(lo), k = len(A)
    if d == 0:
        return [()] if all(ci >= 0 for ci in c) else []
    cdef i64[:, ::1] M = np.ascontiguousarray(A, dtype=np.int64).reshape(k, d)
    cdef i64[::1] L = np.ascontiguousarray(lo, dtype=np.int64)
    cdef i64[::1] Hh = np.ascontiguousarray(hi, dtype=np.int64)
    cdef Py_ssize_t t, r
    for t in range(d):
        if L[t] > Hh[t]:
            return []
    cdef i64[:, ::1] best = np.zeros((d + 1, k), dtype=np.int64)
    cdef i64 a, u, w
    for t in range(d - 1, -1, -1):
        for r in range(k):
            a = M[r, t]
            u = a * L[t]
            w = a * Hh[t]
            best[t, r] = best[t + 1, r] + (u if u > w else w)
    # partial[t] holds the running constraint values before choosing x_t
    cdef i64[:, ::1] partial = np.zeros((d + 1, k), dtype=np.int64)
    for r in range(k):
        partial[0, r] = c[r]
    cdef i64[::1] x = np.zeros(d, dtype=np.int64)
    out = []
    t = 0
    x[0] = L[0] - 1
    cdef bint feasible
    while t >= 0:
        x[t] += 1
        if x[t] > Hh[t]:
            t -= 1
            continue
        feasible = True
        for r in range(k):
            partial[t + 1, r] = partial[t, r] + M[r, t] * x[t]
            if partial[t + 1, r] + best[t + 1, r] < 0:
                feasible = False
        if not feasible:
            continue
        if t == d - 1:
            out.append(tuple([int(x[i]) for i in range(d)]))
        else:
            t += 1
            x[t] = L[t] - 1
    return out
