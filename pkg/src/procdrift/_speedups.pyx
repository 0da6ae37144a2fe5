# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-trace constraint statistic kernel.

Mirrors _kernel_py.log_tensors exactly; see that module for the tensor
semantics. One pass per statistic, O(n * alphabet) per trace.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def log_tensors(codes, offsets, int n_acts):
    cdef cnp.ndarray[cnp.int32_t, ndim=1] codes_arr = np.ascontiguousarray(codes, dtype=np.int32)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] offs_arr = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef int n_traces = offs_arr.shape[0] - 1
    cdef int a = n_acts

    cdef cnp.ndarray[cnp.int64_t, ndim=2] counts = np.zeros((n_traces, a), np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=3] chain = np.zeros((n_traces, a, a), np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=3] resp = np.zeros((n_traces, a, a), np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=3] altresp = np.zeros((n_traces, a, a), np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=3] prec = np.zeros((n_traces, a, a), np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=3] altprec = np.zeros((n_traces, a, a), np.int64)

    cdef cnp.ndarray[cnp.int64_t, ndim=1] seen = np.zeros(a, np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] stamp = np.zeros(a, np.int64)

    cdef Py_ssize_t t, i, j, s, e
    cdef int x, y
    cdef long marker = 0

    for t in range(n_traces):
        s = offs_arr[t]
        e = offs_arr[t + 1]
        if e <= s:
            continue

        for i in range(s, e):
            x = codes_arr[i]
            counts[t, x] += 1
            if i > s:
                chain[t, codes_arr[i - 1], x] += 1

        # eventually-follows: scan right to left, `seen` marks later activities
        marker += 1
        for i in range(e - 1, s - 1, -1):
            x = codes_arr[i]
            for y in range(a):
                if seen[y] == marker:
                    resp[t, x, y] += 1
            seen[x] = marker

        # eventually-precedes: scan left to right
        marker += 1
        for i in range(s, e):
            x = codes_arr[i]
            for y in range(a):
                if seen[y] == marker:
                    prec[t, y, x] += 1
            seen[x] = marker

        # alternation: walk the gap to the next same activity
        for i in range(s, e):
            x = codes_arr[i]
            marker += 1
            j = i + 1
            while j < e and codes_arr[j] != x:
                y = codes_arr[j]
                if stamp[y] != marker:
                    stamp[y] = marker
                    altresp[t, x, y] += 1
                j += 1

        # alternation (precedence): walk back to the previous same activity
        for i in range(s, e):
            x = codes_arr[i]
            marker += 1
            j = i - 1
            while j >= s and codes_arr[j] != x:
                y = codes_arr[j]
                if stamp[y] != marker:
                    stamp[y] = marker
                    altprec[t, y, x] += 1
                j -= 1

    return counts, chain, resp, altresp, prec, altprec
