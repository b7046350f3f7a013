# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled scan kernel for similarity-matrix scoring.

Counts diagonal entries that strictly dominate their row and column.
Semantically identical to :func:`pivotalign._kernels.pure.dominant_diagonal_count`;
the inner loop exits on the first competitor that ties or wins.
"""


def dominant_diagonal_count(const double[:, :] c):
    cdef Py_ssize_t n = c.shape[0]
    if c.shape[1] != n:
        raise ValueError("similarity matrix must be square")
    cdef Py_ssize_t i, j
    cdef Py_ssize_t count = 0
    cdef double d
    cdef bint dominant
    for i in range(n):
        d = c[i, i]
        dominant = True
        for j in range(n):
            if j == i:
                continue
            if c[i, j] >= d or c[j, i] >= d:
                dominant = False
                break
        if dominant:
            count += 1
    return int(count)
