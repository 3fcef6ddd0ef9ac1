# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels; mirrors kernels._pure."""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

import math

import numpy as np


cdef Py_ssize_t _greedy_c(const int* s, Py_ssize_t n, int nsym, int L,
                          long long maxb, long long* out) noexcept nogil:
    cdef Py_ssize_t w, i, cnt = 0
    cdef int distinct = 0
    cdef int v
    cdef int* counts
    if n < L:
        return 0
    counts = <int*> malloc((nsym + 1) * sizeof(int))
    if counts == NULL:
        return -1
    memset(counts, 0, (nsym + 1) * sizeof(int))
    for i in range(L):
        v = s[i]
        counts[v] += 1
        if counts[v] == 1:
            distinct += 1
    w = 0
    while True:
        if distinct == nsym:
            out[cnt] = w + 1
            cnt += 1
            if maxb > 0 and cnt == maxb:
                break
            w += L
            if w + L > n:
                break
            memset(counts, 0, (nsym + 1) * sizeof(int))
            distinct = 0
            for i in range(w, w + L):
                v = s[i]
                counts[v] += 1
                if counts[v] == 1:
                    distinct += 1
        else:
            if w + L >= n:
                break
            v = s[w]
            counts[v] -= 1
            if counts[v] == 0:
                distinct -= 1
            v = s[w + L]
            counts[v] += 1
            if counts[v] == 1:
                distinct += 1
            w += 1
    free(counts)
    return cnt


def greedy_starts(seq, int n_symbols, int block_len, long long max_blocks=0):
    arr = np.ascontiguousarray(seq, dtype=np.int32)
    cdef Py_ssize_t n = arr.shape[0]
    out = np.empty(n // block_len + 1, dtype=np.int64)
    cdef int[::1] sv = arr
    cdef long long[::1] ov = out
    cdef Py_ssize_t cnt
    if n == 0:
        return out[:0].copy()
    cnt = _greedy_c(&sv[0], n, n_symbols, block_len, max_blocks, &ov[0])
    if cnt < 0:
        raise MemoryError()
    return out[:cnt].copy()


cdef struct Frame:
    Py_ssize_t lb
    Py_ssize_t depth
    long long last
    long long psum
    int is_trunc


cdef int _violation_c(const int* word, Py_ssize_t n, int nsym, int L,
                      long long denom, long long* valid, long long* greedy,
                      Frame* stack, int* counts) noexcept nogil:
    cdef Py_ssize_t m = 0, glen = 0, i, r, sp
    cdef int distinct, v, code = 0
    cdef long long p, pos, gsum = 0
    cdef Py_ssize_t lb, depth
    cdef long long last, psum, new_sum
    cdef int is_trunc, new_trunc

    # valid block starts (1-based)
    for r in range(n - L + 1):
        memset(counts, 0, (nsym + 1) * sizeof(int))
        distinct = 0
        for i in range(r, r + L):
            v = word[i]
            counts[v] += 1
            if counts[v] == 1:
                distinct += 1
        if distinct == nsym:
            valid[m] = r + 1
            m += 1
    if m == 0:
        return 0

    pos = 1
    for i in range(m):
        if valid[i] >= pos:
            greedy[glen] = valid[i]
            glen += 1
            pos = valid[i] + L
    for i in range(glen):
        gsum += denom / greedy[i]

    sp = 0
    stack[0].lb = 0
    stack[0].depth = 0
    stack[0].last = 1 - L
    stack[0].psum = 0
    stack[0].is_trunc = 1
    sp = 1
    while sp > 0:
        sp -= 1
        lb = stack[sp].lb
        depth = stack[sp].depth
        last = stack[sp].last
        psum = stack[sp].psum
        is_trunc = stack[sp].is_trunc
        for i in range(lb, m):
            p = valid[i]
            if p < last + L:
                continue
            if depth >= glen:
                return 3
            if greedy[depth] > p:
                return 1
            new_sum = psum + denom / p
            new_trunc = 1 if (is_trunc and p == greedy[depth]) else 0
            if new_trunc == 0 and gsum <= new_sum:
                return 2
            stack[sp].lb = i + 1
            stack[sp].depth = depth + 1
            stack[sp].last = p
            stack[sp].psum = new_sum
            stack[sp].is_trunc = new_trunc
            sp += 1
    return code


cdef class _Workspace:
    cdef long long* valid
    cdef long long* greedy
    cdef Frame* stack
    cdef int* counts
    cdef long long denom
    cdef Py_ssize_t n
    cdef int nsym

    def __cinit__(self, Py_ssize_t n, int nsym):
        if n > 42:
            raise ValueError("exact integer sum comparison supports length <= 42")
        self.valid = <long long*> malloc(max(n, 1) * sizeof(long long))
        self.greedy = <long long*> malloc(max(n, 1) * sizeof(long long))
        # LIFO exploration keeps at most one parent's unexplored children per
        # depth level alive: n candidates x (n + 3) levels bounds the stack.
        self.stack = <Frame*> malloc((n * (n + 3) + 8) * sizeof(Frame))
        self.counts = <int*> malloc((nsym + 1) * sizeof(int))
        if (self.valid == NULL or self.greedy == NULL or
                self.stack == NULL or self.counts == NULL):
            raise MemoryError()
        self.denom = math.lcm(*range(1, n + 1)) if n else 1
        self.n = n
        self.nsym = nsym

    def __dealloc__(self):
        free(self.valid)
        free(self.greedy)
        free(self.stack)
        free(self.counts)


def optimality_violation(seq, int n_symbols, int block_len):
    arr = np.ascontiguousarray(seq, dtype=np.int32)
    cdef Py_ssize_t n = arr.shape[0]
    if n < block_len:
        return 0
    ws = _Workspace(n, n_symbols)
    cdef int[::1] wv = arr
    cdef _Workspace w = ws
    return _violation_c(&wv[0], n, n_symbols, block_len, w.denom,
                        w.valid, w.greedy, w.stack, w.counts)


def exhaustive_optimality(int length, int n_symbols, int block_len):
    word_arr = np.ones(length, dtype=np.int32)
    cdef int[::1] word = word_arr
    ws = _Workspace(length, n_symbols)
    cdef _Workspace w = ws
    cdef long long checked = 0, violations = 0
    cdef Py_ssize_t i
    cdef int code
    first_bad = None
    while True:
        code = _violation_c(&word[0], length, n_symbols, block_len, w.denom,
                            w.valid, w.greedy, w.stack, w.counts)
        checked += 1
        if code != 0:
            violations += 1
            if first_bad is None:
                first_bad = tuple(word_arr.tolist())
        i = length - 1
        while i >= 0 and word[i] == n_symbols:
            word[i] = 1
            i -= 1
        if i < 0:
            break
        word[i] += 1
    return checked, violations, first_bad


def optimality_violations_batch(words, int n_symbols, int block_len):
    arr = np.ascontiguousarray(words, dtype=np.int32)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D batch of words")
    cdef Py_ssize_t rows = arr.shape[0], n = arr.shape[1], i
    cdef long long violations = 0
    cdef Py_ssize_t first_bad = -1
    if rows == 0 or n < block_len:
        return rows, 0, -1
    ws = _Workspace(n, n_symbols)
    cdef _Workspace w = ws
    cdef int[:, ::1] wv = arr
    for i in range(rows):
        if _violation_c(&wv[i, 0], n, n_symbols, block_len, w.denom,
                        w.valid, w.greedy, w.stack, w.counts) != 0:
            violations += 1
            if first_bad < 0:
                first_bad = i
    return rows, violations, first_bad
