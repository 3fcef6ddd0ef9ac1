"""Pure-Python scan kernels; same contract as the compiled backend."""

from __future__ import annotations

import math

import numpy as np


def coverage_mask(seq, n_symbols: int, block_len: int) -> np.ndarray:
    """Boolean mask over window starts: window of block_len covers all symbols.

    Entry i corresponds to the 1-based start i+1.
    """
    a = np.ascontiguousarray(seq, dtype=np.int32)
    n = a.shape[0]
    if n < block_len:
        return np.zeros(0, dtype=bool)
    ok = np.ones(n - block_len + 1, dtype=bool)
    for s in range(1, n_symbols + 1):
        c = np.concatenate(([0], np.cumsum(a == s)))
        ok &= (c[block_len:] - c[:-block_len]) >= 1
    return ok


def greedy_starts(seq, n_symbols: int, block_len: int, max_blocks: int = 0) -> np.ndarray:
    """1-based starts of the greedy block partition lying wholly inside seq."""
    cov = coverage_mask(seq, n_symbols, block_len)
    true_pos = np.flatnonzero(cov)
    starts = []
    pos = 0
    while True:
        if max_blocks and len(starts) == max_blocks:
            break
        i = np.searchsorted(true_pos, pos)
        if i == true_pos.size:
            break
        w = int(true_pos[i])
        starts.append(w + 1)
        pos = w + block_len
    return np.asarray(starts, dtype=np.int64)


def _valid_positions(word, n_symbols: int, block_len: int) -> list[int]:
    n = len(word)
    out = []
    for r in range(n - block_len + 1):
        if len(set(word[r:r + block_len])) == n_symbols:
            out.append(r + 1)
    return out


def _greedy_from_valid(valid: list[int], block_len: int) -> list[int]:
    starts = []
    pos = 1
    for p in valid:
        if p >= pos:
            starts.append(p)
            pos = p + block_len
    return starts


def optimality_violation(seq, n_symbols: int, block_len: int) -> int:
    """0 when greedy starts dominate every valid partition of the word.

    Codes: 1 pointwise minimality broken, 2 reciprocal-sum maximality broken,
    3 some partition has more blocks than the greedy one.
    """
    word = [int(v) for v in seq]
    n = len(word)
    if n > 42:
        raise ValueError("exact integer sum comparison supports length <= 42")
    valid = _valid_positions(word, n_symbols, block_len)
    if not valid:
        return 0
    greedy = _greedy_from_valid(valid, block_len)
    denom = math.lcm(*range(1, n + 1))
    gsum = sum(denom // r for r in greedy)
    glen = len(greedy)

    m = len(valid)
    # DFS over all chains of valid positions with pairwise gap >= block_len;
    # every chain is itself a valid partition and is checked on creation.
    # Stack entries: (candidate lower bound, depth, last chosen start,
    # scaled partial sum, chain-is-a-truncation-of-greedy flag).
    stack = [(0, 0, 1 - block_len, 0, True)]
    while stack:
        lb, depth, last, psum, is_trunc = stack.pop()
        for i in range(lb, m):
            p = valid[i]
            if p < last + block_len:
                continue
            if depth >= glen:
                return 3
            if greedy[depth] > p:
                return 1
            new_sum = psum + denom // p
            new_trunc = is_trunc and p == greedy[depth]
            if not new_trunc and gsum <= new_sum:
                return 2
            stack.append((i + 1, depth + 1, p, new_sum, new_trunc))
    return 0


def exhaustive_optimality(length: int, n_symbols: int, block_len: int):
    """Sweep every word of the given length; returns (checked, violations, first_bad)."""
    word = [1] * length
    checked = 0
    violations = 0
    first_bad = None
    while True:
        checked += 1
        if optimality_violation(word, n_symbols, block_len):
            violations += 1
            if first_bad is None:
                first_bad = tuple(word)
        # odometer increment
        i = length - 1
        while i >= 0 and word[i] == n_symbols:
            word[i] = 1
            i -= 1
        if i < 0:
            break
        word[i] += 1
    return checked, violations, first_bad


def optimality_violations_batch(words, n_symbols: int, block_len: int):
    """Check a 2-D batch of words; returns (checked, violations, first_bad_row)."""
    arr = np.ascontiguousarray(words, dtype=np.int32)
    violations = 0
    first_bad = -1
    for i in range(arr.shape[0]):
        if optimality_violation(arr[i].tolist(), n_symbols, block_len):
            violations += 1
            if first_bad < 0:
                first_bad = i
    return arr.shape[0], violations, first_bad
