"""Greedy block partitions, exhaustive partition listings, and quasi-periods.

A valid ``L``-partition of a sequence is an increasing list of block starts
``r_1 < r_2 < ...`` with pairwise gaps at least ``L`` such that every window
``(x_{r_k}, ..., x_{r_k + L - 1})`` contains the whole alphabet.  The greedy
partition picks each start minimally given its predecessor; it dominates any
other valid partition pointwise, which most of the classification machinery
in this package relies on.

For eventually periodic sequences the greedy scan terminates by cycle
detection: once a block start lies past the transient, the rest of the scan
depends only on the start's phase modulo the period length, so a repeated
phase pins down the whole infinite tail in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .config import DEFAULT, RunConfig
from .errors import (BlockLengthTooSmall, CapExceeded, InvalidPartition,
                     UndecidableAtHorizon)
from .seqspace import Alphabet, SymbolicSequence


# -- status variants -----------------------------------------------------


@dataclass(frozen=True)
class ProvenInfinite:
    """Infinitely many blocks exist; starts are eventually cyclic.

    ``eventual_gap`` is the largest start-to-start gap once the cycle is
    reached, certifying at most linear growth of the starts.
    """

    eventual_gap: int


@dataclass(frozen=True)
class ExistsUpToBlock:
    """The greedy partition stops: block k exists, block k+1 does not."""

    k: int


@dataclass(frozen=True)
class UndeterminedBeyondHorizon:
    """Prefix input: blocks beyond the horizon are unknown."""

    horizon: int


GreedyStatus = ProvenInfinite | ExistsUpToBlock | UndeterminedBeyondHorizon


@dataclass(frozen=True)
class _Cycle:
    first_index: int   # 0-based index into base starts where the cycle begins
    length: int        # starts per cycle
    advance: int       # positions gained per cycle


@dataclass(frozen=True)
class GreedyPartition:
    L: int
    alphabet: Alphabet
    starts: tuple[int, ...]
    status: GreedyStatus
    _base: tuple[int, ...] = ()
    _cycle: _Cycle | None = None

    @property
    def is_infinite(self) -> bool:
        return isinstance(self.status, ProvenInfinite)

    def start(self, k: int) -> int:
        """The k-th block start (1-based), extrapolated through the cycle."""
        if k < 1:
            raise ValueError("block indices are 1-based")
        i = k - 1
        if i < len(self._base):
            return self._base[i]
        if self._cycle is None:
            raise InvalidPartition(f"block {k} does not exist (or is beyond the horizon)")
        c = self._cycle
        off = i - c.first_index
        return self._base[c.first_index + off % c.length] + c.advance * (off // c.length)

    def iter_starts(self) -> Iterator[int]:
        """All starts; an infinite generator when the partition is infinite."""
        yield from self._base
        if self._cycle is not None:
            k = len(self._base) + 1
            while True:
                yield self.start(k)
                k += 1

    def gap_sum(self, k: int) -> int:
        """Total length of the non-block gaps before and between blocks 1..k."""
        return self.start(k) - 1 - (k - 1) * self.L

    def to_json(self, partial_sums: int = 0) -> dict:
        status = self.status
        if isinstance(status, ProvenInfinite):
            st = {"kind": "proven_infinite", "eventual_gap": status.eventual_gap}
        elif isinstance(status, ExistsUpToBlock):
            st = {"kind": "exists_up_to_block", "k": status.k}
        else:
            st = {"kind": "undetermined_beyond_horizon", "horizon": status.horizon}
        out = {"L": self.L, "starts": list(self.starts), "status": st}
        if partial_sums:
            sums = []
            acc = Fraction(0)
            for i, r in enumerate(self.starts[:partial_sums]):
                acc += Fraction(1, r)
                sums.append([acc.numerator, acc.denominator])
            out["partial_sums"] = sums
        return out


# -- greedy scan -----------------------------------------------------------


def greedy_partition(x: SymbolicSequence, L: int, max_blocks: int = 32,
                     cfg: RunConfig = DEFAULT) -> GreedyPartition:
    """Greedy L-partition of ``x`` with up to ``max_blocks`` starts materialized."""
    n = x.alphabet.size
    if L < n:
        raise BlockLengthTooSmall(f"L={L} cannot cover an alphabet of size {n}")
    if max_blocks < 1:
        raise ValueError("max_blocks must be positive")
    if x.is_eventually_periodic:
        base, cycle, status = _scan_eventually_periodic(x, L, cfg)
        starts = _materialize(base, cycle, L, max_blocks)
        return GreedyPartition(L, x.alphabet, starts, status, base, cycle)
    arr = np.asarray(x.prefix, dtype=np.int32)
    starts = tuple(int(s) for s in kernels.greedy_starts(arr, n, L, max_blocks))
    return GreedyPartition(L, x.alphabet, starts,
                           UndeterminedBeyondHorizon(len(x.prefix)), starts, None)


def _materialize(base, cycle, L, max_blocks) -> tuple[int, ...]:
    if cycle is None or len(base) >= max_blocks:
        return tuple(base[:max_blocks])
    out = list(base)
    k = len(base)
    while len(out) < max_blocks:
        off = k - cycle.first_index
        out.append(base[cycle.first_index + off % cycle.length]
                   + cycle.advance * (off // cycle.length))
        k += 1
    return tuple(out)


@lru_cache(maxsize=512)
def _scan_cached(x: SymbolicSequence, L: int):
    return _scan_eventually_periodic_impl(x, L, DEFAULT)


def _scan_eventually_periodic(x, L, cfg):
    if cfg is DEFAULT:
        return _scan_cached(x, L)
    return _scan_eventually_periodic_impl(x, L, cfg)


def _scan_eventually_periodic_impl(x: SymbolicSequence, L: int, cfg: RunConfig):
    n = x.alphabet.size
    t_len, p_len = len(x.transient), len(x.period)
    # Enough to cover the transient, one full sweep of phases with no find,
    # and one start per phase before a repeat.
    size = t_len + (p_len + 2) * (p_len + 2 * L) + 4 * L + 8
    arr = x.entries(size, cfg)
    true_pos = np.flatnonzero(kernels.coverage_mask(arr, n, L))

    base: list[int] = []
    phase_at: dict[int, int] = {}
    pos = 0  # 0-based window index to search from
    while True:
        i = int(np.searchsorted(true_pos, pos))
        if i == true_pos.size:
            need = max(pos, t_len) + p_len + L
            if len(arr) < need:  # pragma: no cover - sizing above prevents this
                size = need + p_len + 2 * L
                arr = x.entries(size, cfg)
                true_pos = np.flatnonzero(kernels.coverage_mask(arr, n, L))
                continue
            # A full sweep of phases past the transient found nothing, so no
            # covering window ever occurs again.
            return tuple(base), None, ExistsUpToBlock(len(base))
        w = int(true_pos[i])  # 0-based
        start = w + 1
        if start > t_len:
            phase = (start - t_len - 1) % p_len
            if phase in phase_at:
                i0 = phase_at[phase]
                cyc = _Cycle(i0, len(base) - i0, start - base[i0])
                gaps = [base[j + 1] - base[j] for j in range(i0, len(base) - 1)]
                gaps.append(start - base[-1])
                return tuple(base), cyc, ProvenInfinite(max(gaps))
            phase_at[phase] = len(base)
        base.append(start)
        pos = w + L
        if pos + p_len + 2 * L >= len(arr):
            size = 2 * len(arr)
            arr = x.entries(size, cfg)
            true_pos = np.flatnonzero(kernels.coverage_mask(arr, n, L))


# -- exhaustive partition listing (oracle) ---------------------------------


def enumerate_valid_partitions(prefix: Sequence[int], L: int, n_symbols: int,
                               cfg: RunConfig = DEFAULT) -> list[tuple[int, ...]]:
    """All valid L-partitions whose blocks lie inside the prefix.

    Includes the empty partition.  Intended as a small brute-force oracle;
    capped by configuration, not performance-tuned.
    """
    if L < n_symbols:
        raise BlockLengthTooSmall(f"L={L} cannot cover an alphabet of size {n_symbols}")
    if len(prefix) > cfg.partition_enum_len_cap:
        raise CapExceeded(f"prefix length {len(prefix)} exceeds the enumeration cap "
                          f"{cfg.partition_enum_len_cap}")
    if n_symbols > cfg.partition_enum_alphabet_cap:
        raise CapExceeded(f"alphabet size {n_symbols} exceeds the enumeration cap")
    word = [int(v) for v in prefix]
    valid = [r + 1 for r in range(len(word) - L + 1)
             if len(set(word[r:r + L])) == n_symbols]
    out: list[tuple[int, ...]] = []

    def extend(chain: tuple[int, ...], lb: int) -> None:
        out.append(chain)
        for i in range(lb, len(valid)):
            p = valid[i]
            if chain and p < chain[-1] + L:
                continue
            extend(chain + (p,), i + 1)

    extend((), 0)
    return sorted(out, key=lambda c: (len(c), c))


def decompose(x: SymbolicSequence, starts: Sequence[int], L: int):
    """Split ``x`` into gap blocks and covering blocks along ``starts``.

    Validates that the starts form a valid L-partition of ``x`` and returns
    the gap lengths, which satisfy r_k = 1 + (k-1)L + sum of the first k gaps.
    """
    n = x.alphabet.size
    starts = tuple(int(s) for s in starts)
    if L < n:
        raise BlockLengthTooSmall(f"L={L} cannot cover an alphabet of size {n}")
    prev_end = 0
    gaps = []
    for r in starts:
        if r <= prev_end:
            raise InvalidPartition(f"start {r} overlaps the previous block")
        if x.horizon is not None and r + L - 1 > x.horizon:
            raise InvalidPartition(f"block at {r} extends beyond the horizon")
        block = {x.entry(i) for i in range(r, r + L)}
        if block != set(x.alphabet.symbols()):
            raise InvalidPartition(f"block at {r} does not contain every symbol")
        gaps.append(r - prev_end - 1)
        prev_end = r + L - 1
    return BlockDecomposition(L, starts, tuple(gaps))


@dataclass(frozen=True)
class BlockDecomposition:
    L: int
    starts: tuple[int, ...]
    gap_lengths: tuple[int, ...]

    def cumulative_gap(self, k: int) -> int:
        return sum(self.gap_lengths[:k])

    def identity_holds(self) -> bool:
        return all(r == 1 + i * self.L + self.cumulative_gap(i + 1)
                   for i, r in enumerate(self.starts))


# -- quasi-periods ----------------------------------------------------------


@dataclass(frozen=True)
class QuasiPeriodReport:
    quasi_period: int | None
    missing_symbol: int | None = None


def quasi_period(x: SymbolicSequence) -> QuasiPeriodReport:
    """Minimal window length m so that every length-m window covers the alphabet.

    Only decidable for eventually periodic sequences; windows starting within
    the transient plus one period exhaust all distinct window contents.
    """
    if not x.is_eventually_periodic:
        raise UndecidableAtHorizon("quasi-periods depend on the infinite tail")
    n = x.alphabet.size
    present = set(x.period)
    for s in x.alphabet.symbols():
        if s not in present:
            return QuasiPeriodReport(None, missing_symbol=s)
    t_len, p_len = len(x.transient), len(x.period)
    upper = t_len + 2 * p_len
    arr = x.entries(t_len + p_len + upper)
    window_starts = range(t_len + p_len)  # 0-based; later windows repeat a phase
    for m in range(n, upper + 1):
        if all(len(set(arr[k:k + m].tolist())) == n for k in window_starts):
            return QuasiPeriodReport(m)
    return QuasiPeriodReport(upper)  # pragma: no cover - loop always succeeds


# -- reciprocal sums ---------------------------------------------------------


def partial_sum(starts: Sequence[int], count: int) -> Fraction:
    """Exact partial sum of reciprocals of the first ``count`` starts."""
    if count > len(starts):
        raise ValueError(f"count {count} exceeds {len(starts)} starts")
    return sum((Fraction(1, int(r)) for r in starts[:count]), Fraction(0))
