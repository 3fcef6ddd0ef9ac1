"""Classification of sequences: quasi-normality and the exceptional families.

Exact verdicts are only issued for eventually periodic inputs; everything a
finite prefix can honestly support is either a one-sided exclusion (a finite
computation valid for every tail extension) or an explicit refusal.  The
four exceptional families are addressed by wire codes kept from the file
formats ("A", "B", "F", "NLc", "Nf"); in code they carry descriptive names:

* sparse-sum ("A"):      greedy partition exists but its reciprocal sum stays
                         below log(M)/L,
* stalled-partition ("B"): the greedy partition stops by block k,
* scarce-symbol ("F"):   some symbol occurs fewer than M times,
* gap-budget ("NLc"):    some block representation keeps cumulative gap
                         lengths within an increasing budget,
* weighted sparse-sum ("Nf"): like sparse-sum with weighted reciprocals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .config import DEFAULT, RunConfig
from .errors import (BlockLengthTooSmall, CapExceeded, DivergenceTooSlow,
                     NonpositiveWeight, UndecidableAtHorizon)
from .partition import GreedyPartition, greedy_partition
from .seqspace import SymbolicSequence
from .thresholds import compare_to_log_threshold, log_threshold_interval


class Verdict(enum.Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    EXCLUDED_BY_PREFIX = "ExcludedByPrefix"
    UNDETERMINED_AT_HORIZON = "UndeterminedAtHorizon"


@dataclass(frozen=True)
class ClassificationReport:
    verdict: Verdict
    certificate: dict | None = None
    threshold: tuple[float, float] | None = None

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict.value}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.threshold is not None:
            out["threshold_interval"] = list(self.threshold)
        return out


# -- bound functions and weight families ------------------------------------


@dataclass(frozen=True)
class BoundFunction:
    """Increasing budget p(k) for cumulative gap lengths, exact on integers."""

    fn: Callable[[int], Fraction | int]
    name: str = "custom"
    increasing: bool = True

    def __call__(self, k: int) -> Fraction:
        v = self.fn(k)
        if not isinstance(v, (int, Fraction)):
            raise TypeError("bound functions must return exact int/Fraction values")
        return Fraction(v)

    def sample_check_monotone(self, upto: int = 64) -> bool:
        vals = [self(k) for k in range(1, upto + 1)]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    @classmethod
    def linear(cls, slope) -> "BoundFunction":
        s = Fraction(slope)
        return cls(lambda k: s * k, name=f"linear[{slope}]")

    @classmethod
    def constant(cls, value) -> "BoundFunction":
        v = Fraction(value)
        return cls(lambda k: v, name=f"constant[{value}]")

    @classmethod
    def from_json(cls, data: dict) -> "BoundFunction":
        kind = data["kind"]
        if kind == "linear":
            return cls.linear(data["slope"])
        if kind == "constant":
            return cls.constant(data["value"])
        if kind == "affine":
            a, b = Fraction(data["offset"]), Fraction(data["slope"])
            return cls(lambda k: a + b * k, name=f"affine[{a}+{b}k]")
        raise ValueError(f"unknown bound kind {kind!r}")

    def to_json(self) -> dict:
        return {"kind": "named", "name": self.name}


@dataclass(frozen=True)
class WeightFamily:
    """One weight function per (block length, partition) pair.

    ``value_fn(L, starts, k)`` evaluates the weight at the k-th start (1-based)
    of the given partition.  The three declared properties are claims the
    library sample-checks rather than trusts: divergence along each partition,
    monotonicity in the pointwise partition order, and divergence of the
    weighted reciprocal sum on arithmetic starts.
    """

    value_fn: Callable[[int, Sequence[int], int], object]
    name: str = "custom"
    claims_divergent: bool = True
    claims_partition_monotone: bool = True
    claims_arithmetic_weighted_divergent: bool = True

    def value(self, L: int, starts: Sequence[int], k: int):
        v = self.value_fn(L, starts, k)
        if isinstance(v, (int, Fraction)):
            v = Fraction(v)
            if v <= 0:
                raise NonpositiveWeight(f"{self.name} evaluated to {v} at block {k}")
            return v
        v = float(v)
        if v <= 0:
            raise NonpositiveWeight(f"{self.name} evaluated to {v} at block {k}")
        return v

    @classmethod
    def named(cls, name: str) -> "WeightFamily":
        try:
            return _WEIGHT_REGISTRY[name]
        except KeyError:
            raise ValueError(f"unknown weight family {name!r}") from None

    def to_json(self) -> dict:
        return {"name": self.name}


_WEIGHT_REGISTRY = {
    # constant weight: plain reciprocal sums
    "unit": WeightFamily(lambda L, r, k: 1, name="unit",
                         claims_divergent=False),
    # grows along the block index; weighted reciprocals still diverge on
    # arithmetic starts (a 1/(k log k)-type series)
    "log_index": WeightFamily(lambda L, r, k: math.log(k + 1), name="log_index"),
    # grows too fast: the weighted reciprocal sum converges on arithmetic
    # starts, so this family deliberately violates the third claim
    "index": WeightFamily(lambda L, r, k: k, name="index",
                          claims_arithmetic_weighted_divergent=False),
}


def check_weight_family(family: WeightFamily, L: int, n_symbols: int,
                        samples: int = 40, seed: int = 7) -> dict:
    """Sample-check the declared properties; returns a small findings dict."""
    rng = np.random.default_rng(seed)
    monotone_ok = True
    for _ in range(samples):
        length = int(rng.integers(3, 12))
        gaps_a = rng.integers(0, 4, size=length)
        gaps_b = gaps_a + rng.integers(0, 3, size=length)
        r = np.cumsum(gaps_a + L) - L + 1
        r_dom = np.cumsum(gaps_b + L) - L + 1
        for k in range(1, length + 1):
            if family.value(L, r.tolist(), k) > family.value(L, r_dom.tolist(), k):
                monotone_ok = False
    # growth probe along one arithmetic partition
    arith = [1 + i * L for i in range(4096)]
    head = family.value(L, arith, 1)
    tail = family.value(L, arith, 4096)
    return {"partition_monotone_ok": monotone_ok,
            "grows_along_arithmetic": bool(tail > head),
            "claims": {"divergent": family.claims_divergent,
                       "partition_monotone": family.claims_partition_monotone,
                       "arithmetic_weighted_divergent":
                           family.claims_arithmetic_weighted_divergent}}


# -- set descriptors ---------------------------------------------------------


class SetFamily(enum.Enum):
    SPARSE_SUM = "A"
    STALLED_PARTITION = "B"
    SCARCE_SYMBOL = "F"
    GAP_BUDGET = "NLc"
    WEIGHTED_SPARSE_SUM = "Nf"


@dataclass(frozen=True)
class SetDescriptor:
    family: SetFamily
    L: int | None = None
    M: int | None = None
    k: int | None = None
    symbol: int | None = None
    bound: BoundFunction | None = None
    weights: WeightFamily | None = None

    def __post_init__(self) -> None:
        f = self.family
        if f is SetFamily.SPARSE_SUM and not (self.L and self.M and self.M >= 1):
            raise ValueError("sparse-sum sets need L >= 1 and M >= 1")
        if f is SetFamily.STALLED_PARTITION and (self.L is None or self.k is None or self.k < 0):
            raise ValueError("stalled-partition sets need L and k >= 0")
        if f is SetFamily.SCARCE_SYMBOL and (self.symbol is None or self.M is None or self.M < 0):
            raise ValueError("scarce-symbol sets need a symbol and M >= 0")
        if f is SetFamily.GAP_BUDGET and (self.L is None or self.bound is None):
            raise ValueError("gap-budget sets need L and a bound function")
        if f is SetFamily.WEIGHTED_SPARSE_SUM and (self.L is None or self.M is None
                                                   or self.weights is None):
            raise ValueError("weighted sparse-sum sets need L, M, and weights")

    # descriptive constructors
    @classmethod
    def sparse_sum(cls, L: int, M: int) -> "SetDescriptor":
        return cls(SetFamily.SPARSE_SUM, L=L, M=M)

    @classmethod
    def stalled_partition(cls, L: int, k: int) -> "SetDescriptor":
        return cls(SetFamily.STALLED_PARTITION, L=L, k=k)

    @classmethod
    def scarce_symbol(cls, symbol: int, M: int) -> "SetDescriptor":
        return cls(SetFamily.SCARCE_SYMBOL, symbol=symbol, M=M)

    @classmethod
    def gap_budget(cls, L: int, bound: BoundFunction) -> "SetDescriptor":
        return cls(SetFamily.GAP_BUDGET, L=L, bound=bound)

    @classmethod
    def weighted_sparse_sum(cls, L: int, M: int, weights: WeightFamily) -> "SetDescriptor":
        return cls(SetFamily.WEIGHTED_SPARSE_SUM, L=L, M=M, weights=weights)

    def to_json(self) -> dict:
        f = self.family
        out: dict = {"set": f.value}
        if self.L is not None:
            out["L"] = self.L
        if self.M is not None:
            out["M"] = self.M
        if self.k is not None:
            out["k"] = self.k
        if self.symbol is not None:
            out["n"] = self.symbol
        if self.bound is not None:
            out["bound"] = self.bound.to_json()
        if self.weights is not None:
            out["weights"] = self.weights.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SetDescriptor":
        code = data["set"]
        if code == "A":
            return cls.sparse_sum(int(data["L"]), int(data["M"]))
        if code == "B":
            return cls.stalled_partition(int(data["L"]), int(data["k"]))
        if code == "F":
            return cls.scarce_symbol(int(data["n"]), int(data["M"]))
        if code == "NLc":
            return cls.gap_budget(int(data["L"]), BoundFunction.from_json(data["bound"]))
        if code == "Nf":
            return cls.weighted_sparse_sum(int(data["L"]), int(data["M"]),
                                           WeightFamily.named(data["weights"]["name"]))
        raise ValueError(f"unknown set code {code!r}")


# -- quasi-normality ----------------------------------------------------------


def is_quasi_normal(x: SymbolicSequence, cfg: RunConfig = DEFAULT) -> ClassificationReport:
    """Exact quasi-normality verdict for an eventually periodic sequence.

    Membership holds exactly when every symbol occurs in the period: the
    greedy partition for the alphabet size (or, failing that, the period
    length) is then infinite with cyclic gaps, so its starts grow at most
    linearly and the reciprocal sum diverges like a harmonic series.
    """
    if not x.is_eventually_periodic:
        raise UndecidableAtHorizon("quasi-normality depends on the infinite tail")
    present = set(x.period)
    missing = [s for s in x.alphabet.symbols() if s not in present]
    if missing:
        return ClassificationReport(Verdict.NON_MEMBER,
                                    {"missing_symbol": missing[0],
                                     "reason": "symbol absent from the period: every "
                                               "block family is eventually starved"})
    n = x.alphabet.size
    for L in (n, len(x.period)) if len(x.period) > n else (n,):
        g = greedy_partition(x, L, max_blocks=8, cfg=cfg)
        if g.is_infinite:
            gap = g.status.eventual_gap
            return ClassificationReport(Verdict.MEMBER, {
                "L": L,
                "eventual_gap": gap,
                "starts_prefix": list(g.starts),
                "reason": "greedy starts are eventually cyclic with gap <= "
                          f"{gap}, so the reciprocal sum dominates a harmonic tail",
            })
    # all symbols occur in the period, so the period-length partition is
    # always infinite; reaching this line would be a scan bug
    raise AssertionError("unreachable: period-length partition must exist")


@dataclass(frozen=True)
class DiagnosticsReport:
    starts: tuple[int, ...]
    partial_sums: tuple[Fraction, ...]
    gap_sums: tuple[int, ...]
    horizon: int
    L: int

    def to_json(self) -> dict:
        return {"L": self.L, "horizon": self.horizon, "starts": list(self.starts),
                "partial_sums": [[s.numerator, s.denominator] for s in self.partial_sums],
                "gap_sums": list(self.gap_sums)}


def quasi_normal_diagnostics(prefix: Sequence[int], L: int, n_symbols: int,
                             count: int | None = None) -> DiagnosticsReport:
    """Greedy starts, reciprocal partial sums, and gap sums within a prefix.

    Purely descriptive: a prefix never certifies divergence.
    """
    if L < n_symbols:
        raise BlockLengthTooSmall(f"L={L} cannot cover an alphabet of size {n_symbols}")
    arr = np.asarray(list(prefix), dtype=np.int32)
    starts = [int(s) for s in kernels.greedy_starts(arr, n_symbols, L)]
    if count is not None:
        starts = starts[:count]
    sums, acc = [], Fraction(0)
    for r in starts:
        acc += Fraction(1, r)
        sums.append(acc)
    gap_sums = [r - 1 - i * L for i, r in enumerate(starts)]
    return DiagnosticsReport(tuple(starts), tuple(sums), tuple(gap_sums),
                             len(arr), L)


# -- membership ---------------------------------------------------------------


def membership(x: SymbolicSequence, s: SetDescriptor,
               cfg: RunConfig = DEFAULT) -> ClassificationReport:
    """Exact membership for eventually periodic inputs.

    Finite prefixes are accepted only where a one-sided answer exists: a
    prefix can force NON-membership of every extension (reported as
    ExcludedByPrefix) but can never establish membership; tail-dependent
    queries raise UndecidableAtHorizon.
    """
    if x.is_eventually_periodic:
        return _membership_exact(x, s, cfg)
    return _membership_prefix(x, s, cfg)


def _membership_exact(x, s, cfg):
    f = s.family
    if f is SetFamily.SPARSE_SUM:
        g = greedy_partition(x, s.L, max_blocks=4, cfg=cfg)
        lo, hi = log_threshold_interval(s.M, s.L)
        if not g.is_infinite:
            return ClassificationReport(
                Verdict.NON_MEMBER,
                {"reason": f"greedy partition stops at block {g.status.k}; membership "
                           "requires an infinite partition"},
                (float(lo), float(hi)))
        # eventually cyclic starts grow linearly, so the sum diverges; the
        # crossing count below re-derives that fact by direct summation
        crossing = _crossing_count(g, Fraction(0), s.M, s.L, cfg)
        return ClassificationReport(
            Verdict.NON_MEMBER,
            {"reason": "cyclic greedy starts give a divergent reciprocal sum",
             "eventual_gap": g.status.eventual_gap,
             "threshold_crossed_at_block": crossing},
            (float(lo), float(hi)))
    if f is SetFamily.STALLED_PARTITION:
        g = greedy_partition(x, s.L, max_blocks=max(4, s.k + 2), cfg=cfg)
        if g.is_infinite:
            return ClassificationReport(Verdict.NON_MEMBER,
                                        {"reason": "greedy partition never stops"})
        stops_at = g.status.k
        verdict = Verdict.MEMBER if stops_at <= s.k else Verdict.NON_MEMBER
        return ClassificationReport(verdict, {"greedy_stops_at_block": stops_at})
    if f is SetFamily.SCARCE_SYMBOL:
        if s.M == 0:
            return ClassificationReport(Verdict.NON_MEMBER,
                                        {"reason": "no sequence has a negative count"})
        if s.symbol in x.period:
            return ClassificationReport(Verdict.NON_MEMBER,
                                        {"reason": "symbol recurs in the period"})
        count = sum(1 for v in x.transient if v == s.symbol)
        verdict = Verdict.MEMBER if count < s.M else Verdict.NON_MEMBER
        return ClassificationReport(verdict, {"occurrences": count})
    if f is SetFamily.GAP_BUDGET:
        return _gap_budget_exact(x, s.L, s.bound, cfg)
    if f is SetFamily.WEIGHTED_SPARSE_SUM:
        return _weighted_exact(x, s, cfg)
    raise AssertionError(f"unhandled family {f}")


def _crossing_count(g: GreedyPartition, acc: Fraction, M: int, L: int,
                    cfg: RunConfig) -> int:
    for k, r in enumerate(g.iter_starts(), start=1):
        acc += Fraction(1, r)
        if compare_to_log_threshold(acc, M, L) > 0:
            return k
        if k > cfg.weighted_sum_cap:  # pragma: no cover - linear growth crosses fast
            raise CapExceeded("threshold crossing not reached within cap")
    raise AssertionError("finite start iterator for an infinite partition")


def _weighted_exact(x, s, cfg):
    g = greedy_partition(x, s.L, max_blocks=4, cfg=cfg)
    if not g.is_infinite:
        return ClassificationReport(
            Verdict.NON_MEMBER,
            {"reason": f"greedy partition stops at block {g.status.k}"})
    starts: list[int] = []
    exact = Fraction(0)
    approx = 0.0
    use_exact = True
    for k, r in enumerate(g.iter_starts(), start=1):
        starts.append(r)
        w = s.weights.value(s.L, starts, k)
        if use_exact and isinstance(w, Fraction):
            exact += Fraction(1, r) / w
            crossed = exact > s.M
        else:
            if use_exact:
                approx = float(exact)
                use_exact = False
            approx += 1.0 / (r * w)
            crossed = approx > s.M
        if crossed:
            return ClassificationReport(
                Verdict.NON_MEMBER,
                {"reason": "weighted reciprocal sum exceeds the bound",
                 "crossed_at_block": k})
        if k >= cfg.weighted_sum_cap:
            raise CapExceeded("weighted sum did not cross the bound within the cap; "
                              "the family may not diverge on these starts")
    raise AssertionError("finite start iterator for an infinite partition")


def _membership_prefix(x, s, cfg):
    f = s.family
    word = list(x.prefix)
    n = x.alphabet.size
    if f is SetFamily.SPARSE_SUM:
        rep = excluded_from_sparse_sum(word, s.L, s.M, n)
        if rep.verdict is Verdict.EXCLUDED_BY_PREFIX:
            return rep
        raise UndecidableAtHorizon("the sparse-sum verdict depends on the tail")
    if f is SetFamily.STALLED_PARTITION:
        starts = kernels.greedy_starts(np.asarray(word, np.int32), n, s.L)
        if len(starts) >= s.k + 1:
            return ClassificationReport(
                Verdict.EXCLUDED_BY_PREFIX,
                {"blocks_found": len(starts),
                 "reason": "every extension extends these greedy blocks, so the "
                           f"partition reaches block {s.k + 1}"})
        raise UndecidableAtHorizon("later entries could still stall the partition")
    if f is SetFamily.SCARCE_SYMBOL:
        count = word.count(s.symbol)
        if count >= s.M:
            return ClassificationReport(
                Verdict.EXCLUDED_BY_PREFIX,
                {"occurrences": count,
                 "reason": "the prefix already shows enough occurrences"})
        raise UndecidableAtHorizon("the tail could avoid the symbol")
    if f is SetFamily.GAP_BUDGET:
        res = search_gap_budget_representations(word, s.L, n, s.bound, cfg)
        if not res.feasible:
            return ClassificationReport(
                Verdict.EXCLUDED_BY_PREFIX,
                {"reason": "every block representation violates the budget inside "
                           "the prefix", "states_explored": res.states})
        raise UndecidableAtHorizon("a representation is still alive at the horizon")
    if f is SetFamily.WEIGHTED_SPARSE_SUM:
        starts = [int(v) for v in
                  kernels.greedy_starts(np.asarray(word, np.int32), n, s.L)]
        total = weighted_partial_sum(starts, s.L, s.weights, len(starts))
        if total > s.M:
            return ClassificationReport(
                Verdict.EXCLUDED_BY_PREFIX,
                {"reason": "the prefix greedy blocks alone push the weighted sum "
                           "over the bound"})
        raise UndecidableAtHorizon("the weighted-sum verdict depends on the tail")
    raise AssertionError(f"unhandled family {f}")


def excluded_from_sparse_sum(prefix: Sequence[int], L: int, M: int,
                             n_symbols: int) -> ClassificationReport:
    """One-sided sparse-sum exclusion from a prefix.

    If the greedy blocks lying wholly inside the prefix already push the
    reciprocal sum to log(M)/L, no extension of the prefix can be a member:
    extensions keep those greedy blocks and only ever add terms.
    """
    diag = quasi_normal_diagnostics(prefix, L, n_symbols)
    total = diag.partial_sums[-1] if diag.partial_sums else Fraction(0)
    lo, hi = log_threshold_interval(M, L)
    cmp = compare_to_log_threshold(total, M, L)
    cert = {"partial_sum": [total.numerator, total.denominator],
            "blocks": len(diag.starts)}
    if cmp >= 0:
        cert["reason"] = "prefix partial sum already reaches the threshold"
        return ClassificationReport(Verdict.EXCLUDED_BY_PREFIX, cert,
                                    (float(lo), float(hi)))
    return ClassificationReport(Verdict.UNDETERMINED_AT_HORIZON, cert,
                                (float(lo), float(hi)))


# -- gap budgets ---------------------------------------------------------------


def satisfies_gap_budget(x: SymbolicSequence, L: int, bound: BoundFunction,
                         search_cap: int | None = None,
                         cfg: RunConfig = DEFAULT) -> ClassificationReport:
    """Does some block representation keep cumulative gaps within the budget?

    The greedy partition minimizes every start, hence every cumulative gap
    sum, over all valid representations; the exact verdict therefore only
    needs the greedy gap sums.  For prefixes the answer is a feasibility
    report at the horizon.
    """
    n = x.alphabet.size
    if L < n:
        raise BlockLengthTooSmall(f"L={L} cannot cover an alphabet of size {n}")
    if x.is_eventually_periodic:
        return _gap_budget_exact(x, L, bound, cfg, search_cap)
    res = search_gap_budget_representations(list(x.prefix), L, n, bound, cfg)
    if res.feasible:
        return ClassificationReport(
            Verdict.UNDETERMINED_AT_HORIZON,
            {"feasible_prefix": True, "witness_starts": list(res.witness_starts),
             "states_explored": res.states})
    return ClassificationReport(
        Verdict.EXCLUDED_BY_PREFIX,
        {"feasible_prefix": False, "states_explored": res.states})


def _gap_budget_exact(x, L, bound, cfg, search_cap=None):
    cap = search_cap or cfg.budget_check_cap
    g = greedy_partition(x, L, max_blocks=4, cfg=cfg)
    if not g.is_infinite:
        return ClassificationReport(
            Verdict.NON_MEMBER,
            {"reason": f"no representation has more than {g.status.k} blocks"})
    cyc = g._cycle
    dense = cyc.advance == cyc.length * L
    check_until = cyc.first_index + cyc.length + 1
    k = 1
    while True:
        gap_sum = g.gap_sum(k)
        if gap_sum > bound(k):
            return ClassificationReport(
                Verdict.NON_MEMBER,
                {"violated_at_block": k, "gap_sum": gap_sum,
                 "reason": "the greedy representation minimizes every gap sum, "
                           "and even it violates the budget"})
        if dense and k >= check_until:
            return ClassificationReport(
                Verdict.MEMBER,
                {"reason": "greedy gap sums are eventually constant and stay "
                           "within the budget", "checked_blocks": k})
        if k >= cap:
            raise CapExceeded(
                "gap sums grow without a violation so far, but the budget is a "
                f"black box; undecided after {cap} blocks")
        k += 1


@dataclass(frozen=True)
class BudgetSearchResult:
    feasible: bool
    witness_starts: tuple[int, ...] = ()
    states: int = 0


def search_gap_budget_representations(word: Sequence[int], L: int, n_symbols: int,
                                      bound: BoundFunction,
                                      cfg: RunConfig = DEFAULT) -> BudgetSearchResult:
    """Exhaustive search for budget-respecting representations of a word.

    A state is (next free position, blocks placed); the cumulative gap sum is
    determined by the pair.  A representation is *alive* if it can continue
    past the horizon: its next block may start beyond the word (content free)
    or straddle the boundary with enough free positions to cover the missing
    symbols.  Infeasibility is a certificate valid for every extension.
    """
    word = [int(v) for v in word]
    H = len(word)
    cov = kernels.coverage_mask(np.asarray(word, np.int32), n_symbols, L) if H >= L \
        else np.zeros(0, dtype=bool)
    # distinct symbols in each suffix, for straddling blocks
    suffix_distinct = [0] * (H + 2)
    seen: set[int] = set()
    for r in range(H, 0, -1):
        seen.add(word[r - 1])
        suffix_distinct[r] = len(seen)

    visited: set[tuple[int, int]] = set()
    parent: dict[tuple[int, int], tuple[tuple[int, int], int] | None] = {}
    stack: list[tuple[int, int]] = [(1, 0)]
    parent[(1, 0)] = None
    states = 0
    while stack:
        pos, k = stack.pop()
        if (pos, k) in visited:
            continue
        visited.add((pos, k))
        states += 1
        if states > cfg.representation_search_cap:
            raise CapExceeded("gap-budget representation search exceeded its cap")
        cum = pos - 1 - k * L
        budget = bound(k + 1) - cum
        if budget < 0:
            continue  # delaying the next block only grows the gap sum
        g_max = math.floor(budget)
        for gap in range(0, g_max + 1):
            r = pos + gap
            if r + L - 1 <= H:
                if cov[r - 1]:
                    child = (r + L, k + 1)
                    if child not in visited:
                        parent.setdefault(child, ((pos, k), r))
                        stack.append(child)
            elif r <= H:
                # straddling block: free positions can supply missing symbols
                if n_symbols - suffix_distinct[r] <= (r + L - 1) - H:
                    return BudgetSearchResult(True, _chain(parent, (pos, k)) + (r,),
                                              states)
            else:
                # first fully-free position; later starts only cost more gap
                return BudgetSearchResult(True, _chain(parent, (pos, k)) + (r,),
                                          states)
            if r > H:
                break
    return BudgetSearchResult(False, (), states)


def _chain(parent, state) -> tuple[int, ...]:
    out: list[int] = []
    cur = parent.get(state)
    while cur is not None:
        prev_state, r = cur
        out.append(r)
        cur = parent.get(prev_state)
    return tuple(reversed(out))


# -- weighted sums and divergence certificates ---------------------------------


def weighted_partial_sum(starts: Sequence[int], L: int, weights: WeightFamily,
                         count: int):
    """Sum of 1/(r_k * f(r_k)) over the first ``count`` starts.

    Exact when the family returns exact values, float otherwise.
    """
    if count > len(starts):
        raise ValueError(f"count {count} exceeds {len(starts)} starts")
    starts = [int(r) for r in starts]
    acc_exact: Fraction | None = Fraction(0)
    acc_float = 0.0
    for k in range(1, count + 1):
        w = weights.value(L, starts, k)
        r = starts[k - 1]
        if acc_exact is not None and isinstance(w, Fraction):
            acc_exact += Fraction(1, r) / w
        else:
            if acc_exact is not None:
                acc_float = float(acc_exact)
                acc_exact = None
            acc_float += 1.0 / (r * w)
    return acc_exact if acc_exact is not None else acc_float


@dataclass(frozen=True)
class LevelBlock:
    level: int
    first_block: int          # k_l
    next_block: int           # k_{l+1}
    block_sum: float          # sum of 1/r_k over the level


@dataclass(frozen=True)
class DivergenceCertificate:
    """A step function along the starts witnessing the divergence trade-off.

    Assigns weight ``l`` to every start in the l-th level block; each level
    then contributes weighted reciprocal mass at least one, so the weighted
    sum diverges even though the weights themselves grow without bound.
    """

    levels: tuple[LevelBlock, ...]
    start_values: tuple[int, ...] = field(repr=False)

    def weight_at_index(self, k: int) -> int:
        for lv in self.levels:
            if lv.first_block <= k < lv.next_block:
                return lv.level
        raise ValueError(f"block {k} beyond the verified levels")

    def weight_at_value(self, r: int) -> int:
        try:
            k = self.start_values.index(r) + 1
        except ValueError:
            raise ValueError(f"{r} is not one of the recorded starts") from None
        return self.weight_at_index(k)


def build_divergence_certificate(starts: Iterable[int] | Iterator[int],
                                 target_levels: int,
                                 cfg: RunConfig = DEFAULT) -> DivergenceCertificate:
    """Cut the starts into consecutive level blocks with reciprocal sum > l.

    Requires starts from an infinite greedy partition (or any divergent
    reciprocal series); raises DivergenceTooSlow when a level cannot be
    completed within the configured number of terms.
    """
    it = iter(starts)
    levels: list[LevelBlock] = []
    values: list[int] = []
    k = 1
    k_l = 1
    for level in range(1, target_levels + 1):
        acc = 0.0
        terms = 0
        while True:
            try:
                r = int(next(it))
            except StopIteration:
                raise DivergenceTooSlow(f"start stream ended inside level {level}") from None
            values.append(r)
            acc += 1.0 / r
            terms += 1
            k += 1
            if acc > level:
                levels.append(LevelBlock(level, k_l, k, acc))
                k_l = k
                break
            if terms > cfg.divergence_level_cap:
                raise DivergenceTooSlow(f"level {level} not reached within "
                                        f"{cfg.divergence_level_cap} terms")
    return DivergenceCertificate(tuple(levels), tuple(values))
