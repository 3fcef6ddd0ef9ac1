"""Sequence space over a finite alphabet with the dyadic ultrametric.

Sequences are indexed from 1, matching the usual convention for projection
orders.  Two models are supported: an eventually periodic model, for which
every tail property asked elsewhere in the package is decidable, and a
finite-prefix model for streamed diagnostics that must never claim anything
about unseen entries.  Ball radii are kept as exact powers of two; all the
cylinder arithmetic below is dyadic and would be corrupted by float rounding.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import AlphabetMismatch, CapExceeded, OutOfHorizon


@dataclass(frozen=True)
class Alphabet:
    """The index set {1, ..., size} carrying the discrete metric."""

    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError("alphabet size must be a positive integer")

    def symbols(self) -> range:
        return range(1, self.size + 1)

    def __contains__(self, symbol: int) -> bool:
        return 1 <= symbol <= self.size

    def validate(self, entries) -> None:
        for e in entries:
            if not (isinstance(e, (int, np.integer)) and 1 <= e <= self.size):
                raise ValueError(f"entry {e!r} outside alphabet 1..{self.size}")


@dataclass(frozen=True)
class SymbolicSequence:
    """An element of the sequence space, given exactly or as a finite prefix.

    Exactly one model is populated: ``transient``/``period`` (eventually
    periodic, defined for every position) or ``prefix`` (defined up to its
    length only).
    """

    alphabet: Alphabet
    transient: tuple[int, ...] | None = None
    period: tuple[int, ...] | None = None
    prefix: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        periodic = self.period is not None
        if periodic == (self.prefix is not None):
            raise ValueError("exactly one of the two sequence models must be set")
        if periodic:
            if not self.period:
                raise ValueError("period must be nonempty")
            if self.transient is None:
                object.__setattr__(self, "transient", ())
            self.alphabet.validate(self.transient)
            self.alphabet.validate(self.period)
        else:
            if self.transient is not None:
                raise ValueError("prefix model takes no transient")
            self.alphabet.validate(self.prefix)

    # -- constructors -------------------------------------------------

    @classmethod
    def eventually_periodic(cls, alphabet, transient, period) -> "SymbolicSequence":
        return cls(_coerce_alphabet(alphabet), tuple(int(v) for v in transient),
                   tuple(int(v) for v in period), None)

    @classmethod
    def periodic(cls, alphabet, period) -> "SymbolicSequence":
        return cls.eventually_periodic(alphabet, (), period)

    @classmethod
    def from_prefix(cls, alphabet, prefix) -> "SymbolicSequence":
        return cls(_coerce_alphabet(alphabet), None, None,
                   tuple(int(v) for v in prefix))

    # -- structure ----------------------------------------------------

    @property
    def is_eventually_periodic(self) -> bool:
        return self.period is not None

    @property
    def horizon(self) -> int | None:
        """Last defined position for the prefix model, None when infinite."""
        return None if self.is_eventually_periodic else len(self.prefix)

    def entry(self, n: int) -> int:
        """The n-th entry, 1-based."""
        if n < 1:
            raise ValueError("positions are 1-based")
        if self.is_eventually_periodic:
            t = len(self.transient)
            if n <= t:
                return self.transient[n - 1]
            return self.period[(n - t - 1) % len(self.period)]
        if n > len(self.prefix):
            raise OutOfHorizon(f"position {n} beyond prefix of length {len(self.prefix)}")
        return self.prefix[n - 1]

    def entries(self, count: int, cfg: RunConfig = DEFAULT) -> np.ndarray:
        """First ``count`` entries as an int32 array."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count > cfg.materialize_cap:
            raise CapExceeded(f"materializing {count} entries exceeds cap")
        if self.is_eventually_periodic:
            t = len(self.transient)
            out = np.empty(count, dtype=np.int32)
            head = min(t, count)
            out[:head] = self.transient[:head]
            if count > t:
                p = np.asarray(self.period, dtype=np.int32)
                reps = -(-(count - t) // len(p))
                out[t:] = np.tile(p, reps)[: count - t]
            return out
        if count > len(self.prefix):
            raise OutOfHorizon(f"requested {count} entries of a length-{len(self.prefix)} prefix")
        return np.asarray(self.prefix[:count], dtype=np.int32)

    # -- wire format ---------------------------------------------------

    def to_json(self) -> dict:
        if self.is_eventually_periodic:
            return {"alphabet": self.alphabet.size,
                    "transient": list(self.transient),
                    "period": list(self.period)}
        return {"alphabet": self.alphabet.size, "prefix": list(self.prefix)}

    @classmethod
    def from_json(cls, data: dict) -> "SymbolicSequence":
        alphabet = Alphabet(int(data["alphabet"]))
        if "period" in data:
            return cls.eventually_periodic(alphabet, data.get("transient", ()), data["period"])
        return cls.from_prefix(alphabet, data["prefix"])


def _coerce_alphabet(alphabet) -> Alphabet:
    return alphabet if isinstance(alphabet, Alphabet) else Alphabet(int(alphabet))


# -- distances ----------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class DyadicRadius:
    """The exact value 2**(-exponent); never a float."""

    exponent: int

    def __post_init__(self) -> None:
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")

    @property
    def value(self) -> Fraction:
        return Fraction(1, 2 ** self.exponent)

    def __lt__(self, other) -> bool:
        return self.value < _distance_value(other)

    def __eq__(self, other) -> bool:
        return self.value == _distance_value(other)

    def __hash__(self) -> int:
        return hash(self.value)


class ZeroDistance:
    """Singleton distance of two equal sequences."""

    value = Fraction(0)

    def __repr__(self) -> str:
        return "ZERO"

    def __eq__(self, other) -> bool:
        return _distance_value(other) == 0

    def __lt__(self, other) -> bool:
        return 0 < _distance_value(other)

    def __le__(self, other) -> bool:
        return True

    def __hash__(self) -> int:
        return hash(Fraction(0))


ZERO = ZeroDistance()

Distance = DyadicRadius | ZeroDistance


def _distance_value(d) -> Fraction:
    if isinstance(d, (DyadicRadius, ZeroDistance)):
        return d.value
    if isinstance(d, (int, Fraction)):
        return Fraction(d)
    raise TypeError(f"cannot compare distance with {type(d)!r}")


def forced_prefix_length(radius: DyadicRadius) -> int:
    """Membership in a ball of radius 2**-j forces exactly the first j entries."""
    return radius.exponent


def distance(x: SymbolicSequence, y: SymbolicSequence) -> Distance:
    """Exact distance of two eventually periodic sequences.

    Equality is decided by comparing up to the maximal transient length plus
    the least common multiple of the period lengths; beyond that horizon both
    sequences repeat in lockstep.
    """
    _require_same_alphabet(x, y)
    if not (x.is_eventually_periodic and y.is_eventually_periodic):
        raise OutOfHorizon("exact distance needs eventually periodic operands; "
                           "use distance_bracket for prefixes")
    horizon = max(len(x.transient), len(y.transient)) + math.lcm(len(x.period), len(y.period))
    ax, ay = x.entries(horizon), y.entries(horizon)
    mism = np.flatnonzero(ax != ay)
    if mism.size == 0:
        return ZERO
    return DyadicRadius(int(mism[0]) + 1)


def distance_bracket(x: SymbolicSequence, y: SymbolicSequence,
                     horizon: int) -> tuple[Distance, Distance]:
    """Lower/upper bracket of the distance from the first ``horizon`` entries.

    Both sequences must be defined through ``horizon``.  A disagreement inside
    the window gives a tight bracket; total agreement only bounds the distance
    by the next dyadic level.
    """
    _require_same_alphabet(x, y)
    if horizon < 1:
        raise ValueError("horizon must be positive")
    for j in range(1, horizon + 1):
        if x.entry(j) != y.entry(j):
            r = DyadicRadius(j)
            return (r, r)
    return (ZERO, DyadicRadius(horizon + 1))


def _require_same_alphabet(x: SymbolicSequence, y: SymbolicSequence) -> None:
    if x.alphabet != y.alphabet:
        raise AlphabetMismatch(f"{x.alphabet} vs {y.alphabet}")


# -- cylinder enumeration -------------------------------------------------


def enumerate_ball_prefixes(center: SymbolicSequence, radius: DyadicRadius,
                            extra: int, cfg: RunConfig = DEFAULT) -> list[tuple[int, ...]]:
    """All length-(j+extra) prefixes of members of B(center, 2**-j).

    The first j entries are forced to agree with the center; the remaining
    ``extra`` positions range over every word.  Used as the brute-force oracle
    behind certificate verification.
    """
    if extra < 0:
        raise ValueError("extra must be nonnegative")
    n = center.alphabet.size
    if n ** extra > cfg.enumeration_cap:
        raise CapExceeded(f"{n}**{extra} words exceed the enumeration cap")
    j = forced_prefix_length(radius)
    forced = tuple(center.entry(i) for i in range(1, j + 1))
    return [forced + tail for tail in itertools.product(center.alphabet.symbols(), repeat=extra)]


def iter_ball_tails(alphabet: Alphabet, extra: int) -> Iterator[tuple[int, ...]]:
    """Lazily iterate the free tails of a ball enumeration."""
    return itertools.product(alphabet.symbols(), repeat=extra)
