"""Runtime caps and numerical knobs, overridable from a JSON config file."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class RunConfig:
    # enumeration caps
    enumeration_cap: int = 1_000_000          # words enumerated per ball check
    partition_enum_len_cap: int = 20          # prefix length for exhaustive partition listing
    partition_enum_alphabet_cap: int = 4
    representation_search_cap: int = 200_000  # states in the gap-budget search
    budget_check_cap: int = 10_000            # block indices examined for exact budget verdicts
    weighted_sum_cap: int = 1_000_000         # terms summed before giving up on a threshold
    divergence_level_cap: int = 5_000_000     # terms per level in divergence certificates
    materialize_cap: int = 50_000_000         # entries materialized from a periodic model

    # numerics
    gauge_dps: int = 40                       # decimal digits for the porosity gauge
    gauge_bisect_iters: int = 200
    gauge_tol: float = 1e-12
    threshold_start_prec: int = 96            # bits for outward-rounded log comparisons

    # projection engine
    dim_cap: int = 64
    intersection_eig_tol: float = 1e-10
    stagnation_rel: float = 1e-14
    stagnation_window_mult: int = 10

    # reproducibility: numpy PCG64 generators, per-trial streams spawned
    # from a SeedSequence of the master seed.
    rng_algorithm: str = "numpy-pcg64/seedseq-spawn"


DEFAULT = RunConfig()


def load_config(path: str | Path) -> RunConfig:
    """Read a JSON object of overrides; unknown keys are rejected."""
    data = json.loads(Path(path).read_text())
    known = {f.name for f in fields(RunConfig)}
    bad = set(data) - known
    if bad:
        raise ValueError(f"unknown config keys: {sorted(bad)}")
    return replace(DEFAULT, **data)
