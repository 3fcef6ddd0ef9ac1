"""Scan-kernel backend selection.

The hot loops (greedy window scans over long prefixes, greedy-optimality
sweeps over whole word families) live either in a compiled Cython extension
or in a pure-Python mirror with identical semantics.  The compiled backend is
preferred when importable; ``POL_KERNEL=python`` forces the fallback.
"""

from __future__ import annotations

import os

from . import _pure

_forced = os.environ.get("POL_KERNEL", "").strip().lower()

if _forced == "python":
    _impl = _pure
    BACKEND = "python"
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise ImportError("POL_KERNEL=cython but the compiled kernel is not built; "
                              "run `python setup.py build_ext --inplace`")
        _impl = _pure
        BACKEND = "python"

coverage_mask = _pure.coverage_mask  # numpy-vectorized either way
greedy_starts = _impl.greedy_starts
optimality_violation = _impl.optimality_violation
exhaustive_optimality = _impl.exhaustive_optimality
optimality_violations_batch = _impl.optimality_violations_batch

pure = _pure


def available_backends() -> list[str]:
    out = ["python"]
    try:
        from . import _fast  # noqa: F401

        out.append("cython")
    except ImportError:
        pass
    return out
