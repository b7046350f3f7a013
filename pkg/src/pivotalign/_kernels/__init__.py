"""Kernel backend selection.

The hot loop of a scoring sweep is the row/column dominance scan, executed
once per (language pair, layer) and tens of thousands of times during Monte
Carlo validation. A Cython version is compiled at install time; if it is
missing (source install without a compiler) or ``PIVOTALIGN_PURE`` is set to
a non-empty value other than ``0``, the numpy fallback is used instead.

Both implementations are exercised against each other in the test suite;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

import os

from pivotalign._kernels import pure

BACKEND = "pure"
dominant_diagonal_count = pure.dominant_diagonal_count

if os.environ.get("PIVOTALIGN_PURE", "0") in ("", "0"):
    try:
        from pivotalign._kernels import _scan

        BACKEND = "compiled"
        dominant_diagonal_count = _scan.dominant_diagonal_count
    except ImportError:
        pass

__all__ = ["BACKEND", "dominant_diagonal_count", "pure"]
