"""Kernel backend selection.

Imports the compiled extension when present, the numpy fallback otherwise.
Set ILCDRESS_NO_EXT=1 to force the fallback (useful for benchmarking and
for debugging suspected extension issues).
"""

import os

if os.environ.get("ILCDRESS_NO_EXT", "").strip() not in ("", "0"):
    from ilcdress import kernels_py as _impl
else:
    try:
        from ilcdress import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from ilcdress import kernels_py as _impl

BACKEND = _impl.BACKEND
row_popcount = _impl.row_popcount
mul_term_word = _impl.mul_term_word
sandwich_term = _impl.sandwich_term
anticommute_mask = _impl.anticommute_mask
phase_apply = _impl.phase_apply
merge_canonical = _impl.merge_canonical
diag_basis_sum = _impl.diag_basis_sum
