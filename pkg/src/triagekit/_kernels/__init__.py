"""Hot-loop kernels: compiled extension when available, pure Python otherwise.

``TRIAGEKIT_PURE_KERNELS=1`` forces the pure backend (used by the
benchmark and by tests that compare the two).
"""

import os

from . import pure

if os.environ.get("TRIAGEKIT_PURE_KERNELS"):
    gibbs_sweeps = pure.gibbs_sweeps
    levenshtein_ids = pure.levenshtein_ids
    KERNEL_BACKEND = "pure"
else:
    try:
        from ._speedups import gibbs_sweeps, levenshtein_ids

        KERNEL_BACKEND = "compiled"
    except ImportError:
        gibbs_sweeps = pure.gibbs_sweeps
        levenshtein_ids = pure.levenshtein_ids
        KERNEL_BACKEND = "pure"

__all__ = ["gibbs_sweeps", "levenshtein_ids", "KERNEL_BACKEND", "pure"]
