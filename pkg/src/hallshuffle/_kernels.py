"""Kernel backend selection: compiled Cython if importable, else pure Python.

Set ``HALLSHUFFLE_PURE=1`` to force the pure-Python fallback.
"""

import os

from . import _kernels_py as py

native = None
if not os.environ.get("HALLSHUFFLE_PURE"):
    try:
        from . import _ckernels as native
    except ImportError:  # extension not built
        native = None

impl = native if native is not None else py
BACKEND = impl.BACKEND

gf_rank = impl.gf_rank
subspace_census = impl.subspace_census
ext_census = impl.ext_census
irreducible_sieve = impl.irreducible_sieve
