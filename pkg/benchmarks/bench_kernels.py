"""Compare the compiled and pure-Python census kernels on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each case runs through both backends, the outputs are checked for equality,
and the best-of-N wall time is reported.
"""

import argparse
import sys
import timeit

from hallshuffle import _kernels_py
from hallshuffle.cohp1 import _ext_layout
from hallshuffle.finmod import FinModule, get_field

try:
    from hallshuffle import _ckernels
except ImportError:
    _ckernels = None


def subspace_case(lam, q):
    mod = FinModule(lam, q)
    f = mod.field
    args = (q, f.add_table, f.mul_table, f.inv_table, mod.dim, mod.pi_next, mod.depth)
    return f"subspace_census {list(lam)} q={q}", "subspace_census", args


def ext_case(A, B, q):
    coords, _, blocks = _ext_layout(A, B)
    f = get_field(q)
    args = (q, f.add_table, f.mul_table, f.inv_table, len(coords), blocks, True)
    return f"ext_census O{A} by O{B} q={q}", "ext_census", args


def sieve_case(q, D):
    f = get_field(q)
    return f"irreducible_sieve q={q} D={D}", "irreducible_sieve", (q, f.add_table, f.mul_table, D)


CASES = [
    subspace_case((3, 2, 1), 2),
    subspace_case((2, 2, 1), 3),
    subspace_case((2, 2), 4),
    ext_case((-3, -3), (3,), 2),
    ext_case((-2, -2), (2,), 3),
    ext_case((-3,), (2, 2), 4),
    sieve_case(2, 10),
    sieve_case(3, 6),
]


def canonical(x):
    """Comparable form of a kernel result (dicts, sequences and numpy arrays)."""
    if isinstance(x, dict):
        return sorted((canonical(k), canonical(v)) for k, v in x.items())
    if hasattr(x, "tolist"):
        return x.tolist()
    if isinstance(x, (list, tuple)):
        return [canonical(v) for v in x]
    return x


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    opts = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'case':44s} {'python (s)':>11s} {'cython (s)':>11s} {'speedup':>8s}")
    for name, fn, args in CASES:
        py, cy = getattr(_kernels_py, fn), getattr(_ckernels, fn)
        if canonical(py(*args)) != canonical(cy(*args)):
            print(f"{name}: backends disagree")
            return 2
        tp = min(timeit.repeat(lambda: py(*args), number=1, repeat=opts.repeat))
        tc = min(timeit.repeat(lambda: cy(*args), number=1, repeat=opts.repeat))
        print(f"{name:44s} {tp:11.4f} {tc:11.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
