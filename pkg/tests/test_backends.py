import os
import subprocess
import sys

import pytest

from hallshuffle import _kernels, _kernels_py
from hallshuffle.cohp1 import _ext_layout
from hallshuffle.finmod import FinModule, get_field

native = _kernels.native


def _canon(x):
    if isinstance(x, dict):
        return sorted((_canon(k), _canon(v)) for k, v in x.items())
    if hasattr(x, "tolist"):
        return x.tolist()
    if isinstance(x, (list, tuple)):
        return [_canon(v) for v in x]
    return x


def _sub_args(lam, q):
    mod = FinModule(lam, q)
    f = mod.field
    return (q, f.add_table, f.mul_table, f.inv_table, mod.dim, mod.pi_next, mod.depth)


def _ext_args(A, B, q):
    coords, _, blocks = _ext_layout(A, B)
    f = get_field(q)
    return (q, f.add_table, f.mul_table, f.inv_table, len(coords), blocks, True)


needs_native = pytest.mark.skipif(native is None, reason="compiled extension not built")


@needs_native
@pytest.mark.parametrize("lam,q", [((2, 1), 2), ((1, 1, 1), 3), ((2, 2), 4), ((3, 1), 2)])
def test_subspace_census_backends_agree(lam, q):
    args = _sub_args(lam, q)
    assert _canon(native.subspace_census(*args)) == _canon(_kernels_py.subspace_census(*args))


@needs_native
@pytest.mark.parametrize("A,B,q", [((-2,), (1,), 2), ((-2, -1), (1,), 3), ((-1,), (1, 1), 4)])
def test_ext_census_backends_agree(A, B, q):
    args = _ext_args(A, B, q)
    assert _canon(native.ext_census(*args)) == _canon(_kernels_py.ext_census(*args))


@needs_native
@pytest.mark.parametrize("q,D", [(2, 6), (3, 4), (4, 3)])
def test_sieve_backends_agree(q, D):
    f = get_field(q)
    args = (q, f.add_table, f.mul_table, D)
    assert _canon(native.irreducible_sieve(*args)) == _canon(_kernels_py.irreducible_sieve(*args))


@needs_native
def test_gf_rank_backends_agree():
    f = get_field(3)
    m = [[1, 2, 0], [2, 1, 0], [0, 0, 1]]
    assert native.gf_rank(3, f.add_table, f.mul_table, f.inv_table, m) == \
        _kernels_py.gf_rank(3, f.add_table, f.mul_table, f.inv_table, m)


def test_pure_fallback_is_selected_by_environment():
    code = ("from hallshuffle import _kernels, finmod;"
            "print(_kernels.BACKEND);"
            "print(finmod.submodule_census((2, 1), 2))")
    env = dict(os.environ, HALLSHUFFLE_PURE="1")
    pure = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    env.pop("HALLSHUFFLE_PURE")
    default = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert pure.stdout.splitlines()[0] == _kernels_py.BACKEND
    assert pure.stdout.splitlines()[1] == default.stdout.splitlines()[1]


def test_pure_backend_runs_a_suite():
    code = ("from hallshuffle.verify import run_suite, SuiteConfig;"
            "import sys; sys.exit(0 if run_suite('hecke-coproduct', SuiteConfig(q=2, trunc=3)).ok else 1)")
    env = dict(os.environ, HALLSHUFFLE_PURE="1")
    assert subprocess.run([sys.executable, "-c", code], env=env).returncode == 0
