"""Command-line front end.

Every payload argument is inline JSON, a path to a JSON file, or ``-`` for
stdin.  Exit codes: 0 success, 1 failed verification, 2 parse or schema error,
3 feasibility guard exceeded.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, replace
from fractions import Fraction

import click

from . import cohp1, finmod, shuffle, verify, witt
from .cohp1 import Coherent, HallElement
from .finmod import FeasibilityError, LocalHallElement
from .polyrat import LaurentPoly, RationalFunction, parse_ratfun
from .scalar import ScalarError, ScalarMode, format_scalar, parse_scalar

EXIT_FAIL, EXIT_SCHEMA, EXIT_GUARD = 1, 2, 3


class PayloadError(click.ClickException):
    exit_code = EXIT_SCHEMA

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")


class VerificationFailed(click.ClickException):
    exit_code = EXIT_FAIL


# ---------------------------------------------------------------- settings


@dataclass(frozen=True)
class Settings:
    q: int = 2
    trunc: int = 8
    window: tuple | None = None
    mode: str = "numeric"
    json: bool = False

    def scalar_mode(self) -> ScalarMode:
        return ScalarMode.symbolic() if self.mode == "symbolic" else ScalarMode.numeric(self.q)

    def win(self, default=(-3, 3)) -> tuple:
        return self.window if self.window is not None else tuple(default)


def _parse_window(text, field="--window"):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).replace(":", ",").split(",")
    try:
        lo, hi = (int(p) for p in parts)
    except ValueError:
        raise PayloadError(field, f"expected 'lo,hi', got {text!r}") from None
    if lo > hi:
        raise PayloadError(field, f"empty window {lo} > {hi}")
    return (lo, hi)


def _common(f):
    """Global flags, accepted on the root group and on every leaf command."""
    f = click.option("--json", "as_json", is_flag=True, default=None, help="Emit JSON.")(f)
    f = click.option("--mode", type=click.Choice(["numeric", "symbolic"]), default=None,
                     help="Scalar mode: v = sqrt(q) numeric or v symbolic.")(f)
    f = click.option("--window", default=None, help="Degree window 'lo,hi'.")(f)
    f = click.option("--trunc", type=click.IntRange(min=0), default=None, help="Truncation order.")(f)
    f = click.option("--q", "q", type=click.IntRange(min=2), default=None, help="Field size.")(f)
    return f


def _merge(base: Settings, q, trunc, window, mode, as_json) -> Settings:
    over = {}
    if q is not None:
        over["q"] = q
    if trunc is not None:
        over["trunc"] = trunc
    if window is not None:
        over["window"] = _parse_window(window)
    if mode is not None:
        over["mode"] = mode
    if as_json:
        over["json"] = True
    return replace(base, **over)


def _settings(ctx: click.Context, q, trunc, window, mode, as_json) -> Settings:
    root = ctx.find_root().obj or Settings()
    return _merge(root, q, trunc, window, mode, as_json)


def leaf(group, name, **kw):
    """Register a command that receives merged Settings as its first argument."""

    def deco(fn):
        @click.pass_context
        def wrapper(ctx, q, trunc, window, mode, as_json, **kwargs):
            st = _settings(ctx, q, trunc, window, mode, as_json)
            return fn(st, **kwargs)

        wrapper.__doc__ = fn.__doc__
        wrapper.__name__ = fn.__name__
        params = getattr(fn, "__click_params__", [])
        wrapper.__click_params__ = list(params)
        return group.command(name, **kw)(_common(wrapper))

    return deco


# ---------------------------------------------------------------- I/O helpers


def load_payload(text: str, field: str):
    if text == "-":
        raw = sys.stdin.read()
    elif not text.lstrip().startswith(("{", "[", '"')) and os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise PayloadError(field, f"invalid JSON ({exc.msg} at column {exc.colno})") from None


def emit(obj, st: Settings, text: str | None = None):
    if text is not None and not st.json:
        click.echo(text)
    else:
        click.echo(json.dumps(obj, separators=(",", ":"), ensure_ascii=False))


def _scalar(text, field: str, mode: ScalarMode | None = None):
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise PayloadError(field, f"expected a scalar string, got {text!r}")
    try:
        return parse_scalar(str(text), mode)
    except (ScalarError, ValueError) as exc:
        raise PayloadError(field, str(exc)) from None


def _fmt(x) -> str:
    if isinstance(x, (LaurentPoly, RationalFunction)):
        return x.to_string()
    return format_scalar(x)


def _witt(obj, field: str, st: Settings) -> witt.WittVector:
    if not isinstance(obj, dict):
        raise PayloadError(field, "Witt vector must be an object {trunc, b}")
    extra = set(obj) - {"trunc", "b", "rank"}
    if extra:
        raise PayloadError(f"{field}.{sorted(extra)[0]}", "unknown field")
    if not isinstance(obj.get("b"), list):
        raise PayloadError(f"{field}.b", "must be a list of scalar strings")
    trunc = obj.get("trunc", st.trunc)
    if not isinstance(trunc, int) or trunc < 0:
        raise PayloadError(f"{field}.trunc", "must be a non-negative integer")
    b = [_scalar(s, f"{field}.b[{i}]", st.scalar_mode() if st.mode == "symbolic" else None)
         for i, s in enumerate(obj["b"])]
    if len(b) > trunc:
        raise PayloadError(f"{field}.b", f"{len(b)} coefficients exceed trunc {trunc}")
    rank = obj.get("rank")
    try:
        return witt.WittVector(b, trunc, rank)
    except ValueError as exc:
        raise PayloadError(field, str(exc)) from None


def _partition(label: str, field: str) -> tuple:
    try:
        parts = json.loads(label)
        if not isinstance(parts, list) or not all(isinstance(p, int) and p > 0 for p in parts):
            raise ValueError
    except (ValueError, json.JSONDecodeError):
        raise PayloadError(field, f"partition label {label!r} must look like '[2,1]'") from None
    return finmod.normalize_partition(parts)


def _local(obj, field: str, q: int) -> LocalHallElement:
    if not isinstance(obj, dict):
        raise PayloadError(field, "local Hall element must map partition labels to scalars")
    terms = {}
    for k, v in obj.items():
        lam = _partition(k, f"{field}[{k!r}]")
        terms[lam] = terms.get(lam, 0) + _scalar(v, f"{field}[{k!r}]", ScalarMode.numeric(q))
    return LocalHallElement(terms, q)


def _part_label(lam) -> str:
    return "[" + ",".join(map(str, lam)) + "]"


def _local_json(f: LocalHallElement) -> dict:
    return {_part_label(k): _fmt(v) for k, v in sorted(f.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))}


def _coherent(obj, field: str, q: int) -> Coherent:
    try:
        return Coherent.from_json(obj, q)
    except (ValueError, TypeError, KeyError) as exc:
        raise PayloadError(field, str(exc)) from None


def _hall(obj, field: str, st: Settings) -> HallElement:
    try:
        return HallElement.from_json(obj, st.q, st.scalar_mode())
    except (ValueError, TypeError, KeyError, ScalarError) as exc:
        raise PayloadError(field, str(exc)) from None


def _ratfun(text, field: str):
    if not isinstance(text, str):
        raise PayloadError(field, "expected a rational-function string")
    try:
        return parse_ratfun(text)
    except (ValueError, ScalarError) as exc:
        raise PayloadError(field, str(exc)) from None


def _curve(st: Settings, g: int, P) -> witt.CurveData:
    try:
        coeffs = tuple(int(c) for c in (P if P is not None else [1] + [0] * (2 * g)))
        if P is None and g:
            raise ValueError("genus > 0 needs the zeta numerator --P")
        return witt.CurveData(st.q, g, coeffs)
    except ValueError as exc:
        raise PayloadError("--P", str(exc)) from None


def _int_list(text, field):
    if text is None:
        return None
    try:
        v = json.loads(text) if text.strip().startswith("[") else [int(x) for x in text.split(",")]
        return [int(x) for x in v]
    except (ValueError, TypeError, json.JSONDecodeError):
        raise PayloadError(field, f"expected a list of integers, got {text!r}") from None


def _pair_list(pairs: dict, fmt_key) -> list:
    return [[*fmt_key(k), _fmt(v)] for k, v in pairs.items()]


# ---------------------------------------------------------------- root


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              help="JSON file with default global flags; explicit flags override it.")
@_common
@click.pass_context
def main_group(ctx, config, q, trunc, window, mode, as_json):
    """Exact Hall algebras of P^1 over F_q and their shuffle models."""
    base = Settings()
    if config:
        data = load_payload(config, "--config")
        if not isinstance(data, dict):
            raise PayloadError("--config", "must be a JSON object")
        extra = set(data) - {"q", "trunc", "window", "mode", "json"}
        if extra:
            raise PayloadError(f"--config.{sorted(extra)[0]}", "unknown field")
        base = _merge(base, data.get("q"), data.get("trunc"), data.get("window"),
                      data.get("mode"), data.get("json"))
    ctx.obj = _merge(base, q, trunc, window, mode, as_json)


# ---------------------------------------------------------------- zeta


@leaf(main_group, "zeta")
@click.option("--g", "genus", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--P", "P", default=None, help="Zeta numerator coefficients, constant term first.")
@click.option("--rational/--truncated", default=True, help="Closed form or Euler product over places.")
def zeta_cmd(st, genus, P, rational):
    """Zeta function of a curve: rational form or truncated Euler product."""
    curve = _curve(st, genus, _int_list(P, "--P"))
    if rational:
        z = witt.zeta(curve, "rational").to_string()
        emit({"zeta": z}, st, z)
    else:
        coeffs = witt.zeta(curve, "truncated", N=st.trunc)
        emit({"trunc": st.trunc, "coeffs": [_fmt(c) for c in coeffs]}, st)


# ---------------------------------------------------------------- witt


@main_group.group("witt")
def witt_group():
    """Big Witt vector operations; payloads are {"trunc": N, "b": [...]}."""


def _align(vs, st):
    N = max(v.trunc for v in vs)
    return [witt.WittVector(v.b, N, v.rank) if v.trunc < N else v for v in vs]


def _witt_binary(st, payloads, op):
    vs = [_witt(load_payload(p, f"arg{i + 1}"), f"arg{i + 1}", st) for i, p in enumerate(payloads)]
    if not vs:
        raise PayloadError("arg1", "at least one Witt vector is required")
    vs = _align(vs, st)
    acc = vs[0]
    for v in vs[1:]:
        acc = op(acc, v)
    emit(acc.to_json(), st)


@leaf(witt_group, "add")
@click.argument("vectors", nargs=-1)
def witt_add(st, vectors):
    """Witt sum (product of series) of the given vectors."""
    _witt_binary(st, vectors, witt.boxplus)


@leaf(witt_group, "mul")
@click.argument("vectors", nargs=-1)
def witt_mul(st, vectors):
    """Witt product of the given vectors."""
    _witt_binary(st, vectors, witt.boxtimes)


def _infer_rank(v: witt.WittVector) -> witt.WittVector:
    if v.rank is not None:
        return v
    nz = [i for i, c in enumerate(v.b) if c]
    return witt.WittVector(v.b, v.trunc, nz[-1] + 1 if nz else 0)


@leaf(witt_group, "star")
@click.argument("vector")
def witt_star(st, vector):
    """Dual u* of a finite-rank vector (rank inferred unless given)."""
    v = _infer_rank(_witt(load_payload(vector, "arg1"), "arg1", st))
    try:
        emit(witt.star(v).to_json() | {"rank": v.rank}, st)
    except (ValueError, ZeroDivisionError) as exc:
        raise PayloadError("arg1", str(exc)) from None


@leaf(witt_group, "euler")
@click.argument("vector")
def witt_euler(st, vector):
    """Euler factor 1/B(t) of a vector, to order trunc."""
    v = _witt(load_payload(vector, "arg1"), "arg1", st)
    emit({"trunc": v.trunc, "coeffs": [_fmt(c) for c in witt.euler_factor(v)]}, st)


@leaf(witt_group, "kappa")
@click.option("--scope", type=click.Choice(["local", "global"]), default="local", show_default=True)
@click.option("--degree", type=click.IntRange(min=1), default=1, show_default=True)
def witt_kappa(st, scope, degree):
    """The distinguished vector (1+t)/(1+q_x t), or its global product."""
    curve = witt.CurveData.p1(st.q)
    emit(witt.kappa(curve, scope, degree, st.trunc).to_json(), st)


def _character(obj, field, curve):
    if not isinstance(obj, dict) or set(obj) - {"twist"}:
        raise PayloadError(field, 'character must look like {"twist": "<scalar or rational function>"}')
    f = _ratfun(str(obj.get("twist", "1")), f"{field}.twist")
    if f.is_laurent() and f.laurent().is_constant():
        f = Fraction(f.laurent().const_value())
        if not f:
            raise PayloadError(f"{field}.twist", "twist must be nonzero")
    return witt.GlobalCharacter(curve, twist=f)


@leaf(witt_group, "lhom")
@click.argument("chi")
@click.argument("chi2")
@click.option("--closed/--truncated", default=False, help="Closed form or Euler product.")
def witt_lhom(st, chi, chi2, closed):
    """LHom(chi, chi') for rank-1 twist characters of P^1."""
    curve = witt.CurveData.p1(st.q)
    a = _character(load_payload(chi, "arg1"), "arg1", curve)
    b = _character(load_payload(chi2, "arg2"), "arg2", curve)
    if closed:
        f = witt.lhom(a, b, "closed")
        emit({"lhom": f.to_string()}, st, f.to_string())
    else:
        places = [(p.name, p.degree) for p in cohp1.places(st.q, max(st.trunc, 1))]
        s = witt.lhom(a, b, "truncated", st.trunc, places=places)
        emit({"trunc": st.trunc, "coeffs": [_fmt(c) for c in s]}, st)


# ---------------------------------------------------------------- hall


@main_group.group("hall")
def hall_group():
    """Hall algebra products, coproducts and operators."""


@leaf(hall_group, "torsion-mul")
@click.argument("elements", nargs=-1, required=True)
def hall_torsion_mul(st, elements):
    """Product of local torsion elements {"[partition]": scalar} at one place."""
    fs = [_local(load_payload(p, f"arg{i + 1}"), f"arg{i + 1}", st.q) for i, p in enumerate(elements)]
    if len(fs) == 1:
        fs = fs * 2
    acc = fs[0]
    for f in fs[1:]:
        acc = finmod.hallx_mul(acc, f, cohp1._LOCAL_GUARD)
    emit(_local_json(acc), st)


@leaf(hall_group, "p1-mul")
@click.argument("elements", nargs=-1, required=True)
def hall_p1_mul(st, elements):
    """Product of Hall elements of P^1 (lists of [label, scalar] pairs)."""
    fs = [_hall(load_payload(p, f"arg{i + 1}"), f"arg{i + 1}", st) for i, p in enumerate(elements)]
    acc = fs[0]
    for f in fs[1:]:
        acc = cohp1.hall_mul(acc, f)
    emit(acc.to_json(), st)


@leaf(hall_group, "comul")
@click.argument("element")
@click.option("--local", "local", is_flag=True, help="Treat the payload as a local torsion element.")
@click.option("--split", default="1,1", show_default=True, help="Ranks 'r1,r2' of the two factors.")
def hall_comul(st, element, local, split):
    """Coproduct: local torsion, or the windowed bundle part of Delta_{r1,r2}."""
    data = load_payload(element, "arg1")
    if local:
        out = finmod.hallx_comul(_local(data, "arg1", st.q), cohp1._LOCAL_GUARD)
        rows = sorted(out.items(), key=lambda kv: (sum(kv[0][0]), kv[0][0], kv[0][1]))
        emit([[list(a), list(b), _fmt(c)] for (a, b), c in rows], st)
        return
    r = _int_list(split, "--split")
    if len(r) != 2:
        raise PayloadError("--split", "expected two ranks")
    out = cohp1.comult_window(_hall(data, "arg1", st), tuple(r), st.win())
    rows = sorted(out.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))
    emit([[a.to_json(), b.to_json(), _fmt(c)] for (a, b), c in rows], st)


@leaf(hall_group, "hecke")
@click.argument("sheaf")
@click.argument("element")
@click.option("--direction", type=click.Choice(["T", "T*"]), default="T", show_default=True)
def hall_hecke(st, sheaf, element, direction):
    """Hecke operator T_F or T*_F on a function supported on line bundles."""
    F = _coherent(load_payload(sheaf, "arg1"), "arg1", st.q)
    f = _hall(load_payload(element, "arg2"), "arg2", st)
    try:
        emit(cohp1.hecke(F, f, direction).to_json(), st)
    except ValueError as exc:
        raise PayloadError("arg1", str(exc)) from None


@leaf(hall_group, "psi")
@click.option("--lam", default="1", show_default=True, help="Rank-1 character value.")
def hall_psi(st, lam):
    """Coefficients Psi_n of the torsion series, n <= trunc."""
    mode = st.scalar_mode()
    series = cohp1.psi_series(st.q, st.trunc, _scalar(lam, "--lam", mode), mode)
    emit({str(n): series[n].to_json() for n in sorted(series)}, st)


@leaf(hall_group, "m-op")
@click.option("--a", "a", type=int, required=True)
@click.option("--b", "b", type=int, required=True)
def hall_m_op(st, a, b):
    """M(1_O(a) (x) 1_O(b)) with torsion degree <= trunc."""
    out = cohp1.m_operator(a, b, st.q, st.trunc, st.scalar_mode())
    rows = sorted(out.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))
    emit([[x.to_json(), y.to_json(), _fmt(c)] for (x, y), c in rows], st)


# ---------------------------------------------------------------- shuffle


@main_group.group("shuffle")
def shuffle_group():
    """Shuffle algebra products, relations and kernels."""


def _kernel(text, st: Settings) -> shuffle.Kernel:
    if text is None:
        return shuffle.curve_kernels(witt.CurveData.p1(st.q))
    obj = load_payload(text, "--kernel")
    if not isinstance(obj, dict):
        raise PayloadError("--kernel", 'kernel must map "i,j" to rational functions')
    try:
        if set(obj) <= {"c", "lam", "lamt"} and isinstance(obj.get("c"), dict):
            parts = {k: shuffle.Kernel.from_json(v).c for k, v in obj.items()}
            return shuffle.Kernel(parts["c"], parts.get("lam"), parts.get("lamt"))
        return shuffle.Kernel.from_json(obj)
    except (ValueError, ScalarError) as exc:
        raise PayloadError("--kernel", str(exc)) from None


def _element(text, field):
    obj = load_payload(text, field)
    if not isinstance(obj, dict):
        raise PayloadError(field, 'element must map word labels "[1,1]" to rational functions')
    try:
        return shuffle.ShuffleElement.from_json(obj)
    except (ValueError, ScalarError) as exc:
        raise PayloadError(field, str(exc)) from None


_KERNEL_HELP = "Kernel JSON (default: the P^1 kernel at --q)."


@leaf(shuffle_group, "mul")
@click.argument("elements", nargs=-1, required=True)
@click.option("--kernel", default=None, help=_KERNEL_HELP)
def shuffle_mul_cmd(st, elements, kernel):
    """Twisted shuffle product of the given elements."""
    K = _kernel(kernel, st)
    es = [_element(p, f"arg{i + 1}") for i, p in enumerate(elements)]
    try:
        emit(shuffle.shuffle_product(es, K).to_json(), st)
    except shuffle.ShuffleError as exc:
        raise PayloadError("--kernel", str(exc)) from None


@leaf(shuffle_group, "sym-mul")
@click.argument("elements", nargs=-1, required=True)
@click.option("--kernel", default=None, help=_KERNEL_HELP)
@click.option("--which", type=click.Choice(["lam", "lamt"]), default="lamt", show_default=True)
def shuffle_sym_mul_cmd(st, elements, kernel, which):
    """Symmetric shuffle product using the kernel's lam or lam~ datum."""
    K = _kernel(kernel, st)
    es = [_element(p, f"arg{i + 1}") for i, p in enumerate(elements)]
    try:
        acc = es[0]
        for e in es[1:]:
            acc = shuffle.sym_shuffle_mul(acc, e, K, which)
    except shuffle.ShuffleError as exc:
        raise PayloadError("--kernel", str(exc)) from None
    emit(acc.to_json(), st)


@leaf(shuffle_group, "relations")
@click.argument("elements")
def shuffle_relations_cmd(st, elements):
    """Exact linear relations among a list of shuffle elements (RREF basis)."""
    data = load_payload(elements, "arg1")
    if not isinstance(data, list):
        raise PayloadError("arg1", "expected a list of shuffle elements")
    es = []
    for i, obj in enumerate(data):
        try:
            es.append(shuffle.ShuffleElement.from_json(obj))
        except (ValueError, ScalarError, AttributeError) as exc:
            raise PayloadError(f"arg1[{i}]", str(exc)) from None
    rel = shuffle.shuffle_relations(es)
    emit({"count": len(es), "relations": [[_fmt(c) for c in row] for row in rel]}, st)


@leaf(shuffle_group, "kernel")
@click.option("--family", type=click.Choice(["rank1", "elliptic"]), default="rank1", show_default=True)
@click.option("--r", "r", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--normalization", type=click.Choice(["rs", "literal"]), default="rs", show_default=True)
@click.option("--a", "a", default=None, help="Frobenius trace (integer) or a symbol name.")
@click.option("--full", is_flag=True, help="Also print the lam and lam~ data.")
def shuffle_kernel_cmd(st, family, r, normalization, a, full):
    """Kernel derived from curve data (P^1 rank 1, or an elliptic curve)."""
    trace = None
    if a is not None:
        trace = int(a) if a.lstrip("-").isdigit() else a
    curve = witt.CurveData.p1(st.q) if family == "rank1" else None
    if family == "elliptic" and isinstance(trace, int):
        curve, trace = _curve(st, 1, [1, -trace, st.q]), None
    try:
        K = shuffle.curve_kernels(curve, family, r, normalization, trace, st.q)
    except (shuffle.ShuffleError, ValueError) as exc:
        raise PayloadError("--family", str(exc)) from None
    if full:
        def table(t):
            return {f"{i},{j}": f.to_string() for (i, j), f in sorted(t.items())}

        emit({"c": table(K.c), "lam": table(K.lam), "lamt": table(K.lamt)}, st)
    else:
        emit(K.to_json(), st)


# ---------------------------------------------------------------- verify


@leaf(main_group, "verify")
@click.argument("suite", type=click.Choice(sorted(verify.SUITES) + ["all"]))
def verify_cmd(st, suite):
    """Run a verification suite; exit 1 if any check fails."""
    cfg = verify.SuiteConfig(q=st.q if _explicit_q() else None, trunc=_explicit("trunc", st),
                             window=st.window, fmt="json" if st.json else "text")
    names = sorted(verify.SUITES) if suite == "all" else [suite]
    reports = [verify.run_suite(n, cfg) for n in names]
    if st.json:
        payload = reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports]
        click.echo(json.dumps(payload, separators=(",", ":"), ensure_ascii=False))
    else:
        click.echo("\n".join(r.to_text() for r in reports))
    failed = [r.suite for r in reports if not r.ok]
    if failed:
        raise VerificationFailed(f"failed suite(s): {', '.join(failed)}")


def _explicit_q() -> bool:
    return _explicit("q", None) is not None


def _explicit(name, st):
    """A flag's value only when the user set it (suites keep their own defaults otherwise)."""
    ctx = click.get_current_context()
    for c in (ctx, ctx.find_root()):
        src = c.get_parameter_source(name)
        if src is not None and src.name in ("COMMANDLINE", "ENVIRONMENT"):
            return c.params[name]
    root = ctx.find_root()
    cfg = root.params.get("config")
    if cfg:
        data = load_payload(cfg, "--config")
        return data.get(name)
    return None


# ---------------------------------------------------------------- entry point


def run(argv=None) -> int:
    """Run the CLI and return the exit code instead of exiting."""
    try:
        main_group.main(args=argv, prog_name="hallshuffle", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 1
    except FeasibilityError as exc:
        click.echo(f"Error: feasibility guard exceeded: {exc} ({exc.guard} = {exc.value})", err=True)
        return EXIT_GUARD
    except (ValueError, ScalarError, shuffle.ShuffleError) as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_SCHEMA
    return 0


def main():
    sys.exit(run())
