"""Command-line interface.

Exit codes: 0 success, 1 a checked value disagreed with its expectation,
2 malformed input.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from .config import (
    ConfigError,
    ScenarioConfig,
    anchor,
    config_from_dict,
    default_manifold,
    load_config,
    load_json,
    manifold_from_dict,
)
from .equivalences import act_line, poincare_isometry
from .extended_mukai import ExtendedVector, ManifoldData, MukaiLine, normalize_line, tilde_q, twist
from .lagrangian_ext import (
    BettiVector,
    LagrangianPair,
    euler_from_dims,
    reducible_ext,
    sym2_curve_betti,
    yoneda_form,
)
from .lattice_core import LatticeError, LatticeVector, as_rational
from .mukai_calculus import discriminant_coeff, euler_self, mukai_vector
from .report import jsonable, same_value
from .scenario import run_og10_scenario
from .sh_fourfold import fujiki4, q2_square
from .stability import SheafNumerics, divisor_square_div, slope_poly

__all__ = ["main", "OPS"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _parse_rationals(text: str, what: str) -> list[Fraction]:
    try:
        return [as_rational(x.strip()) for x in text.split(",") if x.strip()]
    except (LatticeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: cannot parse {text!r} as comma-separated rationals ({exc})") from None


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None


# --- eval ---------------------------------------------------------------


def _ns_vec(m: ManifoldData, x: Any, key: str) -> LatticeVector:
    try:
        if isinstance(x, Mapping):
            unknown = set(x) - set(m.ns.labels)
            if unknown:
                raise ConfigError(f"{key}: unknown NS label {sorted(unknown)[0]!r}")
            return m.ns.vector({k: as_rational(x.get(k, 0)) for k in m.ns.labels})
        if isinstance(x, list):
            return m.ns.vector([as_rational(c) for c in x])
    except (LatticeError, TypeError) as exc:
        raise ConfigError(f"{key}: {exc}") from None
    raise ConfigError(f"{key}: expected a list of coordinates or a label -> coefficient object")


def _ext_vec(m: ManifoldData, x: Any, key: str) -> ExtendedVector:
    try:
        if isinstance(x, Mapping):
            labels = {"alpha", "beta", *m.ns.labels}
            unknown = set(x) - labels
            if unknown:
                raise ConfigError(f"{key}: unknown component {sorted(unknown)[0]!r}")
            mu = {k: x.get(k, 0) for k in m.ns.labels}
            return ExtendedVector.make(m.ns, a=as_rational(x.get("alpha", 0)), mu=mu, b=as_rational(x.get("beta", 0)))
        if isinstance(x, list):
            return ExtendedVector.from_coords(m.ns, [as_rational(c) for c in x])
    except (LatticeError, TypeError) as exc:
        raise ConfigError(f"{key}: {exc}") from None
    raise ConfigError(f"{key}: expected (alpha, ns..., beta) coordinates or an object")


def _arg(args: Mapping[str, Any], key: str) -> Any:
    if key not in args:
        raise ConfigError(f"args: missing argument {key!r}")
    return args[key]


def _int_list(x: Any, key: str) -> tuple[int, ...]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise ConfigError(f"{key}: expected a list of integers")
    return tuple(x)


def _op_fujiki4(m, a):
    return fujiki4(m, *(_ns_vec(m, _arg(a, k), f"args.{k}") for k in "abcd"))


def _op_slope(m, a):
    f = _ns_vec(m, a["f"], "args.f") if "f" in a else m.ns.basis("f")
    l = _ns_vec(m, a["l"], "args.l") if "l" in a else m.ns.basis("lambda")
    s = SheafNumerics(as_rational(_arg(a, "rank")), _ns_vec(m, _arg(a, "c1"), "args.c1"))
    return slope_poly(m, s, f, l)


def _op_poincare_image(m, a):
    return act_line(poincare_isometry(m), MukaiLine(_ext_vec(m, _arg(a, "v"), "args.v"))).representative


def _op_reducible_ext(m, a):
    pair = LagrangianPair(
        BettiVector(_int_list(_arg(a, "z2_betti"), "args.z2_betti")),
        BettiVector(_int_list(_arg(a, "w_betti"), "args.w_betti")),
        _int_list(_arg(a, "push_ranks"), "args.push_ranks"),
    )
    return reducible_ext(pair)


def _op_yoneda(m, a):
    y = yoneda_form(_arg(a, "g"))
    return {"ext1": y.ext1_dim, "ext2": y.ext2_dim, "nondegenerate": y.nondegenerate}


def _op_square_div(m, a):
    sq, div = divisor_square_div(m, _ns_vec(m, _arg(a, "v"), "args.v"))
    return {"square": sq, "divisibility": div}


OPS: dict[str, Callable[[ManifoldData, Mapping[str, Any]], Any]] = {
    "tilde_q": lambda m, a: tilde_q(m, _ext_vec(m, _arg(a, "v"), "args.v"), _ext_vec(m, _arg(a, "w"), "args.w")),
    "twist": lambda m, a: twist(m, _ext_vec(m, _arg(a, "v"), "args.v"), _ns_vec(m, _arg(a, "lambda"), "args.lambda")),
    "normalize_line": lambda m, a: normalize_line(MukaiLine(_ext_vec(m, _arg(a, "v"), "args.v")), _arg(a, "rank")),
    "mukai_vector": lambda m, a: mukai_vector(m, _ext_vec(m, _arg(a, "v"), "args.v")),
    "euler_self": lambda m, a: euler_self(m, _ext_vec(m, _arg(a, "v"), "args.v")),
    "discriminant_coeff": lambda m, a: discriminant_coeff(m, _ext_vec(m, _arg(a, "v"), "args.v")),
    "q2_square": lambda m, a: q2_square(m),
    "fujiki4": _op_fujiki4,
    "divisor_square_div": _op_square_div,
    "slope_poly": _op_slope,
    "poincare_image": _op_poincare_image,
    "reducible_ext": _op_reducible_ext,
    "sym2_curve_betti": lambda m, a: sym2_curve_betti(_arg(a, "g")),
    "yoneda_form": _op_yoneda,
    "euler_from_dims": lambda m, a: euler_from_dims(_int_list(_arg(a, "dims"), "args.dims")),
}


def _evaluate(doc: Any) -> tuple[Any, Any]:
    if not isinstance(doc, Mapping):
        raise ConfigError("top level must be a JSON object with 'op'")
    unknown = sorted(set(doc) - {"op", "manifold", "args", "expect"})
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} in expression; allowed keys: ['args', 'expect', 'manifold', 'op']")
    op = doc.get("op")
    if op not in OPS:
        raise ConfigError(f"op: unknown operation {op!r}; available: {sorted(OPS)}")
    m = manifold_from_dict(doc["manifold"]) if "manifold" in doc else default_manifold()
    args = doc.get("args", {})
    if not isinstance(args, Mapping):
        raise ConfigError("args: expected an object")
    return jsonable(OPS[op](m, args)), doc.get("expect")


def cmd_eval(ns: argparse.Namespace) -> int:
    doc, text = load_json(ns.file)
    try:
        value, expect = _evaluate(doc)
    except ConfigError as exc:
        raise anchor(exc, ns.file, text) from None
    except (LatticeError, TypeError) as exc:
        raise anchor(ConfigError(f"args: {exc}"), ns.file, text) from None
    print(json.dumps({"op": doc["op"], "value": value}))
    if expect is not None and not same_value(value, expect):
        print(f"mismatch: expected {json.dumps(expect)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# --- other subcommands --------------------------------------------------


def cmd_manifold_check(ns: argparse.Namespace) -> int:
    cfg = load_config(ns.file)
    m = cfg.manifold
    print(f"deformation type: {m.deformation_type}, n = {m.n}")
    print(f"c_X = {m.c_X}, r_X = {m.r_X}")
    print(f"NS basis {list(m.ns.labels)}, Gram {[[str(x) for x in row] for row in m.ns.gram]}")
    if m.n == 2:
        source = "configured" if m.q2_square is not None else "calibrated"
        print(f"int q2^2 = {q2_square(m)} ({source})")
    print("ok")
    return EXIT_OK


def cmd_scenario(ns: argparse.Namespace) -> int:
    cfg = load_config(ns.config) if ns.config else ScenarioConfig.default()
    if ns.genus is not None:
        if ns.genus < 1:
            raise InputError(f"--genus must be at least 1, got {ns.genus}")
        cfg = dataclasses.replace(cfg, genus=ns.genus)
    report = run_og10_scenario(cfg)
    if ns.out:
        Path(ns.out).write_text(report.to_json() + "\n")
    print(report.render_text())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_ext_lagrangian(ns: argparse.Namespace) -> int:
    try:
        z2 = BettiVector(_parse_ints(ns.z2_betti, "--z2-betti"))
        w = BettiVector(_parse_ints(ns.w_betti, "--w-betti"))
        pair = LagrangianPair(z2, w, _parse_ints(ns.push_ranks, "--push-ranks")) if ns.push_ranks else LagrangianPair.with_default_ranks(z2, w)
        dims = reducible_ext(pair)
    except LatticeError as exc:
        raise InputError(str(exc)) from None
    print("dims " + ",".join(str(d) for d in dims))
    print(f"euler {euler_from_dims(dims)}")
    return EXIT_OK


def cmd_slope(ns: argparse.Namespace) -> int:
    m = load_config(ns.config).manifold if ns.config else default_manifold()
    try:
        c1 = m.ns.vector(_parse_rationals(ns.c1, "--c1"))
        l = m.ns.vector(_parse_rationals(ns.l, "--l"))
        f = m.ns.vector(_parse_rationals(ns.f, "--f")) if ns.f else m.ns.basis("f")
        rank = as_rational(ns.rank)
        poly = slope_poly(m, SheafNumerics(rank, c1), f, l)
    except (LatticeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None
    print(f"mu(eps) = {poly}")
    print(json.dumps(jsonable(poly)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hkatomic", description="Exact lattice and Mukai-vector computations on hyper-Kahler fourfolds.")
    sub = p.add_subparsers(dest="command", required=True)

    man = sub.add_parser("manifold", help="manifold configuration tools")
    man_sub = man.add_subparsers(dest="action", required=True)
    chk = man_sub.add_parser("check", help="validate a JSON manifold/scenario config")
    chk.add_argument("file")
    chk.set_defaults(func=cmd_manifold_check)

    ev = sub.add_parser("eval", help="evaluate one operation described in a JSON file")
    ev.add_argument("file")
    ev.set_defaults(func=cmd_eval)

    sc = sub.add_parser("scenario", help="run a scenario")
    sc_sub = sc.add_subparsers(dest="name", required=True)
    og = sc_sub.add_parser("og10", help="rank-five atomic bundle construction")
    og.add_argument("--genus", type=int, default=None)
    og.add_argument("--out", help="write the JSON report here")
    og.add_argument("--config", help="JSON scenario config")
    og.set_defaults(func=cmd_scenario)

    ext = sub.add_parser("ext", help="Ext computations")
    ext_sub = ext.add_subparsers(dest="kind", required=True)
    lag = ext_sub.add_parser("lagrangian", help="Ext^*(O_Z2(-W), O_Z) from Betti numbers")
    lag.add_argument("--z2-betti", required=True)
    lag.add_argument("--w-betti", required=True)
    lag.add_argument("--push-ranks", default=None)
    lag.set_defaults(func=cmd_ext_lagrangian)

    sl = sub.add_parser("slope", help="slope polynomial for h = f + eps*l")
    sl.add_argument("--c1", required=True, help="comma-separated NS coordinates")
    sl.add_argument("--rank", required=True)
    sl.add_argument("--l", required=True, help="comma-separated NS coordinates")
    sl.add_argument("--f", default=None, help="fibration class; defaults to the basis vector f")
    sl.add_argument("--config", help="JSON manifold config")
    sl.set_defaults(func=cmd_slope)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except (ConfigError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
