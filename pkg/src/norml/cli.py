"""Command-line surface.

Subcommands: ``fields`` (fiber cardinality checks), ``sum`` (one norm or
trace power sum, optionally a whole coefficient sequence), ``lfun`` (fit a
rational model and classify weights), ``bounds`` (explicit constants from
monodromy profiles), and ``verify`` (preset experiment grids).  Exit code 0
means every invoked check passed, 1 means a check failed, 2 means the
invocation itself was unusable.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from fractions import Fraction

from .bounds import (
    C_bound_mult,
    MonodromyProfile,
    kummer_profile,
    normexa1_bound,
    normexa2_bound,
    pushforward_kernel_profile,
)
from .errors import InsufficientTerms, NonIntegerMultiplicity, NormlError
from .experiments import (
    SCHEMA,
    TOOL_VERSION,
    _value_json,
    exp_fibers,
    run_verify,
    split_prime_power,
)
from .gf import FieldRegistry
from .lfun import classify_weights, fit_rational_model, rth_power_check, series_expand
from .sums import SumSpec, brute_force_oracle, norm_power_sum, sum_sequence
from .tracefn import GroupKind, parse_expr

DEFAULT_FIELD_BITS = 28


def _common_flags(sub):
    sub.add_argument("--seed", type=int, default=0, help="registry seed")
    sub.add_argument(
        "--precision", type=int, default=12, help="digits kept in approximations"
    )
    sub.add_argument(
        "--max-field-bits",
        type=int,
        default=None,
        help="cap log2 of any field order (default: NORML_MAX_FIELD_BITS or 28)",
    )
    sub.add_argument("--json", metavar="PATH", help="write the report as JSON")
    sub.add_argument("--jobs", type=int, default=1, help="worker pool size")


def _registry(args) -> FieldRegistry:
    bits = args.max_field_bits
    if bits is None:
        bits = int(os.environ.get("NORML_MAX_FIELD_BITS", DEFAULT_FIELD_BITS))
    if bits < 2 or bits > 63:
        raise NormlError(f"--max-field-bits {bits} out of range [2, 63]")
    return FieldRegistry(seed=args.seed, max_order=1 << bits)


def _group(name: str) -> GroupKind:
    if name == "gm":
        return GroupKind.Multiplicative
    if name == "a1":
        return GroupKind.Additive
    raise NormlError(f"unknown group {name!r}; expected gm or a1")


def _write_json(args, payload):
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _spec_from(args) -> SumSpec:
    p, m0 = split_prime_power(args.q)
    expr = parse_expr(args.expr, p, m0)
    return SumSpec(
        expr=expr,
        kind=_group(args.group),
        p=p,
        m0=m0,
        m=args.m,
        r=args.r,
        t=args.t,
    )


# -- subcommand bodies ---------------------------------------------------------------


def _cmd_fields(args) -> int:
    reg = _registry(args)
    report = exp_fibers(args.q, args.m, args.r, seed=args.seed, registry=reg)
    payload = {"schema": SCHEMA, "invocation": "fields", "report": report.to_dict()}
    _write_json(args, payload)
    norm = (args.q ** (args.m * args.r) - 1) // (args.q**args.m - 1)
    trace = args.q ** (args.m * (args.r - 1))
    print(
        f"q={args.q} m={args.m} r={args.r}: norm fibers {norm}, trace fibers "
        f"{trace}, checked {report.aggregate['cases']} points: "
        + ("PASS" if report.passed else "FAIL")
    )
    return 0 if report.passed else 1


def _cmd_sum(args) -> int:
    reg = _registry(args)
    spec = _spec_from(args)
    if args.series:
        t0 = time.time()
        seq = sum_sequence(spec, args.series, registry=reg, jobs=args.jobs)
        payload = {
            "schema": SCHEMA,
            "invocation": "sum",
            "spec": _spec_json(spec, args),
            "values": [_value_json(v, args.precision) for v in seq.values],
            "runtime": round(time.time() - t0, 6),
        }
        _write_json(args, payload)
        print(json.dumps(payload["values"], sort_keys=True))
        return 0
    value = norm_power_sum(spec, registry=reg)
    ok = True
    if args.oracle:
        ok = value == brute_force_oracle(spec, registry=reg)
    payload = {
        "schema": SCHEMA,
        "invocation": "sum",
        "spec": _spec_json(spec, args),
        "value": _value_json(value, args.precision),
    }
    if args.oracle:
        payload["oracle_match"] = bool(ok)
    _write_json(args, payload)
    if isinstance(value, (int, Fraction)) or value.is_rational():
        fr = Fraction(value) if not hasattr(value, "as_fraction") else value.as_fraction()
        print(fr)
    else:
        print(json.dumps(_value_json(value, args.precision), sort_keys=True))
    if args.oracle and not ok:
        print("oracle mismatch", file=sys.stderr)
        return 1
    return 0


def _spec_json(spec, args):
    return {
        "expression": args.expr,
        "group": "gm" if spec.kind is GroupKind.Multiplicative else "a1",
        "q": spec.q,
        "m": spec.m,
        "r": spec.r,
        "t": spec.t,
    }


def _cmd_lfun(args) -> int:
    reg = _registry(args)
    spec = _spec_from(args)
    seq = sum_sequence(spec, args.terms, registry=reg, jobs=args.jobs)
    payload = {
        "schema": SCHEMA,
        "invocation": "lfun",
        "spec": _spec_json(spec, args),
        "terms": args.terms,
        "coefficients": [_value_json(v, args.precision) for v in seq.values],
    }
    ok = False
    try:
        if args.power > 1:
            model = rth_power_check(seq, args.power)
            payload["power"] = args.power
            prediction = None
        else:
            model = fit_rational_model(seq.prefix(args.terms - 2))
            regenerated = series_expand(model, args.terms)
            prediction = all(
                regenerated[s] == seq.values[s]
                for s in range(args.terms - 2, args.terms)
            )
            payload["prediction_exact"] = bool(prediction)
        report = classify_weights(model, spec.q**spec.m)
        payload["model"] = _model_json(model, report, args.precision)
        ok = report.integral_weights_ok and (prediction is None or prediction)
    except (InsufficientTerms, NonIntegerMultiplicity) as exc:
        payload["error"] = str(exc)
    _write_json(args, payload)
    print(json.dumps(payload, sort_keys=True))
    return 0 if ok else 1


def _model_json(model, report, precision):
    def block_json(block):
        return {
            "minpoly": [_value_json(c, precision) for c in block.minpoly],
            "multiplicity": block.multiplicity,
            "approx": [
                [round(z.real, precision), round(z.imag, precision)]
                for z in block.approx
            ],
        }

    return {
        "poles": [block_json(b) for b in model.poles],
        "roots": [block_json(b) for b in model.roots],
        "total_degree": report.total_degree,
        "max_weight": report.max_weight,
        "integral_weights": bool(report.integral_weights_ok),
        "weights": [
            {
                "kind": row.kind,
                "weight": round(row.weight, precision),
                "nearest": row.nearest,
                "multiplicity": row.multiplicity,
            }
            for row in report.rows
        ],
    }


def _cmd_bounds(args) -> int:
    if args.profile:
        with open(args.profile) as fh:
            data = json.load(fh)
        blocks = {}
        for item in data["blocks"]:
            blocks.setdefault(str(item["chi"]), []).append(
                (int(item["j"]), int(item["mult"]))
            )
        profile = MonodromyProfile(int(data["n"]), blocks)
        C = C_bound_mult(profile, args.r)
        desc = {"profile": data, "r": args.r}
    elif args.preset == "pushforward-kernel":
        if args.d is None:
            raise NormlError("--preset pushforward-kernel needs --d")
        profile = pushforward_kernel_profile(args.d)
        C = normexa1_bound(args.d, args.r)
        desc = {"preset": args.preset, "d": args.d, "r": args.r}
    elif args.preset == "kummer":
        if args.a is None:
            raise NormlError("--preset kummer needs --a")
        profile = kummer_profile(args.a, same_char=args.same_char)
        C = normexa2_bound(args.a, args.r, same_char=args.same_char)
        desc = {
            "preset": args.preset,
            "a": args.a,
            "same_char": bool(args.same_char),
            "r": args.r,
        }
    else:
        raise NormlError("bounds needs --preset or --profile")
    cross = C_bound_mult(profile, args.r)
    payload = {
        "schema": SCHEMA,
        "invocation": "bounds",
        "parameters": desc,
        "C": str(C),
        "C_approx": float(C),
        "profile_bound": str(cross),
        "consistent": cross == C,
    }
    _write_json(args, payload)
    print(json.dumps(payload, sort_keys=True))
    return 0 if cross == C else 1


def _cmd_verify(args) -> int:
    reg = _registry(args)
    reports = run_verify(args.target, seed=args.seed, registry=reg, jobs=args.jobs)
    for name in ("q", "m", "r"):
        want = getattr(args, name)
        if want is not None:
            reports = [r for r in reports if r.parameters.get(name, want) == want]
    if not reports:
        raise NormlError("filters removed every experiment run")
    passed = True
    for rep in reports:
        passed &= rep.passed
        brief = {
            k: v
            for k, v in rep.parameters.items()
            if isinstance(v, (int, str, bool)) and k != "expression"
        }
        expr = rep.parameters.get("expression")
        label = rep.experiment + (f" {expr}" if expr else "")
        print(
            f"{'PASS' if rep.passed else 'FAIL'} {label} "
            f"{brief} cases={rep.aggregate['cases']} "
            f"failures={len(rep.aggregate['failures'])} "
            f"runtime={rep.runtime:.2f}s"
        )
    payload = {
        "schema": SCHEMA,
        "invocation": "verify",
        "target": args.target,
        "seed": args.seed,
        "passed": passed,
        "reports": [r.to_dict() for r in reports],
    }
    _write_json(args, payload)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["experiment", "case", "satisfied"])
            for rep in reports:
                for case in rep.cases:
                    writer.writerow(
                        [rep.experiment, case["id"], case.get("satisfied", True)]
                    )
    print("verify:", "PASS" if passed else "FAIL")
    return 0 if passed else 1


# -- argument wiring -----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="norml",
        description="Norm and trace power sums over finite fields: exact "
        "sums, rational L-series models, explicit bound constants.",
    )
    parser.add_argument("--version", action="version", version=f"norml {TOOL_VERSION}")
    subs = parser.add_subparsers(dest="command", required=True)

    fields = subs.add_parser("fields", help="check fiber cardinalities")
    fields.add_argument("--q", type=int, required=True)
    fields.add_argument("--m", type=int, default=1)
    fields.add_argument("--r", type=int, default=2)
    _common_flags(fields)
    fields.set_defaults(func=_cmd_fields)

    sum_p = subs.add_parser("sum", help="evaluate one norm/trace power sum")
    sum_p.add_argument("--expr", required=True, help="dictionary expression literal")
    sum_p.add_argument("--group", choices=("gm", "a1"), required=True)
    sum_p.add_argument("--q", type=int, required=True)
    sum_p.add_argument("--m", type=int, default=1)
    sum_p.add_argument("--r", type=int, default=2)
    sum_p.add_argument("--t", type=int, required=True)
    sum_p.add_argument("--series", type=int, metavar="S", help="emit c_1..c_S")
    sum_p.add_argument(
        "--oracle", action="store_true", help="cross-check by full scan"
    )
    _common_flags(sum_p)
    sum_p.set_defaults(func=_cmd_sum)

    lfun_p = subs.add_parser("lfun", help="fit the local L-series model")
    lfun_p.add_argument("--expr", required=True)
    lfun_p.add_argument("--group", choices=("gm", "a1"), required=True)
    lfun_p.add_argument("--q", type=int, required=True)
    lfun_p.add_argument("--m", type=int, default=1)
    lfun_p.add_argument("--r", type=int, default=2)
    lfun_p.add_argument("--t", type=int, required=True)
    lfun_p.add_argument("--terms", type=int, default=8, metavar="S")
    lfun_p.add_argument(
        "--power", type=int, default=1, help="fit the r-fold sequence instead"
    )
    _common_flags(lfun_p)
    lfun_p.set_defaults(func=_cmd_lfun)

    bounds_p = subs.add_parser("bounds", help="explicit bound constants")
    bounds_p.add_argument(
        "--preset", choices=("pushforward-kernel", "kummer"), default=None
    )
    bounds_p.add_argument("--d", type=int, default=None, help="degree of g")
    bounds_p.add_argument("--a", type=int, default=None, help="distinct roots off 0")
    bounds_p.add_argument("--same-char", action="store_true")
    bounds_p.add_argument("--profile", metavar="PATH", help="monodromy profile JSON")
    bounds_p.add_argument("--r", type=int, required=True)
    _common_flags(bounds_p)
    bounds_p.set_defaults(func=_cmd_bounds)

    verify = subs.add_parser("verify", help="run preset experiment grids")
    verify.add_argument(
        "target", help="experiment name or 'all'", metavar="experiment"
    )
    verify.add_argument("--q", type=int, default=None, help="keep only this q")
    verify.add_argument("--m", type=int, default=None, help="keep only this m")
    verify.add_argument("--r", type=int, default=None, help="keep only this r")
    verify.add_argument("--csv", metavar="PATH", help="flat per-case table")
    _common_flags(verify)
    verify.set_defaults(func=_cmd_verify)

    return parser


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except NormlError as exc:
        print(f"norml: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"norml: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
