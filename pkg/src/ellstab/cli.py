"""Command line front end.

Subcommands:
  classify  -- fiber table of a model or configuration
  verdict   -- adiabatic stability report
  limits    -- adiabatic alpha/delta limits
  beta      -- beta/delta/DF of the induced base pair at a place
  weights   -- Hilbert-Mumford weights of forms, pencils, Weierstrass data
  scan      -- sweep a coefficient grid and tally verdict strata

Models are JSON or TOML files {"chi": 1, "A": "<poly in t>", "B": "..."};
configurations are {"chi": 1, "fibers": [{"type": "II*", "m": 1, "deg": 1},
...]}.  All rationals cross the interface as exact "p/q" strings.  Exit
codes: 0 success, 1 verdict coverage gap, 2 input error, 3 internal
invariant breach.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .canbundle import (
    ConfigError,
    base_data,
    euler_number,
    lct_of_fiber,
    validate_config,
)
from .dfweights import (
    OnePS,
    hm_weight_form,
    hm_weight_pencil,
    miranda_weight,
    parse_ternary,
    point_degeneration_df,
)
from .exactmath import (
    INF,
    BinaryForm,
    ExactMathError,
    Place,
    format_rational,
    parse_poly,
    parse_rational,
    valuation,
)
from .stability import (
    InternalInvariantError,
    StabilityError,
    adiabatic_verdict,
    alpha_delta_limits,
    beta as beta_invariant,
    canonical_fibration_verdict,
    delta as delta_invariant,
    pair_from_base,
    perturbed_beta,
)
from .weierstrass import (
    FiberConfig,
    FiberEntry,
    KodairaType,
    ModelError,
    NonMinimalModelError,
    WeierstrassModel,
    analyze,
    discriminant,
    minimalize,
)

EXIT_OK = 0
EXIT_COVERAGE_GAP = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3

SCAN_CAP_ENV = "ELLSTAB_SCAN_CAP"
DEFAULT_SCAN_CAP = 4096


class InputError(ValueError):
    """Malformed file or command line input."""


def _emit_json(payload: dict) -> None:
    # Canonical serialization: re-emitting a parsed report is byte-identical.
    print(json.dumps(payload, sort_keys=True, separators=(",", ":")))


def _load_data(path: str) -> dict:
    try:
        if path.endswith(".toml"):
            try:
                import tomllib  # type: ignore[import-not-found]
            except ModuleNotFoundError:
                import tomli as tomllib  # type: ignore[no-redef]
            with open(path, "rb") as fh:
                return tomllib.load(fh)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"cannot parse {path}: {exc}") from exc


def _model_from_data(data: dict) -> WeierstrassModel:
    try:
        chi = int(data.get("chi", 1))
        return WeierstrassModel.from_literals(str(data["A"]), str(data["B"]), chi)
    except KeyError as exc:
        raise InputError(f"model file needs field {exc}") from exc


def _config_from_data(data: dict) -> FiberConfig:
    try:
        chi = int(data.get("chi", 1))
        entries = tuple(
            FiberEntry(
                type=KodairaType.parse(str(item["type"])),
                multiplicity=int(item.get("m", 1)),
                place_degree=int(item.get("deg", 1)),
            )
            for item in data["fibers"]
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad fiber configuration: {exc}") from exc
    return FiberConfig(entries, chi)


def _load_input(args: argparse.Namespace) -> tuple[Optional[WeierstrassModel], FiberConfig]:
    """Resolve (model-if-any, configuration) from file or inline flags."""
    inline = getattr(args, "A", None) is not None or getattr(args, "B", None) is not None
    if inline and getattr(args, "input", None):
        raise InputError("give exactly one input source: a file or --A/--B")
    if inline:
        if args.A is None or args.B is None:
            raise InputError("inline input needs both --A and --B")
        model = WeierstrassModel.from_literals(args.A, args.B, args.chi)
    elif getattr(args, "input", None):
        data = _load_data(args.input)
        if "fibers" in data:
            config = _config_from_data(data)
            return None, config
        model = _model_from_data(data)
    else:
        raise InputError("no input: give a file or --A/--B/--chi")
    if getattr(args, "minimalize", False):
        model, _ = minimalize(model)
    return model, analyze(model)


def _fiber_rows(model: Optional[WeierstrassModel], config: FiberConfig) -> list[dict]:
    delta_form = discriminant(model) if model is not None else None
    rows = []
    for index, entry in enumerate(config.entries):
        row: dict = {
            "type": str(entry.type),
            "m": entry.multiplicity,
            "deg": entry.place_degree,
            "lct": format_rational(lct_of_fiber(entry.type, entry.multiplicity)),
            "euler": euler_number(entry.type),
        }
        if entry.place is not None:
            row["place"] = entry.place.label()
            if model is not None:
                vals = [
                    valuation(form, entry.place)
                    for form in (model.A, model.B, delta_form)
                ]
                row["vA"], row["vB"], row["vD"] = [
                    "inf" if v is INF else int(v) for v in vals
                ]
        else:
            row["place"] = f"fiber#{index}"
        rows.append(row)
    return rows


def cmd_classify(args: argparse.Namespace) -> int:
    model, config = _load_input(args)
    violations = validate_config(config)
    rows = _fiber_rows(model, config)
    euler_sum = sum(r["euler"] * r["deg"] for r in rows)
    payload = {
        "chi": config.chi,
        "fibers": rows,
        "euler_sum": euler_sum,
        "euler_budget": 12 * config.chi,
        "violations": violations,
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        header = f"{'place':<24}{'type':<8}{'m':<4}{'deg':<5}{'lct':<8}{'euler':<6}"
        print(header)
        for r in rows:
            vals = ""
            if "vA" in r:
                vals = f"  v=({r['vA']},{r['vB']},{r['vD']})"
            print(
                f"{r['place']:<24}{r['type']:<8}{r['m']:<4}{r['deg']:<5}"
                f"{r['lct']:<8}{r['euler']:<6}{vals}"
            )
        status = "ok" if euler_sum == 12 * config.chi else "MISMATCH"
        print(f"Euler sum: {euler_sum} / {12 * config.chi} [{status}]")
        for v in violations:
            print(f"violation: {v}")
    return EXIT_INPUT if violations else EXIT_OK


def cmd_verdict(args: argparse.Namespace) -> int:
    _, config = _load_input(args)
    if args.canonical:
        verdict = canonical_fibration_verdict(
            0, base_data(config), klt=not args.lc
        )
        payload = {"total": verdict.to_json_dict()}
        if args.format == "json":
            _emit_json(payload)
        else:
            print(f"total: {verdict}")
        gap = "coverage gap" in verdict.justification
        return EXIT_COVERAGE_GAP if gap else EXIT_OK
    report = adiabatic_verdict(config)
    payload = report.to_json_dict()
    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"base:  {report.base_verdict}")
        print(f"total: {report.total_space_verdict}")
        print(f"cscK:  {report.csck_note.value}")
        print(
            f"alpha limit {format_rational(report.alpha_limit)}, "
            f"delta limit {format_rational(report.delta_limit)}"
        )
    gap = "coverage gap" in report.base_verdict.justification
    return EXIT_COVERAGE_GAP if gap else EXIT_OK


def cmd_limits(args: argparse.Namespace) -> int:
    _, config = _load_input(args)
    alpha, delta_value = alpha_delta_limits(config)
    payload = {
        "alpha_limit": format_rational(alpha),
        "delta_limit": format_rational(delta_value),
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"alpha limit {payload['alpha_limit']}, delta limit {payload['delta_limit']}")
    return EXIT_OK


def _parse_place(text: str) -> Place:
    if text.strip().lower() in ("infinity", "inf", "oo"):
        return Place.infinity()
    poly = parse_poly(text)
    return Place.finite(poly.squarefree_part() if poly.degree else poly)


def cmd_beta(args: argparse.Namespace) -> int:
    _, config = _load_input(args)
    base = base_data(config)
    pair = pair_from_base(base)
    place = _parse_place(args.at)
    payload = {
        "beta": format_rational(beta_invariant(pair, place)),
        "delta": format_rational(delta_invariant(pair)),
        "polarization_degree": format_rational(pair.polarization_degree),
    }
    if pair.is_fano() and place.degree == 1:
        payload["df"] = format_rational(point_degeneration_df(pair, place))
    if args.eps is not None:
        ord_d = parse_rational(args.ord) if args.ord is not None else Fraction(0)
        payload["beta_perturbed"] = format_rational(
            perturbed_beta(pair, place, ord_d, parse_rational(args.eps))
        )
    if args.format == "json":
        _emit_json(payload)
    else:
        for key in sorted(payload):
            print(f"{key}: {payload[key]}")
    return EXIT_OK


def cmd_weights(args: argparse.Namespace) -> int:
    try:
        lam = OnePS(tuple(int(w) for w in args.lam.split(",")))
    except ValueError as exc:
        raise InputError(f"bad 1-PS vector {args.lam!r}: {exc}") from exc
    payload: dict = {}
    if args.pencil is not None:
        try:
            first, second = args.pencil.split("::")
        except ValueError as exc:
            raise InputError("pencil syntax: '<cubic> :: <cubic>'") from exc
        payload["mu"] = hm_weight_pencil(
            parse_ternary(first), parse_ternary(second), lam
        )
    elif args.form is not None:
        payload["mu"] = hm_weight_form(parse_ternary(args.form), lam)
    elif args.miranda:
        model, config = _load_input(args)
        if model is None:
            raise InputError("miranda weights need Weierstrass data, not a configuration")
        if len(lam.weights) != 2:
            raise InputError("miranda weights use a 1-PS on the two P^1 coordinates")
        exponent = lam.weights[0]
        if exponent < 1:
            raise InputError("give the 1-PS as (a, -a) with a > 0")
        payload["mu"] = miranda_weight(model.A, model.B, exponent)
        pair = pair_from_base(base_data(config))
        if pair.is_fano():
            payload["df"] = format_rational(
                point_degeneration_df(pair, Place.infinity())
            )
    else:
        raise InputError("give one of --form, --pencil, or --miranda")
    if args.format == "json":
        _emit_json(payload)
    else:
        for key in sorted(payload):
            print(f"{key}: {payload[key]}")
    return EXIT_OK


def _scan_values(axis: dict) -> list[Fraction]:
    start = parse_rational(str(axis["from"]))
    stop = parse_rational(str(axis["to"]))
    step = parse_rational(str(axis["step"]))
    if step <= 0:
        raise InputError("scan step must be positive")
    values = []
    value = start
    while value <= stop:
        values.append(value)
        value += step
    return values


def _scan_rows(base: dict, axes: list[dict], assignments: list[tuple[Fraction, ...]]) -> list[dict]:
    rows = []
    for combo in assignments:
        a_poly = parse_poly(str(base["A"]))
        b_poly = parse_poly(str(base["B"]))
        chi = int(base.get("chi", 1))
        for axis, value in zip(axes, combo):
            bump = parse_poly(f"t^{int(axis['slot'])}").scale(value) if int(axis["slot"]) else parse_poly("1").scale(value)
            if axis["form"] == "A":
                a_poly = a_poly + bump
            elif axis["form"] == "B":
                b_poly = b_poly + bump
            else:
                raise InputError("scan axis form must be 'A' or 'B'")
        row: dict = {
            "A": str(a_poly),
            "B": str(b_poly),
            "values": [format_rational(v) for v in combo],
        }
        try:
            model = WeierstrassModel(
                BinaryForm.from_unipoly(a_poly, 4 * chi),
                BinaryForm.from_unipoly(b_poly, 6 * chi),
                chi,
            )
            model, _ = minimalize(model)
            config = analyze(model)
            report = adiabatic_verdict(config)
            row["types"] = " ".join(sorted(str(e.type) for e in config.entries))
            row["verdict"] = report.base_verdict.tag.value
        except (ModelError, ConfigError, ExactMathError) as exc:
            row["types"] = ""
            row["verdict"] = f"skipped: {exc}"
        rows.append(row)
    return rows


def cmd_scan(args: argparse.Namespace) -> int:
    request = _load_data(args.input)
    axes = request.get("axes", [])
    if not axes:
        raise InputError("scan request needs a nonempty 'axes' list")
    grids = [_scan_values(axis) for axis in axes]
    total = 1
    for g in grids:
        total *= len(g)
    cap = int(os.environ.get(SCAN_CAP_ENV, DEFAULT_SCAN_CAP))
    if total > cap:
        raise InputError(
            f"grid has {total} points, cap is {cap}; subdivide the ranges or raise "
            f"{SCAN_CAP_ENV}"
        )
    assignments: list[tuple[Fraction, ...]] = [()]
    for g in grids:
        assignments = [combo + (v,) for combo in assignments for v in g]
    rows = _scan_rows(request, axes, assignments)

    print("A,B,types,verdict")
    tally: dict[str, int] = {}
    for row in rows:
        verdict = row["verdict"]
        tally[verdict] = tally.get(verdict, 0) + 1
        print(f"\"{row['A']}\",\"{row['B']}\",\"{row['types']}\",\"{verdict}\"")
    for verdict in sorted(tally):
        print(f"# {verdict}: {tally[verdict]}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellstab",
        description="Exact K-stability analyzer for elliptic fibrations over P^1",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser, minimalize_flag: bool = True) -> None:
        p.add_argument("input", nargs="?", help="model or configuration file (.json/.toml)")
        p.add_argument("--A", help="inline A(t) literal")
        p.add_argument("--B", help="inline B(t) literal")
        p.add_argument("--chi", type=int, default=1)
        if minimalize_flag:
            p.add_argument("--minimalize", action="store_true", help="reduce a non-minimal model first")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p_classify = sub.add_parser("classify", help="fiber table")
    add_io(p_classify)
    p_classify.set_defaults(func=cmd_classify)

    p_verdict = sub.add_parser("verdict", help="adiabatic stability report")
    add_io(p_verdict)
    p_verdict.add_argument(
        "--canonical", action="store_true",
        help="treat the input as a canonically polarized surface fibration",
    )
    p_verdict.add_argument("--lc", action="store_true", help="pair is lc but not klt")
    p_verdict.set_defaults(func=cmd_verdict)

    p_limits = sub.add_parser("limits", help="adiabatic alpha/delta limits")
    add_io(p_limits)
    p_limits.set_defaults(func=cmd_limits)

    p_beta = sub.add_parser("beta", help="beta/delta/DF at a place")
    add_io(p_beta)
    p_beta.add_argument("--at", required=True, help="place: 'infinity' or a polynomial in t")
    p_beta.add_argument("--eps", help="perturbation parameter (rational)")
    p_beta.add_argument("--ord", help="ord_p of the perturbing divisor (rational)")
    p_beta.set_defaults(func=cmd_beta)

    p_weights = sub.add_parser("weights", help="Hilbert-Mumford / DF weights")
    add_io(p_weights)
    p_weights.add_argument(
        "--lam", required=True,
        help="1-PS weights, e.g. '2,-1,-1' (use --lam=-1,-4,5 when the first is negative)",
    )
    p_weights.add_argument("--form", help="ternary cubic literal")
    p_weights.add_argument("--pencil", help="two cubics separated by '::'")
    p_weights.add_argument("--miranda", action="store_true", help="weight of the Weierstrass data")
    p_weights.set_defaults(func=cmd_weights)

    p_scan = sub.add_parser("scan", help="sweep a coefficient grid")
    p_scan.add_argument("input", help="scan request file")
    p_scan.add_argument("--format", choices=("text", "json"), default="text")
    p_scan.set_defaults(func=cmd_scan)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalInvariantError as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except NonMinimalModelError as exc:
        print(f"error: {exc} (hint: --minimalize)", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ExactMathError, ModelError, ConfigError, StabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
