"""Command line front end: read a JSON problem file, run one operation, write JSON or SVG."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Any, Callable

import jsonschema

from . import render as rnd
from . import serialize as ser
from .colored_fans import ColoredFan, non_polyhedral_witnesses, validate_colored_fan
from .errors import SphtropError
from .fan_builder import build_fan_Z, build_fan_Zhat, lift_colored_fan
from .qpoly import LinearMap, linear_image, qvec
from .spherical import (
    SpaceDescriptor,
    check_closure_commutes,
    push_tropicalization,
    trop_closure,
    trop_subvariety,
    trop_subvariety_lifted,
    valuation_cone,
)

log = logging.getLogger("sphtrop")

FORMAT_VERSION = "1"
OPERATIONS = ("validate-fan", "build-z", "valuation-cone", "trop", "trop-closure", "push", "check-closure", "render")


class InputError(Exception):
    """Unreadable or schema-invalid problem file; maps to exit code 1."""


def load_schema() -> dict:
    return json.loads(resources.files("sphtrop").joinpath("schema/problem.schema.json").read_text())


def load_problem(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        obj = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        jsonschema.validate(obj, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {exc.message}") from exc
    return obj


@dataclass
class Problem:
    raw: dict
    descriptor: SpaceDescriptor | None
    mode: str
    exact_one: bool

    def need_descriptor(self) -> SpaceDescriptor:
        if self.descriptor is None:
            raise InputError("this operation needs a descriptor block")
        return self.descriptor

    def generators(self):
        d = self.need_descriptor()
        gens = self.raw.get("subvariety", {}).get("generators", [])
        return [ser.polynomial_from_json(g, d.layout.big_dim) for g in gens]

    def fan(self) -> ColoredFan:
        d = self.descriptor
        if "fan" in self.raw:
            block = self.raw["fan"]
            palette = d.palette if d is not None and "palette" not in block else None
            V = None
            if "valuation_cone" not in block and d is not None:
                V = valuation_cone(d)
            return ser.fan_from_json(block, palette, V)
        bold = self.raw.get("lift", {}).get("bold_fan")
        if bold is not None and d is not None and d.lift is not None:
            return lift_colored_fan(ser.fan_from_json(bold), d.lift, d.layout)
        raise InputError("this operation needs a fan block (or a lift block with bold_fan)")


def build_problem(raw: dict, args: argparse.Namespace) -> Problem:
    options = raw.get("options", {})
    try:
        descriptor = ser.descriptor_from_json(raw["descriptor"], raw.get("lift")) if "descriptor" in raw else None
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SphtropError):
            raise
        raise InputError(f"malformed descriptor: {exc}") from exc
    mode = args.mode or options.get("mode", "auto")
    exact_one = args.exact_one or options.get("exact_one", False)
    return Problem(raw, descriptor, mode, exact_one)


# -- operations --------------------------------------------------------------


def op_validate_fan(p: Problem) -> dict:
    fan = p.fan()
    rep = validate_colored_fan(fan)
    allc = fan.all_cones()
    witnesses = []
    if rep.ok:
        witnesses = [
            {"cones": [allc.index(a), allc.index(b)], "point": ser.qs(x)} for a, b, x in non_polyhedral_witnesses(fan)
        ]
    return {
        "ok": rep.ok,
        "violations": [{"kind": k, "message": m} for k, m, _ in rep.violations],
        "polyhedral": rep.ok and not witnesses,
        "strictly_convex": fan.is_strictly_convex(),
        "non_polyhedral_witnesses": witnesses,
        "fan": ser.fan_to_json(fan),
        "colored_cones": [dict(ser.colored_cone_to_json(cc), id=i) for i, cc in enumerate(allc)],
    }


def op_build_z(p: Problem) -> dict:
    d = p.need_descriptor()
    fan = p.fan()
    tfan = build_fan_Z(fan, d.layout, exact_one=p.exact_one)
    hat, gamma = build_fan_Zhat(fan, d.layout, exact_one=p.exact_one)
    return {"sigma_z": ser.toric_fan_to_json(tfan, fan), "hat": ser.hat_to_json(hat, gamma)}


def op_valuation_cone(p: Problem) -> dict:
    d = p.need_descriptor()
    V = valuation_cone(d)
    out = {"cone": ser.cone_to_json(V), "coordinates": [f"v{i + 1}" for i in range(d.layout.r)]
           + [f"w{k + 1}" for k in range(d.layout.m)]}
    if d.lift is not None:
        out["pushed"] = ser.cone_to_json(linear_image(d.lift.pi_star, V))
    return out


def op_trop(p: Problem) -> dict:
    d = p.need_descriptor()
    gens = p.generators()
    out = {"trop": ser.complex_to_json(trop_subvariety(d, gens))}
    if d.lift is not None:
        out["pushed"] = ser.complex_to_json(trop_subvariety_lifted(d, gens))
    return out


def op_trop_closure(p: Problem) -> dict:
    d = p.need_descriptor()
    fan = p.fan()
    t = trop_closure(d, fan, p.generators(), mode=p.mode, exact_one=p.exact_one)
    return {"mode": p.mode, "closure": ser.spherical_trop_to_json(t, fan)}


def op_check_closure(p: Problem) -> dict:
    d = p.need_descriptor()
    fan = p.fan()
    rep = check_closure_commutes(d, fan, p.generators(), mode=p.mode)
    allc = fan.all_cones()
    return {
        "equal": rep.equal,
        "per_orbit": [
            {"colored_cone_id": allc.index(cc) if cc in allc else None,
             "colored_cone": ser.colored_cone_to_json(cc), "equal": ok}
            for cc, ok in rep.per_orbit.items()
        ],
        "lhs": ser.spherical_trop_to_json(rep.lhs, fan),
        "rhs": ser.spherical_trop_to_json(rep.rhs, fan),
    }


def op_push(p: Problem) -> dict:
    d = p.need_descriptor()
    fan = p.fan()
    block = p.raw.get("push")
    if block is None:
        raise InputError("push needs a push block")
    t = trop_closure(d, fan, p.generators(), mode=p.mode, exact_one=p.exact_one)
    maps = {}
    for entry in block["maps"]:
        src = ser.colored_cone_from_json(entry["source"], fan.dim)
        tgt_dim = block.get("target_dim", fan.dim)
        tgt = ser.colored_cone_from_json(entry["target"], tgt_dim)
        # matrices act on the orbit quotients, so the domain is known even for 0 x 0 blocks
        rows = [qvec(r) for r in entry["matrix"]]
        maps[src] = (tgt, LinearMap.from_rows(rows, fan.dim - len(src.sigma.span())))
    pushed = push_tropicalization(maps, t, block.get("target_dim"))
    return {"source": ser.spherical_trop_to_json(t, fan), "pushed": ser.spherical_trop_to_json(pushed)}


OPS: dict[str, Callable[[Problem], dict]] = {
    "validate-fan": op_validate_fan,
    "build-z": op_build_z,
    "valuation-cone": op_valuation_cone,
    "trop": op_trop,
    "trop-closure": op_trop_closure,
    "push": op_push,
    "check-closure": op_check_closure,
}


def _render_target(p: Problem, op: str) -> str:
    if op != "render":
        return {"validate-fan": "fan", "build-z": "sigma-z", "valuation-cone": "valuation-cone",
                "trop": "trop"}.get(op, "")
    choice = p.raw.get("options", {}).get("render")
    if choice:
        return choice
    if "fan" in p.raw or "bold_fan" in p.raw.get("lift", {}):
        return "fan"
    return "trop" if "subvariety" in p.raw else "valuation-cone"


def render_problem(p: Problem, op: str) -> str:
    target = _render_target(p, op)
    title = p.raw.get("name", "")
    if target == "fan":
        return rnd.render_fan(p.fan(), title)
    d = p.need_descriptor()
    if target == "sigma-z":
        return rnd.render_fan(build_fan_Z(p.fan(), d.layout, exact_one=p.exact_one), title)
    if target == "valuation-cone":
        return rnd.render_valuation_cone(valuation_cone(d), d.palette, title)
    if target == "trop":
        return rnd.render_complex(trop_subvariety(d, p.generators()), title)
    raise InputError(f"no SVG view for operation {op!r}")


# -- driver -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sphtrop", description="Spherical tropicalization from JSON problem files.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in OPERATIONS:
        sp = sub.add_parser(name)
        sp.add_argument("problem", help="problem file (JSON), or - for stdin")
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--format", choices=("json", "svg"), default="svg" if name == "render" else "json")
        sp.add_argument("--exact-one-variant", dest="exact_one", action="store_true",
                        help="use the exactly-one-per-block index sets when building Σ_Z")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--global", dest="mode", action="store_const", const="global")
        mode.add_argument("--per-cone", dest="mode", action="store_const", const="per-cone")
        sp.add_argument("--verbose", "-v", action="store_true")
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _result(op: str, source: str, status: str, payload: dict, warns: list[str]) -> str:
    doc: dict[str, Any] = {
        "version": FORMAT_VERSION,
        "operation": op,
        "status": status,
        "input": source,
        "payload": payload,
        "provenance": {"input": "input-derived", "operation": "input-derived", "payload": "computed"},
        "warnings": warns,
    }
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    op = args.command
    source = "<stdin>" if args.problem == "-" else os.path.basename(args.problem)
    captured: list[warnings.WarningMessage] = []
    try:
        raw = load_problem(args.problem)
        if raw.get("operation") not in (None, op):
            log.info("problem file names %s, running %s", raw["operation"], op)
        problem = build_problem(raw, args)
        start = time.perf_counter()
        with warnings.catch_warnings(record=True) as captured:
            warnings.simplefilter("always")
            if op == "render" or args.format == "svg":
                text = render_problem(problem, op)
            else:
                payload = OPS[op](problem)
                text = None
        log.info("%s finished in %.3f s", op, time.perf_counter() - start)
        warns = sorted({f"{w.category.__name__}: {w.message}" for w in captured})
        for w in warns:
            log.warning(w)
        if text is None:
            text = _result(op, source, "ok", payload, warns)
        _emit(text, args.out)
        return 0
    except InputError as exc:
        print(f"sphtrop: {exc}", file=sys.stderr)
        return 1
    except SphtropError as exc:
        print(f"sphtrop: {type(exc).__name__}: {exc}", file=sys.stderr)
        warns = sorted({f"{w.category.__name__}: {w.message}" for w in captured})
        err = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        try:
            _emit(_result(op, source, "error", err, warns), args.out)
        except OSError:
            pass
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"sphtrop: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
