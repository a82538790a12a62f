"""Command-line front end.

Exit codes: 0 success, 1 I/O / parse / input error, 2 invalid fan,
3 valid but non-smooth fan, 4 invalid map or inequivalent maps,
5 undecided (deadline), 6 point-count mismatch, 7 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .coxgrading import grading_of
from .errors import EnumerationCapExceeded, InputError, InvariantViolation, NonSpanningTarget
from .fan import Fan, is_smooth, rays_span, validate_fan
from .formats import read_fan, read_map
from .morphism import check_morphism, equivalent, factor_through_product
from .pointfunctor import DEFAULT_CAP, orbit_cone_count, quotient_census

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID_FAN = 2
EXIT_NON_SMOOTH = 3
EXIT_INVALID_MAP = 4
EXIT_UNDECIDED = 5
EXIT_MISMATCH = 6
EXIT_CAP = 7


class CommandExit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def _fmt_vec(v) -> str:
    return " ".join(str(x) for x in v)


def load_smooth_fan(path, trust: bool = False) -> Fan:
    """Read, validate and require smoothness; failures become CommandExit."""
    fan = read_fan(path)
    report = validate_fan(fan, trust=trust)
    if not report.valid:
        raise CommandExit(EXIT_INVALID_FAN, f"{path}: invalid fan\n" + "\n".join(report.lines()))
    if not is_smooth(fan):
        raise CommandExit(EXIT_NON_SMOOTH, f"{path}: fan is not smooth")
    return fan


def _deadline(seconds):
    return None if seconds is None else time.monotonic() + seconds


def cmd_fan_check(args, out) -> int:
    fan = read_fan(args.path)
    report = validate_fan(fan, trust=args.trust_fan)
    for line in report.lines():
        print(line, file=out)
    if not report.valid:
        return EXIT_INVALID_FAN
    smooth = is_smooth(fan)
    spans, _ = rays_span(fan)
    print(f"smooth: {_yn(smooth)}", file=out)
    print(f"rays_span: {_yn(spans)}", file=out)
    return EXIT_OK if smooth else EXIT_NON_SMOOTH


def cmd_fan_pic(args, out) -> int:
    fan = load_smooth_fan(args.path, args.trust_fan)
    g = grading_of(fan)
    print(f"pic_rank {g.pic_rank}", file=out)
    for d in g.pic.torsion_orders:
        print(f"torsion {d}", file=out)
    for name, cls in zip(g.ray_names, g.classes):
        print(f"class {name} {_fmt_vec(cls) if cls else 0}", file=out)
    for mono in g.irrelevant_text():
        print(f"irrelevant {mono}", file=out)
    return EXIT_OK


def _verdict_code(overall: str) -> int:
    return {"valid": EXIT_OK, "invalid": EXIT_INVALID_MAP, "undecided": EXIT_UNDECIDED}[overall]


def cmd_map_check(args, out) -> int:
    mf = read_map(args.mapfile, load_fan=load_smooth_fan)
    data = mf.data
    deadline = _deadline(args.deadline)
    spans, _ = rays_span(data.target_fan)
    if spans:
        if mf.torus is not None:
            raise InputError("'torus' lines are only meaningful for targets whose rays do not span")
        report = check_morphism(data, deadline)
    else:
        if mf.torus is None:
            raise NonSpanningTarget(
                "target rays do not span; give the torus component with 'torus' lines")
        F = data.field
        if any(not t.is_constant() or t.is_zero() for t in mf.torus):
            print("torus: fail", file=out)
            print("failed: torus", file=out)
            print("overall: invalid", file=out)
            return EXIT_INVALID_MAP
        fact = factor_through_product(data, mf.torus, deadline)
        print(f"torus_rank {fact.split.torus_rank}", file=out)
        for t in fact.torus_point:
            print(f"torus_value {F.format(t)}", file=out)
        print("torus: pass", file=out)
        report = fact.report
    for line in report.lines():
        print(line, file=out)
    return _verdict_code(report.overall)


def cmd_map_equiv(args, out) -> int:
    a = read_map(args.map1, load_fan=load_smooth_fan).data
    b = read_map(args.map2, load_fan=load_smooth_fan).data
    if a.source != b.source or a.target_fan != b.target_fan or a.field != b.field:
        raise InputError("maps have different source, target or field")
    deadline = _deadline(args.deadline)
    verdicts = []
    for label, d in (("first", a), ("second", b)):
        overall = check_morphism(d, deadline).overall
        print(f"{label}: {overall}", file=out)
        verdicts.append(overall)
    if "undecided" in verdicts:
        print("equivalent: undecided", file=out)
        return EXIT_UNDECIDED
    if "invalid" in verdicts:
        print("equivalent: no", file=out)
        return EXIT_INVALID_MAP
    ok, witness = equivalent(a, b, deadline)
    print(f"equivalent: {_yn(ok)}", file=out)
    if not ok:
        return EXIT_INVALID_MAP
    F = a.field
    for name, lam in witness.scalars.items():
        print(f"lambda {name} {F.format(lam)}", file=out)
    return EXIT_OK


def cmd_points_count(args, out) -> int:
    fan = load_smooth_fan(args.fanfile, args.trust_fan)
    grading = grading_of(fan)
    census = quotient_census(fan, grading, args.q, args.cap)
    cones = orbit_cone_count(fan, args.q)
    print(f"q {args.q}", file=out)
    print(f"cox_points {census.points}", file=out)
    print(f"group_order {census.group_order}", file=out)
    print(f"orbit_partition {census.partition_count}", file=out)
    print(f"division_count {census.division_count}", file=out)
    print(f"torus_factor {census.torus_factor}", file=out)
    print(f"stabilizers_checked {census.stabilizers_checked}", file=out)
    print(f"stabilizers_trivial: {_yn(census.stabilizers_trivial)}", file=out)
    print(f"quotient_count {census.count}", file=out)
    print(f"orbit_cone_count {cones}", file=out)
    consistent = (census.partition_count == census.division_count
                  and census.stabilizers_trivial and census.count == cones)
    print(f"match: {_yn(consistent)}", file=out)
    return EXIT_OK if consistent else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricfunctor",
                                description="Morphisms into smooth toric varieties via Cox coordinates.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="group", required=True)

    fan = sub.add_parser("fan", help="inspect a fan file").add_subparsers(dest="command", required=True)
    c = fan.add_parser("check", help="validate a fan")
    c.add_argument("path")
    c.add_argument("--trust-fan", action="store_true", help="skip the pairwise intersection check")
    c.set_defaults(func=cmd_fan_check)
    c = fan.add_parser("pic", help="Picard group, divisor classes and irrelevant monomials")
    c.add_argument("path")
    c.add_argument("--trust-fan", action="store_true")
    c.set_defaults(func=cmd_fan_pic)

    mp = sub.add_parser("map", help="check maps given by sections").add_subparsers(dest="command", required=True)
    c = mp.add_parser("check", help="decide whether a map file defines a morphism")
    c.add_argument("mapfile")
    c.add_argument("--deadline", type=float, default=None, metavar="SECONDS")
    c.set_defaults(func=cmd_map_check)
    c = mp.add_parser("equiv", help="decide whether two map files define the same morphism")
    c.add_argument("map1")
    c.add_argument("map2")
    c.add_argument("--deadline", type=float, default=None, metavar="SECONDS")
    c.set_defaults(func=cmd_map_equiv)

    pt = sub.add_parser("points", help="finite-field point counts").add_subparsers(dest="command", required=True)
    c = pt.add_parser("count", help="count X(F_q) as a quotient and by orbit cones")
    c.add_argument("fanfile")
    c.add_argument("--q", type=int, required=True, help="prime field size")
    c.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum number of Cox tuples to enumerate")
    c.add_argument("--trust-fan", action="store_true")
    c.set_defaults(func=cmd_points_count)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = sys.stdout
    try:
        return args.func(args, out)
    except CommandExit as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
