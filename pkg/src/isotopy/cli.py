"""Command-line interface.

Groups are named ``family:parameter`` (``sym:3``, ``dih:4``, ``quat:8``) or
``@path`` to a Cayley table file.

Exit codes:
    0  every verdict matched the prediction for the group's Dedekind class
    1  a verification failed
    2  the command line or group spec could not be parsed
    3  a capacity bound was exceeded
    4  a Dedekind group was given without --allow-dedekind
    5  a Cayley table file does not describe a group
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import groups
from .construction import PRODUCT_CON_MAX_S, PRODUCT_ENUM_BOUND, build_example, main_report
from .errors import CapacityError, DedekindGroupRejected, GroupAxiomError
from .gsets import CONGRUENCE_BOUND, UNIVERSE_BOUND, all_congruences, congruence_lattice, product_algebra
from .lattices import normal_subgroup_lattice, subgroup_lattice, to_dot
from .oracles import oracle_comparison

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_DEDEKIND = 4
EXIT_BAD_GROUP = 5

FAMILIES = {
    "cyc": "cyclic", "cyclic": "cyclic",
    "dih": "dihedral", "dihedral": "dihedral",
    "sym": "symmetric", "symmetric": "symmetric",
    "alt": "alternating", "alternating": "alternating",
    "quat": "quaternion", "quaternion": "quaternion",
}
PARAM_BOUNDS = {"cyclic": 64, "dihedral": 12, "symmetric": 5, "alternating": 5, "quaternion": 8}


class SpecError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.pos = pos


@dataclass(frozen=True)
class GroupSpec:
    family: str | None = None
    parameter: int | None = None
    path: str | None = None

    def build(self) -> groups.FiniteGroup:
        if self.path is not None:
            return groups.load_cayley(self.path)
        n = self.parameter
        if self.family == "cyclic":
            return groups.cyclic(n)
        if self.family == "dihedral":
            return groups.dihedral(n)
        if self.family == "symmetric":
            return groups.symmetric(n)
        if self.family == "alternating":
            return groups.alternating(n)
        return groups.quaternion()


def parse_group_spec(text: str) -> GroupSpec:
    text = text.strip()
    if text.startswith("@"):
        if len(text) == 1:
            raise SpecError(text, 1, "missing path")
        return GroupSpec(path=text[1:])
    colon = text.find(":")
    if colon < 0:
        raise SpecError(text, len(text), "expected 'family:parameter'")
    name, arg = text[:colon].lower(), text[colon + 1:]
    if name not in FAMILIES:
        raise SpecError(text, 0, f"unknown family {name!r}")
    family = FAMILIES[name]
    if not arg.isdigit():
        raise SpecError(text, colon + 1, "parameter must be a positive integer")
    n = int(arg)
    if family == "quaternion":
        if n != 8:
            raise SpecError(text, colon + 1, "only the quaternion group of order 8 is built in")
    elif not 1 <= n <= PARAM_BOUNDS[family]:
        raise SpecError(text, colon + 1, f"{family} parameter must be in 1..{PARAM_BOUNDS[family]}")
    return GroupSpec(family, n)


def _load_group(spec_text: str) -> groups.FiniteGroup:
    return parse_group_spec(spec_text).build()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_verify(args) -> int:
    s = _load_group(args.group)
    report = main_report(
        s,
        allow_dedekind=args.allow_dedekind,
        skip_product=args.skip_product,
        max_order=args.max_order,
        max_universe=args.max_universe,
        max_congruences=args.max_congruences,
    )
    data = report.to_dict(timings=not args.no_timings)
    text = _dump(data)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(text + "\n")
    if args.json:
        print(text)
    else:
        c = report.counts
        iso = report.isotopy
        print(f"group {s.label} (order {s.order}), Dedekind: {report.is_dedekind}")
        print(f"subgroups {c['subgroups']}, normal subgroups {c['normal_subgroups']}")
        print("isotopy A ~_C B: " + ("certified" if iso["certified"] else f"FAILED {iso['counterexample']}"))
        print(f"|Con A| = {c['con_a']}, |Con B| = {c['con_b']}, "
              f"isomorphic: {report.congruence_lattices_isomorphic}")
        if report.product.get("computed"):
            print(f"|Con(AxC)| = {report.product['size']}, modular: {report.product['modular']}, "
                  f"N5 witness: {report.product['n5_witness']}")
        for key in ("lemma1", "correspondence"):
            part = getattr(report, key)
            print(f"{key}: " + (str(part["holds"]) if part.get("computed") else "skipped"))
        print("PASS" if report.passed() else "FAIL")
    return EXIT_OK if report.passed() else EXIT_VERIFY_FAILED


def cmd_lattices(args) -> int:
    s = _load_group(args.group)
    bundle = build_example(s, args.allow_dedekind)
    out = Path(args.out or "lattices")
    out.mkdir(parents=True, exist_ok=True)
    lats = {
        "sub": subgroup_lattice(s, max(args.max_order, s.order)),
        "nsub": normal_subgroup_lattice(s, max(args.max_order, s.order)),
        "con_a": congruence_lattice(bundle.alg_a, args.max_universe, args.max_congruences),
        "con_b": congruence_lattice(bundle.alg_b, args.max_universe, args.max_congruences),
    }
    if not args.skip_product and s.order <= PRODUCT_CON_MAX_S:
        try:
            lats["con_ac"] = congruence_lattice(
                product_algebra(bundle.alg_a, bundle.alg_c, "AxC"), args.max_universe, args.max_congruences
            )
        except CapacityError as exc:
            print(f"skipping Con(AxC): {exc}", file=sys.stderr)
    summary = {}
    for key, lat in lats.items():
        path = out / f"{key}.dot"
        path.write_text(to_dot(lat, f"{key} {lat.name}"))
        summary[key] = {"file": str(path), "nodes": lat.size, "edges": len(lat.edges())}
    if args.json:
        print(_dump(summary))
    else:
        for key, info in summary.items():
            print(f"{info['file']}: {info['nodes']} nodes, {info['edges']} cover edges")
    return EXIT_OK


def cmd_oracle(args) -> int:
    s = _load_group(args.group)
    result = oracle_comparison(s)
    ok = all(v["agree"] for v in result.values())
    if args.json:
        print(_dump({"group": s.label, "agree": ok, "checks": result}))
    else:
        for name, v in result.items():
            print(f"{name}: {'agree' if v['agree'] else 'DISAGREE'}")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_subgroups(args) -> int:
    s = _load_group(args.group)
    subs = groups.all_subgroups(s, max(args.max_order, s.order))
    rows = [{"order": h.order, "normal": groups.is_normal(s, h), "members": list(h.members)} for h in subs]
    if args.json:
        print(_dump({"group": s.label, "order": s.order, "subgroups": rows}))
    else:
        for r in rows:
            print(f"{r['order']:>4} {'N' if r['normal'] else ' '} {r['members']}")
    return EXIT_OK


def cmd_congruences(args) -> int:
    s = _load_group(args.group)
    bundle = build_example(s, args.allow_dedekind)
    data = {}
    for key, alg in (("A", bundle.alg_a), ("B", bundle.alg_b), ("C", bundle.alg_c)):
        data[key] = [p.notation() for p in all_congruences(alg, args.max_universe, args.max_congruences)]
    if args.json:
        print(_dump({"group": s.label, "congruences": data}))
    else:
        for key, parts in data.items():
            print(f"Con {key}: {len(parts)}")
            for p in parts:
                print(f"  {p}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isotopy",
        description="Isotopic G-set algebras with non-isomorphic congruence lattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("group", help="family:parameter (sym:3, dih:4, quat:8, ...) or @cayley-file")
    common.add_argument("--allow-dedekind", action="store_true",
                        help="build the example for a Dedekind group (negative control)")
    common.add_argument("--skip-product", action="store_true", help="do not compute Con(A x C)")
    common.add_argument("--max-order", type=int, default=PRODUCT_ENUM_BOUND,
                        help="largest group whose subgroups are enumerated")
    common.add_argument("--max-universe", type=int, default=UNIVERSE_BOUND)
    common.add_argument("--max-congruences", type=int, default=CONGRUENCE_BOUND)
    common.add_argument("--out", help="output directory")
    common.add_argument("--no-timings", action="store_true", help="omit wall-clock timings from JSON")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")

    for name, func, help_ in (
        ("verify", cmd_verify, "run the full verification pipeline"),
        ("lattices", cmd_lattices, "write Hasse diagrams as DOT files"),
        ("oracle", cmd_oracle, "compare fast paths with brute-force oracles"),
        ("subgroups", cmd_subgroups, "list subgroups"),
        ("congruences", cmd_congruences, "list congruences of A, B and C"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DedekindGroupRejected as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_DEDEKIND
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (GroupAxiomError, OSError) as exc:
        print(f"invalid group: {exc}", file=sys.stderr)
        return EXIT_BAD_GROUP


if __name__ == "__main__":
    sys.exit(main())
