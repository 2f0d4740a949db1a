"""Command-line interface.

Exit codes: 0 order reduct / property holds / Ramsey witness found,
1 failure witness / property fails / colouring defeats ``b``,
2 inconclusive, 64 usage error, 65 bad input data, 66 unreadable file.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .classes import ClassFragment, PropertyReport, check_property
from .core import Structure, StructureError, automorphisms, isomorphism, serialize
from .fileformat import ParseError, read_file, write_structure_file
from .gallery import BUILTINS, demo_section3, fragment
from .orientation import (
    FailureWitness,
    Inconclusive,
    OrderReduct,
    OrientationAssignment,
    PairTypeTable,
    PreconditionFailed,
    Sign,
    decide,
)
from .ramsey import ColoringRule, RuleInapplicable, SearchSpaceTooLarge, exhaustive_witness_check, verify_failure_witness

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_NOINPUT = 64, 65, 66

CERT_VERSION = "ramseyforge-certificate/1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(xs) -> str:
    return ",".join(map(str, xs))


def _load_class(source: str, max_size: int | None) -> tuple[ClassFragment, str]:
    if source.startswith("builtin:"):
        name = source[len("builtin:"):]
        if name not in BUILTINS:
            raise UsageError(f"unknown builtin {name!r}; choose from {', '.join(sorted(BUILTINS))}")
        if max_size is None:
            raise UsageError("--max-size is required for builtin classes")
        return fragment(name, max_size), source
    _, sf = read_file(source)
    frag = ClassFragment.from_structures(sf.sig, (s for _, s in sf.structures), bound=max_size, name=source)
    return frag, source


def _load_ref(ref: str) -> tuple[str, Structure]:
    path, _, name = ref.partition("#")
    _, sf = read_file(path)
    if not name:
        if len(sf.structures) != 1:
            raise UsageError(f"{path} holds {len(sf.structures)} structures; use FILE#NAME")
        return sf.structures[0]
    try:
        return name, sf.get(name)
    except KeyError:
        raise UsageError(f"{path} has no structure named {name!r}") from None


def _type_lines(table: PairTypeTable) -> list[str]:
    return [f"type={i} {_ints(serialize(t))}" for i, t in enumerate(table.types)]


def _sign_lines(asg: OrientationAssignment) -> list[str]:
    return [f"sign={i} {s.value}" for i, s in enumerate(asg.signs)]


def emit_certificate(outcome, frag: ClassFragment, class_label: str) -> str:
    """Self-contained ``key=value`` report followed by the structures needed
    to re-check it (``a``, ``b`` and the 2-types ``type<i>``)."""
    lines = [
        f"certificate={CERT_VERSION}",
        "command=decide",
        f"class={class_label}",
        f"bound={outcome.bound}",
        f"representatives={sum(1 for _ in frag.members())}",
    ]
    blocks: list[tuple[str, Structure]] = []
    table = outcome.table
    if table is not None:
        lines.append(f"type_count={len(table)}")
        lines += _type_lines(table)
        blocks += [(f"type{i}", t) for i, t in enumerate(table.types)]
    if isinstance(outcome, OrderReduct):
        lines.append("outcome=order")
        lines += _sign_lines(outcome.assignment)
        lines += [f"order={frag.label(s)} {_ints(order)}" for s, order in outcome.orders]
    elif isinstance(outcome, FailureWitness):
        lines += [
            "outcome=failure",
            f"case={outcome.case}",
            f"type_index={outcome.type_index}",
            f"rule={outcome.rule}",
        ]
        lines += _sign_lines(outcome.assignment)
        lines += [f"a_size={outcome.a.size}", f"b_size={outcome.b.size}"]
        lines += [f"cycle={_ints(c)}" for c in outcome.cycles]
        lines.append(f"verified={outcome.verified}")
        blocks = [("a", outcome.a), ("b", outcome.b)] + blocks
    else:
        lines += ["outcome=inconclusive", f"reason={outcome.reason}"]
        if outcome.assignment is not None:
            lines += _sign_lines(outcome.assignment)
    text = "\n".join(lines) + "\n"
    if blocks:
        text += write_structure_file(frag.sig, blocks)
    return text


def _human_decide(outcome, frag: ClassFragment, class_label: str) -> str:
    out = [f"class {class_label}, fragment up to size {outcome.bound}"]
    if outcome.table is not None:
        out.append(f"{len(outcome.table)} two-element type(s), processed in serialization order")
    if isinstance(outcome, OrderReduct):
        out.append("outcome: total-order reduct")
        out.append("signs: " + ", ".join(s.value for s in outcome.assignment.signs))
        for s, order in outcome.orders:
            out.append(f"  {frag.label(s)}: {' < '.join(map(str, order))}")
    elif isinstance(outcome, FailureWitness):
        out.append(f"outcome: Ramsey property fails with |A|={outcome.a.size}, |B|={outcome.b.size}")
        out.append(f"  A = type {outcome.type_index}: {outcome.a!r}")
        out.append(f"  B = {outcome.b!r}")
        for c in outcome.cycles:
            out.append(f"  cycle in B: {' -> '.join(map(str, c + c[:1]))}")
        out.append(f"  colouring rule {outcome.rule} defeats B on {outcome.verified} representative(s)")
    else:
        out.append(f"outcome: inconclusive ({outcome.reason})")
    return "\n".join(out) + "\n"


def cmd_decide(args) -> int:
    frag, label = _load_class(args.class_, args.max_size)
    try:
        outcome = decide(frag)
    except PreconditionFailed as exc:
        print(f"outcome=precondition-failed\nproperty={exc.report.property}\nreason={exc}")
        return EXIT_DATA
    if args.format == "machine":
        sys.stdout.write(emit_certificate(outcome, frag, label))
    else:
        sys.stdout.write(_human_decide(outcome, frag, label))
    if isinstance(outcome, OrderReduct):
        return EXIT_OK
    if isinstance(outcome, FailureWitness):
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE


_PROPERTY_NAMES = {
    "hereditary": "hereditary",
    "jep": "jep",
    "amalgamation": "amalgamation",
    "strong": "strong-amalgamation",
    "strong-amalgamation": "strong-amalgamation",
    "rigid": "rigid",
}


def _witness_text(frag: ClassFragment, report: PropertyReport) -> str:
    w = report.witness
    if report.property == "hereditary":
        s, subset = w
        return f"structure {frag.label(s)} subset {_ints(subset)}"
    if report.property == "jep":
        return f"pair {frag.label(w[0])} {frag.label(w[1])}"
    if report.property == "rigid":
        s, perm = w
        return f"structure {frag.label(s)} automorphism {_ints(perm)}"
    return f"instance a={frag.label(w.a)} b1={frag.label(w.b1)} f1={_ints(w.f1)} b2={frag.label(w.b2)} f2={_ints(w.f2)}"


def cmd_check(args) -> int:
    frag, label = _load_class(args.class_, args.max_size)
    props = [p.strip() for p in args.properties.split(",") if p.strip()]
    for p in props:
        if p not in _PROPERTY_NAMES:
            raise UsageError(f"unknown property {p!r}")
    lines = ["command=check", f"class={label}", f"bound={frag.bound}"]
    ok = True
    for p in props:
        report = check_property(frag, _PROPERTY_NAMES[p], instance_bound=args.instance_size)
        lines.append(f"{report.property}={'holds' if report.holds else 'fails'}")
        if not report.holds:
            ok = False
            lines.append(f"{report.property}.witness={_witness_text(frag, report)}")
    _emit(lines, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def _emit(lines: list[str], fmt: str) -> None:
    if fmt == "machine":
        print("\n".join(lines))
    else:
        print("\n".join(ln.replace("=", ": ", 1) for ln in lines))


def cmd_aut(args) -> int:
    name, s = _load_ref(args.structure)
    auts = automorphisms(s)
    lines = [f"structure={name}", f"order={len(auts)}", f"rigid={'true' if len(auts) == 1 else 'false'}"]
    lines += [f"automorphism={_ints(p)}" for p in auts]
    _emit(lines, args.format)
    return EXIT_OK


def cmd_iso(args) -> int:
    na, a = _load_ref(args.a)
    nb, b = _load_ref(args.b)
    f = isomorphism(a, b)
    lines = [f"a={na}", f"b={nb}", f"isomorphic={'true' if f else 'false'}"]
    if f:
        lines.append(f"map={_ints(f.map)}")
    _emit(lines, args.format)
    return EXIT_OK if f else EXIT_FAIL


def _rule_from_certificate(pairs, sf) -> ColoringRule:
    kv = {}
    signs = {}
    for k, v in pairs:
        if k == "sign":
            i, s = v.split()
            signs[int(i)] = Sign(s)
        else:
            kv.setdefault(k, v)
    if kv.get("outcome") != "failure":
        raise UsageError("certificate does not describe a failure witness")
    types = []
    i = 0
    while f"type{i}" in sf.names:
        types.append(sf.get(f"type{i}"))
        i += 1
    table = PairTypeTable(tuple(types))
    asg = OrientationAssignment(tuple(signs[i] for i in range(len(signs))))
    return ColoringRule(kv["rule"], table, asg, int(kv["type_index"]))


def _coloring_text(coloring) -> str:
    return " ".join(f"{x},{y}:{c.value}" for (x, y), c in coloring.colors)


def cmd_ramsey(args) -> int:
    rule = None
    if args.certificate:
        pairs, sf = read_file(args.certificate)
        rule = _rule_from_certificate(pairs, sf)
        a_name, a = ("a", sf.get("a")) if args.a is None else _load_ref(args.a)
        b_name, b = ("b", sf.get("b")) if args.b is None else _load_ref(args.b)
        default_c = [("b", sf.get("b"))]
    else:
        if args.a is None or args.b is None:
            raise UsageError("--a and --b are required without --certificate")
        a_name, a = _load_ref(args.a)
        b_name, b = _load_ref(args.b)
        default_c = []
        rule = ColoringRule.for_pair_type(a)
    cs = [_load_ref(ref) for ref in args.c or []]
    if args.class_:
        frag, _ = _load_class(args.class_, args.max_size)
        cs += [(frag.label(s), s) for s in frag.members()]
    if not cs:
        cs = default_c
    if not cs:
        raise UsageError("give at least one --c or --class")
    if a.size != 2:
        raise UsageError("--a must have two elements")
    mode = "exhaustive" if args.exhaustive else "rule"
    lines = ["command=ramsey", f"mode={mode}", f"a={a_name}", f"b={b_name}"]
    if mode == "rule":
        lines += [f"rule={rule.rule}", f"type_index={rule.type_index}"]
    all_defeated = True
    inconclusive = False
    for name, c in cs:
        if mode == "exhaustive":
            try:
                st = exhaustive_witness_check(a, b, c, limit=args.limit)
            except SearchSpaceTooLarge as exc:
                lines.append(f"c={name} status=too-large required={exc.required} limit={exc.limit}")
                inconclusive = True
                continue
            lines.append(
                f"c={name} witness={'true' if st.is_witness else 'false'} pairs={st.pairs} copies={st.copies} defeating={st.defeating_count}"
            )
            if st.is_witness:
                all_defeated = False
            else:
                lines.append(f"coloring={name} {_coloring_text(st.defeating)}")
        else:
            try:
                ver = verify_failure_witness(a, b, c, rule)
            except RuleInapplicable as exc:
                lines.append(f"c={name} status=rule-inapplicable cycle={_ints(exc.cycle)}")
                inconclusive = True
                continue
            lines.append(f"c={name} defeated={'true' if ver.defeated else 'false'} copies={ver.copies} order={_ints(ver.order)}")
            lines.append(f"coloring={name} {_coloring_text(ver.coloring)}")
            if not ver.defeated:
                all_defeated = False
                lines.append(f"monochromatic={name} {_ints(ver.monochromatic.map)}")
    if inconclusive and all_defeated:
        lines.append("outcome=inconclusive")
        code = EXIT_INCONCLUSIVE
    elif all_defeated:
        lines.append("outcome=failure")
        code = EXIT_FAIL
    else:
        lines.append("outcome=ramsey-holds" if mode == "exhaustive" else "outcome=not-defeated")
        code = EXIT_OK
    _emit(lines, args.format)
    return code


def cmd_demo(args) -> int:
    if args.which != "section3":
        raise UsageError(f"unknown demo {args.which!r}")
    report = demo_section3(args.max_size)
    lines = ["command=demo", "demo=section3", f"max_size={report.max_size}", "rule=index-order", f"a_size={report.a.size}", f"b_size={report.b.size}"]
    for row in report.rows:
        lines.append(f"verified={row.label} copies={row.copies} monochromatic={row.monochromatic}")
    lines.append(f"structures={len(report.rows)}")
    lines.append(f"outcome={'failure' if report.verified else 'not-verified'}")
    if args.format == "machine":
        sys.stdout.write("\n".join(lines) + "\n")
        sys.stdout.write(write_structure_file(report.a.sig, [("a", report.a), ("b", report.b)]))
    else:
        _emit(lines, "human")
    return EXIT_FAIL if report.verified else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ramseyforge", description="Total-order reducts and Ramsey-failure witnesses for finite class fragments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def fmt(sp):
        sp.add_argument("--format", choices=("human", "machine"), default="human")

    d = sub.add_parser("decide", help="order reduct or failure witness")
    d.add_argument("--class", dest="class_", required=True, help="builtin:NAME or a structure file")
    d.add_argument("--max-size", type=int)
    fmt(d)
    d.set_defaults(func=cmd_decide)

    c = sub.add_parser("check", help="bounded class properties")
    c.add_argument("--class", dest="class_", required=True)
    c.add_argument("--max-size", type=int)
    c.add_argument("--properties", default="hereditary,jep,amalgamation,strong,rigid")
    c.add_argument("--instance-size", type=int, help="largest A, B1, B2 in amalgamation instances")
    fmt(c)
    c.set_defaults(func=cmd_check)

    a = sub.add_parser("aut", help="automorphism group")
    a.add_argument("--structure", required=True, help="FILE#NAME")
    fmt(a)
    a.set_defaults(func=cmd_aut)

    i = sub.add_parser("iso", help="isomorphism test")
    i.add_argument("--a", required=True)
    i.add_argument("--b", required=True)
    fmt(i)
    i.set_defaults(func=cmd_iso)

    r = sub.add_parser("ramsey", help="check a defeating colouring")
    r.add_argument("--a")
    r.add_argument("--b")
    r.add_argument("--c", action="append")
    r.add_argument("--class", dest="class_")
    r.add_argument("--max-size", type=int)
    r.add_argument("--certificate", help="decide certificate supplying a, b and the colouring rule")
    r.add_argument("--exhaustive", action="store_true")
    r.add_argument("--limit", type=int, default=20, help="largest number of coloured pairs for --exhaustive")
    fmt(r)
    r.set_defaults(func=cmd_ramsey)

    m = sub.add_parser("demo", help="worked examples")
    m.add_argument("which", choices=("section3",))
    m.add_argument("--max-size", type=int, default=4)
    fmt(m)
    m.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ramseyforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, StructureError) as exc:
        print(f"ramseyforge: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, KeyError) as exc:
        print(f"ramseyforge: error: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    except ValueError as exc:
        print(f"ramseyforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
