"""Plain-text structure files.

::

    # comment
    signature t
    relation arrow 2
    structure c3
    size 3
    tuple arrow 0 1
    tuple arrow 1 2
    tuple arrow 2 0
    end

Certificates put ``key=value`` lines in front of a structure file; readers
here skip those lines, so ``FILE#NAME`` references work on both.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .core import OutOfRangeElement, Signature, Structure, StructureError, validate


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class StructureFile:
    sig: Signature
    structures: tuple[tuple[str, Structure], ...]

    def get(self, name: str) -> Structure:
        for n, s in self.structures:
            if n == name:
                return s
        raise KeyError(f"no structure named {name!r}")

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.structures]


def split_certificate(text: str) -> tuple[list[tuple[str, str]], str]:
    """Separate ``key=value`` lines from structure-file lines.

    Key-value lines are blanked rather than removed so line numbers in parse
    errors still match the original text.
    """
    pairs = []
    rest = []
    for line in text.splitlines():
        if "=" in line and not line.lstrip().startswith("#"):
            key, _, value = line.partition("=")
            pairs.append((key.strip(), value.strip()))
            rest.append("")
        else:
            rest.append(line)
    return pairs, "\n".join(rest) + ("\n" if text.endswith("\n") else "")


def _int(tok: str, line: int, what: str) -> int:
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"{what} must be a decimal integer, got {tok!r}", line) from None
    if value < 0 or not tok.isdigit():
        raise ParseError(f"{what} must be a non-negative decimal integer, got {tok!r}", line)
    return value


def parse_structure_file(text: str) -> StructureFile:
    lines = text.splitlines()
    rows = [(i + 1, ln.split()) for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")]
    last_line = len(lines) if lines else 1
    pos = 0
    if not rows or rows[0][1][0] != "signature":
        raise ParseError("file must start with 'signature <name>'", rows[0][0] if rows else 1)
    lineno, toks = rows[0]
    if len(toks) != 2:
        raise ParseError("expected 'signature <name>'", lineno)
    sig_name = toks[1]
    pos = 1
    relations = []
    while pos < len(rows) and rows[pos][1][0] == "relation":
        lineno, toks = rows[pos]
        if len(toks) != 3:
            raise ParseError("expected 'relation <name> <arity>'", lineno)
        relations.append((toks[1], _int(toks[2], lineno, "arity")))
        pos += 1
    try:
        sig = Signature(tuple(relations), name=sig_name)
    except StructureError as exc:
        raise ParseError(str(exc), rows[min(pos, len(rows) - 1)][0]) from None
    arity = dict(sig.relations)

    structures: list[tuple[str, Structure]] = []
    names: set[str] = set()
    while pos < len(rows):
        lineno, toks = rows[pos]
        if toks[0] != "structure" or len(toks) != 2:
            raise ParseError("expected 'structure <name>'", lineno)
        name = toks[1]
        if name in names:
            raise ParseError(f"duplicate structure name {name!r}", lineno)
        names.add(name)
        pos += 1
        if pos >= len(rows) or rows[pos][1][0] != "size" or len(rows[pos][1]) != 2:
            raise ParseError("expected 'size <n>'", rows[pos][0] if pos < len(rows) else last_line)
        lineno, toks = rows[pos]
        size = _int(toks[1], lineno, "size")
        pos += 1
        tuples: dict[str, set] = {r: set() for r in sig.names}
        closed = False
        while pos < len(rows):
            lineno, toks = rows[pos]
            pos += 1
            if toks[0] == "end":
                if len(toks) != 1:
                    raise ParseError("'end' takes no arguments", lineno)
                closed = True
                break
            if toks[0] != "tuple" or len(toks) < 2:
                raise ParseError("expected 'tuple <relation> <elements...>' or 'end'", lineno)
            rel = toks[1]
            if rel not in arity:
                raise ParseError(f"unknown relation {rel!r}", lineno)
            elems = tuple(_int(t, lineno, "element") for t in toks[2:])
            if len(elems) != arity[rel]:
                raise ParseError(f"relation {rel!r} has arity {arity[rel]}, got {len(elems)} elements", lineno)
            for x in elems:
                if x >= size:
                    err = OutOfRangeElement(f"line {lineno}: element {x} outside 0..{size - 1}", relation=rel, tuple_=elems)
                    err.line = lineno
                    raise err
            tuples[rel].add(elems)
        if not closed:
            raise ParseError(f"structure {name!r} is missing 'end'", last_line)
        s = Structure(sig, size, tuple(frozenset(tuples[r]) for r in sig.names))
        try:
            validate(sig, s)
        except StructureError as exc:
            exc.line = lineno
            raise
        structures.append((name, s))
    return StructureFile(sig, tuple(structures))


def write_structure_file(sig: Signature, structures) -> str:
    """Inverse of :func:`parse_structure_file` for its canonical layout:
    relations in signature order, tuples sorted, no comments or blank lines."""
    out = [f"signature {sig.name}"]
    out += [f"relation {name} {arity}" for name, arity in sig.relations]
    items = structures.items() if hasattr(structures, "items") else structures
    for name, s in items:
        out.append(f"structure {name}")
        out.append(f"size {s.size}")
        for rel, ts in zip(sig.names, s.tuples):
            for t in sorted(ts):
                out.append(" ".join(["tuple", rel, *map(str, t)]))
        out.append("end")
    return "\n".join(out) + "\n"


def read_file(path: str | Path) -> tuple[list[tuple[str, str]], StructureFile]:
    text = Path(path).read_text(encoding="utf-8")
    pairs, rest = split_certificate(text)
    return pairs, parse_structure_file(rest)


def load_ref(ref: str) -> tuple[str, Structure]:
    """Resolve ``FILE#NAME`` (``#NAME`` optional when the file has one
    structure)."""
    path, _, name = ref.partition("#")
    _, sf = read_file(path)
    if not name:
        if len(sf.structures) != 1:
            raise KeyError(f"{path} holds {len(sf.structures)} structures; use FILE#NAME")
        return sf.structures[0]
    return name, sf.get(name)
