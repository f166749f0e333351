"""Instance documents: one lattice plus spaces, degree tables, maps and named L-subsets.

Grammar (one statement per line; ``#`` starts a comment line)::

    lattice <name>
    elements <e1> <e2> ...
    <a> <= <b>                  order pair (reflexive-transitive closure is taken)
    <a> ~ <b>                   involution pair: a' = b and b' = a
    end

    space <name>
    points <x1> <x2> ...
    open <lset>                 optional; when present the opens form a crisp topology
    end

    fuzzy <name> on <space>
    degree <lset> = <element>   one line per L-subset of the space
    end

    lset <name> on <space> = <lset>

    maps <name> from <space> to <space>
    map <src-point> -> <dst-point>
    end

An ``<lset>`` is either the name of a declared ``lset`` or a literal
``{x=e, y=e}`` listing every point.  Tokens are runs of letters, digits and
``_ * . + -``.  :func:`serialize_instance` writes the canonical form, which
parses back to an equal document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fuzzy import AxiomDefect, AxiomError, LFuzzyTopology, axiom_defect
from .lattice import DEFAULT_CAP, Lattice, LatticeError, validate_lattice
from .lsets import DEFAULT_LSET_CAP, LSet, Space, SpaceError, SpaceMap
from .topology import LTopology, TopologyError

TOKEN = r"[A-Za-z0-9_*.+\-]+"
_TOKEN_RE = re.compile(TOKEN + r"$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(eq=False)
class SpaceSpec:
    space: Space
    topology: LTopology | None = None


@dataclass(eq=False)
class FuzzySpec:
    space_name: str
    table: np.ndarray
    defect: AxiomDefect | None = None
    topology: LFuzzyTopology | None = None


@dataclass(eq=False)
class MapSpec:
    source: str
    target: str
    map: SpaceMap


@dataclass(eq=False)
class InstanceDoc:
    lattice_name: str
    lattice: Lattice
    spaces: dict[str, SpaceSpec] = field(default_factory=dict)
    fuzzies: dict[str, FuzzySpec] = field(default_factory=dict)
    lsets: dict[str, tuple[str, LSet]] = field(default_factory=dict)
    maps: dict[str, MapSpec] = field(default_factory=dict)

    def key(self):
        L = self.lattice
        return (
            self.lattice_name, L.names, L.leq, L.inv,
            tuple((n, s.space.points, None if s.topology is None else tuple(s.topology.open_indices()))
                  for n, s in self.spaces.items()),
            tuple((n, f.space_name, tuple(int(v) for v in f.table)) for n, f in self.fuzzies.items()),
            tuple((n, s, tuple(A)) for n, (s, A) in self.lsets.items()),
            tuple((n, m.source, m.target, m.map.mapping) for n, m in self.maps.items()),
        )

    def __eq__(self, other):
        if not isinstance(other, InstanceDoc):
            return NotImplemented
        return self.key() == other.key()

    # ---- convenience

    def space(self, name: str) -> Space:
        return self.spaces[name].space

    def fuzzy(self, name: str) -> LFuzzyTopology:
        spec = self.fuzzies[name]
        if spec.topology is None:
            raise AxiomError(spec.defect.axiom if spec.defect else "table",
                             f"degree table {name!r} is not an L-fuzzy topology")
        return spec.topology

    def lsets_on(self, space_name: str) -> dict[str, LSet]:
        return {n: A for n, (s, A) in self.lsets.items() if s == space_name}

    def add_space(self, name: str, space: Space, topology: LTopology | None = None):
        self.spaces[name] = SpaceSpec(space, topology)

    def add_fuzzy(self, name: str, space_name: str, table, *, strict: bool = True):
        space = self.space(space_name)
        self.fuzzies[name] = make_fuzzy_spec(space, space_name, np.asarray(table), strict=strict)

    def add_lset(self, name: str, space_name: str, A: LSet):
        self.space(space_name).check(A)
        self.lsets[name] = (space_name, tuple(A))

    def add_map(self, name: str, source: str, target: str, mapping):
        f = SpaceMap(self.space(source), self.space(target), tuple(mapping))
        self.maps[name] = MapSpec(source, target, f)


def make_fuzzy_spec(space: Space, space_name: str, table: np.ndarray, *, strict: bool) -> FuzzySpec:
    table = np.array(table, dtype=np.int16)
    defect = axiom_defect(space, table)
    if defect is not None:
        if strict:
            raise AxiomError(defect.axiom, defect.message, defect.witness)
        return FuzzySpec(space_name, table, defect, None)
    return FuzzySpec(space_name, table, None, LFuzzyTopology(space, table))


# ---- parsing

class _Lines:
    def __init__(self, text: str):
        self.rows = []
        for no, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            self.rows.append((no, raw))
        self.pos = 0

    def next(self):
        if self.pos >= len(self.rows):
            return None
        row = self.rows[self.pos]
        self.pos += 1
        return row


def _tokens(no: int, raw: str) -> list[tuple[str, int]]:
    out = []
    for m in re.finditer(r"\{[^}]*\}|<=|->|[=~:]|" + TOKEN + r"|\S", raw):
        out.append((m.group(0), m.start() + 1))
    return out


def _need_token(no, tok, col):
    if not _TOKEN_RE.match(tok):
        raise ParseError(f"expected a name, got {tok!r}", no, col)
    return tok


def _parse_lset_literal(space: Space, text: str, no: int, col: int) -> LSet:
    body = text[1:-1].strip()
    vals: dict[int, int] = {}
    if body:
        for part in body.split(","):
            if "=" not in part:
                raise ParseError(f"bad L-subset entry {part.strip()!r}", no, col)
            p, e = (s.strip() for s in part.split("=", 1))
            try:
                x = space.point(p)
            except SpaceError:
                raise ParseError(f"undeclared point {p!r}", no, col) from None
            try:
                v = space.lattice.element(e)
            except LatticeError:
                raise ParseError(f"undeclared element {e!r}", no, col) from None
            if x in vals:
                raise ParseError(f"point {p!r} given twice", no, col)
            vals[x] = v
    if len(vals) != space.k:
        raise ParseError("L-subset literal must give a value for every point", no, col)
    return tuple(vals[x] for x in range(space.k))


def parse_instance_text(text: str, *, strict: bool = True,
                        cap_lattice: int = DEFAULT_CAP, cap_lsets: int = DEFAULT_LSET_CAP) -> InstanceDoc:
    """Parse an instance document.

    With ``strict`` a degree table violating the axioms is an error; without
    it the table is kept raw together with its defect.
    """
    lines = _Lines(text)
    doc: InstanceDoc | None = None

    def resolve_lset(space_name: str, tok: str, no: int, col: int) -> LSet:
        space = doc.space(space_name)
        if tok.startswith("{"):
            return _parse_lset_literal(space, tok, no, col)
        if tok not in doc.lsets:
            raise ParseError(f"unknown L-subset {tok!r}", no, col)
        s, A = doc.lsets[tok]
        if s != space_name:
            raise ParseError(f"L-subset {tok!r} lives on {s!r}, not {space_name!r}", no, col)
        return A

    def block(no0: str):
        while True:
            row = lines.next()
            if row is None:
                raise ParseError(f"block opened on line {no0} is never closed")
            no, raw = row
            toks = _tokens(no, raw)
            if toks[0][0] == "end":
                if len(toks) > 1:
                    raise ParseError("unexpected text after 'end'", no, toks[1][1])
                return
            yield no, toks

    while True:
        row = lines.next()
        if row is None:
            break
        no, raw = row
        toks = _tokens(no, raw)
        head, col = toks[0]
        words = [t for t, _ in toks]
        if head == "lattice":
            if doc is not None:
                raise ParseError("only one lattice per document", no, col)
            if len(toks) != 2:
                raise ParseError("expected 'lattice <name>'", no, col)
            lname = _need_token(no, *toks[1])
            elements, order, inv = [], [], []
            declared: set[str] = set()
            for bno, btoks in block(str(no)):
                bw = [t for t, _ in btoks]
                if bw[0] == "elements":
                    for t, c in btoks[1:]:
                        elements.append(_need_token(bno, t, c))
                    declared.update(elements)
                elif len(bw) == 3 and bw[1] in ("<=", "~"):
                    for t, c in (btoks[0], btoks[2]):
                        if t not in declared:
                            raise ParseError(f"undeclared element {t!r}", bno, c)
                    (order if bw[1] == "<=" else inv).append((bw[0], bw[2]))
                else:
                    raise ParseError("expected 'elements ...', 'a <= b' or 'a ~ b'", bno, btoks[0][1])
            try:
                L = validate_lattice(elements, order, inv, cap=cap_lattice)
            except LatticeError as exc:
                raise ParseError(f"invalid lattice: {exc}", no, col) from None
            doc = InstanceDoc(lname, L)
            continue
        if doc is None:
            raise ParseError("a lattice block must come first", no, col)
        if head == "space":
            if len(toks) != 2:
                raise ParseError("expected 'space <name>'", no, col)
            sname = _need_token(no, *toks[1])
            if sname in doc.spaces:
                raise ParseError(f"space {sname!r} declared twice", no, toks[1][1])
            points, open_rows = None, []
            for bno, btoks in block(str(no)):
                if btoks[0][0] == "points":
                    points = [_need_token(bno, t, c) for t, c in btoks[1:]]
                elif btoks[0][0] == "open" and len(btoks) == 2:
                    open_rows.append((bno, btoks[1]))
                else:
                    raise ParseError("expected 'points ...' or 'open <lset>'", bno, btoks[0][1])
            if not points:
                raise ParseError(f"space {sname!r} has no points", no, col)
            try:
                space = Space(doc.lattice, points, cap=cap_lsets)
            except SpaceError as exc:
                raise ParseError(str(exc), no, col) from None
            doc.add_space(sname, space)
            topology = None
            if open_rows:
                opens = [space.encode(resolve_lset(sname, t, bno, c)) for bno, (t, c) in open_rows]
                try:
                    topology = LTopology(space, opens)
                except TopologyError as exc:
                    raise ParseError(f"opens of {sname!r} do not form a topology: {exc}", no, col) from None
            doc.spaces[sname].topology = topology
        elif head == "fuzzy":
            if len(words) != 4 or words[2] != "on":
                raise ParseError("expected 'fuzzy <name> on <space>'", no, col)
            fname, sname = words[1], words[3]
            if sname not in doc.spaces:
                raise ParseError(f"unknown space {sname!r}", no, toks[3][1])
            space = doc.space(sname)
            table = np.full(space.n, -1, dtype=np.int16)
            for bno, btoks in block(str(no)):
                bw = [t for t, _ in btoks]
                if len(bw) != 4 or bw[0] != "degree" or bw[2] != "=":
                    raise ParseError("expected 'degree <lset> = <element>'", bno, btoks[0][1])
                A = resolve_lset(sname, bw[1], bno, btoks[1][1])
                try:
                    v = doc.lattice.element(bw[3])
                except LatticeError:
                    raise ParseError(f"undeclared element {bw[3]!r}", bno, btoks[3][1]) from None
                i = space.encode(A)
                if table[i] >= 0:
                    raise ParseError(f"degree of {space.format(A)} given twice", bno, btoks[1][1])
                table[i] = v
            missing = np.flatnonzero(table < 0)
            if missing.size:
                raise ParseError(f"fuzzy table {fname!r} has no degree for "
                                 f"{space.format(space.decode(int(missing[0])))}", no, col)
            try:
                doc.fuzzies[fname] = make_fuzzy_spec(space, sname, table, strict=strict)
            except AxiomError as exc:
                wit = ", ".join(space.format(space.decode(i)) for i in exc.witness)
                raise ParseError(f"fuzzy table {fname!r} violates {exc} [{wit}]", no, col) from None
        elif head == "lset":
            if len(words) != 6 or words[2] != "on" or words[4] != "=":
                raise ParseError("expected 'lset <name> on <space> = <lset>'", no, col)
            name, sname = words[1], words[3]
            if sname not in doc.spaces:
                raise ParseError(f"unknown space {sname!r}", no, toks[3][1])
            doc.lsets[name] = (sname, resolve_lset(sname, words[5], no, toks[5][1]))
        elif head == "maps":
            if len(words) != 6 or words[2] != "from" or words[4] != "to":
                raise ParseError("expected 'maps <name> from <space> to <space>'", no, col)
            name, src, dst = words[1], words[3], words[5]
            for w, (t, c) in ((src, toks[3]), (dst, toks[5])):
                if w not in doc.spaces:
                    raise ParseError(f"unknown space {w!r}", no, c)
            S, Y = doc.space(src), doc.space(dst)
            mapping: dict[int, int] = {}
            for bno, btoks in block(str(no)):
                bw = [t for t, _ in btoks]
                if len(bw) != 4 or bw[0] != "map" or bw[2] != "->":
                    raise ParseError("expected 'map <src-point> -> <dst-point>'", bno, btoks[0][1])
                try:
                    x = S.point(bw[1])
                except SpaceError:
                    raise ParseError(f"undeclared point {bw[1]!r}", bno, btoks[1][1]) from None
                try:
                    y = Y.point(bw[3])
                except SpaceError:
                    raise ParseError(f"undeclared point {bw[3]!r}", bno, btoks[3][1]) from None
                mapping[x] = y
            if len(mapping) != S.k:
                raise ParseError(f"map {name!r} is not total", no, col)
            try:
                doc.add_map(name, src, dst, [mapping[x] for x in range(S.k)])
            except SpaceError as exc:
                raise ParseError(str(exc), no, col) from None
        else:
            raise ParseError(f"unknown statement {head!r}", no, col)
    if doc is None:
        raise ParseError("document declares no lattice")
    return doc


def parse_instance(path: str | Path, **kwargs) -> InstanceDoc:
    return parse_instance_text(Path(path).read_text(), **kwargs)


# ---- serialization

def serialize_lattice(name: str, L: Lattice) -> list[str]:
    out = [f"lattice {name}", "elements " + " ".join(L.names)]
    out += [f"{L.names[a]} <= {L.names[b]}" for a, b in L.covers()]
    out += [f"{L.names[a]} ~ {L.names[L.inv[a]]}" for a in range(L.n) if a <= L.inv[a]]
    out.append("end")
    return out


def serialize_instance(doc: InstanceDoc) -> str:
    out = serialize_lattice(doc.lattice_name, doc.lattice)
    for name, spec in doc.spaces.items():
        S = spec.space
        out += ["", f"space {name}", "points " + " ".join(S.points)]
        if spec.topology is not None:
            out += [f"open {S.format(A)}" for A in spec.topology.opens()]
        out.append("end")
    for name, (sname, A) in doc.lsets.items():
        out += ["", f"lset {name} on {sname} = {doc.space(sname).format(A)}"]
    for name, spec in doc.fuzzies.items():
        S = doc.space(spec.space_name)
        out += ["", f"fuzzy {name} on {spec.space_name}"]
        out += [f"degree {S.format(S.decode(i))} = {doc.lattice.names[v]}"
                for i, v in enumerate(spec.table)]
        out.append("end")
    for name, spec in doc.maps.items():
        S, Y = doc.space(spec.source), doc.space(spec.target)
        out += ["", f"maps {name} from {spec.source} to {spec.target}"]
        out += [f"map {S.points[x]} -> {Y.points[y]}" for x, y in enumerate(spec.map.mapping)]
        out.append("end")
    return "\n".join(out) + "\n"


def lattice_from_text(text: str, *, cap: int = DEFAULT_CAP) -> Lattice:
    return parse_instance_text(text, cap_lattice=cap).lattice
