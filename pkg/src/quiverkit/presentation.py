"""Bound quiver presentations: quivers, paths, relations, parsing.

A presentation is a quiver together with a list of homogeneous relations
(rational linear combinations of parallel paths of equal length >= 2) and
presents the algebra kQ/I over the rationals.  The composition convention
writes the first traversed arrow leftmost: for a: 1->2 and b: 2->3 the
path "a b" runs from 1 to 3.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InvalidPresentationError, NotComposableError, ParseError
from .linalg import QQ, integerize


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple
    arrows: tuple

    def __post_init__(self):
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise InvalidPresentationError(f"duplicate vertex {v!r}")
            seen.add(v)
        names = set()
        for a in self.arrows:
            if a.name in names:
                raise InvalidPresentationError(f"duplicate arrow name {a.name!r}")
            names.add(a.name)
            if a.source not in seen or a.target not in seen:
                raise InvalidPresentationError(
                    f"arrow {a.name!r} has undeclared endpoint")

    @cached_property
    def vertex_index(self):
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_by_name(self):
        return {a.name: a for a in self.arrows}

    @cached_property
    def arrows_from(self):
        out = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a)
        return {v: tuple(lst) for v, lst in out.items()}

    @cached_property
    def arrows_into(self):
        inc = {v: [] for v in self.vertices}
        for a in self.arrows:
            inc[a.target].append(a)
        return {v: tuple(lst) for v, lst in inc.items()}

    def trivial_path(self, v):
        if v not in self.vertex_index:
            raise InvalidPresentationError(f"unknown vertex {v!r}")
        return Path(v, (), v)

    def path(self, arrow_names):
        """Path from a nonempty sequence of composable arrow names."""
        names = tuple(arrow_names)
        if not names:
            raise InvalidPresentationError("path needs at least one arrow")
        arrows = []
        for n in names:
            a = self.arrow_by_name.get(n)
            if a is None:
                raise InvalidPresentationError(f"unknown arrow {n!r}")
            arrows.append(a)
        for x, y in zip(arrows, arrows[1:]):
            if x.target != y.source:
                raise NotComposableError(
                    f"arrows {x.name!r} and {y.name!r} do not compose")
        return Path(arrows[0].source, names, arrows[-1].target)

    def is_valid_path(self, p):
        try:
            q = self.path(p.arrows) if p.arrows else self.trivial_path(p.source)
        except (InvalidPresentationError, NotComposableError):
            return False
        return q == p


@dataclass(frozen=True)
class Path:
    """A path of the quiver: a base vertex for trivial paths, else arrows."""

    source: str
    arrows: tuple
    target: str

    @property
    def length(self):
        return len(self.arrows)

    @property
    def is_trivial(self):
        return not self.arrows

    def key(self):
        return (len(self.arrows), self.arrows, self.source)

    def vertices(self, quiver):
        vs = [self.source]
        for n in self.arrows:
            vs.append(quiver.arrow_by_name[n].target)
        return vs

    def __str__(self):
        return " ".join(self.arrows) if self.arrows else f"e({self.source})"


def compose(p, q):
    """Concatenation p then q; trivial paths are two-sided identities."""
    if p.target != q.source:
        raise NotComposableError(
            f"target {p.target!r} of left factor differs from source {q.source!r}")
    if p.is_trivial:
        return q
    if q.is_trivial:
        return p
    return Path(p.source, p.arrows + q.arrows, q.target)


@dataclass(frozen=True)
class Relation:
    """Nonzero rational combination of parallel paths of one common length."""

    terms: tuple  # of (coefficient, Path), sorted by path key

    @staticmethod
    def make(terms):
        merged = {}
        for c, p in terms:
            c = QQ(c)
            if p in merged:
                merged[p] += c
            else:
                merged[p] = c
        cleaned = sorted(((c, p) for p, c in merged.items() if c),
                         key=lambda t: t[1].key())
        if not cleaned:
            raise InvalidPresentationError("relation with no nonzero term")
        first = cleaned[0][1]
        for _, p in cleaned[1:]:
            if p.source != first.source or p.target != first.target:
                raise InvalidPresentationError(
                    "relation terms are not parallel paths")
            if p.length != first.length:
                raise InvalidPresentationError(
                    "relation terms have different lengths")
        return Relation(tuple(cleaned))

    @property
    def source(self):
        return self.terms[0][1].source

    @property
    def target(self):
        return self.terms[0][1].target

    @property
    def length(self):
        return self.terms[0][1].length

    @property
    def is_monomial(self):
        return len(self.terms) == 1

    def normalized(self):
        """Integer-coprime coefficients, positive on the first path."""
        ints = integerize([c for c, _ in self.terms])
        return Relation(tuple((QQ(i), p) for i, (_, p) in zip(ints, self.terms)))

    def paths(self):
        return tuple(p for _, p in self.terms)

    def __str__(self):
        out = []
        for i, (c, p) in enumerate(self.terms):
            num, den = int(c.numerator), int(c.denominator)
            sign = "-" if num < 0 else "+"
            mag = abs(num)
            coeff = "" if (mag == 1 and den == 1) else (
                f"{mag}*" if den == 1 else f"{mag}/{den}*")
            body = coeff + str(p)
            if i == 0:
                out.append(("-" if num < 0 else "") + body)
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)


@dataclass(frozen=True)
class Presentation:
    quiver: Quiver
    relations: tuple = field(default_factory=tuple)

    def __post_init__(self):
        for r in self.relations:
            for _, p in r.terms:
                if p.length < 2:
                    raise InvalidPresentationError(
                        f"relation path {p} has length < 2")
                if not self.quiver.is_valid_path(p):
                    raise InvalidPresentationError(
                        f"relation path {p} is not a path of the quiver")

    @property
    def vertices(self):
        return self.quiver.vertices

    @property
    def arrows(self):
        return self.quiver.arrows

    def normalized_relations(self):
        return tuple(sorted({r.normalized() for r in self.relations},
                            key=lambda r: tuple(t[1].key() for t in r.terms)))

    def serialize(self):
        lines = ["vertices: " + " ".join(self.vertices)]
        for a in self.arrows:
            lines.append(f"arrow: {a.name} {a.source} {a.target}")
        for r in self.relations:
            lines.append("relation: " + str(r.normalized()))
        return "\n".join(lines) + "\n"


def reverse_path(p):
    return Path(p.target, tuple(reversed(p.arrows)), p.source)


def opposite(pres):
    """Opposite presentation: arrows and all relation paths reversed."""
    q = Quiver(pres.quiver.vertices,
               tuple(Arrow(a.name, a.target, a.source) for a in pres.quiver.arrows))
    rels = tuple(Relation.make([(c, reverse_path(p)) for c, p in r.terms])
                 for r in pres.relations)
    return Presentation(q, rels)


_NAME = re.compile(r"[^\s#]+$")


def _check_name(tok, line_no, col):
    if not _NAME.match(tok) or re.match(r"^\d+\*", tok):
        raise ParseError(f"invalid name {tok!r}", line_no, col)


def parse_presentation(text):
    """Parse the line-oriented quiver file grammar.

    vertices: v1 v2 ... vn
    arrow: name src dst
    relation: [k*]p1 p2 ... (+|-) [k*]q1 q2 ...
    '#' starts a comment; blank lines are ignored.
    """
    vertices = None
    arrows = []
    relation_specs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: ...'", line_no, 1)
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        if key == "vertices":
            if vertices is not None:
                raise ParseError("duplicate vertices line", line_no, 1)
            vertices = rest.split()
            if not vertices:
                raise ParseError("empty vertex list", line_no, 1)
            for v in vertices:
                _check_name(v, line_no, 1)
        elif key == "arrow":
            parts = rest.split()
            if len(parts) != 3:
                raise ParseError("arrow line needs 'name src dst'", line_no, 1)
            _check_name(parts[0], line_no, 1)
            arrows.append(tuple(parts))
        elif key == "relation":
            relation_specs.append((line_no, rest))
        else:
            raise ParseError(f"unknown section {key!r}", line_no, 1)
    if vertices is None:
        raise ParseError("missing vertices line", 1, 1)
    try:
        quiver = Quiver(tuple(vertices),
                        tuple(Arrow(n, s, t) for n, s, t in arrows))
    except InvalidPresentationError as exc:
        raise ParseError(str(exc), 1, 1) from exc

    relations = []
    for line_no, spec in relation_specs:
        relations.append(_parse_relation(quiver, spec, line_no))
    return Presentation(quiver, tuple(relations))


def parse_relation(quiver, spec):
    """Parse one relation body ('a b - c d') over an existing quiver."""
    return _parse_relation(quiver, spec, None)


def _parse_relation(quiver, spec, line_no):
    chunks = re.split(r"\s([+-])\s", " " + spec.strip() + " ")
    chunks = [c.strip() for c in chunks]
    if not chunks or not chunks[0]:
        raise ParseError("empty relation", line_no, 1)
    terms = []
    sign = 1
    body = chunks[0]
    if body.startswith("- "):
        sign, body = -1, body[2:]
    pending = [(sign, body)]
    i = 1
    while i < len(chunks):
        pending.append((1 if chunks[i] == "+" else -1, chunks[i + 1]))
        i += 2
    for sign, body in pending:
        words = body.split()
        if not words:
            raise ParseError("empty relation term", line_no, 1)
        coeff = QQ(sign)
        m = re.match(r"^(\d+)\*(.*)$", words[0])
        if m:
            coeff *= QQ(int(m.group(1)))
            words[0] = m.group(2)
            if not words[0]:
                words = words[1:]
        if not words:
            raise ParseError("coefficient without path", line_no, 1)
        for w in words:
            if w not in quiver.arrow_by_name:
                raise ParseError(f"unknown arrow {w!r} in relation", line_no, 1)
        try:
            path = quiver.path(words)
        except NotComposableError as exc:
            raise ParseError(str(exc), line_no, 1) from exc
        terms.append((coeff, path))
    try:
        rel = Relation.make(terms)
    except InvalidPresentationError as exc:
        raise ParseError(str(exc), line_no, 1) from exc
    if rel.length < 2:
        raise ParseError("relation paths must have length >= 2", line_no, 1)
    return rel


def serialize_presentation(pres):
    return pres.serialize()
