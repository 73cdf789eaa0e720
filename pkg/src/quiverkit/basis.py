"""Graded linear bases of bound quiver algebras.

Relations are homogeneous, so kQ/I is graded by path length and a basis
can be computed degree by degree: at each length d the ideal's graded
piece is spanned by arrow-extensions of the previous piece together with
path-times-relation products, and surviving paths form the basis.  The
computation stops at the first empty degree (the algebra is then finite
dimensional and the count exact) or at the degree cap (truncated).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (EmptyAlgebraError, InfiniteDimensionalError,
                     InvalidPresentationError, PathExplosionError)
from .linalg import QQ
from .presentation import Path, Presentation, Quiver, Relation, compose

DEFAULT_MAX_DEGREE = 64
PATHS_PER_DEGREE_CAP = 200_000


@dataclass(frozen=True)
class BasisReport:
    """Basis paths per degree plus the truncation status."""

    degrees: tuple          # tuple of tuples of Path
    truncated: bool
    max_degree: int

    @property
    def total(self):
        return sum(len(d) for d in self.degrees)

    @property
    def dims(self):
        return tuple(len(d) for d in self.degrees)

    @property
    def is_finite(self):
        return not self.truncated


class Algebra:
    """Reduction structure for kQ/I up to a degree cap."""

    def __init__(self, pres, max_degree=DEFAULT_MAX_DEGREE):
        self.pres = pres
        self.max_degree = max_degree
        quiver = pres.quiver
        # per degree: {path: reduction dict over basis paths}
        self._reduce = [{} for _ in range(max_degree + 1)]
        self._basis = []          # list of tuples of Path
        self._paths = []          # all paths per degree, ordered
        self.finite = False

        trivial = [quiver.trivial_path(v) for v in quiver.vertices]
        for p in trivial:
            self._reduce[0][p] = {p: QQ(1)}
        self._basis.append(tuple(trivial))
        self._paths.append(tuple(trivial))

        if max_degree == 0:
            self.truncated = bool(quiver.arrows)
            self._finalize()
            return

        arrow_paths = [Path(a.source, (a.name,), a.target) for a in quiver.arrows]
        arrow_paths.sort(key=lambda p: p.key())
        for p in arrow_paths:
            self._reduce[1][p] = {p: QQ(1)}
        self._basis.append(tuple(arrow_paths))
        self._paths.append(tuple(arrow_paths))

        rel_by_len = {}
        for r in pres.relations:
            rel_by_len.setdefault(r.length, []).append(r)

        # echelon ideal rows of the previous degree, used to span the next
        prev_rows = []
        prev_paths = arrow_paths
        truncated = bool(arrow_paths)
        for d in range(2, max_degree + 1):
            if not prev_paths:
                truncated = False
                break
            paths_d = []
            for p in prev_paths:
                for a in quiver.arrows_from[p.target]:
                    paths_d.append(Path(p.source, p.arrows + (a.name,), a.target))
            if len(paths_d) > PATHS_PER_DEGREE_CAP:
                raise PathExplosionError(
                    f"{len(paths_d)} paths at degree {d} exceed the safety cap")
            paths_d.sort(key=lambda p: p.key())
            rows = []
            for prow in prev_rows:
                for a in quiver.arrows_from[next(iter(prow)).target]:
                    rows.append({Path(p.source, p.arrows + (a.name,), a.target): c
                                 for p, c in prow.items()})
            for rl, rels in rel_by_len.items():
                head = d - rl
                if head < 0 or head >= len(self._paths):
                    continue
                for r in rels:
                    for u in self._paths[head]:
                        if u.target != r.source:
                            continue
                        rows.append({compose(u, p): c for c, p in r.terms})
            echelon = self._eliminate(paths_d, rows, d)
            prev_rows = echelon
            prev_paths = self._basis[d]
            if not prev_paths:
                truncated = False
                break
        else:
            truncated = truncated and bool(self._basis[-1])
        self.truncated = truncated
        self._finalize()

    def _eliminate(self, paths_d, rows, d):
        # per-(source, target) block echelon; pivot = largest path in block
        pivots = {}   # pivot Path -> row dict (monic, inter-reduced)
        for row in rows:
            row = dict(row)
            while True:
                hit = [p for p in row if p in pivots and row[p]]
                if not hit:
                    break
                for p in hit:
                    c = row.pop(p)
                    if not c:
                        continue
                    for q, cq in pivots[p].items():
                        if q == p:
                            continue
                        row[q] = row.get(q, QQ(0)) - c * cq
            row = {p: c for p, c in row.items() if c}
            if not row:
                continue
            lead = max(row, key=lambda p: p.key())
            inv = QQ(1) / row[lead]
            row = {p: c * inv for p, c in row.items()}
            for piv, prow in pivots.items():
                c = prow.get(lead)
                if c:
                    for q, cq in row.items():
                        if q == lead:
                            continue
                        prow[q] = prow.get(q, QQ(0)) - c * cq
                    prow.pop(lead)
                    pivots[piv] = {p: x for p, x in prow.items() if x}
            pivots[lead] = row
        basis = tuple(p for p in paths_d if p not in pivots)
        red = self._reduce[d]
        one = QQ(1)
        for p in basis:
            red[p] = {p: one}
        for piv, row in pivots.items():
            red[piv] = {q: -c for q, c in row.items() if q != piv}
        self._basis.append(basis)
        self._paths.append(tuple(paths_d))
        return list(pivots.values())

    def _finalize(self):
        self.finite = not self.truncated
        self.report = BasisReport(tuple(self._basis), self.truncated,
                                  self.max_degree)
        self.dim = self.report.total
        self.computed_degree = len(self._basis) - 1

    def reduce_path(self, p):
        """Normal form of a path as {basis path: coefficient}."""
        d = p.length
        if d <= self.computed_degree:
            r = self._reduce[d].get(p)
            if r is None:
                raise InvalidPresentationError(f"{p} is not a path of the quiver")
            return r
        if self.finite:
            return {}
        raise InfiniteDimensionalError(
            f"path of length {d} exceeds the truncation degree "
            f"{self.computed_degree}")

    def reduce_terms(self, terms):
        out = {}
        for c, p in terms:
            for q, cq in self.reduce_path(p).items():
                v = out.get(q, QQ(0)) + c * cq
                if v:
                    out[q] = v
                else:
                    out.pop(q, None)
        return out

    def is_zero(self, terms):
        return not self.reduce_terms(terms)

    def path_is_zero(self, p):
        return not self.reduce_path(p)

    def basis_paths(self):
        return [p for deg in self._basis for p in deg]

    def basis_from(self, v):
        return [p for deg in self._basis for p in deg if p.source == v]

    def basis_between(self, s, t):
        return [p for deg in self._basis
                for p in deg if p.source == s and p.target == t]

    def paths_at_degree(self, d):
        return self._paths[d] if d <= self.computed_degree else ()


@lru_cache(maxsize=256)
def algebra_for(pres, max_degree=DEFAULT_MAX_DEGREE):
    return Algebra(pres, max_degree)


def path_basis(pres, max_degree=DEFAULT_MAX_DEGREE):
    """Basis of kQ/I per degree; truncation is flagged, never an error."""
    return algebra_for(pres, max_degree).report


def is_admissible(pres, max_degree=DEFAULT_MAX_DEGREE):
    """True when the graded quotient dies out within the degree cap."""
    return path_basis(pres, max_degree).is_finite


def quotient(pres, extra):
    """Presentation of (kQ/I)/<extra>: the relation sets are joined."""
    seen = {r.normalized() for r in pres.relations}
    rels = list(pres.relations)
    for r in extra:
        n = r.normalized()
        if n not in seen:
            seen.add(n)
            rels.append(r)
    return Presentation(pres.quiver, tuple(rels))


def delete_vertices(pres, drop):
    """Presentation of the idempotent quotient A/AeA, e = sum over `drop`.

    Arrows and relation terms that touch a dropped vertex disappear; a
    multi-term relation keeps its surviving terms.  Restricting generators
    is complete: any ideal element supported off the dropped vertices is a
    kQ'-combination of restricted generators.
    """
    drop = set(drop)
    unknown = drop - set(pres.vertices)
    if unknown:
        raise InvalidPresentationError(
            f"cannot delete undeclared vertices {sorted(unknown)!r}")
    if not drop:
        return pres
    kept = tuple(v for v in pres.vertices if v not in drop)
    if not kept:
        raise EmptyAlgebraError("all vertices deleted")
    arrows = tuple(a for a in pres.arrows
                   if a.source not in drop and a.target not in drop)
    quiver = Quiver(kept, arrows)
    rels = []
    seen = set()
    for r in pres.relations:
        survivors = [(c, p) for c, p in r.terms
                     if not drop.intersection(p.vertices(pres.quiver))]
        if not survivors:
            continue
        rel = Relation.make(survivors)
        n = rel.normalized()
        if n not in seen:
            seen.add(n)
            rels.append(rel)
    return Presentation(quiver, tuple(rels))
