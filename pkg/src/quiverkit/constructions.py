"""Grid quivers, tensor and enveloping algebras, vertex gluing and
crossing-path supplements, grid embeddings, diamond commutativity.

Grid coordinates follow the figures: horizontal arrows raise the first
coordinate, vertical arrows raise the second, and vertices serialize as
"(i,j)".  The enveloping algebra of the linear A_n quiver is isomorphic
to the square grid, with the second coordinate counted against the
arrows of the opposite factor; the built-in deletion sets for the A and
D families are expressed over the enveloping algebra's own vertex names.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iterprod

from .basis import algebra_for, delete_vertices
from .errors import InvalidPresentationError, NotPDSError, QuiverKitError
from .linalg import QQ
from .modules import opposite_for
from .presentation import (Arrow, Path, Presentation, Quiver, Relation,
                           compose)


def grid_presentation(m, n):
    """Commutative m x n grid: the tensor of two linear quivers."""
    if m < 1 or n < 1:
        raise InvalidPresentationError("grid needs positive dimensions")
    verts = tuple(f"({i},{j})" for i in range(1, m + 1) for j in range(1, n + 1))
    arrows = []
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if i < m:
                arrows.append(Arrow(f"h({i},{j})", f"({i},{j})", f"({i+1},{j})"))
            if j < n:
                arrows.append(Arrow(f"v({i},{j})", f"({i},{j})", f"({i},{j+1})"))
    quiver = Quiver(verts, tuple(arrows))
    rels = []
    for i in range(1, m):
        for j in range(1, n):
            p = quiver.path((f"h({i},{j})", f"v({i+1},{j})"))
            q = quiver.path((f"v({i},{j})", f"h({i},{j+1})"))
            rels.append(Relation.make([(QQ(1), p), (QQ(-1), q)]))
    return Presentation(quiver, tuple(rels))


def tensor(a, b):
    """Tensor product presentation on the product quiver.

    Arrows are alpha (x) e_y and e_x (x) beta; the ideal is generated by
    both factors' relations in every slice plus one commutativity
    relation per mixed square.
    """
    va, vb = a.quiver.vertices, b.quiver.vertices
    verts = tuple(f"({x},{y})" for x in va for y in vb)
    arrows = []
    left_name = {}
    right_name = {}
    for al in a.quiver.arrows:
        for y in vb:
            name = f"{al.name}*e_{y}"
            left_name[(al.name, y)] = name
            arrows.append(Arrow(name, f"({al.source},{y})", f"({al.target},{y})"))
    for x in va:
        for bt in b.quiver.arrows:
            name = f"e_{x}*{bt.name}"
            right_name[(x, bt.name)] = name
            arrows.append(Arrow(name, f"({x},{bt.source})", f"({x},{bt.target})"))
    quiver = Quiver(verts, tuple(arrows))

    rels = []
    for x in va:
        for r in b.relations:
            rels.append(Relation.make(
                [(c, quiver.path(tuple(right_name[(x, nm)] for nm in p.arrows)))
                 for c, p in r.terms]))
    for r in a.relations:
        for y in vb:
            rels.append(Relation.make(
                [(c, quiver.path(tuple(left_name[(nm, y)] for nm in p.arrows)))
                 for c, p in r.terms]))
    for al in a.quiver.arrows:
        for bt in b.quiver.arrows:
            p = quiver.path((right_name[(al.source, bt.name)],
                             left_name[(al.name, bt.target)]))
            q = quiver.path((left_name[(al.name, bt.source)],
                             right_name[(al.target, bt.name)]))
            rels.append(Relation.make([(QQ(1), p), (QQ(-1), q)]))
    return Presentation(quiver, tuple(rels))


def enveloping(a):
    """A tensored with its opposite."""
    return tensor(a, opposite_for(a))


@dataclass(frozen=True)
class GluingSpec:
    """Identification pairs, deleted vertices, supplement vertices."""

    pairs: tuple = ()
    deletions: tuple = ()
    supplements: tuple = ()

    def __post_init__(self):
        vs = [v for v, _ in self.pairs]
        ws = [w for _, w in self.pairs]
        if set(vs) & set(ws):
            raise InvalidPresentationError(
                "gluing pairs must have disjoint left and right vertex sets")
        if len(set(ws)) != len(ws):
            raise InvalidPresentationError("a vertex may be merged only once")
        if set(self.deletions) & (set(vs) | set(ws)):
            raise InvalidPresentationError(
                "deleted vertices must avoid the gluing pairs")


def glue(pres, pairs):
    """Merge each w into its v; crossings through the merged point that
    were not composable before become zero relations."""
    GluingSpec(pairs=tuple(pairs))
    quiver = pres.quiver
    for v, w in pairs:
        if v not in quiver.vertex_index or w not in quiver.vertex_index:
            raise InvalidPresentationError(f"unknown gluing pair ({v}, {w})")
    target = {}
    for v, w in pairs:
        target[w] = v
    rep = lambda x: target.get(x, x)
    verts = tuple(v for v in quiver.vertices if v not in target)
    arrows = tuple(Arrow(a.name, rep(a.source), rep(a.target))
                   for a in quiver.arrows)
    new_quiver = Quiver(verts, arrows)

    def move_path(p):
        if p.is_trivial:
            return Path(rep(p.source), (), rep(p.source))
        return Path(rep(p.source), p.arrows, rep(p.target))

    rels = []
    seen = set()
    for r in pres.relations:
        moved = Relation.make([(c, move_path(p)) for c, p in r.terms])
        key = moved.normalized()
        if key not in seen:
            seen.add(key)
            rels.append(moved)

    classes = {}
    for v, w in pairs:
        classes.setdefault(v, {v}).add(w)
    for v in sorted(classes):
        cls = classes[v]
        incoming = [a for a in quiver.arrows if a.target in cls]
        outgoing = [a for a in quiver.arrows if a.source in cls]
        for g in incoming:
            for d in outgoing:
                if g.target == d.source:
                    continue    # was already composable
                p = new_quiver.path((g.name, d.name))
                newrel = Relation.make([(QQ(1), p)])
                key = newrel.normalized()
                if key not in seen:
                    seen.add(key)
                    rels.append(newrel)
    return Presentation(new_quiver, tuple(rels))


def crossing_set(pres, v, max_length=8):
    """Pairs of nonzero paths meeting at v: the first ends there, the
    second starts there; at least one is nontrivial."""
    if v not in pres.quiver.vertex_index:
        raise InvalidPresentationError(f"unknown vertex {v!r}")
    alg = algebra_for(pres, max_length)
    into = []
    outof = []
    for d in range(alg.computed_degree + 1):
        for p in alg.paths_at_degree(d):
            if alg.path_is_zero(p):
                continue
            if p.target == v:
                into.append(p)
            if p.source == v:
                outof.append(p)
    out = []
    for p1 in into:
        for p2 in outof:
            if p1.is_trivial and p2.is_trivial:
                continue
            out.append((p1, p2))
    out.sort(key=lambda pair: (pair[0].key(), pair[1].key()))
    return tuple(out)


def gluing_algebra(pres, spec):
    """Glue, delete, then resurrect zero relations crossing a supplement
    vertex.  Multi-term relations always survive."""
    glued = glue(pres, spec.pairs) if spec.pairs else pres
    if spec.deletions:
        glued = delete_vertices(glued, spec.deletions)
    quiver = glued.quiver
    for s in spec.supplements:
        if s not in quiver.vertex_index:
            raise InvalidPresentationError(
                f"supplement vertex {s!r} is not in the glued quiver")
    supp = set(spec.supplements)
    if not supp:
        return glued
    rels = []
    for r in glued.relations:
        if not r.is_monomial:
            rels.append(r)
            continue
        if supp.intersection(r.terms[0][1].vertices(quiver)):
            continue
        rels.append(r)
    return Presentation(quiver, tuple(rels))


def check_diamonds_commutative(pres):
    """Every length-2 parallel pair on four distinct vertices must have
    difference zero in the algebra."""
    alg = algebra_for(pres)
    quiver = pres.quiver
    by_block = {}
    for p in alg.paths_at_degree(2):
        by_block.setdefault((p.source, p.target), []).append(p)
    for (s, t), paths in sorted(by_block.items()):
        if s == t:
            continue
        for i in range(len(paths)):
            for j in range(i + 1, len(paths)):
                p, q = paths[i], paths[j]
                mid_p = quiver.arrow_by_name[p.arrows[0]].target
                mid_q = quiver.arrow_by_name[q.arrows[0]].target
                if mid_p == mid_q or mid_p in (s, t) or mid_q in (s, t):
                    continue
                if not alg.is_zero([(QQ(1), p), (QQ(-1), q)]):
                    return False
    return True


def paper_deletion_set(family, n):
    """Deletion sets carving the A- and D-family Auslander algebras out
    of the enveloping algebra of linear A_n.

    The index sets are stated over the enveloping algebra's own vertex
    names, where the second coordinate runs against the opposite-factor
    arrows; the published grids count it the other way, so the second
    coordinate is mirrored (j -> n+1-j).
    """
    fam = family.upper()
    if fam == "A":
        if n < 2:
            raise QuiverKitError("family A needs n >= 2")
        cells = [(j, k) for j in range(1, n) for k in range(1, n - j + 1)]
    elif fam == "D":
        if n < 4:
            raise QuiverKitError("family D needs n >= 4")
        cells = [(k, l) for k in range(1, n - 1) for l in range(1, n - k + 1)
                 if (k, l) != (n - 2, 2)]
        cells += [(n, l) for l in range(1, n + 1) if l != 2]
    else:
        raise QuiverKitError(f"unknown family {family!r}")
    return tuple(sorted(f"({i},{j})" for i, j in cells))


# ---------------------------------------------------------------------------
# Grid embeddings


@dataclass(frozen=True)
class GridEmbedding:
    m: int
    n: int
    assignment: tuple   # of (vertex, (i, j)), in quiver vertex order

    def as_dict(self):
        return dict(self.assignment)


_COMPONENT_ASSIGNMENT_CAP = 20000


def _components(quiver):
    adj = {v: set() for v in quiver.vertices}
    for a in quiver.arrows:
        adj[a.source].add(a.target)
        adj[a.target].add(a.source)
    seen = set()
    comps = []
    for v in quiver.vertices:
        if v in seen:
            continue
        stack = [v]
        comp = []
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp, key=quiver.vertex_index.get))
    return comps


def _component_assignments(quiver, comp):
    """All injective relative coordinate maps with arrows going right or
    up, normalized to start at (0, 0)."""
    comp_set = set(comp)
    edges = [a for a in quiver.arrows
             if a.source in comp_set and a.target in comp_set]
    root = comp[0]
    results = []

    def extend(pos, used, remaining):
        if len(results) > _COMPONENT_ASSIGNMENT_CAP:
            raise QuiverKitError("grid embedding search blew up")
        progress = True
        pos = dict(pos)
        used = set(used)
        remaining = list(remaining)
        while progress:
            progress = False
            rest = []
            for a in remaining:
                sp, tp = pos.get(a.source), pos.get(a.target)
                if sp is None and tp is None:
                    rest.append(a)
                    continue
                if sp is not None and tp is not None:
                    di, dj = tp[0] - sp[0], tp[1] - sp[1]
                    if (di, dj) not in ((1, 0), (0, 1)):
                        return
                    progress = True
                    continue
                rest.append(a)
            remaining = rest
            forced = [a for a in remaining
                      if (a.source in pos) != (a.target in pos)]
            if forced:
                a = forced[0]
                remaining.remove(a)
                for d in ((1, 0), (0, 1)):
                    if a.source in pos:
                        cand = (pos[a.source][0] + d[0], pos[a.source][1] + d[1])
                        other = a.target
                    else:
                        cand = (pos[a.target][0] - d[0], pos[a.target][1] - d[1])
                        other = a.source
                    if cand in used:
                        continue
                    pos2 = dict(pos)
                    used2 = set(used)
                    pos2[other] = cand
                    used2.add(cand)
                    extend(pos2, used2, remaining)
                return
        if len(pos) == len(comp):
            mini = min(p[0] for p in pos.values())
            minj = min(p[1] for p in pos.values())
            norm = {v: (p[0] - mini, p[1] - minj) for v, p in pos.items()}
            if norm not in results:
                results.append(norm)

    extend({root: (0, 0)}, {(0, 0)}, edges)
    results.sort(key=lambda m: sorted(m.items()))
    return results


def embed_into_grid(pres):
    """Injective orientation-preserving placement into the smallest grid
    such that the image is an induced subquiver."""
    quiver = pres.quiver
    if not quiver.vertices:
        raise NotPDSError("empty quiver")
    comps = _components(quiver)
    per_comp = []
    for comp in comps:
        options = _component_assignments(quiver, comp)
        if not options:
            raise NotPDSError(
                "no right/up coordinate assignment for component containing "
                f"{comp[0]!r}")
        per_comp.append(options)

    arrow_pairs = {(a.source, a.target) for a in quiver.arrows}

    def induced_ok(placed):
        occupied = {}
        for v, p in placed.items():
            if p in occupied:
                return False
            occupied[p] = v
        for (i, j), v in occupied.items():
            for w in (occupied.get((i + 1, j)), occupied.get((i, j + 1))):
                if w is not None and (v, w) not in arrow_pairs:
                    return False
        return True

    def width(opt):
        return max(p[0] for p in opt.values()) + 1

    def height(opt):
        return max(p[1] for p in opt.values()) + 1

    max_m = sum(max(width(o) for o in opts) for opts in per_comp) + len(comps)
    max_n = sum(max(height(o) for o in opts) for opts in per_comp) + len(comps)

    candidates = sorted(((m, n) for m in range(1, max_m + 1)
                         for n in range(1, max_n + 1)),
                        key=lambda mn: (mn[0] * mn[1], mn[0], mn[1]))
    for m, n in candidates:
        hit = _try_grid(pres, per_comp, comps, m, n, induced_ok)
        if hit is not None:
            ordered = tuple((v, hit[v]) for v in quiver.vertices)
            return GridEmbedding(m, n, ordered)
    raise NotPDSError("no grid admits an induced embedding")


def _try_grid(pres, per_comp, comps, m, n, induced_ok):
    def place(idx, placed):
        if idx == len(per_comp):
            return dict(placed) if induced_ok(placed) else None
        for option in per_comp[idx]:
            w = max(p[0] for p in option.values()) + 1
            h = max(p[1] for p in option.values()) + 1
            if w > m or h > n:
                continue
            for oi in range(0, m - w + 1):
                for oj in range(0, n - h + 1):
                    trial = dict(placed)
                    clash = False
                    for v, (i, j) in option.items():
                        p = (i + oi + 1, j + oj + 1)
                        if p in trial.values():
                            clash = True
                            break
                        trial[v] = p
                    if clash:
                        continue
                    hit = place(idx + 1, trial)
                    if hit is not None:
                        return hit
        return None

    return place(0, {})
