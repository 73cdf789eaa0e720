"""Finite-dimensional right modules over a bound quiver algebra.

A right module is a representation: a dimension per vertex and, for each
arrow a: x -> y, a (dim y) x (dim x) rational matrix acting on column
vectors.  Right action along a path applies the first-traversed arrow
first, so the matrix of "a b" is mat(b) @ mat(a).

The Auslander-Reiten translates are computed as DTr and TrD from minimal
projective presentations, with the transpose taken over the opposite
presentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iterprod

from .basis import algebra_for
from .errors import (DecomposableError, InfiniteDimensionalError,
                     InvalidModuleError, QuiverKitError)
from .linalg import (QQ, EchelonSpace, identity, is_invertible, matmul,
                     nullspace, rank, solve, zeros)
from .presentation import compose, opposite, reverse_path

_GRID_SEARCH_CAP = 2_000_000


@lru_cache(maxsize=256)
def opposite_for(pres):
    return opposite(pres)


def _freeze(mat):
    return tuple(tuple(QQ(x) for x in row) for row in mat)


@dataclass(frozen=True)
class Representation:
    """Dimension vector (in quiver vertex order) and one matrix per arrow
    (in quiver arrow order)."""

    dims: tuple
    mats: tuple

    @property
    def total(self):
        return sum(self.dims)

    @property
    def is_zero(self):
        return self.total == 0

    @staticmethod
    def make(pres, dims, mats):
        quiver = pres.quiver
        if isinstance(dims, dict):
            dims = tuple(int(dims.get(v, 0)) for v in quiver.vertices)
        else:
            dims = tuple(int(d) for d in dims)
        if len(dims) != len(quiver.vertices) or any(d < 0 for d in dims):
            raise InvalidModuleError("bad dimension vector")
        vi = quiver.vertex_index
        out = []
        for a in quiver.arrows:
            m = mats.get(a.name) if isinstance(mats, dict) else None
            nt, ns = dims[vi[a.target]], dims[vi[a.source]]
            if m is None:
                m = zeros(nt, ns)
            if len(m) != nt or any(len(row) != ns for row in m):
                raise InvalidModuleError(
                    f"matrix for arrow {a.name!r} is not {nt} x {ns}")
            out.append(_freeze(m))
        return Representation(dims, tuple(out))

    def matrix(self, pres, arrow_name):
        for a, m in zip(pres.quiver.arrows, self.mats):
            if a.name == arrow_name:
                return m
        raise InvalidModuleError(f"unknown arrow {arrow_name!r}")

    def dim_at(self, pres, v):
        return self.dims[pres.quiver.vertex_index[v]]

    def to_json_dict(self, pres):
        return {
            "dims": list(self.dims),
            "matrices": {a.name: [[str(x) for x in row] for row in m]
                         for a, m in zip(pres.quiver.arrows, self.mats)},
        }

    @staticmethod
    def from_json_dict(pres, data):
        mats = {name: [[QQ(x) for x in row] for row in m]
                for name, m in data["matrices"].items()}
        return Representation.make(pres, data["dims"], mats)


def zero_module(pres):
    return Representation.make(pres, [0] * len(pres.vertices), {})


def _mm(a, b, bcols):
    return matmul(a, b, bcols=bcols)


def path_matrix(pres, rep, path):
    """Matrix of the right action along a path, shape (dim t) x (dim s)."""
    vi = pres.quiver.vertex_index
    if path.is_trivial:
        return identity(rep.dims[vi[path.source]])
    arrow_pos = {a.name: i for i, a in enumerate(pres.quiver.arrows)}
    cur = None
    cols = rep.dims[vi[path.source]]
    for name in path.arrows:
        m = rep.mats[arrow_pos[name]]
        cur = [list(r) for r in m] if cur is None else _mm(m, cur, cols)
    return cur


def validate_module(pres, rep):
    """Check shapes and that every relation acts by zero."""
    vi = pres.quiver.vertex_index
    if len(rep.dims) != len(pres.vertices):
        raise InvalidModuleError("dimension vector length mismatch")
    for a, m in zip(pres.quiver.arrows, rep.mats):
        nt, ns = rep.dims[vi[a.target]], rep.dims[vi[a.source]]
        if len(m) != nt or any(len(row) != ns for row in m):
            raise InvalidModuleError(
                f"matrix for arrow {a.name!r} is not {nt} x {ns}")
    for r in pres.relations:
        ns = rep.dims[vi[r.source]]
        nt = rep.dims[vi[r.target]]
        acc = zeros(nt, ns)
        for c, p in r.terms:
            pm = path_matrix(pres, rep, p)
            for i in range(nt):
                for j in range(ns):
                    acc[i][j] += c * pm[i][j]
        if any(any(row) for row in acc):
            return False
    return True


def direct_sum(pres, *reps):
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(len(pres.vertices)))
    vi = pres.quiver.vertex_index
    mats = {}
    for ai, a in enumerate(pres.quiver.arrows):
        nt = dims[vi[a.target]]
        ns = dims[vi[a.source]]
        m = zeros(nt, ns)
        ro = co = 0
        for r in reps:
            block = r.mats[ai]
            for i, row in enumerate(block):
                for j, x in enumerate(row):
                    m[ro + i][co + j] = x
            ro += r.dims[vi[a.target]]
            co += r.dims[vi[a.source]]
        mats[a.name] = m
    return Representation.make(pres, dims, mats)


def dual_module(pres, rep):
    """Dual vector-space module over the opposite presentation."""
    op = opposite_for(pres)
    vi = pres.quiver.vertex_index
    mats = {}
    for a, m in zip(pres.quiver.arrows, rep.mats):
        ns = rep.dims[vi[a.source]]
        nt = rep.dims[vi[a.target]]
        mats[a.name] = [[m[i][j] for i in range(nt)] for j in range(ns)]
    return Representation.make(op, rep.dims, mats)


# ---------------------------------------------------------------------------
# Hom spaces, endomorphism rings, isomorphism


@dataclass(frozen=True)
class HomBasis:
    """Basis of intertwiners M -> N; each element is one matrix per vertex."""

    elements: tuple

    @property
    def dim(self):
        return len(self.elements)


def _hom_shapes(pres, m, n):
    return [(n.dims[i], m.dims[i]) for i in range(len(pres.vertices))]


def hom_basis(pres, m, n):
    """Solve the intertwining equations f_t M(a) = N(a) f_s exactly."""
    quiver = pres.quiver
    vi = quiver.vertex_index
    shapes = _hom_shapes(pres, m, n)
    offs = []
    u = 0
    for rows, cols in shapes:
        offs.append(u)
        u += rows * cols
    eqs = []
    for a, mm_, nm in zip(quiver.arrows, m.mats, n.mats):
        s, t = vi[a.source], vi[a.target]
        ms, mt = m.dims[s], m.dims[t]
        ns_, nt = n.dims[s], n.dims[t]
        for i in range(nt):
            for j in range(ms):
                row = [QQ(0)] * u
                # (f_t M(a))[i][j]
                for k in range(mt):
                    c = mm_[k][j]
                    if c:
                        row[offs[t] + i * shapes[t][1] + k] += c
                # -(N(a) f_s)[i][j]
                for l in range(ns_):
                    c = nm[i][l]
                    if c:
                        row[offs[s] + l * shapes[s][1] + j] -= c
                if any(row):
                    eqs.append(row)
    basis = nullspace(eqs, u)
    elements = []
    for vec in basis:
        maps = []
        for idx, (rows, cols) in enumerate(shapes):
            o = offs[idx]
            maps.append(tuple(tuple(vec[o + i * cols + j] for j in range(cols))
                              for i in range(rows)))
        elements.append(tuple(maps))
    return HomBasis(tuple(elements))


def hom_dim(pres, m, n):
    return hom_basis(pres, m, n).dim


def compose_maps(pres, first, then, src_dims):
    """Composite intertwiner: `first` followed by `then` (per vertex).
    src_dims are the dimensions of the domain of `first`."""
    out = []
    for i in range(len(pres.vertices)):
        out.append(tuple(tuple(r) for r in
                         _mm([list(r) for r in then[i]],
                             [list(r) for r in first[i]], src_dims[i])))
    return tuple(out)


def _maps_flat(maps):
    return [x for m in maps for row in m for x in row]


def _combine(shapes, basis, coeffs):
    maps = []
    for idx, (rows, cols) in enumerate(shapes):
        m = zeros(rows, cols)
        for c, b in zip(coeffs, basis):
            if not c:
                continue
            bm = b[idx]
            for i in range(rows):
                for j in range(cols):
                    if bm[i][j]:
                        m[i][j] += c * bm[i][j]
        maps.append(m)
    return maps


def is_isomorphic(pres, m, n):
    """Equal dimension vectors plus an everywhere-invertible intertwiner.

    Each Hom basis element is tried first; then integer coefficient grids,
    sized so that a nonzero product-of-determinants polynomial cannot
    vanish on the whole grid.
    """
    if m.dims != n.dims:
        return False
    if m.total == 0:
        return True
    for ma, na in zip(m.mats, n.mats):
        ra = rank([list(r) for r in ma]) if ma else 0
        rb = rank([list(r) for r in na]) if na else 0
        if ra != rb:
            return False
    hom = hom_basis(pres, m, n)
    if hom.dim == 0:
        return False
    nz = [i for i, d in enumerate(m.dims) if d]

    def invertible(maps):
        return all(is_invertible([list(r) for r in maps[i]]) for i in nz)

    for b in hom.elements:
        if invertible(b):
            return True
    if hom.dim == 1:
        return False
    bound = max(m.total, hom.dim) + 1
    shapes = _hom_shapes(pres, m, n)
    if bound ** hom.dim > _GRID_SEARCH_CAP:
        raise QuiverKitError(
            "isomorphism coefficient grid too large "
            f"({bound}^{hom.dim} combinations)")
    for coeffs in _iterprod(range(1, bound + 1), repeat=hom.dim):
        if invertible(_combine(shapes, hom.elements, [QQ(c) for c in coeffs])):
            return True
    return False


class _EndRing:
    """Endomorphism ring with multiplication in coordinates."""

    def __init__(self, pres, m):
        self.pres = pres
        self.m = m
        self.hom = hom_basis(pres, m, m)
        self.dim = self.hom.dim
        self.space = EchelonSpace(sum(d * d for d in m.dims), track=True)
        for b in self.hom.elements:
            self.space.add(_maps_flat(b))

    def product_coords(self, i, j):
        """Coordinates of e_i . e_j (first e_j, then e_i as maps)."""
        comp = compose_maps(self.pres, self.hom.elements[j],
                            self.hom.elements[i], self.m.dims)
        coords = self.space.coordinates(_maps_flat(comp))
        if coords is None:
            raise QuiverKitError("endomorphism product escaped End basis")
        return coords

    def gram(self):
        """Trace form G[i][j] = tr(left multiplication by e_i e_j)."""
        prods = [[self.product_coords(i, j) for j in range(self.dim)]
                 for i in range(self.dim)]
        # left multiplication matrix of basis element k: column m is e_k e_m
        g = zeros(self.dim, self.dim)
        for i in range(self.dim):
            for j in range(self.dim)[: i + 1]:
                x = prods[i][j]
                tr = QQ(0)
                for mdx in range(self.dim):
                    # coordinates of (e_i e_j) e_m, diagonal entry m
                    col = [QQ(0)] * self.dim
                    for k, c in enumerate(x):
                        if c:
                            pk = prods[k][mdx]
                            for t, ct in enumerate(pk):
                                col[t] += c * ct
                    tr += col[mdx]
                g[i][j] = tr
                g[j][i] = tr
        return g


def end_is_local(pres, m):
    """dim End - dim rad End == 1, with the radical from the trace form."""
    if m.total == 0:
        return False
    ring = _EndRing(pres, m)
    return rank(ring.gram(), ring.dim) == 1


def radical_endo_coords(pres, m):
    """Coordinate vectors (over the End basis) spanning rad End(M)."""
    ring = _EndRing(pres, m)
    return ring, nullspace(ring.gram(), ring.dim)


# ---------------------------------------------------------------------------
# Projectives, injectives, minimal presentations


class ProjSum:
    """Direct sum of indecomposable projectives with a path-tagged basis."""

    def __init__(self, pres, summands):
        alg = algebra_for(pres)
        if not alg.finite:
            raise InfiniteDimensionalError(
                "projective modules need a finite-dimensional algebra")
        self.pres = pres
        self.summands = tuple(summands)
        quiver = pres.quiver
        self.basis = {}
        for w in quiver.vertices:
            tagged = []
            for i, v in enumerate(self.summands):
                for p in alg.basis_between(v, w):
                    tagged.append((i, p))
            self.basis[w] = tagged
        index = {w: {tag: k for k, tag in enumerate(tags)}
                 for w, tags in self.basis.items()}
        dims = tuple(len(self.basis[w]) for w in quiver.vertices)
        mats = {}
        for a in quiver.arrows:
            cols = self.basis[a.source]
            rowsix = index[a.target]
            m = zeros(len(self.basis[a.target]), len(cols))
            arrow_path = quiver.path((a.name,))
            for j, (i, p) in enumerate(cols):
                for q, c in alg.reduce_path(compose(p, arrow_path)).items():
                    m[rowsix[(i, q)]][j] = c
            mats[a.name] = m
        self.rep = Representation.make(pres, dims, mats)
        self._index = index

    def generator_position(self, j):
        """Index of the j-th top generator inside the basis at its vertex."""
        v = self.summands[j]
        return self._index[v][(j, self.pres.quiver.trivial_path(v))]


@lru_cache(maxsize=4096)
def _indec_projective(pres, v):
    return ProjSum(pres, (v,))


def projective(pres, v):
    """Indecomposable projective at v: basis paths leaving v."""
    if v not in pres.quiver.vertex_index:
        raise InvalidModuleError(f"unknown vertex {v!r}")
    return _indec_projective(pres, v).rep


def injective(pres, v):
    """Indecomposable injective at v: dual of the opposite projective."""
    op = opposite_for(pres)
    return dual_module(op, projective(op, v))


def _radical_lift(pres, rep):
    """Per vertex: vectors of rep complementing the radical (top lifts)."""
    quiver = pres.quiver
    vi = quiver.vertex_index
    lifts = []
    for v in quiver.vertices:
        d = rep.dims[vi[v]]
        if d == 0:
            lifts.append((v, []))
            continue
        space = EchelonSpace(d)
        for a in quiver.arrows_into[v]:
            mat = rep.matrix(pres, a.name)
            ns = rep.dims[vi[a.source]]
            for j in range(ns):
                space.add([mat[i][j] for i in range(d)])
        pivots = set(space.pivots)
        units = []
        for pos in range(d):
            if pos not in pivots:
                vec = [QQ(0)] * d
                vec[pos] = QQ(1)
                units.append(vec)
        lifts.append((v, units))
    return lifts


def _map_from_generators(pres, src, dst_rep, gen_images):
    """Intertwiner src.rep -> dst_rep from images of the top generators.

    gen_images[j] lives in dst_rep at the vertex of the j-th summand; the
    rest of the matrix is forced by the right action along basis paths.
    """
    quiver = pres.quiver
    vi = quiver.vertex_index
    out = []
    for w in quiver.vertices:
        tags = src.basis[w]
        nt = dst_rep.dims[vi[w]]
        m = zeros(nt, len(tags))
        for col, (j, p) in enumerate(tags):
            pm = path_matrix(pres, dst_rep, p)
            img = gen_images[j]
            for i in range(nt):
                acc = QQ(0)
                for k in range(len(img)):
                    if img[k] and pm[i][k]:
                        acc += pm[i][k] * img[k]
                m[i][col] = acc
        out.append(m)
    return out


def _kernel_with_maps(pres, dom, cod, f):
    """Kernel representation of an intertwiner plus its inclusion."""
    quiver = pres.quiver
    vi = quiver.vertex_index
    incl = []
    kdims = []
    for idx, v in enumerate(quiver.vertices):
        basis = nullspace([list(r) for r in f[idx]], dom.dims[idx])
        kdims.append(len(basis))
        incl.append([[b[i] for b in basis] for i in range(dom.dims[idx])])
    mats = {}
    for a in pres.quiver.arrows:
        s, t = vi[a.source], vi[a.target]
        image = _mm([list(r) for r in dom.matrix(pres, a.name)], incl[s], kdims[s])
        x = solve(incl[t], image, kdims[t])
        if x is None:
            raise QuiverKitError("kernel not arrow-stable; inconsistent input")
        mats[a.name] = x
    ker = Representation.make(pres, kdims, mats)
    return ker, incl


def _cokernel(pres, cod, f):
    """Cokernel representation of an intertwiner into cod."""
    quiver = pres.quiver
    vi = quiver.vertex_index
    spaces = []
    free_pos = []
    for idx in range(len(quiver.vertices)):
        d = cod.dims[idx]
        space = EchelonSpace(d)
        cols = f[idx]
        ncols = len(cols[0]) if cols else 0
        for j in range(ncols):
            space.add([cols[i][j] for i in range(d)])
        pivots = set(space.pivots)
        spaces.append(space)
        free_pos.append([i for i in range(d) if i not in pivots])
    dims = tuple(len(fp) for fp in free_pos)
    mats = {}
    for a in quiver.arrows:
        s, t = vi[a.source], vi[a.target]
        mat = cod.matrix(pres, a.name)
        m = zeros(dims[t], dims[s])
        for col, pos in enumerate(free_pos[s]):
            vec = [mat[i][pos] for i in range(cod.dims[t])]
            res = spaces[t].residue(vec)
            for row, rpos in enumerate(free_pos[t]):
                m[row][col] = res[rpos]
        mats[a.name] = m
    return Representation.make(pres, dims, mats)


@dataclass
class ProjPresentation:
    """Minimal projective presentation P1 -> P0 -> M -> 0."""

    p1: ProjSum
    p0: ProjSum
    connecting: list    # per-vertex matrices P1 -> P0
    to_module: list     # per-vertex matrices P0 -> M
    module: Representation


def minimal_proj_presentation(pres, rep):
    quiver = pres.quiver
    vi = quiver.vertex_index
    tops = []
    for v, units in _radical_lift(pres, rep):
        for u in units:
            tops.append((v, u))
    p0 = ProjSum(pres, tuple(v for v, _ in tops))
    q = _map_from_generators(pres, p0, rep, [u for _, u in tops])
    ker, incl = _kernel_with_maps(pres, p0.rep, rep, q)
    ktops = []
    for v, units in _radical_lift(pres, ker):
        for u in units:
            ktops.append((v, u))
    p1 = ProjSum(pres, tuple(v for v, _ in ktops))
    # generator images inside P0: include the kernel lift
    gen_images = []
    for v, u in ktops:
        idx = vi[v]
        gen_images.append([sum((incl[idx][i][k] * u[k] for k in range(len(u))),
                               QQ(0)) for i in range(p0.rep.dims[idx])])
    connecting = _map_from_generators(pres, p1, p0.rep, gen_images)
    return ProjPresentation(p1, p0, connecting, q, rep)


def _connecting_coefficients(pres, mp):
    """Algebra coefficients of the map P1 -> P0.

    Entry (i, j) is the list of (coefficient, path v_i -> w_j) through
    which the j-th generator of P1 hits the i-th summand of P0.
    """
    coeffs = {}
    quiver = pres.quiver
    vi = quiver.vertex_index
    for j, w in enumerate(mp.p1.summands):
        col = mp.p1.generator_position(j)
        widx = vi[w]
        column = [mp.connecting[widx][i][col]
                  for i in range(mp.p0.rep.dims[widx])]
        for pos, (i, path) in enumerate(mp.p0.basis[w]):
            c = column[pos]
            if c:
                coeffs.setdefault((i, j), []).append((c, path))
    return coeffs


def _transpose_cokernel(pres, mp):
    """Cokernel of the transposed presentation map, over the opposite."""
    op = opposite_for(pres)
    if not mp.p1.summands:
        return zero_module(op)
    src = ProjSum(op, mp.p0.summands)
    dst = ProjSum(op, mp.p1.summands)
    coeffs = _connecting_coefficients(pres, mp)
    opvi = op.quiver.vertex_index
    opalg = algebra_for(op)
    dst_index = dst._index
    gen_images = []
    for i, v in enumerate(mp.p0.summands):
        img = [QQ(0)] * dst.rep.dims[opvi[v]]
        for j in range(len(mp.p1.summands)):
            for c, path in coeffs.get((i, j), ()):  # path v -> w_j in pres
                for q, cq in opalg.reduce_path(reverse_path(path)).items():
                    img[dst_index[v][(j, q)]] += c * cq
        gen_images.append(img)
    g = _map_from_generators(op, src, dst.rep, gen_images)
    return _cokernel(op, dst.rep, g)


def _check_indecomposable(pres, rep):
    if not end_is_local(pres, rep):
        raise DecomposableError("module is not indecomposable")


def tau(pres, rep, *, assume_indecomposable=False):
    """Auslander-Reiten translate DTr; zero exactly on projectives."""
    if rep.is_zero:
        return zero_module(pres)
    if not assume_indecomposable:
        _check_indecomposable(pres, rep)
    mp = minimal_proj_presentation(pres, rep)
    tr = _transpose_cokernel(pres, mp)
    return dual_module(opposite_for(pres), tr)


def tau_inv(pres, rep, *, assume_indecomposable=False):
    """Inverse translate TrD; zero exactly on injectives."""
    if rep.is_zero:
        return zero_module(pres)
    if not assume_indecomposable:
        _check_indecomposable(pres, rep)
    op = opposite_for(pres)
    dm = dual_module(pres, rep)
    mp = minimal_proj_presentation(op, dm)
    return _transpose_cokernel(op, mp)
