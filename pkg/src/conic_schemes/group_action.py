"""PGL(2, q) acting on PG(1) and, through its 3x3 embedding, on lines.

Two independent builds of the configuration on non-tangent lines live here:
``build_cc_orbit`` closes pairs of lines under generator images with a
union-find, and ``build_cc_formula`` labels each pair by rho-hat.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coherent import CoherentConfiguration, assemble
from .crossratio import rho_hat_matrix
from .gf import INF, FieldCtx
from .projconic import LineSet, canonical, enumerate_lines

__all__ = [
    "PGL2Element",
    "PGL3Element",
    "apply_moebius",
    "embed_pgl3",
    "enumerate_group",
    "generators",
    "line_permutation",
    "UnionFind",
    "build_cc_orbit",
    "build_cc_formula",
    "same_partition",
]

GROUP_BOUND = 16


@dataclass(frozen=True)
class PGL2Element:
    """x -> (a x + b) / (c x + d), stored with first nonzero entry 1."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def of(cls, ctx: FieldCtx, a: int, b: int, c: int, d: int) -> PGL2Element:
        if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)) == 0:
            raise ValueError("singular matrix")
        return cls(*canonical(ctx, (a, b, c, d)))

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def adjugate(self, ctx: FieldCtx) -> PGL2Element:
        """The inverse in PGL(2, q)."""
        return PGL2Element.of(ctx, self.d, ctx.neg(self.b), ctx.neg(self.c), self.a)

    def compose(self, ctx: FieldCtx, other: PGL2Element) -> PGL2Element:
        """self after other."""
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        m, s = ctx.mul, ctx.add
        return PGL2Element.of(ctx, s(m(a, e), m(b, g)), s(m(a, f), m(b, h)),
                              s(m(c, e), m(d, g)), s(m(c, f), m(d, h)))


@dataclass(frozen=True)
class PGL3Element:
    """3x3 matrix acting on column point vectors, first nonzero entry 1."""

    rows: tuple[tuple[int, int, int], ...]

    @classmethod
    def of(cls, ctx: FieldCtx, rows) -> PGL3Element:
        flat = canonical(ctx, [v for row in rows for v in row])
        return cls(tuple(tuple(flat[3 * i:3 * i + 3]) for i in range(3)))

    def apply_point(self, ctx: FieldCtx, pt) -> tuple[int, int, int]:
        out = []
        for row in self.rows:
            acc = 0
            for m, v in zip(row, pt):
                acc = ctx.add(acc, ctx.mul(m, v))
            out.append(acc)
        return canonical(ctx, out)

    def apply_line(self, ctx: FieldCtx, line) -> tuple[int, int, int]:
        """Row vector times matrix, canonicalised."""
        out = []
        for j in range(3):
            acc = 0
            for i in range(3):
                acc = ctx.add(acc, ctx.mul(line[i], self.rows[i][j]))
            out.append(acc)
        return canonical(ctx, out)


def apply_moebius(A: PGL2Element, x, ctx: FieldCtx):
    """A(x) in the field ``ctx`` (which must contain A's entries)."""
    a, b, c, d = A.entries
    if x is INF:
        num, den = a, c
    else:
        num = ctx.add(ctx.mul(a, x), b)
        den = ctx.add(ctx.mul(c, x), d)
    if den == 0:
        return INF
    return ctx.div(num, den)


def embed_pgl3(A: PGL2Element, ctx: FieldCtx) -> PGL3Element:
    """[[ad+bc, ac, bd], [2ab, a^2, b^2], [2cd, c^2, d^2]], mapping P_t to P_{A(t)}."""
    a, b, c, d = A.entries
    m, s = ctx.mul, ctx.add
    two = ctx.from_int(2)
    rows = (
        (s(m(a, d), m(b, c)), m(a, c), m(b, d)),
        (m(two, m(a, b)), m(a, a), m(b, b)),
        (m(two, m(c, d)), m(c, c), m(d, d)),
    )
    return PGL3Element.of(ctx, rows)


def enumerate_group(ctx: FieldCtx, bound: int = GROUP_BOUND) -> list[PGL2Element]:
    """All q^3 - q elements of PGL(2, q) in lexicographic canonical order."""
    q = ctx.order
    if q > bound:
        raise ValueError(f"q = {q} exceeds the group enumeration bound {bound}")
    out = []
    for a in range(2):
        for b in range(q):
            for c in range(q):
                for d in range(q):
                    if a == 0 and b != 1:
                        continue
                    if ctx.sub(ctx.mul(a, d), ctx.mul(b, c)) != 0:
                        out.append(PGL2Element(a, b, c, d))
    return out


def generators(ctx: FieldCtx) -> list[PGL2Element]:
    """x -> x + 1, x -> g x (g primitive) and x -> 1/x."""
    return [
        PGL2Element(1, 1, 0, 1),
        PGL2Element.of(ctx, ctx.primitive, 0, 0, 1),
        PGL2Element(0, 1, 1, 0),
    ]


def line_permutation(A: PGL2Element, ctx: FieldCtx, lines: LineSet) -> np.ndarray:
    """Index permutation of the non-tangent lines induced by A.

    A line l maps to l * M^{-1}; M^{-1} is the embedding of adj(A).
    """
    M = embed_pgl3(A.adjugate(ctx), ctx)
    idx = lines.index
    return np.array([idx[M.apply_line(ctx, ln.coords)] for ln in lines.lines], dtype=np.int64)


class UnionFind:
    """Disjoint sets over range(n) with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def labels(self) -> np.ndarray:
        """Dense component labels numbered by first occurrence."""
        roots = [self.find(x) for x in range(len(self.parent))]
        seen: dict[int, int] = {}
        return np.array([seen.setdefault(r, len(seen)) for r in roots], dtype=np.int64)


def build_cc_orbit(ctx: FieldCtx, lines: LineSet | None = None,
                   bound: int = GROUP_BOUND) -> CoherentConfiguration:
    """Orbits of PGL(2, q) on ordered pairs of non-tangent lines.

    Fibres are the orbits on lines; a fibre is tagged +1 when its lines meet
    the conic in two points of PG(1, q), which is a display convention only.
    Relations are labelled by orbit number.
    """
    if ctx.order > bound:
        raise ValueError(f"q = {ctx.order} exceeds the orbit-method bound {bound}")
    lines = lines or enumerate_lines(ctx)
    n = len(lines.lines)
    perms = [line_permutation(g, ctx, lines) for g in generators(ctx)]

    uf_lines = UnionFind(n)
    for perm in perms:
        for i in range(n):
            uf_lines.union(i, int(perm[i]))
    line_orbit = uf_lines.labels()
    fibre = np.empty(n, dtype=np.int8)
    for orb in np.unique(line_orbit):
        members = np.flatnonzero(line_orbit == orb)
        real = all(t is INF or t < ctx.order for t in lines.lines[members[0]].meets)
        fibre[members] = 1 if real else -1

    uf = UnionFind(n * n)
    base = np.arange(n, dtype=np.int64)
    for perm in perms:
        images = (perm[:, None] * n + perm[None, :]).ravel()
        for src, dst in zip((base[:, None] * n + base[None, :]).ravel().tolist(), images.tolist()):
            uf.union(src, dst)
    orbit = uf.labels().reshape(n, n)
    decode = list(range(int(orbit.max()) + 1))
    return assemble(fibre, orbit, decode, name=f"orbit(q={ctx.order})", ctx=ctx,
                    lines=[ln.coords for ln in lines.lines])


def build_cc_formula(ctx: FieldCtx, lines: LineSet | None = None) -> CoherentConfiguration:
    """Label each ordered pair by (type l, type m, rho-hat(l, m))."""
    lines = lines or enumerate_lines(ctx, with_meets=False)
    coords = np.array([ln.coords for ln in lines.lines], dtype=np.int64)
    labels = rho_hat_matrix(ctx, coords)
    fibre = np.array(lines.eps, dtype=np.int8)
    return assemble(fibre, labels, list(range(ctx.order)), name=f"formula(q={ctx.order})",
                    ctx=ctx, lines=[ln.coords for ln in lines.lines])


def same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    """True iff two label matrices induce the same partition of their cells."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape != b.shape:
        return False
    pairs = np.unique(np.stack([a, b]), axis=1)
    return len(np.unique(pairs[0])) == pairs.shape[1] == len(np.unique(pairs[1]))
