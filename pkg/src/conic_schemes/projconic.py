"""Points, lines and the conic {(t, t^2, 1)} in PG(2, q).

A line (z, x, y) is the set of points (X, Y, Z) with zX + xY + yZ = 0, so the
conic point P_t lies on it iff x t^2 + z t + y = 0.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import Iterable, Sequence

from .gf import INF, FieldCtx, abs_trace, solve_quadratic

__all__ = [
    "LineType",
    "Point",
    "Line",
    "Conic",
    "LineSet",
    "canonical",
    "conic_point",
    "tangent_line",
    "line_delta",
    "classify_line",
    "make_line",
    "intersect_conic",
    "enumerate_lines",
    "is_real",
    "incident",
    "lines_to_csv",
]


class LineType(IntEnum):
    """Line type; the value doubles as the fibre sign used throughout."""

    ELLIPTIC = -1
    TANGENT = 0
    HYPERBOLIC = 1


def canonical(ctx: FieldCtx, coords: Sequence[int]) -> tuple[int, int, int]:
    """Scale a homogeneous vector so its first nonzero entry is 1."""
    for c in coords:
        if c:
            s = ctx.inv(c)
            return tuple(ctx.mul(s, v) for v in coords)  # type: ignore[return-value]
    raise ValueError("zero vector is not a projective point")


@dataclass(frozen=True)
class Point:
    ctx: FieldCtx = field(compare=False, repr=False)
    coords: tuple[int, int, int]

    @classmethod
    def of(cls, ctx: FieldCtx, coords: Sequence[int]) -> Point:
        return cls(ctx, canonical(ctx, coords))


def line_delta(ctx: FieldCtx, coords: Sequence[int]):
    """Discriminant invariant of a line: xy/z^2 (q even), 1/(z^2 - 4xy) (q odd).

    Returns INF for tangent lines.
    """
    z, x, y = coords
    if ctx.p == 2:
        if z == 0:
            return INF
        return ctx.div(ctx.mul(x, y), ctx.mul(z, z))
    d = ctx.sub(ctx.mul(z, z), ctx.mul(ctx.from_int(4), ctx.mul(x, y)))
    if d == 0:
        return INF
    return ctx.inv(d)


def classify_line(ctx: FieldCtx, coords: Sequence[int]) -> LineType:
    if not any(coords):
        raise ValueError("zero triple is not a line")
    delta = line_delta(ctx, coords)
    if delta is INF:
        return LineType.TANGENT
    if ctx.p == 2:
        return LineType.HYPERBOLIC if abs_trace(ctx, delta) == 0 else LineType.ELLIPTIC
    return LineType.HYPERBOLIC if ctx.is_square(delta) else LineType.ELLIPTIC


def intersect_conic(ctx: FieldCtx, coords: Sequence[int]) -> tuple:
    """The pair {alpha, beta} with the conic points of the line over F_{q^2}.

    Elements live in ``ctx.extension``; the pair is returned sorted with INF
    last.  Tangent lines are rejected.
    """
    if classify_line(ctx, coords) is LineType.TANGENT:
        raise ValueError(f"line {tuple(coords)} is tangent to the conic")
    ext = ctx.extension
    z, x, y = coords  # base elements embed unchanged in the tower
    if x == 0:
        return (ext.div(ext.neg(y), z), INF)
    roots = solve_quadratic(ext, x, z, y)
    if len(roots) != 2:
        raise AssertionError("non-tangent line must meet the conic twice")
    return tuple(roots)


@dataclass(frozen=True)
class Line:
    """A line of PG(2, q) in canonical dual coordinates (z, x, y)."""

    ctx: FieldCtx = field(compare=False, repr=False)
    coords: tuple[int, int, int]
    type: LineType = field(compare=False)
    meets: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def eps(self) -> int:
        return int(self.type)


def make_line(ctx: FieldCtx, coords: Sequence[int], with_meets: bool = True) -> Line:
    c = canonical(ctx, coords)
    t = classify_line(ctx, c)
    meets = intersect_conic(ctx, c) if (with_meets and t is not LineType.TANGENT) else None
    return Line(ctx, c, t, meets)


def conic_point(ctx: FieldCtx, xi) -> Point:
    """P_xi = (xi, xi^2, 1), and (0, 1, 0) for xi = INF."""
    if xi is INF:
        return Point(ctx, (0, 1, 0))
    return Point.of(ctx, (xi, ctx.mul(xi, xi), 1))


def tangent_line(ctx: FieldCtx, xi) -> Line:
    """Tangent to the conic at P_xi: (-2 xi, 1, xi^2), or (0, 0, 1) at INF."""
    if xi is INF:
        coords = (0, 0, 1)
    else:
        coords = (ctx.neg(ctx.mul(ctx.from_int(2), xi)), 1, ctx.mul(xi, xi))
    return make_line(ctx, coords, with_meets=False)


def incident(ctx: FieldCtx, point: Sequence[int], line: Sequence[int]) -> bool:
    X, Y, Z = point
    z, x, y = line
    return ctx.add(ctx.add(ctx.mul(z, X), ctx.mul(x, Y)), ctx.mul(y, Z)) == 0


def is_real(ctx: FieldCtx, coords: Sequence[int]) -> bool:
    """True iff the projective object over a tower field is defined over the base."""
    c = canonical(ctx, coords)
    return all(ctx.relative_frobenius(v) == v for v in c)


def _canonical_triples(ctx: FieldCtx) -> Iterable[tuple[int, int, int]]:
    q = ctx.order
    for z in range(q):
        for x in range(q):
            for y in range(q):
                first = z or x or y
                if first == 1:
                    yield (z, x, y)


@dataclass
class LineSet:
    """Lines of PG(2, q) split by type, in deterministic enumeration order."""

    ctx: FieldCtx
    all: list[tuple[int, int, int]]
    lines: list[Line]
    plus: list[Line]
    minus: list[Line]

    def __iter__(self):
        return iter((self.all, self.lines, self.plus, self.minus))

    @cached_property
    def index(self) -> dict[tuple[int, int, int], int]:
        return {ln.coords: i for i, ln in enumerate(self.lines)}

    @property
    def eps(self) -> list[int]:
        return [ln.eps for ln in self.lines]


def enumerate_lines(ctx: FieldCtx, with_meets: bool = True) -> LineSet:
    """All q^2 + q + 1 lines, then the q^2 non-tangent ones and their split.

    Order is lexicographic on canonical triples (element order constant
    first), which for even q is (1, x, y) lexicographic in (x, y).
    """
    triples = list(_canonical_triples(ctx))
    lines = []
    for t in triples:
        kind = classify_line(ctx, t)
        if kind is LineType.TANGENT:
            continue
        meets = intersect_conic(ctx, t) if with_meets else None
        lines.append(Line(ctx, t, kind, meets))
    plus = [ln for ln in lines if ln.type is LineType.HYPERBOLIC]
    minus = [ln for ln in lines if ln.type is LineType.ELLIPTIC]
    return LineSet(ctx, triples, lines, plus, minus)


@dataclass
class Conic:
    """The conic O_q over ``ctx`` together with its tangents."""

    ctx: FieldCtx

    @cached_property
    def params(self) -> list:
        return list(self.ctx.elements()) + [INF]

    @cached_property
    def points(self) -> list[Point]:
        return [conic_point(self.ctx, t) for t in self.params]

    @cached_property
    def tangents(self) -> list[Line]:
        return [tangent_line(self.ctx, t) for t in self.params]

    def contains(self, point: Sequence[int]) -> bool:
        X, Y, Z = point
        return self.ctx.mul(X, X) == self.ctx.mul(Y, Z)

    def nucleus(self) -> Point | None:
        """Common point of all tangents (q even), else None."""
        if self.ctx.p != 2:
            return None
        return Point(self.ctx, (1, 0, 0))

    def extended(self) -> Conic:
        return Conic(self.ctx.extension)


def lines_to_csv(lines: Iterable[Line]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["z", "x", "y", "type"])
    for ln in lines:
        w.writerow([*ln.coords, ln.type.name.lower()])
    return buf.getvalue()
