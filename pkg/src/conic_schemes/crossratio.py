"""Cross-ratio on PG(1, .), the collapsing map f and the line invariant rho-hat.

Points of PG(1) are field elements or INF.  The cross-ratio is evaluated in
determinant form as a projective point (num : den), so INF needs no special
cases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import INF, FieldCtx, abs_trace
from .projconic import Line, LineType, line_delta

__all__ = [
    "CrossRatioValue",
    "cross_ratio",
    "f_reduce",
    "rho_hat_points",
    "rho_hat_coords",
    "rho_hat_matrix",
    "type_from_rho_hat",
]


def _vec(x) -> tuple[int, int]:
    return (1, 0) if x is INF else (x, 1)


def _det(ctx: FieldCtx, u: tuple[int, int], v: tuple[int, int]) -> int:
    return ctx.sub(ctx.mul(u[0], v[1]), ctx.mul(u[1], v[0]))


def cross_ratio(ctx: FieldCtx, a, b, c, d):
    """det(a,c) det(b,d) / (det(a,d) det(b,c)) as an element of ctx or INF."""
    pts = [a, b, c, d]
    for p in pts:
        if pts.count(p) >= 3:
            raise ValueError("cross-ratio undefined when three arguments coincide")
    va, vb, vc, vd = (_vec(p) for p in pts)
    num = ctx.mul(_det(ctx, va, vc), _det(ctx, vb, vd))
    den = ctx.mul(_det(ctx, va, vd), _det(ctx, vb, vc))
    if den == 0:
        if num == 0:
            raise AssertionError("degenerate cross-ratio")
        return INF
    return ctx.div(num, den)


@dataclass(frozen=True)
class CrossRatioValue:
    """A cross-ratio r together with the unordered pair {r, 1/r}."""

    value: object
    pair: tuple

    @classmethod
    def of(cls, ctx: FieldCtx, r) -> CrossRatioValue:
        if r is INF:
            other = 0
        elif r == 0:
            other = INF
        else:
            other = ctx.inv(r)
        key = sorted([r, other], key=lambda t: (t is INF, 0 if t is INF else t))
        return cls(r, tuple(key))


def f_reduce(ctx: FieldCtx, x):
    """f(x) = 1/(x + 1/x) (p = 2) or 1/4 + 1/(x - 2 + 1/x) (p odd)."""
    if x is INF or x == 0:
        return 0 if ctx.p == 2 else ctx.inv(ctx.from_int(4))
    if x == 1:
        return INF
    s = ctx.add(x, ctx.inv(x))
    if ctx.p == 2:
        return ctx.inv(s)
    t = ctx.sub(s, ctx.from_int(2))
    # t = 0 only for x = 1, handled above
    return ctx.add(ctx.inv(ctx.from_int(4)), ctx.inv(t))


def rho_hat_points(ell: Line, m: Line):
    """rho-hat from the conic intersections: f of the cross-ratio."""
    if ell.coords == m.coords:
        raise ValueError("rho-hat needs two distinct lines")
    if ell.type is LineType.TANGENT or m.type is LineType.TANGENT:
        raise ValueError("rho-hat needs non-tangent lines")
    ext = ell.ctx.extension
    a, b = ell.meets
    c, d = m.meets
    val = f_reduce(ext, cross_ratio(ext, a, b, c, d))
    if val is INF or not ext.in_base(val):
        raise AssertionError(f"rho-hat {val} left the base field")
    return val


def rho_hat_coords(ctx: FieldCtx, ell, m):
    """rho-hat directly from homogeneous coordinates.

    Even q: ((x y' + x' y)^2 + (x z' + x' z)(y z' + y' z)) / (z z')^2.
    Odd q: (2 x y' + 2 x' y - z z')^2 D D' / 4 with D the line discriminant.
    """
    l1 = ell.coords if isinstance(ell, Line) else tuple(ell)
    l2 = m.coords if isinstance(m, Line) else tuple(m)
    if l1 == l2:
        raise ValueError("rho-hat needs two distinct lines")
    d1 = line_delta(ctx, l1)
    d2 = line_delta(ctx, l2)
    if d1 is INF or d2 is INF:
        raise ValueError("rho-hat needs non-tangent lines")
    z, x, y = l1
    zb, xb, yb = l2
    mul, add = ctx.mul, ctx.add
    if ctx.p == 2:
        s = add(mul(x, yb), mul(xb, y))
        num = add(mul(s, s), mul(add(mul(x, zb), mul(xb, z)), add(mul(y, zb), mul(yb, z))))
        zz = mul(z, zb)
        return ctx.div(num, mul(zz, zz))
    two = ctx.from_int(2)
    s = ctx.sub(add(mul(two, mul(x, yb)), mul(two, mul(xb, y))), mul(z, zb))
    return ctx.div(mul(mul(s, s), mul(d1, d2)), ctx.from_int(4))


def _deltas(ctx: FieldCtx, coords: np.ndarray) -> np.ndarray:
    return np.array([line_delta(ctx, c) for c in map(tuple, coords)], dtype=np.int64)


def rho_hat_matrix(ctx: FieldCtx, coords, rows=None, chunk: int = 256) -> np.ndarray:
    """rho-hat for all pairs (rows x all lines) by table lookups.

    ``coords`` is an (n, 3) integer array of non-tangent lines.  The diagonal
    gets whatever the formula yields (0 for p = 2); callers mask it.
    """
    coords = np.asarray(coords, dtype=np.int64)
    n = len(coords)
    rows = np.arange(n) if rows is None else np.asarray(rows)
    z, x, y = coords[:, 0], coords[:, 1], coords[:, 2]
    delta = _deltas(ctx, coords)
    out = np.empty((len(rows), n), dtype=np.uint16)
    mul, add = ctx.mul_array, ctx.add_array
    inv4 = ctx.inv(ctx.from_int(4)) if ctx.p != 2 else 0
    two = ctx.from_int(2)
    for start in range(0, len(rows), chunk):
        r = rows[start:start + chunk]
        zr, xr, yr = z[r, None], x[r, None], y[r, None]
        if ctx.p == 2:
            s = add(mul(xr, y[None, :]), mul(x[None, :], yr))
            num = add(mul(s, s), mul(add(mul(xr, z[None, :]), mul(x[None, :], zr)),
                                     add(mul(yr, z[None, :]), mul(y[None, :], zr))))
            zz = mul(zr, z[None, :])
            val = mul(num, ctx.inv_array(mul(zz, zz)))
        else:
            s = add(add(mul(two, mul(xr, y[None, :])), mul(two, mul(x[None, :], yr))),
                    ctx.neg_array(mul(zr, z[None, :])))
            val = mul(mul(mul(s, s), mul(delta[r, None], delta[None, :])), inv4)
        out[start:start + len(r)] = val
    return out


def type_from_rho_hat(ctx: FieldCtx, c: int, eps: int) -> int | None:
    """Type forced on m by rho-hat(l, m) = c with l of type eps (q even).

    Returns +1 or -1, or None when no pair with this label exists
    (c = 0 with l elliptic).
    """
    if ctx.p != 2:
        raise ValueError("type constraint is stated for even q")
    if c == 0:
        return 1 if eps == 1 else None
    e = 0 if eps == 1 else 1
    f = (e + abs_trace(ctx, c)) % 2
    return 1 if f == 0 else -1
