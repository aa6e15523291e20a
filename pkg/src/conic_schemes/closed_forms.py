"""Closed-form valencies and intersection numbers of the line configuration.

Labels are rho-hat values.  ``eps`` is the type of the first line l of a
pair (l, m); the type of m is forced by the label for even q.
"""

from __future__ import annotations

from .gf import FieldCtx, abs_trace, classes

__all__ = [
    "nonempty_labels",
    "closed_form_valency",
    "closed_form_pi",
    "closed_form_p",
    "counted_p",
]


def _tr(ctx: FieldCtx, x: int) -> int:
    return abs_trace(ctx, x)


def nonempty_labels(ctx: FieldCtx, eps: int, phi: int) -> list[int]:
    """Labels of the nonempty non-diagonal relations between fibres eps and phi."""
    tc = classes(ctx)
    if eps == phi == 1:
        labels = tc.T0_plus
    elif eps != phi:
        labels = tc.T1_plus
    elif ctx.p == 2:
        labels = tc.T0_star
    else:
        labels = tc.T0_plus - {ctx.inv(ctx.from_int(4))}
    return sorted(labels)


def closed_form_valency(a: int, eps: int, ctx: FieldCtx, phi: int | None = None) -> int:
    """Valency of R_a(eps, phi): number of m with rho-hat(l, m) = a for fixed l in L_eps."""
    q = ctx.order
    if ctx.p == 2:
        forced = 1 if a == 0 else (eps if _tr(ctx, a) == 0 else -eps)
        if phi is not None and phi != forced:
            raise ValueError(f"label {a} does not occur between fibres {eps} and {phi}")
        if a not in nonempty_labels(ctx, eps, forced):
            raise ValueError(f"label {a} is empty for eps = {eps}")
        return 2 * (q - 1) if a == 0 else q - eps
    if phi is None:
        raise ValueError("odd q needs the fibre of the second line")
    if a not in nonempty_labels(ctx, eps, phi):
        raise ValueError(f"label {a} is empty for fibres ({eps}, {phi})")
    quarter = ctx.inv(ctx.from_int(4))
    if a == quarter:  # lines meeting on the conic, cross-ratio class {0, inf}
        return 2 * (q - 1)
    if a == 0:  # cross-ratio -1
        return (q - eps) // 2
    return q - eps


def _first_with_trace(ctx: FieldCtx, e: int) -> int:
    return next(v for v in ctx.elements() if _tr(ctx, v) == e)


def closed_form_pi(a: int, b: int, c: int, eps: int, ctx: FieldCtx) -> int:
    """pi^c_{a,b}(eps) = #{n in L : rho-hat(l, n) = a, rho-hat(n, m) = b} (q even).

    (l, m) is any pair with l of type eps and rho-hat(l, m) = c; the count
    includes n = l and n = m.
    """
    if ctx.p != 2:
        raise ValueError("closed-form intersection numbers are for even q")
    q = ctx.order
    s = ctx.add(ctx.add(a, b), c)
    if _tr(ctx, s) == 1:
        return 0
    if c == 0:
        if eps == -1:
            return 0
        if a == b == 0:
            return q + 1
        if a == b:
            return 1
        return 2  # a + b lies in T0*
    e = 0 if eps == 1 else 1
    v = _first_with_trace(ctx, e)
    taus = [t for t in ctx.elements() if ctx.add(ctx.mul(t, t), t) == s]
    total = 0
    for tau in taus:
        if tau == 0:
            total += 1  # the single solution z = infinity
            continue
        rhs = ctx.add(v, ctx.div(ctx.mul(a, c), ctx.mul(tau, tau)))
        total += sum(1 for z in ctx.elements() if ctx.add(ctx.mul(z, z), z) == rhs)
    return total


def closed_form_p(a: int, b: int, c: int, eps: int, ctx: FieldCtx) -> int:
    """p^c_{a,b}(eps): pi with n = l and n = m removed."""
    return (closed_form_pi(a, b, c, eps, ctx)
            - (a == 0) * (b == c) - (b == 0) * (a == c))


def counted_p(cc, tensor, a: int, b: int, c: int, eps: int) -> int:
    """p^c_{a,b}(eps) read off a counted tensor of the rho-hat configuration.

    Sums over the fibre of the middle line; returns None if R_c has no pair
    starting in fibre eps.
    """
    keys = cc.by_key
    phis = [phi for phi in (1, -1) if (c, eps, phi) in keys]
    if not phis:
        return None
    phi = phis[0]
    k = keys[(c, eps, phi)]
    total = 0
    for theta in (1, -1):
        i = keys.get((a, eps, theta))
        j = keys.get((b, theta, phi))
        if i is not None and j is not None:
            total += int(tensor.p[i, j, k])
    return total
