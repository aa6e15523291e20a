"""Cyclotomic association schemes on a finite field (a control case)."""

from __future__ import annotations

import numpy as np

from .coherent import DIAG, CoherentConfiguration, Relation
from .gf import FieldCtx, field_ctx, prime_power

__all__ = ["build_cyclotomic"]


def build_cyclotomic(q: int | FieldCtx, e: int) -> CoherentConfiguration:
    """x ~_i y iff x - y lies in the i-th coset of the index-e subgroup of F_q^*.

    Relation i (1 <= i <= e) holds the coset g^{i-1} C_0; relation 0 is the
    diagonal.  Requires -1 in C_0 so that every relation is symmetric.
    """
    ctx = q if isinstance(q, FieldCtx) else field_ctx(*prime_power(q))
    order = ctx.order
    if e <= 1 or (order - 1) % e:
        raise ValueError(f"e = {e} must be > 1 and divide q - 1 = {order - 1}")
    f = (order - 1) // e
    if order % 2 and f % 2:
        raise ValueError(f"-1 is not in the index-{e} subgroup (f = {f} is odd)")
    log = np.array([0] + [ctx.log(x) for x in range(1, order)], dtype=np.int64)
    elems = np.arange(order)
    diff = np.array([[ctx.sub(int(x), int(y)) for y in elems] for x in elems], dtype=np.int64)
    ids = np.where(diff == 0, 0, log[diff] % e + 1).astype(np.uint16)
    sizes = np.bincount(ids.ravel(), minlength=e + 1)
    rels = [Relation(0, DIAG, 1, 1, int(sizes[0]))]
    rels += [Relation(i, i, 1, 1, int(sizes[i])) for i in range(1, e + 1)]
    return CoherentConfiguration(ids, np.ones(order, dtype=np.int8), rels,
                                 name=f"cyclotomic(q={order}, e={e})", ctx=ctx)
