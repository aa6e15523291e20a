"""Fusions of the line configuration: Frobenius orbits, the five-class
fusion over F_{q^2}, its further merges and the strongly regular graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Hashable

import numpy as np

from .coherent import CoherentConfiguration, Relation, intersection_tensor, relabel, restrict_fibre
from .gf import FieldCtx, abs_trace
from .tables import (
    FIVE_ORDER,
    SRG_ORDER,
    THREE_ORDER,
    elliptic_fusion_eigenmatrices,
    fused_tables,
    srg_parameters,
)

__all__ = [
    "FusionSpec",
    "apply_fusion",
    "frobenius_orbits",
    "frobenius_fusion",
    "five_class_label",
    "five_class_fusion",
    "three_class_fusion",
    "srg_fusion",
    "three_class_and_srg_fusions",
    "counted_fused",
    "compare_tables",
    "srg_graph",
    "check_srg",
    "srg_matches",
    "srg_parameters",
    "elliptic_fusion_eigenmatrices",
    "fused_tables",
]


@dataclass
class FusionSpec:
    """Maps a non-diagonal relation to its fused class label.

    ``applies`` restricts the merge to the listed fibre pairs; relations in
    other fibre pairs keep their label.
    """

    name: str
    mapping: Callable[[Hashable], Hashable]
    applies: set[tuple[int, int]] | None = field(default=None)

    def __call__(self, rel: Relation) -> Hashable:
        if self.applies is not None and (rel.eps, rel.phi) not in self.applies:
            return rel.label
        return self.mapping(rel.label)


def apply_fusion(cc: CoherentConfiguration, spec: FusionSpec) -> CoherentConfiguration:
    return relabel(cc, spec, name=f"{cc.name}/{spec.name}")


def frobenius_orbits(ctx: FieldCtx, k: int) -> list[list[int]]:
    """Orbits of x -> x^(2^k) on F_q, each sorted, ordered by smallest member."""
    seen, orbits = set(), []
    for x in ctx.elements():
        if x in seen:
            continue
        orb, y = [], x
        while y not in orb:
            orb.append(y)
            y = ctx.frobenius(y, k)
        seen.update(orb)
        orbits.append(sorted(orb))
    return orbits


def frobenius_fusion(cc: CoherentConfiguration, k: int = 1) -> CoherentConfiguration:
    """Merge rho-hat labels along orbits of the automorphism x -> x^(2^k)."""
    ctx = cc.ctx
    if ctx is None or ctx.p != 2:
        raise ValueError("Frobenius fusion needs a configuration over GF(2^r)")
    if math.gcd(k, ctx.degree) != 1:
        raise ValueError(f"gcd({k}, {ctx.degree}) != 1")
    rep = {x: orb[0] for orb in frobenius_orbits(ctx, k) for x in orb}
    return apply_fusion(cc, FusionSpec(f"frob{k}", lambda lab: rep[lab]))


def five_class_label(ctx: FieldCtx, c: int) -> str:
    """Class of a rho-hat value c in F_{q^2} = ctx over its subfield F_q."""
    base = ctx.parent
    if ctx.in_base(c):
        if c == 0:
            return "4"
        return "1" if abs_trace(base, c) == 0 else "2"
    return "3" if abs_trace(ctx, c) == 0 else "5"


def five_class_fusion(cc: CoherentConfiguration) -> CoherentConfiguration:
    ctx = cc.ctx
    if ctx is None or ctx.p != 2 or ctx.parent is None:
        raise ValueError("five-class fusion needs a configuration over a tower F_{q^2}, q even")
    table = {c: five_class_label(ctx, c) for c in ctx.elements()}
    return apply_fusion(cc, FusionSpec("five", lambda lab: table[lab]))


def three_class_fusion(five: CoherentConfiguration) -> CoherentConfiguration:
    merge = {"1": "12", "2": "12"}
    return apply_fusion(five, FusionSpec("three", lambda lab: merge.get(lab, lab)))


def srg_fusion(three: CoherentConfiguration) -> CoherentConfiguration:
    merge = {"12": "124", "4": "124"}
    return apply_fusion(three, FusionSpec("srg", lambda lab: merge.get(lab, lab), {(1, 1)}))


def three_class_and_srg_fusions(five: CoherentConfiguration) -> list[CoherentConfiguration]:
    three = three_class_fusion(five)
    return [three, srg_fusion(three)]


def counted_fused(cc: CoherentConfiguration, tensor, k: Hashable, i: Hashable, j: Hashable,
                  eps: int) -> int | None:
    """p^k_{i,j}(eps) from a counted tensor, summing over the middle fibre.

    None if no relation with label k starts in fibre eps.
    """
    keys = cc.by_key
    phis = [phi for phi in (1, -1) if (k, eps, phi) in keys]
    if not phis:
        return None
    phi = phis[0]
    kk = keys[(k, eps, phi)]
    total = 0
    for theta in (1, -1):
        a = keys.get((i, eps, theta))
        b = keys.get((j, theta, phi))
        if a is not None and b is not None:
            total += int(tensor.p[a, b, kk])
    return total


_ORDERS = {"five": FIVE_ORDER, "three": THREE_ORDER, "srg": SRG_ORDER}


def compare_tables(cc: CoherentConfiguration, name: str, q: int, tensor=None) -> list[dict]:
    """Every tabulated entry next to its brute-force count.

    Returns one record per (eps, k, i, j) with keys expected, counted, match.
    """
    tensor = tensor if tensor is not None else intersection_tensor(cc)
    order = _ORDERS[name]
    out = []
    for eps in (1, -1):
        tables = fused_tables(q, eps)
        if name not in tables.entries:
            continue
        for k, block in tables.entries[name].items():
            for i in order:
                for j in order:
                    got = counted_fused(cc, tensor, k, i, j, eps)
                    exp = block[(i, j)]
                    out.append({"eps": eps, "k": k, "i": i, "j": j, "expected": exp,
                                "counted": got, "match": got == exp})
    return out


def srg_graph(fused: CoherentConfiguration, eps: int, label: str) -> tuple[np.ndarray, CoherentConfiguration]:
    """Adjacency matrix of relation ``label`` inside fibre eps."""
    scheme = restrict_fibre(fused, eps)
    rid = next(r.id for r in scheme.relations if r.label == label)
    return scheme.adjacency(rid, np.int64), scheme


def check_srg(adj: np.ndarray) -> tuple[bool, tuple[int, int, int, int] | None, str]:
    """Vertex-by-vertex strong regularity test.

    Returns (ok, (v, k, lambda, mu) or None, detail); mu is None for a
    complete graph.
    """
    adj = np.asarray(adj, dtype=np.int64)
    n = adj.shape[0]
    if not np.array_equal(adj, adj.T) or np.any(np.diag(adj)):
        return False, None, "not a simple undirected graph"
    deg = adj.sum(axis=1)
    if np.any(deg != deg[0]):
        return False, None, f"vertex {int(np.argmax(deg != deg[0]))} has degree {int(deg.max())}"
    common = adj @ adj
    off = ~np.eye(n, dtype=bool)
    lam_vals = np.unique(common[(adj == 1) & off])
    mu_vals = np.unique(common[(adj == 0) & off])
    if len(lam_vals) > 1 or len(mu_vals) > 1:
        return False, None, f"lambda values {lam_vals.tolist()}, mu values {mu_vals.tolist()}"
    lam = int(lam_vals[0]) if len(lam_vals) else 0
    if not len(mu_vals):  # complete graph: mu is vacuous
        return True, (n, int(deg[0]), lam, None), "complete graph, mu vacuous"
    return True, (n, int(deg[0]), lam, int(mu_vals[0])), "ok"


def srg_matches(params, expected) -> bool:
    """Counted parameters agree with expected ones; a vacuous mu matches anything."""
    if params is None:
        return False
    return params[:3] == tuple(expected[:3]) and params[3] in (None, expected[3])
