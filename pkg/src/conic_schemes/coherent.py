"""Coherent configurations stored as a dense relation-id matrix.

A configuration on n points keeps an (n, n) uint16 matrix ``ids`` whose entry
(x, y) is the index of the relation containing (x, y), a fibre tag per point
(+1 hyperbolic, -1 elliptic, or +1 for a one-fibre scheme) and a relation
table.  Intersection numbers are stored as ``p[i, j, k]`` = p_{ij}^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Hashable, Sequence

import numpy as np

__all__ = [
    "DIAG",
    "Relation",
    "CoherentConfiguration",
    "AxiomReport",
    "ParamTensor",
    "assemble",
    "verify_axioms",
    "intersection_tensor",
    "restrict_fibre",
    "pair_counts",
]

DIAG = "diag"
FULL_MODE_LIMIT = 300


@dataclass(frozen=True)
class Relation:
    id: int
    label: Hashable
    eps: int
    phi: int
    size: int

    @property
    def is_diagonal(self) -> bool:
        return self.label == DIAG


@dataclass
class CoherentConfiguration:
    ids: np.ndarray
    fibre: np.ndarray
    relations: list[Relation]
    name: str = ""
    ctx: Any = None
    lines: list | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.ids.shape[0]

    @property
    def rank(self) -> int:
        return len(self.relations)

    @cached_property
    def fibre_sizes(self) -> dict[int, int]:
        vals, counts = np.unique(self.fibre, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    @cached_property
    def by_key(self) -> dict[tuple, int]:
        return {(r.label, r.eps, r.phi): r.id for r in self.relations}

    def rid(self, label, eps: int = 1, phi: int | None = None) -> int:
        return self.by_key[(label, eps, eps if phi is None else phi)]

    def adjacency(self, rid: int, dtype=np.float64) -> np.ndarray:
        return (self.ids == rid).astype(dtype)

    def valency(self, rid: int) -> int:
        rel = self.relations[rid]
        size, rows = rel.size, self.fibre_sizes[rel.eps]
        if size % rows:
            raise ValueError(f"relation {rel} is not regular")
        return size // rows

    @property
    def valencies(self) -> list[int]:
        return [self.valency(r.id) for r in self.relations]

    def non_diagonal(self, eps: int | None = None, phi: int | None = None) -> list[Relation]:
        out = [r for r in self.relations if not r.is_diagonal]
        if eps is not None:
            out = [r for r in out if r.eps == eps]
        if phi is not None:
            out = [r for r in out if r.phi == phi]
        return out

    def class_count(self, eps: int) -> int:
        """Number of non-diagonal relations inside the fibre eps x eps."""
        return len(self.non_diagonal(eps, eps))

    def labels(self, eps: int, phi: int) -> list:
        return [r.label for r in self.non_diagonal(eps, phi)]

    def fingerprint(self) -> str:
        import hashlib

        return hashlib.sha256(np.ascontiguousarray(self.ids, dtype="<u2").tobytes()).hexdigest()


def assemble(fibre: Sequence[int], labels: np.ndarray, decode: Sequence[Hashable],
             name: str = "", ctx=None, lines=None) -> CoherentConfiguration:
    """Build a configuration from integer-coded off-diagonal labels.

    ``labels[x, y]`` indexes ``decode``; the diagonal is ignored and replaced
    by one diagonal relation per fibre.  Relations are keyed by
    (fibre of x, fibre of y, label) and numbered in that sort order with
    hyperbolic fibre first and the diagonal first within its block.
    """
    fibre = np.asarray(fibre, dtype=np.int8)
    n = len(fibre)
    nl = len(decode) + 1  # slot 0 is the diagonal
    fi = (fibre == -1).astype(np.int64)
    key = np.empty((n, n), dtype=np.int32)
    step = max(1, (1 << 22) // max(n, 1))
    for s in range(0, n, step):
        block = labels[s:s + step].astype(np.int32) + 1
        key[s:s + step] = ((fi[s:s + step, None] * 2 + fi[None, :]) * nl + block)
    diag = np.arange(n)
    key[diag, diag] = (fi * 2 + fi) * nl
    present = np.flatnonzero(np.bincount(key.ravel(), minlength=4 * nl))
    lut = np.full(4 * nl, -1, dtype=np.int64)
    lut[present] = np.arange(len(present))
    counts = np.bincount(key.ravel(), minlength=4 * nl)[present]
    if len(present) >= 1 << 16:
        raise ValueError("too many relations for 16-bit ids")
    ids = lut[key].astype(np.uint16)
    del key
    relations = []
    for rid, (k, size) in enumerate(zip(present, counts)):
        block, lab = divmod(int(k), nl)
        eps = 1 if block // 2 == 0 else -1
        phi = 1 if block % 2 == 0 else -1
        label = DIAG if lab == 0 else decode[lab - 1]
        relations.append(Relation(rid, label, eps, phi, int(size)))
    return CoherentConfiguration(ids, fibre, relations, name=name, ctx=ctx, lines=lines)


# -- intersection numbers ---------------------------------------------------

def pair_counts(cc: CoherentConfiguration, x: int, y: int) -> np.ndarray:
    """r x r matrix c[i, j] = #{z : (x, z) in R_i, (z, y) in R_j}."""
    r = cc.rank
    codes = cc.ids[x, :].astype(np.int64) * r + cc.ids[:, y].astype(np.int64)
    return np.bincount(codes, minlength=r * r).reshape(r, r)


@dataclass
class ParamTensor:
    """p[i, j, k] = p_{ij}^k, valencies and fibre sizes."""

    p: np.ndarray
    valencies: list[int]
    fibre_sizes: dict[int, int]
    representatives: list[tuple[int, int]]

    def __getitem__(self, ijk: tuple[int, int, int]) -> int:
        return int(self.p[ijk])

    def nonzero(self) -> list[list[int]]:
        return [[int(i), int(j), int(k), int(self.p[i, j, k])] for i, j, k in np.argwhere(self.p)]


def _representatives(cc: CoherentConfiguration) -> list[tuple[int, int]]:
    vals, first = np.unique(cc.ids.ravel(), return_index=True)
    if len(vals) != cc.rank:
        raise ValueError("empty relation in configuration")
    return [divmod(int(f), cc.n) for f in first]


def intersection_tensor(cc: CoherentConfiguration) -> ParamTensor:
    """Count p_{ij}^k from one representative pair per relation k."""
    r = cc.rank
    reps = _representatives(cc)
    p = np.zeros((r, r, r), dtype=np.int64)
    for k, (x, y) in enumerate(reps):
        p[:, :, k] = pair_counts(cc, x, y)
    return ParamTensor(p, cc.valencies, dict(cc.fibre_sizes), reps)


# -- axioms -------------------------------------------------------------------

@dataclass
class AxiomReport:
    passed: bool
    mode: str
    seed: int
    checks: dict[str, bool]
    counterexample: str | None = None

    def __bool__(self) -> bool:
        return self.passed


def _fail(report_checks, name, mode, seed, msg) -> AxiomReport:
    report_checks[name] = False
    return AxiomReport(False, mode, seed, report_checks, msg)


def verify_axioms(cc: CoherentConfiguration, mode: str = "auto", seed: int = 0,
                  samples: int = 100) -> AxiomReport:
    """Check the four coherent-configuration axioms.

    Axioms 1-3 are always checked exactly.  Constancy of p_{ij}^k is checked
    for every pair in ``full`` mode (by matrix products) or for ``samples``
    random pairs per relation in ``sampled`` mode; ``auto`` picks full for
    n <= 300.
    """
    if mode == "auto":
        mode = "full" if cc.n <= FULL_MODE_LIMIT else "sampled"
    if mode not in ("full", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    checks: dict[str, bool] = {}
    ids, r, n = cc.ids, cc.rank, cc.n

    # 1. partition into nonempty relations, each inside one fibre product
    counts = np.bincount(ids.ravel(), minlength=r)
    if len(counts) > r or np.any(counts[:r] == 0):
        return _fail(checks, "partition", mode, seed, "relation ids out of range or empty relation")
    fcode = (cc.fibre == -1).astype(np.int64)
    rel_fp = np.array([(rel.eps == -1) * 2 + (rel.phi == -1) for rel in cc.relations])
    got = fcode[:, None] * 2 + fcode[None, :]
    bad = np.argwhere(rel_fp[ids] != got)
    if len(bad):
        x, y = bad[0]
        return _fail(checks, "partition", mode, seed,
                     f"pair ({x},{y}) in relation {ids[x, y]} crosses fibre products")
    checks["partition"] = True

    # 2. diagonal is a union of relations
    diag_ids = np.unique(np.diag(ids))
    off = ~np.eye(n, dtype=bool)
    clash = np.argwhere(np.isin(ids, diag_ids) & off)
    if len(clash):
        x, y = clash[0]
        return _fail(checks, "diagonal", mode, seed,
                     f"off-diagonal pair ({x},{y}) lies in diagonal relation {ids[x, y]}")
    checks["diagonal"] = True

    # 3. transpose closure
    reps = _representatives(cc)
    trans = np.array([ids[y, x] for x, y in reps])
    bad = np.argwhere(ids.T != trans[ids])
    if len(bad):
        x, y = bad[0]
        return _fail(checks, "transpose", mode, seed,
                     f"transpose of relation {ids[x, y]} is not a relation (pair ({x},{y}))")
    checks["transpose"] = True

    # 4. constant intersection numbers
    tensor = intersection_tensor(cc)
    p = tensor.p
    if mode == "full":
        onehot = [cc.adjacency(i, np.float32) for i in range(r)]
        phi = [rel.phi for rel in cc.relations]
        eps = [rel.eps for rel in cc.relations]
        for i in range(r):
            for j in range(r):
                if phi[i] != eps[j]:
                    continue
                prod = onehot[i] @ onehot[j]
                expect = p[i, j][ids]
                bad = np.argwhere(prod != expect)
                if len(bad):
                    x, y = bad[0]
                    return _fail(checks, "intersection", mode, seed,
                                 f"p_{{{i},{j}}} at ({x},{y}) is {int(prod[x, y])}, "
                                 f"expected {int(expect[x, y])} from relation {ids[x, y]}")
    else:
        rng = np.random.default_rng(seed)
        flat = ids.ravel()
        order = np.argsort(flat, kind="stable")
        starts = np.searchsorted(flat[order], np.arange(r + 1))
        for k in range(r):
            members = order[starts[k]:starts[k + 1]]
            pick = members if len(members) <= samples else rng.choice(members, samples, replace=False)
            for f in pick:
                x, y = divmod(int(f), n)
                c = pair_counts(cc, x, y)
                if not np.array_equal(c, p[:, :, k]):
                    i, j = np.argwhere(c != p[:, :, k])[0]
                    return _fail(checks, "intersection", mode, seed,
                                 f"p_{{{i},{j}}} at ({x},{y}) is {int(c[i, j])}, "
                                 f"expected {int(p[i, j, k])} for relation {k}")
    checks["intersection"] = True
    return AxiomReport(True, mode, seed, checks)


def restrict_fibre(cc: CoherentConfiguration, eps: int, name: str | None = None) -> CoherentConfiguration:
    """The association scheme on one fibre, diagonal relation first (id 0)."""
    idx = np.flatnonzero(cc.fibre == eps)
    sub = cc.ids[np.ix_(idx, idx)]
    present = sorted(set(np.unique(sub).tolist()),
                     key=lambda k: (not cc.relations[k].is_diagonal, k))
    lut = np.zeros(cc.rank, dtype=np.uint16)
    rels = []
    for new, old in enumerate(present):
        lut[old] = new
        rel = cc.relations[old]
        rels.append(Relation(new, rel.label, 1, 1, rel.size))
    ids = lut[sub]
    if not np.array_equal(ids, ids.T):
        raise ValueError("restriction is not symmetric")
    lines = [cc.lines[i] for i in idx] if cc.lines is not None else None
    return CoherentConfiguration(ids, np.ones(len(idx), dtype=np.int8), rels,
                                 name=name or f"{cc.name}[{eps:+d}]", ctx=cc.ctx, lines=lines)


def relabel(cc: CoherentConfiguration, mapping: Callable[[Relation], Hashable], name: str) -> CoherentConfiguration:
    """Merge relations sharing (mapping(rel), eps, phi); diagonals stay apart."""
    keys: dict[tuple, int] = {}
    lut = np.zeros(cc.rank, dtype=np.int64)
    order = []
    for rel in cc.relations:
        lab = DIAG if rel.is_diagonal else mapping(rel)
        key = (lab, rel.eps, rel.phi)
        if key not in keys:
            keys[key] = len(keys)
            order.append(key)
        lut[rel.id] = keys[key]
    # renumber in (eps, phi, diagonal-first, label) order
    def sort_key(key):
        lab, e, f = key
        return (-e, -f, lab != DIAG, str(type(lab)), lab if lab != DIAG else "")
    sorted_keys = sorted(order, key=sort_key)
    final = {key: i for i, key in enumerate(sorted_keys)}
    lut = np.array([final[order[v]] for v in lut], dtype=np.uint16)
    ids = lut[cc.ids]
    sizes = np.bincount(ids.ravel(), minlength=len(final))
    rels = [Relation(i, k[0], k[1], k[2], int(sizes[i])) for i, k in enumerate(sorted_keys)]
    return CoherentConfiguration(ids, cc.fibre.copy(), rels, name=name, ctx=cc.ctx, lines=cc.lines)
