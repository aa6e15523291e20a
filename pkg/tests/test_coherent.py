from __future__ import annotations

import numpy as np
import pytest

from conic_schemes.coherent import (
    CoherentConfiguration,
    intersection_tensor,
    pair_counts,
    relabel,
    restrict_fibre,
    verify_axioms,
)

from conftest import formula_cc


@pytest.mark.parametrize("q", [3, 4, 5, 8])
def test_formula_passes_axioms_full(q):
    rep = verify_axioms(formula_cc(q), mode="full")
    assert rep.passed, rep.counterexample
    assert rep.checks == {"partition": True, "diagonal": True, "transpose": True, "intersection": True}


def test_sampled_mode_records_seed():
    rep = verify_axioms(formula_cc(8), mode="sampled", seed=7)
    assert rep.passed and rep.mode == "sampled" and rep.seed == 7


def test_auto_mode_threshold():
    assert verify_axioms(formula_cc(8)).mode == "full"


def test_unknown_mode():
    with pytest.raises(ValueError):
        verify_axioms(formula_cc(4), mode="fast")


def _corrupt(cc: CoherentConfiguration) -> CoherentConfiguration:
    """Swap one symmetric pair into another relation of the same fibre product."""
    ids = cc.ids.copy()
    rels = cc.relations
    x, y = next((int(a), int(b)) for a, b in np.argwhere(ids != ids[0, 0])
                if cc.fibre[a] == cc.fibre[b] == 1 and a != b)
    old = rels[ids[x, y]]
    new = next(r for r in rels if r.id != old.id and not r.is_diagonal and (r.eps, r.phi) == (1, 1))
    ids[x, y] = ids[y, x] = new.id
    return CoherentConfiguration(ids, cc.fibre, rels, "corrupted", cc.ctx)


@pytest.mark.parametrize("mode", ["full", "sampled"])
def test_corruption_detected(mode):
    bad = _corrupt(formula_cc(8))
    rep = verify_axioms(bad, mode=mode, samples=10_000)
    assert not rep.passed
    assert rep.checks.get("intersection") is False
    assert "p_{" in rep.counterexample


def test_transpose_violation_detected():
    cc = formula_cc(4)
    ids = cc.ids.copy()
    x, y = 0, 1
    other = next(r.id for r in cc.relations
                 if r.id != ids[x, y] and (r.eps, r.phi) == (cc.relations[ids[x, y]].eps,
                                                             cc.relations[ids[x, y]].phi)
                 and not r.is_diagonal)
    ids[x, y] = other
    rep = verify_axioms(CoherentConfiguration(ids, cc.fibre, cc.relations, "t", cc.ctx))
    assert not rep.passed and rep.checks.get("transpose") is False


def test_restrict_examples():
    E8 = restrict_fibre(formula_cc(8), -1)
    assert (E8.n, E8.rank) == (28, 4)
    H8 = restrict_fibre(formula_cc(8), 1)
    assert (H8.n, H8.rank) == (36, 5)
    assert E8.relations[0].is_diagonal and H8.relations[0].is_diagonal


def test_intersection_e4():
    E4 = restrict_fibre(formula_cc(4), -1)
    T = intersection_tensor(E4)
    assert E4.valencies == [1, 5]
    assert T[1, 1, 1] == 4


def test_diagonal_delta_pattern():
    cc = formula_cc(8)
    T = intersection_tensor(cc)
    diag = [r.id for r in cc.relations if r.is_diagonal]
    for rel in cc.relations:
        for d in diag:
            # p_{d,j}^k = delta_{jk} when d is the diagonal of the first fibre of k
            if cc.relations[d].eps == rel.eps:
                assert T.p[d, :, rel.id].tolist() == [int(j == rel.id) for j in range(cc.rank)]


def test_pseudocyclic_sum_e8():
    E8 = restrict_fibre(formula_cc(8), -1)
    T = intersection_tensor(E8)
    for b in range(1, E8.rank):
        assert sum(T[a, b, a] for a in range(1, E8.rank)) == 8


@pytest.mark.parametrize("q", [4, 5, 8])
def test_row_sums_equal_valency(q):
    cc = formula_cc(q)
    T = intersection_tensor(cc)
    # #{z : (z, y) in R_j} is the valency of the transpose of R_j
    vt = np.array([cc.valency(int(cc.ids[y, x])) for x, y in T.representatives])
    for k, rel in enumerate(cc.relations):
        for i, ri in enumerate(cc.relations):
            if ri.eps != rel.eps:
                continue
            assert T.p[i, :, k].sum() == cc.valency(i)
            assert (T.p[i, :, k] <= np.minimum(cc.valency(i), vt)).all()


def test_pair_counts_matches_matrix_product():
    cc = formula_cc(5)
    A = [cc.adjacency(i) for i in range(cc.rank)]
    x, y = 3, 11
    c = pair_counts(cc, x, y)
    for i in range(cc.rank):
        for j in range(cc.rank):
            assert c[i, j] == (A[i] @ A[j])[x, y]


def test_relabel_merges_and_keeps_diagonals():
    cc = formula_cc(8)
    merged = relabel(cc, lambda r: "x", "all")
    assert sum(r.is_diagonal for r in merged.relations) == 2
    assert merged.rank == 2 + 4  # one class per fibre product
    assert verify_axioms(merged).passed


def test_tensor_nonzero_listing():
    E4 = restrict_fibre(formula_cc(4), -1)
    assert intersection_tensor(E4).nonzero() == [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1],
                                                 [1, 1, 0, 5], [1, 1, 1, 4]]


def test_fingerprint_frozen():
    # relation-id matrices are a deterministic function of the field and enumeration order
    assert formula_cc(4).fingerprint()[:16] == "59187ffdb52019c5"
    assert formula_cc(5).fingerprint()[:16] == "d4f226f6388e3fb4"
