from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from conic_schemes.closed_forms import counted_p
from conic_schemes.coherent import intersection_tensor, restrict_fibre, verify_axioms
from conic_schemes.fusion import (
    FusionSpec,
    apply_fusion,
    check_srg,
    compare_tables,
    counted_fused,
    five_class_fusion,
    five_class_label,
    frobenius_fusion,
    frobenius_orbits,
    srg_fusion,
    srg_graph,
    srg_matches,
    three_class_and_srg_fusions,
    three_class_fusion,
)
from conic_schemes.gf import classes
from conic_schemes.spectral import spectral
from conic_schemes.tables import PRINTED_VARIANTS, e, q, table_expr

from conftest import field, five_cc, formula_cc, tower


def test_frobenius_orbits_gf4():
    assert frobenius_orbits(field(4), 1) == [[0], [1], [2, 3]]


def test_frobenius_orbits_gf8():
    orbs = frobenius_orbits(field(8), 1)
    assert [len(o) for o in orbs] == [1, 1, 3, 3]


def test_frobenius_fusion_q4_keeps_hyperbolic_classes():
    fr = frobenius_fusion(formula_cc(4), 1)
    assert fr.class_count(1) == 2 and fr.class_count(-1) == 1
    assert verify_axioms(fr).passed


def test_frobenius_fusion_q8():
    cc = formula_cc(8)
    fr = frobenius_fusion(cc, 1)
    assert verify_axioms(fr, mode="full").passed
    E = restrict_fibre(fr, -1)
    assert E.valencies == [1, 27]  # the three trace-0 labels form one orbit: 3 * 9
    assert sum(E.valencies) == 28


def test_frobenius_gcd_rejected():
    with pytest.raises(ValueError, match="gcd"):
        frobenius_fusion(formula_cc(16), 2)
    with pytest.raises(ValueError):
        frobenius_fusion(formula_cc(5), 1)


@pytest.mark.parametrize("qv", [4, 8])
def test_frobenius_parameter_invariance(qv):
    F = field(qv)
    cc = formula_cc(qv)
    T = intersection_tensor(cc)
    for k in range(1, F.degree):
        if math.gcd(k, F.degree) != 1:
            continue
        tau = lambda x: F.frobenius(x, k)  # noqa: E731
        for eps, a, b, c in itertools.product((1, -1), range(qv), range(qv), range(qv)):
            assert counted_p(cc, T, a, b, c, eps) == counted_p(cc, T, tau(a), tau(b), tau(c), eps)


def test_five_class_labels_q4():
    T = tower(4)
    counts = {}
    for c in T.elements():
        lab = five_class_label(T, c)
        counts[lab] = counts.get(lab, 0) + 1
    assert counts == {"4": 1, "1": 1, "2": 2, "3": 4, "5": 8}


def test_five_class_labels_match_sg_sets():
    T = tower(8)
    tc = classes(T)
    for c in T.elements():
        lab = five_class_label(T, c)
        if c == 0:
            assert lab == "4"
        elif c in tc.S[0]:
            assert lab == "1"
        elif c in tc.S[1]:
            assert lab == "2"
        elif c in tc.T0:
            assert lab == "3"
        else:
            assert lab == "5"


def test_five_class_structure_q4():
    five = five_cc(4)
    assert five.n == 256
    H = restrict_fibre(five, 1)
    E = restrict_fibre(five, -1)
    assert (H.n, H.rank) == (136, 5)
    assert (E.n, E.rank) == (120, 4)
    assert verify_axioms(five, mode="full").passed


def test_five_class_q2_degenerate():
    five = five_cc(2)
    assert "1" not in {r.label for r in five.relations}
    rows = compare_tables(five, "five", 2)
    assert all(r["match"] for r in rows if r["counted"] is not None)


def test_five_requires_tower():
    with pytest.raises(ValueError):
        five_class_fusion(formula_cc(16))


@pytest.mark.parametrize("name", ["five", "three", "srg"])
def test_tables_match_counts_q4(name):
    five = five_cc(4)
    cc = {"five": five, "three": three_class_fusion(five), "srg": srg_fusion(three_class_fusion(five))}[name]
    assert verify_axioms(cc, mode="full").passed
    rows = compare_tables(cc, name, 4)
    assert rows and all(r["match"] for r in rows), [r for r in rows if not r["match"]][:3]


def test_printed_srg_entry_fails_brute_force():
    srg = srg_fusion(three_class_fusion(five_cc(4)))
    counted = counted_fused(srg, intersection_tensor(srg), "3", "124", "124", 1)
    printed = int(table_expr(PRINTED_VARIANTS[("srg", "3", "124", "124")]).subs(q, 4))
    assert counted == 40 and printed == 48


@pytest.mark.parametrize("eps", [1, -1])
def test_literal_parenthesis_reading_fails_brute_force(eps):
    five = five_cc(4)
    counted = counted_fused(five, intersection_tensor(five), "2", "1", "3", eps)
    literal = table_expr("q**2-(4+e)*q+2*(e+2)*q/2").subs({q: 4, e: eps})
    used = table_expr("(q**2-(4+e)*q+2*(e+2))*q/2").subs({q: 4, e: eps})
    assert counted == used != literal


def test_fusion_well_defined_sampled():
    five = five_cc(4)
    for cc in [five, *three_class_and_srg_fusions(five)]:
        rep = verify_axioms(cc, mode="sampled", seed=0, samples=100)
        assert rep.passed, rep.counterexample


@pytest.mark.parametrize("eps,label,params", [(-1, "12", (120, 51, 18, 24)), (1, "124", (136, 75, 42, 40))])
def test_srg_q4(eps, label, params):
    srg = srg_fusion(three_class_fusion(five_cc(4)))
    adj, scheme = srg_graph(srg, eps, label)
    ok, got, _ = check_srg(adj)
    assert ok and got == params


def test_srg_q2_complete_graphs():
    srg = srg_fusion(three_class_fusion(five_cc(2)))
    adj, _ = srg_graph(srg, -1, "12")
    ok, got, detail = check_srg(adj)
    assert ok and got == (6, 5, 4, None) and "complete" in detail
    assert srg_matches(got, (6, 5, 4, 4))
    assert not srg_matches(got, (6, 5, 3, 4))


def test_check_srg_negative():
    path = np.zeros((4, 4), dtype=int)
    for i in range(3):
        path[i, i + 1] = path[i + 1, i] = 1
    ok, params, _ = check_srg(path)
    assert not ok and params is None
    c5 = np.roll(np.eye(5, dtype=int), 1, axis=1) + np.roll(np.eye(5, dtype=int), -1, axis=1)
    assert check_srg(c5)[1] == (5, 2, 0, 1)


def test_elliptic_eigenmatrix_numeric_q4():
    E = restrict_fibre(five_cc(4), -1)
    sd = spectral(E)
    rows = sorted(map(tuple, sd.rounded_P().tolist()))
    assert rows == sorted([(1, 17, 34, 68), (1, -3, -6, 8), (1, -7, 10, -4), (1, 3, 0, -4)])
    assert np.abs(sd.P - sd.rounded_P()).max() < 1e-6


def test_apply_fusion_restricted_pairs():
    five = five_cc(4)
    spec = FusionSpec("merge", lambda lab: "m" if lab in ("1", "2") else lab, {(-1, -1)})
    fused = apply_fusion(five, spec)
    assert fused.labels(-1, -1) == ["3", "m"]
    assert "1" in fused.labels(1, 1)


@pytest.mark.parametrize("qv,elliptic,hyperbolic", [
    (8, [27], [14, 21]),
    (16, [17, 34, 68], [15, 30, 30, 60]),
    (32, [165, 165, 165], [62, 155, 155, 155]),
])
def test_frobenius_valencies(qv, elliptic, hyperbolic):
    # equal elliptic valencies exactly when the field degree is prime
    fr = frobenius_fusion(formula_cc(qv), 1)
    assert sorted(restrict_fibre(fr, -1).valencies[1:]) == elliptic
    assert sorted(restrict_fibre(fr, 1).valencies[1:]) == hyperbolic
