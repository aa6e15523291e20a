from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from conic_schemes.crossratio import (
    CrossRatioValue,
    cross_ratio,
    f_reduce,
    rho_hat_coords,
    rho_hat_matrix,
    rho_hat_points,
    type_from_rho_hat,
)
from conic_schemes.gf import INF, abs_trace, classes
from conic_schemes.group_action import apply_moebius, enumerate_group
from conic_schemes.projconic import enumerate_lines, make_line

from conftest import field

W = 2


def _proj(F):
    return list(F.elements()) + [INF]


def test_cross_ratio_normal_form():
    F = field(8)
    for d in F.elements():
        if d not in (0, 1):
            assert cross_ratio(F, INF, 0, 1, d) == d


def test_cross_ratio_swaps():
    F = field(7)
    rng = random.Random(0)
    pts = _proj(F)
    for _ in range(500):
        a, b, c, d = rng.sample(pts, 4)
        r = cross_ratio(F, a, b, c, d)
        assert cross_ratio(F, b, a, d, c) == r
        s = cross_ratio(F, a, b, d, c)
        assert s == (INF if r == 0 else 0 if r is INF else F.inv(r))


def test_cross_ratio_one_iff_pair_repeats():
    F = field(5)
    assert cross_ratio(F, 2, 2, 3, 4) == 1
    assert cross_ratio(F, 2, 3, 4, 4) == 1
    with pytest.raises(ValueError):
        cross_ratio(F, 1, 1, 1, 2)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_cross_ratio_pgl_invariant(q):
    F = field(q)
    G = enumerate_group(F)
    rng = random.Random(q)
    pts = _proj(F)
    for _ in range(1000):
        a, b, c, d = rng.sample(pts, 4)
        A = rng.choice(G)
        img = [apply_moebius(A, x, F) for x in (a, b, c, d)]
        assert cross_ratio(F, *img) == cross_ratio(F, a, b, c, d)


def test_cross_ratio_value_pair():
    F = field(5)
    v = CrossRatioValue.of(F, 2)
    assert v.pair == (2, 3)
    assert CrossRatioValue.of(F, INF).pair == (0, INF)


@pytest.mark.parametrize("q", [4, 5, 8])
def test_f_reduce_properties(q):
    F = field(q)
    assert f_reduce(F, 1) is INF
    assert f_reduce(F, 0) == f_reduce(F, INF)
    for x in range(1, q):
        assert f_reduce(F, x) == f_reduce(F, F.inv(x))


def test_f_reduce_trace_classes():
    T = field(8).extension
    base = field(8)
    for x in T.elements():
        if x in (0, 1):
            continue
        in_b0 = T.in_base(x)  # B0 = F_q minus {0, 1}; B1 = norm-1 elements
        norm1 = T.mul(x, T.relative_frobenius(x)) == 1
        if not (in_b0 or norm1):
            continue
        y = f_reduce(T, x)
        assert T.in_base(y)
        e = abs_trace(base, y)
        assert e == (0 if in_b0 else 1)


def test_rho_hat_meeting_on_conic_is_zero():
    F = field(4)
    ell, m = make_line(F, (1, 0, 0)), make_line(F, (1, 0, 1))
    assert rho_hat_points(ell, m) == 0
    assert rho_hat_coords(F, ell, m) == 0


def test_rho_hat_translates():
    F = field(8)
    for v, c in itertools.product(range(8), range(1, 8)):
        vc = F.add(v, c)
        a, b = make_line(F, (1, v, v)), make_line(F, (1, vc, vc))
        if a.type.value == 0 or b.type.value == 0:
            continue
        assert rho_hat_points(a, b) == F.mul(c, c)


def test_rho_hat_coords_example_q4():
    F = field(4)
    assert rho_hat_coords(F, (1, 1, 1), (1, W, W)) == W


def test_rho_hat_errors():
    F = field(4)
    ell = make_line(F, (1, 0, 0))
    with pytest.raises(ValueError):
        rho_hat_points(ell, ell)
    with pytest.raises(ValueError):
        rho_hat_coords(F, (1, 0, 0), (0, 1, 1))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 16])
def test_rho_hat_three_paths_agree(q):
    F = field(q)
    L = enumerate_lines(F)
    coords = np.array([ln.coords for ln in L.lines])
    M = rho_hat_matrix(F, coords)
    n = len(L.lines)
    idx = range(n) if q <= 8 else random.Random(0).sample(range(n), 40)
    for i in idx:
        for j in range(n):
            if i == j:
                continue
            ell, m = L.lines[i], L.lines[j]
            v = rho_hat_points(ell, m)
            assert rho_hat_coords(F, ell, m) == v
            assert M[i, j] == v
            if q <= 8:
                assert rho_hat_points(m, ell) == v


@pytest.mark.parametrize("q", [4, 8])
def test_cross_ratio_class_matches_types(q):
    F = field(q)
    T = F.extension
    L = enumerate_lines(F)
    for ell, m in itertools.permutations(L.lines, 2):
        a, b = ell.meets
        c, d = m.meets
        if len({a, b, c, d}) < 4:
            continue
        r = cross_ratio(T, a, b, c, d)
        same = ell.type == m.type
        assert T.in_base(r) == same
        assert (T.mul(r, T.relative_frobenius(r)) == 1) == (not same)


def test_type_from_rho_hat():
    F = field(8)
    tc = classes(F)
    assert type_from_rho_hat(F, 0, 1) == 1
    assert type_from_rho_hat(F, 0, -1) is None
    for c in tc.T1:
        assert type_from_rho_hat(F, c, 1) == -1 and type_from_rho_hat(F, c, -1) == 1
    for c in tc.T0_star:
        assert type_from_rho_hat(F, c, -1) == -1 and type_from_rho_hat(F, c, 1) == 1
    with pytest.raises(ValueError):
        type_from_rho_hat(field(5), 1, 1)


@pytest.mark.parametrize("q", [4, 8])
def test_type_from_rho_hat_agrees_with_lines(q):
    F = field(q)
    L = enumerate_lines(F)
    for ell, m in itertools.permutations(L.lines, 2):
        assert type_from_rho_hat(F, rho_hat_points(ell, m), ell.eps) == m.eps
