from __future__ import annotations

import itertools

import pytest

from conic_schemes.gf import INF
from conic_schemes.projconic import (
    Conic,
    LineType,
    canonical,
    classify_line,
    conic_point,
    enumerate_lines,
    incident,
    intersect_conic,
    is_real,
    lines_to_csv,
    make_line,
    tangent_line,
)

from conftest import field, tower

W = 2


def test_conic_points():
    F = field(4)
    assert conic_point(F, 0).coords == (0, 0, 1)
    assert conic_point(F, INF).coords == (0, 1, 0)
    assert conic_point(F, W).coords == (1, W, F.mul(W, W))


def test_tangent_examples():
    F = field(4)
    assert tangent_line(F, INF).coords == (0, 0, 1)
    assert tangent_line(F, 1).coords == (0, 1, 1)


@pytest.mark.parametrize("q", [2, 4, 8, 16])
def test_tangents_concurrent_at_nucleus(q):
    F = field(q)
    conic = Conic(F)
    nuc = conic.nucleus().coords
    assert nuc == (1, 0, 0)
    assert all(incident(F, nuc, t.coords) for t in conic.tangents)


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_tangent_touches_conic_odd(q):
    F = field(q)
    conic = Conic(F)
    for xi, t in zip(conic.params, conic.tangents):
        assert t.type is LineType.TANGENT
        on = [p.coords for p in conic.points if incident(F, p.coords, t.coords)]
        assert on == [conic_point(F, xi).coords]


@pytest.mark.parametrize("q", [3, 5, 7])
def test_printed_tangent_sign_touches_minus_xi(q):
    # in odd characteristic (2 xi, 1, xi^2) is the tangent at P_{-xi}, not at P_xi
    F = field(q)
    for xi in range(1, q):
        printed = (F.mul(2, xi), 1, F.mul(xi, xi))
        assert not incident(F, conic_point(F, xi).coords, printed)
        assert incident(F, conic_point(F, F.neg(xi)).coords, printed)
        assert tangent_line(F, F.neg(xi)).coords == canonical(F, printed)


def test_classify_examples():
    F = field(4)
    assert classify_line(F, (1, 0, 0)) is LineType.HYPERBOLIC
    assert classify_line(F, (0, 0, 1)) is LineType.TANGENT
    assert classify_line(F, (1, 1, W)) is LineType.ELLIPTIC
    with pytest.raises(ValueError):
        classify_line(F, (0, 0, 0))


def test_intersect_examples():
    F = field(4)
    assert intersect_conic(F, (1, 0, 0)) == (0, INF)
    assert intersect_conic(F, (1, 0, 1)) == (1, INF)
    a, b = intersect_conic(F, (1, 1, W))
    T = F.extension
    assert not T.in_base(a) and T.relative_frobenius(a) == b
    with pytest.raises(ValueError, match="tangent"):
        intersect_conic(F, (0, 1, 1))


@pytest.mark.parametrize("q,plus,minus", [(2, 3, 1), (3, 6, 3), (4, 10, 6), (5, 15, 10), (8, 36, 28),
                                          (16, 136, 120)])
def test_line_counts(q, plus, minus):
    L = enumerate_lines(field(q), with_meets=False)
    assert len(L.all) == q * q + q + 1
    assert len(L.lines) == q * q
    assert (len(L.plus), len(L.minus)) == (plus, minus)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
def test_oval_property(q):
    F = field(q)
    conic = Conic(F)
    pts = [p.coords for p in conic.points]
    assert len(set(pts)) == q + 1
    L = enumerate_lines(F, with_meets=False)
    tangents = 0
    for ln in L.all:
        k = sum(incident(F, p, ln) for p in pts)
        assert k <= 2
        tangents += k == 1
    assert tangents == q + 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_type_matches_intersection(q):
    F = field(q)
    T = F.extension
    L = enumerate_lines(F)
    pairs = set()
    for ln in L.lines:
        a, b = ln.meets
        real = [t is INF or T.in_base(t) for t in (a, b)]
        if ln.type is LineType.HYPERBOLIC:
            assert all(real) and a != b
        else:
            assert not any(real) and T.relative_frobenius(a) == b
        pairs.add((a, b))
    assert len(pairs) == len(L.lines)  # line -> point pair is injective


def test_even_lines_have_unit_first_coordinate():
    L = enumerate_lines(field(8), with_meets=False)
    assert all(ln.coords[0] == 1 for ln in L.lines)


def test_is_real_examples():
    T = tower(4)
    assert is_real(T, conic_point(T, W).coords)
    alpha = next(x for x in T.elements() if not T.in_base(x))
    assert not is_real(T, conic_point(T, alpha).coords)
    real = [p for p in Conic(T).points if is_real(T, p.coords)]
    assert len(real) == 5


def test_make_line_canonicalises():
    F = field(4)
    ln = make_line(F, (W, W, W))
    assert ln.coords == (1, 1, 1)
    assert ln.type is classify_line(F, (1, 1, 1))


def test_lines_csv():
    L = enumerate_lines(field(2), with_meets=False)
    text = lines_to_csv(L.lines)
    assert text.splitlines()[0] == "z,x,y,type"
    assert len(text.splitlines()) == 5
    assert "elliptic" in text


def test_enumeration_is_deterministic():
    a = enumerate_lines(field(8), with_meets=False)
    b = enumerate_lines(field(8), with_meets=False)
    assert [ln.coords for ln in a.lines] == [ln.coords for ln in b.lines]
    assert list(itertools.islice((ln.coords for ln in a.lines), 2)) == [(1, 0, 0), (1, 0, 1)]
