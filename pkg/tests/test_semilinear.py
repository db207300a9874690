import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expeq.lattice import column_echelon, lattice_basis, solve_system, xgcd
from expeq.semilinear import (
    DifferenceNormalForm,
    DimensionError,
    Empty,
    Unknown,
    Witness,
    ZLinearSet,
    ZSemilinearSet,
    box_points,
    concat,
    contains,
    contains_dnf,
    equal_on_box,
    intersect,
    members_in_box,
    natural_witness,
    permute_vector,
    reorder,
    union,
)

L = ZSemilinearSet.linear
DIAG = L((0, 0), [(1, 1)])


def brute_member(piece: ZLinearSet, p, radius=10) -> bool:
    for z in itertools.product(range(-radius, radius + 1), repeat=len(piece.periods)):
        if piece.point(z) == tuple(p):
            return True
    return False


# --- lattice ---------------------------------------------------------------

@pytest.mark.parametrize("a,b", [(12, 18), (-7, 3), (0, 5), (0, 0), (35, -14)])
def test_xgcd(a, b):
    g, x, y = xgcd(a, b)
    assert g >= 0 and a * x + b * y == g
    if a or b:
        assert a % g == 0 and b % g == 0


def test_solve_system_particular_and_kernel():
    cols = [(2,), (3,)]
    sol = solve_system(cols, (1,))
    assert sol is not None
    z, kernel = sol
    assert 2 * z[0] + 3 * z[1] == 1
    assert len(kernel) == 1 and 2 * kernel[0][0] + 3 * kernel[0][1] == 0
    assert solve_system([(2,), (4,)], (1,)) is None


def test_lattice_basis_drops_dependent_generators():
    basis = lattice_basis([(2, 0), (0, 2), (2, 2), (4, 6)], 2)
    assert len(basis) == 2
    ech = column_echelon(basis, 2)
    for v in [(2, 0), (0, 2), (2, 2), (4, 6)]:
        assert ech.contains(v)
    assert not ech.contains((1, 0))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=0, max_size=3),
       st.tuples(st.integers(-6, 6), st.integers(-6, 6)))
def test_echelon_membership_matches_search(periods, target):
    piece = ZLinearSet(2, (0, 0), tuple(periods))
    z = piece.parameters_for(target)
    if z is not None:
        assert piece.point(z) == target
    else:
        assert not brute_member(piece, target, radius=6)


# --- contains --------------------------------------------------------------

def test_contains_examples():
    assert contains(DIAG, (3, 3))
    assert not contains(DIAG, (3, 4))
    assert not brute_member(DIAG.pieces[0], (3, 4))
    assert not contains(ZSemilinearSet.empty(2), (0, 0))


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        contains(DIAG, (1, 2, 3))
    with pytest.raises(DimensionError):
        union(DIAG, ZSemilinearSet.full(3))


# --- union / concat / reorder / intersect ----------------------------------

def test_union_examples():
    s = L((0, 0, 0, 0), [(1, 0, 1, 0)])
    t = L((0, 0, 0, 0), [(0, 1, 0, 1)])
    u = union(s, t)
    assert len(u.pieces) == 2
    assert contains(u, (2, 0, 2, 0)) and contains(u, (0, 5, 0, 5))
    assert not contains(u, (1, 1, 0, 0))
    assert union(DIAG, ZSemilinearSet.empty(2)) == DIAG
    assert equal_on_box(union(DIAG, DIAG), DIAG, [(-5, 5)] * 2)


def test_concat_examples():
    c = concat(L((1,), [(3,)]), DIAG)
    assert contains(c, (4, -2, -2)) and not contains(c, (2, 0, 0))
    assert concat(ZSemilinearSet.empty(1), DIAG).is_empty()
    d = concat(DIAG, L((0,), [(2,)]))
    assert contains(d, (4, 4, 6)) and not contains(d, (4, 4, 7))


def test_reorder_examples():
    s = L((1, -1), [(3, -2)])
    assert reorder(s, (0, 1)) == s
    swapped = reorder(s, (1, 0))
    assert swapped.pieces[0].base == (-1, 1) and swapped.pieces[0].periods == ((-2, 3),)
    box = [(-5, 5)] * 2
    assert equal_on_box(reorder(swapped, (1, 0)), s, box)


def test_intersect_examples():
    r = intersect(DIAG, L((0, 0), [(2, 0), (0, 1)]))
    want = L((0, 0), [(2, 2)])
    assert equal_on_box(r, want, [(-10, 10)] * 2)
    assert intersect(DIAG, ZSemilinearSet.empty(2)).is_empty()
    assert intersect(L((0,), [(2,)]), L((1,), [(2,)])).is_empty()


def test_contains_dnf_examples():
    d = DifferenceNormalForm(1, ((ZSemilinearSet.full(1), L((0,), [(2,)])),))
    assert contains_dnf(d, (3,)) and not contains_dnf(d, (4,))
    d2 = DifferenceNormalForm(2, ((DIAG, ZSemilinearSet.point((0, 0))),))
    assert not contains_dnf(d2, (0, 0)) and contains_dnf(d2, (1, 1))


def test_natural_witness_examples():
    w = natural_witness(L((-1,), [(-2,)]))
    assert isinstance(w, Witness) and w.point[0] >= 0 and w.point[0] % 2 == 1
    assert natural_witness(ZSemilinearSet.point((-2,))) == Empty()
    assert natural_witness(ZSemilinearSet.empty(3)) == Empty()
    # a piece that only becomes nonnegative far out: the search gives up honestly
    far = L((-1000, 0), [(1, 0)])
    assert natural_witness(far, bound=5) == Unknown(5)
    assert isinstance(natural_witness(far, bound=1000), Witness)
    # real relaxation infeasible: proof of emptiness
    assert natural_witness(L((-1, -1), [(1, -1)])) == Empty()


def test_render_format():
    assert ZSemilinearSet.empty(2).render() == "EMPTY"
    assert L((1, -1), [(3, -2)]).render() == "base (1,-1) + Z*(3,-2)"
    two = union(DIAG, ZSemilinearSet.point((5, 0)))
    assert two.render().splitlines() == ["base (0,0) + Z*(1,1)", "base (5,0)"]


def test_members_in_box():
    assert members_in_box(DIAG, [(-1, 1)] * 2) == {(-1, -1), (0, 0), (1, 1)}


# --- hypothesis properties -------------------------------------------------

def vectors(d, lo=-3, hi=3):
    return st.tuples(*[st.integers(lo, hi) for _ in range(d)])


@st.composite
def semilinear(draw, d):
    pieces = []
    for _ in range(draw(st.integers(0, 3))):
        base = draw(vectors(d))
        periods = draw(st.lists(vectors(d), max_size=3))
        pieces.append(ZLinearSet(d, base, tuple(periods)))
    return ZSemilinearSet(d, tuple(pieces))


@st.composite
def pair_and_points(draw):
    d = draw(st.integers(1, 3))
    s, t = draw(semilinear(d)), draw(semilinear(d))
    pts = draw(st.lists(vectors(d, -6, 6), min_size=1, max_size=15))
    # bias towards members so the positive side is exercised too
    for piece in s.pieces + t.pieces:
        z = draw(st.lists(st.integers(-3, 3), min_size=len(piece.periods), max_size=len(piece.periods)))
        pts.append(piece.point(z))
    return d, s, t, pts


@settings(max_examples=80, deadline=None)
@given(pair_and_points())
def test_union_intersect_pointwise(data):
    d, s, t, pts = data
    u, i = union(s, t), intersect(s, t)
    for p in pts:
        assert contains(u, p) == (contains(s, p) or contains(t, p))
        assert contains(i, p) == (contains(s, p) and contains(t, p))


@settings(max_examples=60, deadline=None)
@given(pair_and_points())
def test_concat_pointwise(data):
    d, s, t, pts = data
    c = concat(s, t)
    for p in pts:
        for q in pts[:5]:
            assert contains(c, p + q) == (contains(s, p) and contains(t, q))


@settings(max_examples=60, deadline=None)
@given(pair_and_points(), st.data())
def test_reorder_pointwise_and_composition(data, extra):
    d, s, _, pts = data
    p1 = extra.draw(st.permutations(range(d)))
    p2 = extra.draw(st.permutations(range(d)))
    r = reorder(s, p1)
    for p in pts:
        assert contains(r, permute_vector(p, p1)) == contains(s, p)
    composed = tuple(p1[p2[i]] for i in range(d))
    box = [(-3, 3)] * d
    assert equal_on_box(reorder(reorder(s, p2), p1), reorder(s, composed), box)


@settings(max_examples=40, deadline=None)
@given(pair_and_points())
def test_simplified_keeps_membership(data):
    d, s, t, pts = data
    u = union(s, t)
    v = u.simplified()
    assert len(v.pieces) <= len(u.pieces)
    for p in pts:
        assert contains(u, p) == contains(v, p)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2).flatmap(semilinear))
def test_natural_witness_is_sound(s):
    w = natural_witness(s, bound=4)
    d = s.dimension
    if isinstance(w, Witness):
        assert contains(s, w.point) and min(w.point) >= 0
    elif isinstance(w, Empty):
        assert not any(contains(s, p) for p in box_points([(0, 8)] * d))


def test_merged_cosets_fuses_full_families_only():
    halves = union(L((0, 0), [(2, 2)]), L((1, 1), [(2, 2)]))
    merged = halves.merged_cosets()
    assert len(merged.pieces) == 1 and equal_on_box(merged, DIAG, [(-6, 6)] * 2)
    thirds = union(L((0,), [(3,)]), L((1,), [(3,)]))
    assert len(thirds.merged_cosets().pieces) == 2


@settings(max_examples=60, deadline=None)
@given(pair_and_points())
def test_merged_cosets_keeps_membership(data):
    d, s, t, pts = data
    u = union(s, t)
    for p in pts:
        assert contains(u.merged_cosets(), p) == contains(u, p)
