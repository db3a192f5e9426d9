import random

import pytest
from hypothesis import given, settings, strategies as st

from datalin.calculus import (
    CalculusError,
    SimpleSpec,
    construct_simple,
    cut,
    enrich,
    eval_terms,
    express_via_simple,
    is_m_isolated,
    is_pre_m_isolated,
    kneser_disjointness_matrix,
    kneser_full_rank,
    merge_terms,
    proportionality_check,
    reduction_matrix,
    swap,
    verify_simple,
)
from datalin.core import (
    DataVector,
    Hypergraph,
    ShapeError,
    dv_add,
    dv_permute,
    dv_scale,
    encode_hypergraph,
    hg_sub,
    weight,
)

from conftest import random_hypergraph, triangle


# ---------------------------------------------------------------------------
# reduction matrices


def test_reduction_matrix_4_3_1_entries():
    # rows: singletons of {0,1,2,3}; columns: 3-subsets, both lexicographic
    r = reduction_matrix(4, 3, 1)
    assert r.row_index == ((0,), (1,), (2,), (3,))
    assert r.col_index == ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
    assert [list(row) for row in r.matrix.entries] == [
        [1, 1, 1, 0],
        [1, 1, 0, 1],
        [1, 0, 1, 1],
        [0, 1, 1, 1],
    ]


def test_reduction_matrix_4_2_1_entries():
    r = reduction_matrix(4, 2, 1)
    assert r.col_index == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
    assert [list(row) for row in r.matrix.entries] == [
        [1, 1, 1, 0, 0, 0],
        [1, 0, 0, 1, 1, 0],
        [0, 1, 0, 1, 0, 1],
        [0, 0, 1, 0, 1, 1],
    ]
    assert all(sum(row) == 3 for row in r.matrix.entries)


def test_reduction_matrix_b_equals_c_is_identity():
    r = reduction_matrix(5, 2, 2)
    n = len(r.row_index)
    assert [list(row) for row in r.matrix.entries] == [
        [1 if i == j else 0 for j in range(n)] for i in range(n)
    ]


def test_reduction_matrix_rejects_bad_order():
    with pytest.raises(ShapeError):
        reduction_matrix(2, 3, 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_kneser_full_rank(k):
    assert kneser_full_rank(k)


def test_kneser_matrix_is_symmetric_with_unit_row_sums_times_k1():
    m = kneser_disjointness_matrix(2)  # 2-subsets of a 5-set
    assert m.rows == m.cols == 10
    assert all(
        m.entries[i][j] == m.entries[j][i]
        for i in range(10)
        for j in range(10)
    )
    # each 2-subset of a 5-set is disjoint from exactly C(3,2)=3 others
    assert all(sum(row) == 3 for row in m.entries)


# ---------------------------------------------------------------------------
# cut / enrich / swap


def tetrahedron(d=1):
    verts = frozenset({0, 1, 2, 3})
    mu = {
        (0, 1, 2): (1,),
        (0, 1, 3): (1,),
        (0, 2, 3): (1,),
        (1, 2, 3): (1,),
    }
    return Hypergraph(verts, 3, d, mu)


def test_cut_tetrahedron_to_triangle():
    t = cut(tetrahedron(), {0})
    assert t.arity == 2
    assert t.vertices == frozenset({1, 2, 3})
    # the face avoiding the cut vertex disappears
    assert dict(t.mu) == {(1, 2): (1,), (1, 3): (1,), (2, 3): (1,)}


def test_cut_rejects_bad_arguments():
    with pytest.raises(ShapeError):
        cut(tetrahedron(), {7})
    with pytest.raises(ShapeError):
        cut(tetrahedron(), {0, 1, 2})


def test_enrich_inverts_cut():
    g = encode_hypergraph(triangle(1, 2, 3))
    e = enrich(g, {9})
    assert e.arity == 3
    assert dict(e.mu) == {
        (1, 2, 9): (1,),
        (1, 3, 9): (1,),
        (2, 3, 9): (1,),
    }
    assert cut(e, {9}).as_data_vector() == g.as_data_vector()
    with pytest.raises(ShapeError):
        enrich(g, {1})


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_cut_weight_transfer(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    h = random_hypergraph(rng, 3, 1, range(5))
    alpha = data.draw(st.sampled_from(sorted(h.vertices)))
    c = cut(h, {alpha})
    for y in [(x,) for x in h.vertices if x != alpha] + [
        (a, b)
        for a in h.vertices
        for b in h.vertices
        if a < b and alpha not in (a, b)
    ]:
        assert weight(c, y) == weight(h, tuple(sorted(set(y) | {alpha})))


def test_swap_is_an_involution_and_preserves_outside_weights():
    g = encode_hypergraph(triangle(0, 1, 2))
    s = swap(g, 0, 9)
    assert swap(s, 9, 0).mu == g.mu
    diff = hg_sub(g, Hypergraph(g.vertices | {9}, 2, 1, dict(s.mu)))
    for beta in (1, 2):
        assert weight(diff, (beta,)) == (0,)


# ---------------------------------------------------------------------------
# isolation and proportionality


def test_is_m_isolated():
    empty = Hypergraph(frozenset({0, 1, 2}), 2, 1, {})
    assert all(is_m_isolated(empty, m) for m in range(3))
    g1 = Hypergraph(frozenset({0, 1, 2}), 2, 1, {(0, 2): (5,), (1, 2): (-5,)})
    assert is_m_isolated(g1, 0)
    assert not is_m_isolated(g1, 1)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_pre_m_isolated_implies_m_isolated(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    k = data.draw(st.integers(1, 3))
    h = random_hypergraph(rng, k, 1, range(k + 2))
    for m in range(1, k + 1):
        if is_pre_m_isolated(h, m):
            assert is_m_isolated(h, m)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_proportionality_identity(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    k = data.draw(st.integers(1, 3))
    h = random_hypergraph(rng, k, 1, range(k + 2))
    m = data.draw(st.integers(0, k))
    x = tuple(sorted(rng.sample(sorted(h.vertices), m)))
    for l in range(m, k + 1):
        assert proportionality_check(h, x, l)


# ---------------------------------------------------------------------------
# simple hypergraphs


def test_example_triangle_is_0_simple():
    # triangle with edge weights x, y, z is (0, x+y+z)-simple
    g0 = Hypergraph(
        frozenset({0, 1, 2}),
        2,
        1,
        {(0, 1): (1,), (1, 2): (2,), (0, 2): (3,)},
    )
    assert verify_simple(g0, SimpleSpec(0, (6,), (), (), (0, 1, 2)))
    assert not verify_simple(g0, SimpleSpec(0, (5,), (), (), (0, 1, 2)))


def test_example_path_is_1_simple():
    # edges {a,c} -> +a and {b,c} -> -a with A={a}, B={b}, C={c}
    g1 = Hypergraph(frozenset({0, 1, 2}), 2, 1, {(0, 2): (5,), (1, 2): (-5,)})
    assert verify_simple(g1, SimpleSpec(1, (5,), (0,), (1,), (2,)))
    assert not verify_simple(g1, SimpleSpec(1, (-5,), (0,), (1,), (2,)))


def test_example_four_cycle_is_2_simple():
    # transversal 2-sets alternate +a/-a; pair-internal edges are absent
    a = (7,)
    g2 = Hypergraph(
        frozenset({0, 1, 2, 3}),
        2,
        1,
        {(0, 1): (7,), (0, 3): (-7,), (1, 2): (-7,), (2, 3): (7,)},
    )
    assert verify_simple(g2, SimpleSpec(2, a, (0, 1), (2, 3), ()))


def test_triangle_fails_m1_spec():
    g0 = encode_hypergraph(triangle(0, 1, 2))
    assert not verify_simple(g0, SimpleSpec(1, (3,), (0,), (1,), (2,)))


def _self_check_pair(g, xs):
    hg, spec, terms = construct_simple(g, xs)
    assert verify_simple(hg, spec)
    assert eval_terms(g.as_data_vector(), terms) == hg.as_data_vector()
    assert spec.m == len(xs)
    assert spec.a == weight(g, xs)


def test_construct_simple_small_examples():
    g = encode_hypergraph(triangle(0, 1, 2))
    _self_check_pair(g, (0,))
    _self_check_pair(g, (0, 1))
    _self_check_pair(g, ())


def test_construct_simple_arity_one():
    g = Hypergraph(frozenset({0, 1}), 1, 1, {(0,): (1,), (1,): (1,)})
    _self_check_pair(g, (0,))
    _self_check_pair(g, ())


def test_construct_simple_random(subtests=None):
    rng = random.Random(5)
    done = 0
    while done < 25:
        k = rng.randint(1, 3)
        h = random_hypergraph(rng, k, 1, range(rng.randint(k, k + 2)))
        if h.as_data_vector().is_zero():
            continue
        m = rng.randint(0, k)
        xs = tuple(sorted(rng.sample(sorted(h.vertices), m)))
        _self_check_pair(h, xs)
        done += 1


def test_construct_simple_rejects_bad_x():
    g = encode_hypergraph(triangle(0, 1, 2))
    with pytest.raises(ShapeError):
        construct_simple(g, (9,))
    with pytest.raises(ShapeError):
        construct_simple(g, (0, 1, 2))


# ---------------------------------------------------------------------------
# formal term combinations


def test_merge_and_eval_terms():
    g = triangle(0, 1, 2).entries
    dv = DataVector(2, 1, g)
    terms = [(1, {0: 0, 1: 1, 2: 2}), (2, {0: 0, 1: 1, 2: 2})]
    merged = merge_terms(terms)
    assert merged == [(3, {0: 0, 1: 1, 2: 2})]
    assert eval_terms(dv, merged) == dv_scale(3, dv)


def test_express_via_simple_reconstructs_target():
    gen = triangle(0, 1, 2)
    target = DataVector(2, 1, {(0, 1): (6,)})
    pieces = express_via_simple(target, [gen], tuple(range(6)))
    total = DataVector(2, 1, {})
    simple_sum = DataVector(2, 1, {})
    for hg, spec, fam_terms in pieces:
        assert verify_simple(hg, spec)
        simple_sum = dv_add(simple_sum, hg.as_data_vector())
        for c, gi, ren in fam_terms:
            total = dv_add(total, dv_scale(c, dv_permute(gen, ren)))
    assert simple_sum == target
    assert total == target
