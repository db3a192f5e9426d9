import random

import pytest
from hypothesis import given, settings, strategies as st

from datalin.core import DataVector, Instance, dv_add, dv_permute, dv_scale
from datalin.nsolve import (
    data_projection,
    n_solvable,
    nonreversible_bound,
    reversible_partition,
    smooth,
)

from conftest import (
    pair_generator,
    point_target,
    random_data_vector,
    triangle,
    edge_target,
)


def test_data_projection():
    assert data_projection(triangle(0, 1, 2)) == (3,)
    assert data_projection(DataVector(1, 2, {(0,): (1, -2), (3,): (4, 0)})) == (
        5,
        -2,
    )


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_data_projection_is_additive_and_renaming_invariant(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    a = random_data_vector(rng, 2, 1, range(4))
    b = random_data_vector(rng, 2, 1, range(4))
    assert data_projection(dv_add(a, b)) == (
        data_projection(a)[0] + data_projection(b)[0],
    )
    pi = {0: 7, 1: 8, 2: 9, 3: 10}
    assert data_projection(dv_permute(a, pi)) == data_projection(a)


def test_smooth_symmetrizes_over_the_support():
    import math

    v = DataVector(1, 1, {(0,): (1,), (1,): (2,)})
    s = smooth(v, {0, 1, 2})
    # sum over all 3! renamings: every singleton carries the same value
    assert s.value((0,)) == s.value((1,)) == s.value((2,))
    assert data_projection(s) == (math.factorial(3) * 3,)
    with pytest.raises(ValueError):
        smooth(v, {0, 2})  # must cover the support
    with pytest.raises(ValueError):
        smooth(v, range(20))  # guard on the factorial blow-up


def test_reversible_partition_pair_generator(ex1):
    part = reversible_partition(ex1)
    assert part.reversible == ()
    assert part.nonreversible == (0,)


def test_reversible_partition_sign_swapped():
    up = DataVector(1, 1, {(0,): (1,)})
    down = DataVector(1, 1, {(0,): (-1,)})
    inst = Instance(1, 1, (up, down), point_target(1))
    part = reversible_partition(inst)
    assert part.reversible == (0, 1)


def test_nonreversible_bound_values(ex1, ex2):
    # pair generator: one distinct projection 2, target projection 2,
    # base 2+2+2=6, exponent dim+gens=2 -> 36; support grows by 2 per copy
    b1 = nonreversible_bound(ex1, reversible_partition(ex1))
    assert b1.coeff_bound == 36
    assert b1.s_max == 2
    assert b1.support_size == 1 + 2 * 36
    # triangle: projection 3, target projection 6, base 3+6+2=11 -> 121
    b2 = nonreversible_bound(ex2, reversible_partition(ex2))
    assert b2.coeff_bound == 121
    assert b2.s_max == 3
    assert b2.support_size == 2 + 3 * 121


def test_bound_is_zero_without_nonreversible_generators():
    up = DataVector(1, 1, {(0,): (1,)})
    down = DataVector(1, 1, {(0,): (-1,)})
    inst = Instance(1, 1, (up, down), point_target(1))
    b = nonreversible_bound(inst, reversible_partition(inst))
    assert b.coeff_bound == 0
    assert b.support_size == 1


def test_n_unsolvable_fast_path_via_z(ex1_odd):
    assert n_solvable(ex1_odd).status == "UNSOLVABLE"


def test_n_unsolvable_pair_instance(ex1):
    assert n_solvable(ex1).status == "UNSOLVABLE"


def test_n_unsolvable_triangle_instance(ex2):
    assert n_solvable(ex2).status == "UNSOLVABLE"


def test_n_solvable_direct_sum():
    gen = pair_generator()
    target = DataVector(1, 1, {(0,): (1,), (1,): (2,), (2,): (1,)})
    inst = Instance(1, 1, (gen,), target)
    dec = n_solvable(inst)
    assert dec.status == "SOLVABLE"


def test_n_solvable_single_renamed_copy():
    gen = triangle(0, 1, 2)
    inst = Instance(2, 1, (gen,), dv_permute(gen, {0: 4, 1: 5, 2: 6}))
    assert n_solvable(inst).status == "SOLVABLE"


def test_n_inconclusive_when_capped(ex2):
    # force truncation of the coefficient range
    gen = pair_generator()
    target = DataVector(1, 1, {(0,): (1,), (1,): (2,), (2,): (1,)})
    inst = Instance(1, 1, (gen,), target)
    dec = n_solvable(inst, coeff_cap=0, guess_cap=10)
    assert dec.status in {"SOLVABLE", "INCONCLUSIVE"}
