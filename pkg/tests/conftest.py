"""Shared builders for the test suite."""

import itertools
import random

import pytest

from datalin.core import DataVector, Hypergraph, Instance


def pair_generator(x=0, y=1):
    """Arity-1 vector worth 1 at each of two atoms."""
    return DataVector(1, 1, {(x,): (1,), (y,): (1,)})


def point_target(value, atom=0):
    return DataVector(1, 1, {(atom,): (value,)})


def triangle(a, b, c, weight=1):
    """Arity-2 vector: the three edges of the triangle a,b,c, each `weight`."""
    entries = {
        tuple(sorted(e)): (weight,)
        for e in itertools.combinations((a, b, c), 2)
    }
    return DataVector(2, 1, entries)


def edge_target(value, x=0, y=1):
    return DataVector(2, 1, {tuple(sorted((x, y))): (value,)})


@pytest.fixture
def ex1():
    """Arity-1 instance: pair generator, target 2 at a single atom."""
    return Instance(1, 1, (pair_generator(),), point_target(2))


@pytest.fixture
def ex1_odd():
    """Same generator, target 3 at a single atom (not Z-solvable)."""
    return Instance(1, 1, (pair_generator(),), point_target(3))


@pytest.fixture
def ex2():
    """Arity-2 instance: unit triangle generator, single edge of weight 6."""
    return Instance(2, 1, (triangle(0, 1, 2),), edge_target(6))


@pytest.fixture
def ex2_odd():
    """Unit triangle generator, single edge of weight 3 (not Z-solvable)."""
    return Instance(2, 1, (triangle(0, 1, 2),), edge_target(3))


def random_data_vector(rng: random.Random, k, d, atoms, lo=-2, hi=2, p=0.6):
    entries = {}
    for e in itertools.combinations(sorted(atoms), k):
        if rng.random() < p:
            v = tuple(rng.randint(lo, hi) for _ in range(d))
            if any(v):
                entries[e] = v
    return DataVector(k, d, entries)


def random_hypergraph(rng: random.Random, k, d, atoms, lo=-2, hi=2, p=0.6):
    dv = random_data_vector(rng, k, d, atoms, lo, hi, p)
    return Hypergraph(frozenset(atoms), k, d, dict(dv.entries))
