"""Polynomial-time decision of Z-solvability via the local weight criterion.

The target is expressible as an integer combination of renamed generators iff
for every subset X of its carrier's vertices with |X| <= arity (including the
empty set) the weight of X is an integer combination of the generators'
weights of sets of the same cardinality.  Each layer is one classical integer
linear system.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DataVector,
    Hypergraph,
    Instance,
    IntVector,
    KSet,
    encode_hypergraph,
    subsets_of_size,
    weight,
)
from .intlin import IntMatrix, z_solve_system


@dataclass(frozen=True)
class LocalFailure:
    subset: KSet
    target_weight: IntVector
    num_columns: int


@dataclass(frozen=True)
class LocalReport:
    decision: bool
    failures: tuple[LocalFailure, ...]


def layer_columns(generators: tuple[Hypergraph, ...], size: int) -> list[IntVector]:
    """Deduplicated weights of all size-`size` vertex subsets of the
    generator hypergraphs (zero columns dropped)."""
    seen: set[IntVector] = set()
    cols: list[IntVector] = []
    for g in generators:
        for x in subsets_of_size(g.vertices, size):
            w = weight(g, x)
            if any(w) and w not in seen:
                seen.add(w)
                cols.append(w)
    return cols


def local_check(inst: Instance) -> LocalReport:
    """Check every layer of the local criterion and report all failing
    subsets, sorted by (size, lexicographic subset)."""
    target_h = encode_hypergraph(inst.target)
    gen_hs = tuple(encode_hypergraph(g) for g in inst.generators)
    failures: list[LocalFailure] = []
    for size in range(0, inst.arity + 1):
        cols = layer_columns(gen_hs, size)
        matrix = IntMatrix.from_columns(cols, nrows=inst.dim)
        for x in subsets_of_size(target_h.vertices, size):
            w = weight(target_h, x)
            if not any(w):
                continue
            if z_solve_system(matrix, w) is None:
                failures.append(LocalFailure(x, w, len(cols)))
    failures.sort(key=lambda f: (len(f.subset), f.subset))
    return LocalReport(decision=not failures, failures=tuple(failures))


def z_solvable(inst: Instance) -> bool:
    return local_check(inst).decision
