"""Atoms, k-sets, data vectors, weighted hypergraphs and their group operations.

A *data vector* is a finitely supported map from k-element sets of atoms to
integer vectors of a fixed dimension d.  A *hypergraph* is the finite carrier
of a data vector: an explicit vertex set (possibly with isolated vertices)
together with the weight function on k-subsets.  All values are immutable
after construction and all integers are arbitrary precision.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

# Atoms are canonical nonnegative integers.  Input files may use arbitrary
# strings; the cli module interns them to integers at parse time.
Atom = int

# A k-set is stored as a strictly increasing tuple of atoms.
KSet = tuple[Atom, ...]

# An integer vector of dimension d.
IntVector = tuple[int, ...]


class ShapeError(ValueError):
    """Raised on arity/dimension mismatches or malformed keys."""


def kset(atoms: Iterable[Atom]) -> KSet:
    """Canonicalize a collection of distinct atoms into a k-set."""
    t = tuple(sorted(atoms))
    if any(t[i] == t[i + 1] for i in range(len(t) - 1)):
        raise ShapeError(f"atoms are not distinct: {t}")
    if t and t[0] < 0:
        raise ShapeError(f"negative atom id: {t}")
    return t


def vec_add(a: IntVector, b: IntVector) -> IntVector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_scale(c: int, a: IntVector) -> IntVector:
    return tuple(c * x for x in a)


def zero_vec(dim: int) -> IntVector:
    return (0,) * dim


@dataclass(frozen=True)
class DataVector:
    """Finitely supported map from k-sets of atoms to Z^d, in sparse
    canonical form: no entry maps to the all-zero vector."""

    arity: int
    dim: int
    entries: Mapping[KSet, IntVector] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[KSet, IntVector] = {}
        for key, val in self.entries.items():
            k = kset(key)
            if len(k) != self.arity:
                raise ShapeError(f"key {k} has length {len(k)}, arity is {self.arity}")
            v = tuple(val)
            if len(v) != self.dim:
                raise ShapeError(f"value {v} has length {len(v)}, dim is {self.dim}")
            if any(v):
                clean[k] = v
        object.__setattr__(self, "entries", clean)

    def support(self) -> frozenset[Atom]:
        return frozenset(a for key in self.entries for a in key)

    def value(self, key: Iterable[Atom]) -> IntVector:
        return self.entries.get(kset(key), zero_vec(self.dim))

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DataVector):
            return NotImplemented
        return (self.arity, self.dim, dict(self.entries)) == (
            other.arity,
            other.dim,
            dict(other.entries),
        )

    def __hash__(self) -> int:
        return hash((self.arity, self.dim, frozenset(self.entries.items())))


def _check_same_shape(a: DataVector | "Hypergraph", b: DataVector | "Hypergraph") -> None:
    if a.arity != b.arity or a.dim != b.dim:
        raise ShapeError(
            f"shape mismatch: ({a.arity},{a.dim}) vs ({b.arity},{b.dim})"
        )


def dv_add(a: DataVector, b: DataVector) -> DataVector:
    """Pointwise sum, re-canonicalized."""
    _check_same_shape(a, b)
    entries = dict(a.entries)
    for key, val in b.entries.items():
        cur = entries.get(key)
        entries[key] = vec_add(cur, val) if cur is not None else val
    return DataVector(a.arity, a.dim, entries)


def dv_scale(c: int, a: DataVector) -> DataVector:
    """Multiply every value by c; c = 0 yields the empty vector."""
    if c == 0:
        return DataVector(a.arity, a.dim, {})
    return DataVector(a.arity, a.dim, {k: vec_scale(c, v) for k, v in a.entries.items()})


def dv_sub(a: DataVector, b: DataVector) -> DataVector:
    return dv_add(a, dv_scale(-1, b))


def _apply_renaming(pi: Mapping[Atom, Atom], key: KSet) -> KSet:
    return kset(pi.get(a, a) for a in key)


def check_injective_on(pi: Mapping[Atom, Atom], atoms: Iterable[Atom]) -> None:
    """Raise unless the renaming (extended by identity) is injective on atoms."""
    images = [pi.get(a, a) for a in atoms]
    if len(set(images)) != len(images):
        raise ShapeError(f"renaming is not injective on {sorted(set(atoms))}: {dict(pi)}")


def dv_permute(a: DataVector, pi: Mapping[Atom, Atom]) -> DataVector:
    """Forward renaming: the entry at key X moves to {pi(x) : x in X};
    atoms outside pi's domain are fixed."""
    check_injective_on(pi, a.support())
    return DataVector(
        a.arity, a.dim, {_apply_renaming(pi, k): v for k, v in a.entries.items()}
    )


@dataclass(frozen=True)
class Hypergraph:
    """Finite-vertex k-uniform hypergraph with Z^d edge weights.

    The vertex set is explicit and may contain isolated vertices; zero-weight
    hyperedges are not stored."""

    vertices: frozenset[Atom]
    arity: int
    dim: int
    mu: Mapping[KSet, IntVector] = field(default_factory=dict)

    def __post_init__(self) -> None:
        dv = DataVector(self.arity, self.dim, self.mu)  # canonicalize + validate
        object.__setattr__(self, "mu", dv.entries)
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        for key in self.mu:
            if not set(key) <= self.vertices:
                raise ShapeError(f"hyperedge {key} not within vertex set")

    def as_data_vector(self) -> DataVector:
        return DataVector(self.arity, self.dim, self.mu)

    def nonisolated(self) -> frozenset[Atom]:
        return frozenset(a for key in self.mu for a in key)


def encode_hypergraph(a: DataVector) -> Hypergraph:
    """Carrier hypergraph of a data vector: vertices are the atoms of the
    nonzero keys, weights are the restriction of the vector."""
    verts = frozenset(atom for key in a.entries for atom in key)
    return Hypergraph(verts, a.arity, a.dim, dict(a.entries))


def weight(h: Hypergraph, x: Iterable[Atom]) -> IntVector:
    """Sum of mu(e) over hyperedges e containing x; zero when x is not a
    subset of the vertex set."""
    xs = frozenset(x)
    if len(xs) > h.arity:
        raise ShapeError(f"|x| = {len(xs)} exceeds arity {h.arity}")
    if not xs <= h.vertices:
        return zero_vec(h.dim)
    total = zero_vec(h.dim)
    for key, val in h.mu.items():
        if xs <= set(key):
            total = vec_add(total, val)
    return total


def hg_add(g: Hypergraph, h: Hypergraph) -> Hypergraph:
    """Vertex sets unioned, weights added pointwise."""
    _check_same_shape(g, h)
    dv = dv_add(g.as_data_vector(), h.as_data_vector())
    return Hypergraph(g.vertices | h.vertices, g.arity, g.dim, dict(dv.entries))


def hg_scale(c: int, h: Hypergraph) -> Hypergraph:
    dv = dv_scale(c, h.as_data_vector())
    return Hypergraph(h.vertices, h.arity, h.dim, dict(dv.entries))


def hg_sub(g: Hypergraph, h: Hypergraph) -> Hypergraph:
    return hg_add(g, hg_scale(-1, h))


def _weight_profile(h: Hypergraph, v: Atom) -> tuple:
    """Isomorphism-invariant pruning signature of a nonisolated vertex."""
    incident = sorted(
        (len(key), tuple(val)) for key, val in h.mu.items() if v in key
    )
    return tuple(incident)


def equivalent(g: Hypergraph, h: Hypergraph) -> bool:
    """True iff g and h are isomorphic after removing isolated vertices.

    Backtracking search over weight-preserving vertex bijections with
    signature pruning; complete, intended for small vertex counts."""
    _check_same_shape(g, h)
    gv = sorted(g.nonisolated())
    hv = sorted(h.nonisolated())
    if len(gv) != len(hv) or len(g.mu) != len(h.mu):
        return False
    gsig = {v: _weight_profile(g, v) for v in gv}
    hsig = {v: _weight_profile(h, v) for v in hv}
    if sorted(gsig.values()) != sorted(hsig.values()):
        return False

    def extend(i: int, mapping: dict[Atom, Atom], used: set[Atom]) -> bool:
        if i == len(gv):
            return all(
                h.mu.get(kset(mapping[a] for a in key)) == val
                for key, val in g.mu.items()
            )
        v = gv[i]
        for w in hv:
            if w in used or hsig[w] != gsig[v]:
                continue
            mapping[v] = w
            used.add(w)
            # check edges fully inside the partial mapping as we go
            ok = True
            for key, val in g.mu.items():
                if v in key and all(a in mapping for a in key):
                    if h.mu.get(kset(mapping[a] for a in key)) != val:
                        ok = False
                        break
            if ok and extend(i + 1, mapping, used):
                return True
            used.discard(w)
            del mapping[v]
        return False

    return extend(0, {}, set())


@dataclass(frozen=True)
class Instance:
    """One solvability problem: generators, a target, shared arity/dimension."""

    arity: int
    dim: int
    generators: tuple[DataVector, ...]
    target: DataVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        for v in (*self.generators, self.target):
            if v.arity != self.arity or v.dim != self.dim:
                raise ShapeError("instance members must share arity and dimension")

    def all_atoms(self) -> frozenset[Atom]:
        atoms: set[Atom] = set(self.target.support())
        for g in self.generators:
            atoms |= g.support()
        return frozenset(atoms)


class FreshAtoms:
    """Monotone supply of atoms guaranteed fresh within one construction
    context.  Not shared across concurrent tasks."""

    def __init__(self, used: Iterable[Atom] = ()):
        self._next = max(used, default=-1) + 1

    def take(self) -> Atom:
        a = self._next
        self._next += 1
        return a

    def take_many(self, n: int) -> list[Atom]:
        return [self.take() for _ in range(n)]

    def reserve(self, used: Iterable[Atom]) -> None:
        self._next = max(self._next, max(used, default=-1) + 1)


def subsets_of_size(atoms: Iterable[Atom], size: int) -> Iterable[KSet]:
    return itertools.combinations(sorted(atoms), size)
