"""Constructive hypergraph toolbox: reduction matrices, cut/enrich/swap,
isolation predicates, simple hypergraphs and their constructive expression
as combinations of renamed copies of a source hypergraph.

A *(m,a)-simple* k-hypergraph lives on pairwise disjoint vertex sets A, B, C
with |A| = |B| = m, |C| = 2(k-m)-1 (C empty when m = k), carries weight
(-1)^{|B /\\ X|} * a on every transversal m-set X (one vertex of each pair
A[i], B[i]) and weight zero on every other set of size at most m.  These
graphs are the building blocks for decomposing any hypergraph into pieces
whose weights come from a prescribed generator family.

Witness terms here are lists (coefficient, renaming) over one source data
vector, or (coefficient, generator index, renaming) over a family.  Every
renaming is total on the support of the referenced vector and maps each
support atom either onto a designated placement vertex or onto a context
fresh atom; this invariant is what makes the lifting identities sound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Mapping, Optional, Sequence

from .core import (
    Atom,
    DataVector,
    FreshAtoms,
    Hypergraph,
    IntVector,
    KSet,
    ShapeError,
    dv_add,
    dv_permute,
    dv_scale,
    encode_hypergraph,
    kset,
    subsets_of_size,
    vec_add,
    vec_scale,
    weight,
    zero_vec,
)
from .intlin import IntMatrix, rank_full, z_solve_system


class CalculusError(Exception):
    """Internal consistency failure in a construction (a bug signal)."""


class CapExceeded(CalculusError):
    """A construction exceeded its resource cap."""


class SpanError(CalculusError):
    """A required weight was not in the integer span of family weights."""


# ---------------------------------------------------------------------------
# reduction matrices


@dataclass(frozen=True)
class ReductionMatrix:
    a: int
    b: int
    c: int
    matrix: IntMatrix
    row_index: tuple[KSet, ...]
    col_index: tuple[KSet, ...]


def reduction_matrix(a: int, b: int, c: int) -> ReductionMatrix:
    """0/1 inclusion matrix between c-subsets (rows) and b-subsets (columns)
    of the a-set {0..a-1}; indices in lexicographic order."""
    if not a >= b >= c >= 0:
        raise ShapeError("need a >= b >= c >= 0")
    ground = range(a)
    rows = tuple(itertools.combinations(ground, c))
    cols = tuple(itertools.combinations(ground, b))
    entries = [
        [1 if set(r) <= set(col) else 0 for col in cols] for r in rows
    ]
    return ReductionMatrix(a, b, c, IntMatrix.from_rows(entries), rows, cols)


def kneser_disjointness_matrix(k: int) -> IntMatrix:
    """Adjacency (disjointness) matrix of the Kneser graph on k-subsets of a
    (2k+1)-set, both indices lexicographic."""
    subs = list(itertools.combinations(range(2 * k + 1), k))
    return IntMatrix.from_rows(
        [[1 if not set(r) & set(c) else 0 for c in subs] for r in subs]
    )


def kneser_full_rank(k: int) -> bool:
    """Full rank of the inclusion matrix between k- and (k+1)-subsets of a
    (2k+1)-set, by exact elimination."""
    if k < 1:
        raise ShapeError("k must be positive")
    return rank_full(reduction_matrix(2 * k + 1, k + 1, k).matrix)


# ---------------------------------------------------------------------------
# cut / enrich / swap


def cut(h: Hypergraph, x) -> Hypergraph:
    """Remove the vertex set x from every hyperedge containing it; the result
    is a (k-|x|)-hypergraph on the remaining vertices."""
    xs = frozenset(x)
    if len(xs) >= h.arity:
        raise ShapeError("|x| must be smaller than the arity")
    if not xs <= h.vertices:
        raise ShapeError("x must be a subset of the vertex set")
    mu = {
        kset(set(key) - xs): val
        for key, val in h.mu.items()
        if xs <= set(key)
    }
    return Hypergraph(h.vertices - xs, h.arity - len(xs), h.dim, mu)


def enrich(h: Hypergraph, x) -> Hypergraph:
    """Minimal (k+|x|)-hypergraph whose x-cut is h: every hyperedge gains x."""
    xs = frozenset(x)
    if xs & h.vertices:
        raise ShapeError("x must be disjoint from the vertex set")
    mu = {kset(set(key) | xs): val for key, val in h.mu.items()}
    return Hypergraph(h.vertices | xs, h.arity + len(xs), h.dim, mu)


def swap(h: Hypergraph, alpha: Atom, alpha_prime: Atom) -> Hypergraph:
    """Exchange a vertex with an atom outside the vertex set."""
    if alpha not in h.vertices:
        raise ShapeError("alpha must be a vertex")
    if alpha_prime in h.vertices:
        raise ShapeError("alpha_prime must not be a vertex")
    mu = {
        kset(alpha_prime if a == alpha else a for a in key): val
        for key, val in h.mu.items()
    }
    return Hypergraph((h.vertices - {alpha}) | {alpha_prime}, h.arity, h.dim, mu)


# ---------------------------------------------------------------------------
# isolation predicates and weight identities


def is_m_isolated(h: Hypergraph, m: int) -> bool:
    """All weights of vertex sets of size at most m vanish."""
    if not 0 <= m <= h.arity:
        raise ShapeError("need 0 <= m <= arity")
    support = sorted(h.nonisolated())
    for size in range(0, m + 1):
        for x in itertools.combinations(support, size):
            if any(weight(h, x)):
                return False
    return True


def nonzero_weight_sets(h: Hypergraph, size: int) -> list[KSet]:
    support = sorted(h.nonisolated())
    return [
        x for x in itertools.combinations(support, size) if any(weight(h, x))
    ]


def is_pre_m_isolated(h: Hypergraph, m: int) -> bool:
    """(m-1)-isolated, with all nonzero m-weights confined to one vertex set
    of size at most 2m-1.  The union of atoms of the nonzero m-weight sets is
    the unique minimal candidate, so the check is exact."""
    if not 1 <= m <= h.arity:
        raise ShapeError("need 1 <= m <= arity")
    if not is_m_isolated(h, m - 1):
        return False
    x0: set[Atom] = set()
    for x in nonzero_weight_sets(h, m):
        x0.update(x)
    return len(x0) <= 2 * m - 1


def proportionality_check(h: Hypergraph, x, l: int) -> bool:
    """Sum of weights of the l-supersets of x equals C(k-|x|, l-|x|) times
    the weight of x."""
    xs = kset(x)
    m = len(xs)
    if not (m <= l <= h.arity) or not set(xs) <= h.vertices:
        raise ShapeError("need x within the vertex set and |x| <= l <= arity")
    total = zero_vec(h.dim)
    rest = sorted(h.vertices - set(xs))
    for extra in itertools.combinations(rest, l - m):
        total = vec_add(total, weight(h, set(xs) | set(extra)))
    expected = vec_scale(comb(h.arity - m, l - m), weight(h, xs))
    return total == expected


# ---------------------------------------------------------------------------
# simple hypergraphs


@dataclass(frozen=True)
class SimpleSpec:
    """Placement of an (m,a)-simple k-hypergraph: paired vertex sequences
    A, B (A[i] paired with B[i]) and the free block C."""

    m: int
    a: IntVector
    A: tuple[Atom, ...]
    B: tuple[Atom, ...]
    C: tuple[Atom, ...]


def verify_simple(h: Hypergraph, spec: SimpleSpec) -> bool:
    """Check all defining properties: vertex partition and sizes, signed
    weights on transversal m-sets, zero weights on all other sets of size m,
    and (m-1)-isolation."""
    m = spec.m
    k = h.arity
    a_set, b_set, c_set = set(spec.A), set(spec.B), set(spec.C)
    if len(spec.A) != m or len(spec.B) != m:
        return False
    if len(a_set) != m or len(b_set) != m or len(c_set) != len(spec.C):
        return False
    if a_set & b_set or a_set & c_set or b_set & c_set:
        return False
    if m == k:
        if spec.C:
            return False
    elif len(spec.C) != 2 * (k - m) - 1:
        return False
    if h.vertices != a_set | b_set | c_set:
        return False
    pairs = list(zip(spec.A, spec.B))
    for x in itertools.combinations(sorted(h.vertices), m):
        xs = set(x)
        transversal = xs <= (a_set | b_set) and all(
            (p in xs) != (q in xs) for p, q in pairs
        )
        w = weight(h, x)
        if transversal:
            sign = -1 if len(xs & b_set) % 2 else 1
            if w != vec_scale(sign, spec.a):
                return False
        elif any(w):
            return False
    return is_m_isolated(h, m - 1) if m >= 1 else True


# ---------------------------------------------------------------------------
# witness algebra over one source vector

Terms = list[tuple[int, dict[Atom, Atom]]]


def eval_terms(source: DataVector, terms: Terms) -> DataVector:
    out = DataVector(source.arity, source.dim, {})
    for c, ren in terms:
        out = dv_add(out, dv_scale(c, dv_permute(source, ren)))
    return out


def merge_terms(terms: Terms) -> Terms:
    merged: dict[tuple[tuple[Atom, Atom], ...], int] = {}
    for c, ren in terms:
        key = tuple(sorted(ren.items()))
        merged[key] = merged.get(key, 0) + c
    return [(c, dict(key)) for key, c in merged.items() if c]


def _compose(outer: Mapping[Atom, Atom], inner: Mapping[Atom, Atom]) -> dict[Atom, Atom]:
    """Renaming equal to applying inner first, then outer (outer defaults to
    the identity outside its domain)."""
    return {u: outer.get(v, v) for u, v in inner.items()}


class _Ctx:
    """One construction context: fresh-atom supply, caps, memo tables."""

    def __init__(self, used, max_terms: int = 200_000, max_steps: int = 50_000):
        self.fresh = FreshAtoms(used)
        self.max_terms = max_terms
        self.max_steps = max_steps
        self.steps = 0
        self.simple_cache: dict = {}

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.steps > self.max_steps:
            raise CapExceeded("construction step cap exceeded")

    def check_terms(self, terms) -> None:
        if len(terms) > self.max_terms:
            raise CapExceeded("witness term cap exceeded")


def _total_block(support, ctx: _Ctx, fixed: Mapping[Atom, Atom]) -> dict[Atom, Atom]:
    """Total renaming on `support` agreeing with `fixed` and sending every
    other support atom to a fresh atom."""
    ren = dict(fixed)
    for u in sorted(support):
        if u not in ren:
            ren[u] = ctx.fresh.take()
    return ren


def _construct_simple(g: Hypergraph, x: KSet, ctx: _Ctx):
    """Recursive core of construct_simple; returns (hypergraph, spec, terms)."""
    ctx.tick()
    k, d = g.arity, g.dim
    m = len(x)
    a = weight(g, x)
    support = sorted(g.nonisolated())

    if k == 1:
        if m == 1:
            alpha = x[0]
            alpha2 = ctx.fresh.take()
            ren1 = _total_block(support, ctx, {alpha: alpha})
            ren2 = dict(ren1)
            ren2[alpha] = alpha2
            terms: Terms = [(1, ren1), (-1, ren2)]
            hg = Hypergraph(
                {alpha, alpha2}, 1, d, {(alpha,): a, (alpha2,): vec_scale(-1, a)}
            )
            return hg, SimpleSpec(1, a, (alpha,), (alpha2,), ()), terms
        # m == 0: gather the whole mass onto one fresh vertex
        gamma = ctx.fresh.take()
        terms = []
        if support:
            beta0 = support[0]
            main = _total_block(support, ctx, {beta0: gamma})
            terms.append((1, main))
            for beta in support[1:]:
                block = _total_block(support, ctx, {beta: gamma})
                neg = dict(block)
                neg[beta] = main[beta]
                terms.append((1, block))
                terms.append((-1, neg))
        hg = Hypergraph({gamma}, 1, d, {(gamma,): a})
        return hg, SimpleSpec(0, a, (), (), (gamma,)), terms

    if m > 0:
        alpha = x[0]
        if alpha not in g.vertices:
            raise ShapeError("x must be a subset of the vertex set")
        gc = cut(g, {alpha})
        sub, sub_spec, sub_terms = _construct_simple(gc, x[1:], ctx)
        beta = ctx.fresh.take()
        beta2 = ctx.fresh.take()
        co_support = set(gc.as_data_vector().support())
        stray = [u for u in support if u != alpha and u not in co_support]
        terms = []
        for c, ren in sub_terms:
            base = dict(ren)
            for u in stray:
                base[u] = ctx.fresh.take()
            hi = dict(base)
            hi[alpha] = beta
            lo = dict(base)
            lo[alpha] = beta2
            terms.append((c, hi))
            terms.append((-c, lo))
        ctx.check_terms(terms)
        hg = Hypergraph(
            sub.vertices | {beta, beta2},
            k,
            d,
            {
                **{kset(set(key) | {beta}): val for key, val in sub.mu.items()},
                **{
                    kset(set(key) | {beta2}): vec_scale(-1, val)
                    for key, val in sub.mu.items()
                },
            },
        )
        spec = SimpleSpec(
            m, a, (*sub_spec.A, beta), (*sub_spec.B, beta2), sub_spec.C
        )
        return hg, spec, terms

    # m == 0, k >= 2: eliminate vertices until at most 2k-1 remain
    current = Hypergraph(frozenset(support), k, d, dict(g.mu))
    terms = [(1, {u: u for u in support})]  # identity copy
    while len(current.nonisolated()) > 2 * k - 1:
        ctx.tick()
        sup = sorted(current.nonisolated())
        alpha = sup[-1]
        fc = cut(current, {alpha})
        workspace = [v for v in sup if v != alpha]
        entries = _express_via_simple(
            fc.as_data_vector(),
            [fc.as_data_vector()],
            workspace,
            ctx,
        )
        co_support = set(fc.as_data_vector().support())
        stray = [u for u in sup if u != alpha and u not in co_support]
        correction: Terms = []
        for s_hg, _spec, fam_terms in entries:
            candidates = [
                v for v in sup if v != alpha and v not in s_hg.vertices
            ]
            if not candidates:
                raise CalculusError("no spare vertex for the elimination step")
            alpha2 = candidates[0]
            for c, _gi, ren in fam_terms:
                base = dict(ren)
                for u in stray:
                    base[u] = ctx.fresh.take()
                hi = dict(base)
                hi[alpha] = alpha
                lo = dict(base)
                lo[alpha] = alpha2
                correction.append((c, hi))
                correction.append((-c, lo))
        # flatten: copies of `current` become copies of g
        flattened: Terms = []
        for c, ren in correction:
            for c0, ren0 in terms:
                flattened.append((-c * c0, _compose(ren, ren0)))
        terms = merge_terms(terms + flattened)
        ctx.check_terms(terms)
        ev = eval_terms(g.as_data_vector(), terms)
        nxt = encode_hypergraph(ev)
        if alpha in nxt.nonisolated() or not nxt.nonisolated() < set(sup):
            raise CalculusError("elimination step failed to drop the vertex")
        current = nxt
    base_vertices = sorted(current.nonisolated())
    # Individual terms may still mention eliminated vertices (those mentions
    # cancel in the sum); push them to fresh atoms with one shared renaming
    # so every term's range stays within the output vertices plus fresh.
    gone = sorted(set(support) - set(base_vertices))
    if gone:
        sigma = {u: ctx.fresh.take() for u in gone}
        terms = [(c, _compose(sigma, ren)) for c, ren in terms]
    pads = ctx.fresh.take_many(2 * k - 1 - len(base_vertices))
    verts = frozenset(base_vertices) | frozenset(pads)
    hg = Hypergraph(verts, k, d, dict(current.mu))
    return hg, SimpleSpec(0, a, (), (), tuple(sorted(verts))), terms


def construct_simple(g: Hypergraph, x):
    """Build a (|x|, weight(g,x))-simple k-hypergraph together with a formal
    integer combination of renamed copies of g that evaluates to it.

    Returns (hypergraph, spec, terms); self-verified before returning."""
    xs = kset(x)
    if len(xs) > g.arity:
        raise ShapeError("|x| must be at most the arity")
    if not set(xs) <= g.vertices:
        raise ShapeError("x must be a subset of the vertex set")
    ctx = _Ctx(set(g.vertices) | set(g.as_data_vector().support()))
    hg, spec, terms = _construct_simple(g, xs, ctx)
    terms = merge_terms(terms)
    if not verify_simple(hg, spec):
        raise CalculusError("constructed hypergraph failed simplicity check")
    if eval_terms(g.as_data_vector(), terms) != hg.as_data_vector():
        raise CalculusError("constructed witness does not evaluate to output")
    return hg, spec, terms


# ---------------------------------------------------------------------------
# expressing a hypergraph through the simple family of a generator family

FamilyTerms = list[tuple[int, int, dict[Atom, Atom]]]


def _family_weight_columns(family: Sequence[DataVector], size: int):
    """Deduplicated (weight vector, generator index, subset) representatives
    over all size-`size` support subsets of the family members."""
    seen: dict[IntVector, tuple[int, KSet]] = {}
    order: list[IntVector] = []
    for gi, gen in enumerate(family):
        h = encode_hypergraph(gen)
        for xs in subsets_of_size(h.vertices, size):
            w = weight(h, xs)
            if any(w) and w not in seen:
                seen[w] = (gi, xs)
                order.append(w)
    return order, seen


def _simple_with_value(
    family: Sequence[DataVector],
    m: int,
    a: IntVector,
    A: tuple[Atom, ...],
    B: tuple[Atom, ...],
    C: tuple[Atom, ...],
    arity: int,
    dim: int,
    ctx: _Ctx,
):
    """(m,a)-simple k-hypergraph at the given placement, built as an integer
    combination of canonical simple graphs of the family members, together
    with family witness terms."""
    cols, reps = _family_weight_columns(family, m)
    sol = z_solve_system(IntMatrix.from_columns(cols, nrows=dim), a)
    if sol is None:
        raise SpanError(
            f"value {a} outside the integer span of size-{m} family weights"
        )
    total = DataVector(arity, dim, {})
    fam_terms: FamilyTerms = []
    for w, coeff in zip(cols, sol):
        if not coeff:
            continue
        gi, xs = reps[w]
        key = (family[gi], xs)
        if key not in ctx.simple_cache:
            ctx.simple_cache[key] = _construct_simple(
                encode_hypergraph(family[gi]), xs, ctx
            )
        s_hg, s_spec, s_terms = ctx.simple_cache[key]
        tau = dict(zip(s_spec.A, A))
        tau.update(zip(s_spec.B, B))
        tau.update(zip(sorted(s_spec.C), sorted(C)))
        placed = dv_permute(s_hg.as_data_vector(), tau)
        total = dv_add(total, dv_scale(coeff, placed))
        for c, ren in s_terms:
            fam_terms.append((coeff * c, gi, _compose(tau, ren)))
    ctx.check_terms(fam_terms)
    hg = Hypergraph(set(A) | set(B) | set(C), arity, dim, dict(total.entries))
    spec = SimpleSpec(m, a, A, B, C)
    if not verify_simple(hg, spec):
        raise CalculusError("family combination failed simplicity check")
    return hg, spec, fam_terms


def _dominates(x: KSet, y: KSet) -> bool:
    """y is at least x under the componentwise order of sorted tuples."""
    return all(a <= b for a, b in zip(x, y))


def _greedy_below(l_set: KSet, pool) -> Optional[tuple[Atom, ...]]:
    """Distinct atoms b_i < a_i from the pool, aligned with sorted(l_set);
    smallest-available-first, complete for this matching problem."""
    avail = sorted(pool)
    chosen: list[Atom] = []
    for a in l_set:
        pick = next((v for v in avail if v < a), None)
        if pick is None:
            return None
        avail.remove(pick)
        chosen.append(pick)
    return tuple(chosen)


def _express_via_simple(
    h: DataVector,
    family: Sequence[DataVector],
    vertices: Sequence[Atom],
    ctx: _Ctx,
):
    """Decompose h into simple hypergraphs of the family, supported inside
    the given vertex set.

    Level by level: first a (0, w_empty)-simple graph, then for each size an
    improvement loop that repeatedly cancels a maximal nonzero-weight set L
    against a strictly dominated disjoint set L', until no nonzero weights of
    that size remain.  Returns [(hypergraph, spec, family terms)] summing to
    h exactly."""
    k, d = h.arity, h.dim
    verts = sorted(set(vertices))
    if not set(h.support()) <= set(verts):
        raise ShapeError("working vertex set must cover the support")
    if len(verts) <= 2 * k - 1:
        raise ShapeError("working vertex set too small")
    entries = []
    residual = h
    w_empty = zero_vec(d)
    for val in h.entries.values():
        w_empty = vec_add(w_empty, val)
    if any(w_empty):
        c_block = tuple(verts[: 2 * k - 1])
        s_hg, s_spec, s_terms = _simple_with_value(
            family, 0, w_empty, (), (), c_block, k, d, ctx
        )
        entries.append((s_hg, s_spec, s_terms))
        residual = dv_add(residual, dv_scale(-1, s_hg.as_data_vector()))
    for level in range(1, k + 1):
        while True:
            ctx.tick()
            res_h = Hypergraph(frozenset(verts), k, d, dict(residual.entries))
            fam = nonzero_weight_sets(res_h, level)
            if not fam:
                break
            maximal = [
                x
                for x in fam
                if not any(y != x and _dominates(x, y) for y in fam)
            ]
            maximal.sort(key=lambda t: tuple(reversed(t)), reverse=True)
            chosen = None
            for l_set in maximal:
                below = _greedy_below(l_set, set(verts) - set(l_set))
                if below is not None:
                    chosen = (l_set, below)
                    break
            if chosen is None:
                raise CalculusError(
                    "improvement loop stuck with nonzero weights"
                )
            l_set, below = chosen
            c_pool = [v for v in verts if v not in l_set and v not in below]
            c_block = tuple(c_pool[: max(0, 2 * (k - level) - 1)])
            if len(c_block) < max(0, 2 * (k - level) - 1):
                raise CalculusError("not enough vertices for the free block")
            a = weight(res_h, l_set)
            s_hg, s_spec, s_terms = _simple_with_value(
                family, level, a, l_set, below, c_block, k, d, ctx
            )
            entries.append((s_hg, s_spec, s_terms))
            residual = dv_add(residual, dv_scale(-1, s_hg.as_data_vector()))
    if residual.entries:
        raise CalculusError("decomposition left a nonzero residual")
    return entries


def express_via_simple(
    h: DataVector,
    family: Sequence[DataVector],
    vertices,
    max_steps: int = 50_000,
    max_terms: int = 200_000,
):
    """Public wrapper around the decomposition; allocates its own context."""
    used = set(vertices) | set(h.support())
    for g in family:
        used |= set(g.support())
    ctx = _Ctx(used, max_terms=max_terms, max_steps=max_steps)
    return _express_via_simple(h, family, sorted(vertices), ctx)
