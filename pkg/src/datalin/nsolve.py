"""N-solvability (nonnegative combinations of renamed generator copies).

The decision follows a reduce-and-guess scheme: project data vectors to
plain integer vectors, split the generators into reversible ones (whose
negation is again a nonnegative combination, so they may be subtracted
freely) and nonreversible ones, bound the total multiplicity of
nonreversible copies by an explicit exponential formula, enumerate the
bounded guesses for the nonreversible part, and solve the residual over
the reversible generators as an integer (Z) problem.  Caps make the
search honest: truncation yields INCONCLUSIVE, never a wrong certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core import (
    Atom,
    DataVector,
    FreshAtoms,
    Instance,
    IntVector,
    dv_add,
    dv_permute,
    dv_scale,
    vec_add,
    zero_vec,
)
from .intlin import IntMatrix, cone_member, inf_norm, one_norm, z_solve_system
from .zsolve import LocalReport, local_check, z_solvable


@dataclass(frozen=True)
class ReversibilityPartition:
    reversible: tuple[int, ...]
    nonreversible: tuple[int, ...]


@dataclass(frozen=True)
class NBoundData:
    coeff_bound: int
    s_max: int
    support_size: int
    support_atoms: tuple[Atom, ...]  # empty when above the realization cap


@dataclass(frozen=True)
class NDecision:
    status: str  # SOLVABLE | UNSOLVABLE | INCONCLUSIVE
    bounds: NBoundData
    guess: Optional[tuple[tuple[int, tuple[tuple[Atom, Atom], ...]], ...]] = None
    residual_report: Optional[LocalReport] = None


def data_projection(a: DataVector) -> IntVector:
    """Componentwise sum of all values; additive, scale-compatible, and
    renaming-invariant."""
    total = zero_vec(a.dim)
    for val in a.entries.values():
        total = vec_add(total, val)
    return total


def smooth(a: DataVector, support, max_support: int = 8) -> DataVector:
    """Sum of all copies of `a` renamed by permutations of `support`
    (identity elsewhere).  Every size-k subset of the support then carries
    one shared value."""
    sup = sorted(set(support))
    if not set(a.support()) <= set(sup):
        raise ValueError("support must cover the vector's support")
    if len(sup) > max_support:
        raise ValueError(
            f"support of size {len(sup)} exceeds the {max_support}! guard"
        )
    out = DataVector(a.arity, a.dim, {})
    for image in itertools.permutations(sup):
        out = dv_add(out, dv_permute(a, dict(zip(sup, image))))
    return out


def reversible_partition(inst: Instance) -> ReversibilityPartition:
    """A generator is reversible iff the negation of its projection lies in
    the rational nonnegative cone of all generator projections."""
    projections = [data_projection(g) for g in inst.generators]
    rev, nonrev = [], []
    for i, p in enumerate(projections):
        neg = tuple(-x for x in p)
        (rev if cone_member(projections, neg) else nonrev).append(i)
    return ReversibilityPartition(tuple(rev), tuple(nonrev))


def nonreversible_bound(
    inst: Instance,
    part: ReversibilityPartition,
    atom_cap: int = 10_000,
) -> NBoundData:
    """Exact multiplicity bound for the nonreversible part and the derived
    support-size bound; realizes the extended atom pool when small enough."""
    supp = sorted(inst.target.support())
    if not part.nonreversible:
        return NBoundData(0, 0, len(supp), tuple(supp))
    projections = [data_projection(g) for g in inst.generators]
    distinct_nonrev = {projections[i] for i in part.nonreversible}
    col_norm = max((one_norm(p) for p in projections), default=0)
    base = col_norm + inf_norm(data_projection(inst.target)) + 2
    coeff_bound = len(distinct_nonrev) * base ** (
        inst.dim + len(inst.generators)
    )
    s_max = max(
        len(inst.generators[i].support()) for i in part.nonreversible
    )
    support_size = len(supp) + s_max * coeff_bound
    atoms: tuple[Atom, ...] = ()
    if support_size <= atom_cap:
        fresh = FreshAtoms(inst.all_atoms())
        atoms = tuple(supp) + tuple(fresh.take_many(support_size - len(supp)))
    return NBoundData(coeff_bound, s_max, support_size, atoms)


def _copy_placements(sup, known_pool, next_fresh, fresh_budget):
    """Injective images of `sup` into known atoms plus canonically numbered
    new fresh atoms; yields (image, fresh_used)."""
    n = len(sup)
    for r in range(0, min(n, fresh_budget) + 1):
        fresh_atoms = list(range(next_fresh, next_fresh + r))
        for pos_f in itertools.combinations(range(n), r):
            rest = [i for i in range(n) if i not in pos_f]
            for old in itertools.permutations(known_pool, n - r):
                image: list[Atom] = [0] * n
                for idx, p in enumerate(pos_f):
                    image[p] = fresh_atoms[idx]
                for idx, p in enumerate(rest):
                    image[p] = old[idx]
                yield tuple(image), r


class _Budget:
    def __init__(self, cap: int):
        self.cap = cap
        self.used = 0
        self.truncated = False

    def spend(self) -> bool:
        self.used += 1
        if self.used > self.cap:
            self.truncated = True
            return False
        return True


def n_solvable(
    inst: Instance,
    coeff_cap: int = 10_000,
    guess_cap: int = 1_000_000,
) -> NDecision:
    """Decide N-solvability.

    Fast refusal: not Z-solvable over all generators implies not N-solvable.
    Otherwise enumerate the multiplicities of nonreversible copies (pruned
    by the projection equation), place each copy canonically over the target
    support plus fresh atoms, and Z-solve the residual over the reversible
    generators only.  Exhausted enumeration within the caps is a certificate
    of UNSOLVABLE; truncation reports INCONCLUSIVE.
    """
    part = reversible_partition(inst)
    bounds = nonreversible_bound(inst, part)
    if not z_solvable(inst):
        return NDecision("UNSOLVABLE", bounds)

    gens = inst.generators
    rev_gens = tuple(gens[i] for i in part.reversible)
    rev_proj = [data_projection(g) for g in rev_gens]
    target_proj = data_projection(inst.target)
    nonrev = list(part.nonreversible)
    d = inst.dim

    total_cap = min(bounds.coeff_bound, coeff_cap)
    budget = _Budget(guess_cap)
    if bounds.coeff_bound > coeff_cap:
        budget.truncated = True

    def residual_ok(residual: DataVector):
        sub = Instance(inst.arity, d, rev_gens, residual)
        report = local_check(sub)
        return report if report.decision else None

    supp = sorted(inst.target.support())
    fresh = FreshAtoms(inst.all_atoms())
    fresh_base = fresh.take()  # first canonical fresh atom id

    def place_copies(copies, idx, known_fresh, acc, terms):
        """DFS over canonical placements of the remaining copies; returns a
        finished NDecision on success, None otherwise."""
        if idx == len(copies):
            residual = inst.target
            for vec in acc:
                residual = dv_add(residual, dv_scale(-1, vec))
            if not budget.spend():
                return None
            report = residual_ok(residual)
            if report is not None:
                return NDecision(
                    "SOLVABLE",
                    bounds,
                    tuple(
                        (gi, tuple(sorted(ren.items()))) for gi, ren in terms
                    ),
                    report,
                )
            return None
        gi = copies[idx]
        sup = sorted(gens[gi].support())
        pool = supp + [fresh_base + j for j in range(known_fresh)]
        fresh_budget = bounds.s_max * total_cap - known_fresh
        for image, used in _copy_placements(
            sup, pool, fresh_base + known_fresh, fresh_budget
        ):
            if budget.truncated:
                return None
            ren = dict(zip(sup, image))
            vec = dv_permute(gens[gi], ren)
            out = place_copies(
                copies,
                idx + 1,
                known_fresh + used,
                acc + [vec],
                terms + [(gi, ren)],
            )
            if out is not None:
                return out
        return None

    for total in range(0, total_cap + 1):
        for counts in _compositions(total, len(nonrev)):
            if budget.truncated:
                break
            # projection necessary condition for the residual
            needed = list(target_proj)
            for c, i in zip(counts, nonrev):
                p = data_projection(gens[i])
                needed = [x - c * y for x, y in zip(needed, p)]
            if rev_proj:
                if z_solve_system(
                    IntMatrix.from_columns(rev_proj, nrows=d), needed
                ) is None:
                    continue
            elif any(needed):
                continue
            copies = [
                i for c, i in zip(counts, nonrev) for _ in range(c)
            ]
            out = place_copies(copies, 0, 0, [], [])
            if out is not None:
                return out
        if budget.truncated:
            break
    if budget.truncated:
        return NDecision("INCONCLUSIVE", bounds)
    return NDecision("UNSOLVABLE", bounds)


def _compositions(total: int, parts: int):
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)
