"""Brute-force reference computations for small inputs.

These share nothing with the fast paths beyond the data types: subgroups by
testing every subset, congruences by testing every set partition, lattice
isomorphism by trying every permutation.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from .groups import (
    FiniteGroup,
    SubgroupSet,
    all_subgroups,
    direct_product,
    factors_in,
    is_normal,
    subgroup_generate,
)
from .gsets import Partition, UnaryAlgebra, all_congruences, coset_gset, twisted_gset
from .lattices import (
    FiniteLattice,
    chain,
    is_order_isomorphism,
    lattice_isomorphism,
    normal_subgroup_lattice,
    pentagon,
    subgroup_lattice,
)

SUBSET_ORACLE_BOUND = 12
PARTITION_ORACLE_BOUND = 7
PERMUTATION_ORACLE_BOUND = 7


def is_closed_subset(g: FiniteGroup, members: set[int]) -> bool:
    if g.identity not in members:
        return False
    for x in members:
        if int(g.inverse[x]) not in members:
            return False
        for y in members:
            if int(g.cayley[x, y]) not in members:
                return False
    return True


def subgroups_by_subsets(g: FiniteGroup) -> list[tuple[int, ...]]:
    """Every subset containing the identity that is closed; sorted like ``all_subgroups``."""
    if g.order > SUBSET_ORACLE_BOUND:
        raise ValueError(f"subset oracle limited to order {SUBSET_ORACLE_BOUND}")
    others = [x for x in range(g.order) if x != g.identity]
    found = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            members = set(combo) | {g.identity}
            if is_closed_subset(g, members):
                found.append(tuple(sorted(members)))
    return sorted(found, key=lambda t: (len(t), t))


def generated_by_products(g: FiniteGroup, gens) -> tuple[int, ...]:
    """Naive closure: keep multiplying everything by everything."""
    current = {g.identity} | {int(x) for x in gens}
    while True:
        bigger = current | {int(g.cayley[x, y]) for x in current for y in current}
        if bigger == current:
            return tuple(sorted(current))
        current = bigger


def is_normal_by_conjugation(g: FiniteGroup, h: SubgroupSet) -> bool:
    members = set(h.members)
    for x in range(g.order):
        xi = int(g.inverse[x])
        if {int(g.cayley[g.cayley[x, y], xi]) for y in members} != members:
            return False
    return True


def set_partitions(m: int) -> Iterator[Partition]:
    """All partitions of ``0 .. m-1`` via restricted growth strings."""
    if m == 0:
        return

    def grow(prefix: list[int], top: int):
        if len(prefix) == m:
            yield Partition(tuple(prefix))
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from grow(prefix, max(top, b))
            prefix.pop()

    yield from grow([0], 0)


def is_compatible(p: Partition, alg: UnaryAlgebra) -> bool:
    ids = p.block_id
    for f in alg.ops.tolist():
        for x in range(len(ids)):
            for y in range(x + 1, len(ids)):
                if ids[x] == ids[y] and ids[f[x]] != ids[f[y]]:
                    return False
    return True


def congruences_by_partitions(alg: UnaryAlgebra) -> list[Partition]:
    """Filter every set partition by compatibility with every operation."""
    if alg.universe_size > PARTITION_ORACLE_BOUND:
        raise ValueError(f"partition oracle limited to {PARTITION_ORACLE_BOUND} points")
    found = [p for p in set_partitions(alg.universe_size) if is_compatible(p, alg)]
    return sorted(found, key=Partition.sort_key)


def isomorphic_by_permutations(l1: FiniteLattice, l2: FiniteLattice) -> bool:
    if l1.size != l2.size:
        return False
    if l1.size > PERMUTATION_ORACLE_BOUND:
        raise ValueError(f"permutation oracle limited to size {PERMUTATION_ORACLE_BOUND}")
    return any(is_order_isomorphism(l1, l2, p) for p in itertools.permutations(range(l1.size)))


def oracle_comparison(s: FiniteGroup) -> dict:
    """Run every applicable oracle for ``s`` against the fast path.

    Returns a dict of named checks, each with ``agree`` plus what was
    compared; checks that do not apply at this size are omitted.
    """
    out: dict[str, dict] = {}
    subs = all_subgroups(s)
    if s.order <= SUBSET_ORACLE_BOUND:
        fast = [h.members for h in subs]
        slow = subgroups_by_subsets(s)
        out["subgroups"] = {"agree": fast == slow, "fast": len(fast), "oracle": len(slow)}
    out["normality"] = {
        "agree": all(is_normal(s, h) == is_normal_by_conjugation(s, h) for h in subs),
        "subgroups": len(subs),
    }
    out["generation"] = {
        "agree": all(subgroup_generate(s, h.members).members == generated_by_products(s, h.members)
                     for h in subs),
        "subgroups": len(subs),
    }

    algebras = [coset_gset(s, h, name=f"{s.label}/{h.notation()}") for h in subs
                if s.order // h.order <= PARTITION_ORACLE_BOUND]
    if s.order <= PARTITION_ORACLE_BOUND:
        g = direct_product(s, s)
        t1, t2 = factors_in(g, s.order, s.identity)
        algebras += [coset_gset(g, t1, name="A"), coset_gset(g, t2, name="C"), twisted_gset(s, g)]
    con_checks = []
    for alg in algebras:
        fast = all_congruences(alg)
        slow = congruences_by_partitions(alg)
        con_checks.append((alg.name, alg.universe_size, len(fast), fast == slow))
    out["congruences"] = {
        "agree": all(ok for *_, ok in con_checks),
        "algebras": [{"name": n, "universe": m, "congruences": k, "agree": ok}
                     for n, m, k, ok in con_checks],
    }

    lats = [subgroup_lattice(s), normal_subgroup_lattice(s)]
    lats = [lat for lat in lats if lat.size <= PERMUTATION_ORACLE_BOUND]
    lats += [chain(3), chain(5), pentagon()]
    iso_checks = []
    for l1, l2 in itertools.product(lats, repeat=2):
        fast = lattice_isomorphism(l1, l2) is not None
        iso_checks.append(fast == isomorphic_by_permutations(l1, l2))
    out["isomorphism"] = {"agree": all(iso_checks), "pairs": len(iso_checks)}
    return out
