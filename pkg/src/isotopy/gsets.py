"""Coset G-sets as unary algebras, and their congruences.

A ``UnaryAlgebra`` stores one permutation of the universe per group element
(row ``g`` of ``ops``).  Congruence computations only need stability under a
generating set of the acting group, because a partition stable under ``f`` and
``h`` is stable under ``f∘h``; ``gen_rows`` records which rows those are.
Every congruence handed back is re-checked against the full operation table.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, NotASubgroup, SignatureMismatch
from .groups import (
    FiniteGroup,
    SubgroupSet,
    diagonal_in,
    direct_product,
    left_cosets,
    small_generating_set,
)
from .lattices import FiniteLattice, lattice_from_poset

UNIVERSE_BOUND = 128
CONGRUENCE_BOUND = 4096


@dataclass(frozen=True, eq=False)
class UnaryAlgebra:
    """Universe ``0 .. m-1`` with one labelled unary operation per row of ``ops``.

    ``labels[i]`` is the group element whose action is row ``i``; for the
    G-sets built here ``labels`` is ``range(|G|)`` so rows and labels
    coincide.  ``gen_rows`` indexes the rows used during congruence search.
    """

    ops: np.ndarray = field(repr=False)
    labels: tuple[int, ...] = field(repr=False)
    signature_id: str
    gen_rows: tuple[int, ...] = field(default=(), repr=False)
    name: str = "A"

    def __post_init__(self):
        ops = np.ascontiguousarray(self.ops, dtype=np.int32)
        if ops.ndim != 2 or ops.shape[1] == 0:
            raise ValueError("ops must be a (k, m) table with m > 0")
        if ops.shape[0] != len(self.labels):
            raise ValueError("one label per operation row required")
        m = ops.shape[1]
        if ops.min() < 0 or ops.max() >= m:
            raise ValueError("operation values out of range")
        if not (np.sort(ops, axis=1) == np.arange(m)).all():
            raise ValueError("every operation must be a permutation of the universe")
        ops.setflags(write=False)
        object.__setattr__(self, "ops", ops)
        if not self.gen_rows:
            object.__setattr__(self, "gen_rows", tuple(range(ops.shape[0])))

    @property
    def universe_size(self) -> int:
        return self.ops.shape[1]

    @property
    def n_ops(self) -> int:
        return self.ops.shape[0]

    def op(self, label: int) -> np.ndarray:
        return self.ops[self.labels.index(label)]

    def gen_ops(self) -> np.ndarray:
        return self.ops[list(self.gen_rows)]


def coset_gset(g: FiniteGroup, h: SubgroupSet, gens: Sequence[int] | None = None,
               name: str | None = None) -> UnaryAlgebra:
    """``G/H`` with ``g`` acting by left multiplication on cosets."""
    if h.parent is not g:
        raise NotASubgroup("subgroup belongs to a different group")
    cosets = left_cosets(g, h)
    ops = cosets.coset_of[g.cayley[:, list(cosets.reps)]]
    if gens is None:
        gens = small_generating_set(g)
    alg = UnaryAlgebra(ops, tuple(range(g.order)), _signature(g), tuple(gens),
                       name or f"{g.label}/H{len(h)}")
    object.__setattr__(alg, "cosets", cosets)
    return alg


def twisted_gset(s: FiniteGroup, g: FiniteGroup | None = None, gens: Sequence[int] | None = None,
                 name: str = "B") -> UnaryAlgebra:
    """``G/D`` for ``G = s x s`` with ``(g1, g2)`` sending ``(x1, x2)D`` to ``(g2 x1, g1 x2)D``."""
    n = s.order
    if g is None:
        g = direct_product(s, s)
    d = diagonal_in(g, n)
    cosets = left_cosets(g, d)
    reps = np.array(cosets.reps)
    x1, x2 = reps // n, reps % n
    labels = np.arange(g.order)
    g1, g2 = labels // n, labels % n
    images = s.cayley[g2[:, None], x1[None, :]] * n + s.cayley[g1[:, None], x2[None, :]]
    ops = cosets.coset_of[images]
    if gens is None:
        gens = small_generating_set(g)
    alg = UnaryAlgebra(ops, tuple(range(g.order)), _signature(g), tuple(gens), name)
    object.__setattr__(alg, "cosets", cosets)
    return alg


def _signature(g: FiniteGroup) -> str:
    return f"{g.label}[{g.order}]"


def product_algebra(a: UnaryAlgebra, c: UnaryAlgebra, name: str | None = None) -> UnaryAlgebra:
    """Componentwise action on pairs; ``(i, j)`` sits at ``i*|C| + j``."""
    if a.signature_id != c.signature_id or a.labels != c.labels:
        raise SignatureMismatch(f"{a.signature_id} vs {c.signature_id}")
    mc = c.universe_size
    ops = (a.ops[:, :, None] * mc + c.ops[:, None, :]).reshape(a.n_ops, -1)
    gen_rows = tuple(sorted(set(a.gen_rows) | set(c.gen_rows)))
    return UnaryAlgebra(ops, a.labels, a.signature_id, gen_rows, name or f"{a.name}x{c.name}")


def is_homomorphism(f, a: UnaryAlgebra, b: UnaryAlgebra) -> bool:
    """``f(op_g(x)) == op_g(f(x))`` for every label ``g`` and every ``x``."""
    return homomorphism_violation(f, a, b) is None


def homomorphism_violation(f, a: UnaryAlgebra, b: UnaryAlgebra) -> tuple[int, int] | None:
    """First ``(label, x)`` where ``f`` fails to commute with the operations."""
    if a.labels != b.labels:
        raise SignatureMismatch("operation labels differ")
    f = np.asarray(f)
    if f.shape != (a.universe_size,) or f.min() < 0 or f.max() >= b.universe_size:
        raise ValueError("map table has the wrong shape or range")
    bad = np.argwhere(f[a.ops] != b.ops[:, f])
    if bad.size == 0:
        return None
    row, x = bad[0]
    return a.labels[int(row)], int(x)


def action_law_violation(alg: UnaryAlgebra, g: FiniteGroup, sample: int | None = None,
                         seed: int = 0) -> tuple[int, int] | None:
    """First ``(g, h)`` with ``op_{gh} != op_g ∘ op_h``, or a non-identity ``op_e``.

    Exhaustive unless ``sample`` is given, in which case that many random
    pairs are drawn.
    """
    assert alg.labels == tuple(range(g.order))
    if not (alg.ops[g.identity] == np.arange(alg.universe_size)).all():
        return (g.identity, g.identity)
    if sample is None:
        for x in range(g.order):
            composed = alg.ops[x][alg.ops]  # op_x ∘ op_h for every h
            bad = np.flatnonzero((composed != alg.ops[g.cayley[x]]).any(axis=1))
            if bad.size:
                return (x, int(bad[0]))
        return None
    rng = np.random.default_rng(seed)
    for x, h in rng.integers(0, g.order, size=(sample, 2)):
        if not np.array_equal(alg.ops[x][alg.ops[h]], alg.ops[g.cayley[x, h]]):
            return (int(x), int(h))
    return None


def orbit(alg: UnaryAlgebra, x: int) -> set[int]:
    seen = {x}
    frontier = [x]
    while frontier:
        imgs = set(alg.ops[:, frontier].ravel().tolist()) - seen
        seen |= imgs
        frontier = list(imgs)
    return seen


# --------------------------------------------------------------------------
# partitions

@dataclass(frozen=True)
class Partition:
    """Equivalence relation on ``0 .. m-1`` as canonical block ids.

    Block ids number the blocks by first occurrence, starting at 0.
    """

    block_id: tuple[int, ...]

    def __post_init__(self):
        relabel: dict[int, int] = {}
        for b in self.block_id:
            if b not in relabel:
                relabel[b] = len(relabel)
        object.__setattr__(self, "block_id", tuple([relabel[b] for b in self.block_id]))

    @classmethod
    def from_blocks(cls, m: int, blocks: Iterable[Iterable[int]]) -> Partition:
        ids = [-1] * m
        for k, block in enumerate(blocks):
            for x in block:
                ids[x] = k
        if -1 in ids:
            raise ValueError("blocks do not cover the universe")
        return cls(tuple(ids))

    @classmethod
    def identity(cls, m: int) -> Partition:
        return cls(tuple(range(m)))

    @classmethod
    def total(cls, m: int) -> Partition:
        return cls((0,) * m)

    @property
    def universe_size(self) -> int:
        return len(self.block_id)

    @property
    def n_blocks(self) -> int:
        return max(self.block_id) + 1 if self.block_id else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_blocks)]
        for x, b in enumerate(self.block_id):
            out[b].append(x)
        return out

    def related(self, x: int, y: int) -> bool:
        return self.block_id[x] == self.block_id[y]

    def refines(self, other: Partition) -> bool:
        """``self <= other``: every block of ``self`` sits inside one of ``other``."""
        seen: dict[int, int] = {}
        for b, c in zip(self.block_id, other.block_id):
            if seen.setdefault(b, c) != c:
                return False
        return True

    def meet(self, other: Partition) -> Partition:
        return Partition(tuple(zip(self.block_id, other.block_id)))

    def join(self, other: Partition) -> Partition:
        # union-find over the blocks of self, glued along the blocks of other
        parent = list(range(self.n_blocks))

        def find(b):
            while parent[b] != b:
                parent[b] = b = parent[parent[b]]
            return b

        first: dict[int, int] = {}
        for b, c in zip(self.block_id, other.block_id):
            a = first.setdefault(c, b)
            if a != b:
                ra, rb = find(a), find(b)
                if ra < rb:
                    parent[rb] = ra
                elif rb < ra:
                    parent[ra] = rb
        return Partition(tuple([find(b) for b in self.block_id]))

    def notation(self) -> str:
        return "|" + "|".join(" ".join(map(str, b)) for b in self.blocks()) + "|"

    def sort_key(self):
        return (-self.n_blocks, self.block_id)

    def __str__(self):
        return self.notation()


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        # keep the smaller index as root so block order is stable
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True

    def partition(self) -> Partition:
        return Partition(tuple(self.find(x) for x in range(len(self.parent))))


def is_stable(p: Partition, ops: np.ndarray) -> bool:
    """Partition is compatible with every row of ``ops``."""
    ids = np.asarray(p.block_id)
    images = ids[ops]  # block of op(x) for every op and x
    for block in p.blocks():
        if len(block) > 1 and (images[:, block] != images[:, block[:1]]).any():
            return False
    return True


def principal_congruence(alg: UnaryAlgebra, x: int, y: int,
                         ops: np.ndarray | None = None) -> Partition:
    """Smallest congruence relating ``x`` and ``y`` (union-find worklist)."""
    m = alg.universe_size
    if not (0 <= x < m and 0 <= y < m):
        raise IndexError("element out of range")
    if ops is None:
        ops = alg.gen_ops()
    cols = [row.tolist() for row in ops]
    uf = UnionFind(m)
    work: deque[tuple[int, int]] = deque()
    if uf.union(x, y):
        work.append((x, y))
    while work:
        u, v = work.popleft()
        for f in cols:
            fu, fv = f[u], f[v]
            if uf.union(fu, fv):
                work.append((fu, fv))
    return uf.partition()


def pair_orbit_representatives(alg: UnaryAlgebra) -> list[tuple[int, int]]:
    """One pair ``x < y`` from each orbit of the operations acting on pairs.

    Operations are permutations, so ``Cg(f(x), f(y)) = Cg(x, y)`` and one
    principal congruence per orbit suffices.
    """
    m = alg.universe_size
    index = {}
    pairs = []
    for x in range(m):
        for y in range(x + 1, m):
            index[x, y] = len(pairs)
            pairs.append((x, y))
    uf = UnionFind(len(pairs))
    for f in alg.gen_ops().tolist():
        for k, (x, y) in enumerate(pairs):
            fx, fy = f[x], f[y]
            uf.union(k, index[(fx, fy) if fx < fy else (fy, fx)])
    return [pairs[k] for k in range(len(pairs)) if uf.find(k) == k]


def all_congruences(alg: UnaryAlgebra, max_universe: int = UNIVERSE_BOUND,
                    max_congruences: int = CONGRUENCE_BOUND) -> list[Partition]:
    """Every congruence, sorted finest first.

    Principal congruences (one per orbit of pairs), then closure under joins.
    """
    m = alg.universe_size
    if m > max_universe:
        raise CapacityError(f"universe size {m} exceeds the bound {max_universe}")
    ops = alg.gen_ops()
    known: dict[Partition, None] = {Partition.identity(m): None}
    principal: list[tuple[Partition, int, int]] = []
    for x, y in pair_orbit_representatives(alg):
        p = principal_congruence(alg, x, y, ops)
        if p not in known:
            known[p] = None
            principal.append((p, x, y))
            if len(known) > max_congruences:
                raise CapacityError(f"more than {max_congruences} congruences")
    # every congruence is a join of principal ones
    frontier = [p for p, _, _ in principal]
    while frontier:
        fresh = []
        for p in frontier:
            for q, x, y in principal:
                if p.related(x, y):  # Cg(x, y) <= p
                    continue
                r = p.join(q)
                if r not in known:
                    known[r] = None
                    fresh.append(r)
                    if len(known) > max_congruences:
                        raise CapacityError(f"more than {max_congruences} congruences")
        frontier = fresh
    result = sorted(known, key=Partition.sort_key)
    for p in result:
        assert is_stable(p, alg.ops), f"{p} is not stable under the full operation set"
    return result


def congruence_lattice(alg: UnaryAlgebra, max_universe: int = UNIVERSE_BOUND,
                       max_congruences: int = CONGRUENCE_BOUND,
                       check_bound: int = 64) -> FiniteLattice:
    """``Con(alg)`` ordered by refinement.

    Lattice meets and joins are compared with common refinement and the
    transitive-closure join: for every pair when the lattice has at most
    ``check_bound`` elements, otherwise for a fixed sample of pairs.
    """
    cons = all_congruences(alg, max_universe, max_congruences)
    lat = lattice_from_poset(cons, Partition.refines, f"Con({alg.name})")
    n = lat.size
    if n <= check_bound:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    else:
        rng = np.random.default_rng(n)
        pairs = [tuple(map(int, ab)) for ab in rng.integers(0, n, size=(check_bound * check_bound // 2, 2))]
    for a, b in pairs:
        p, q = lat.elements[a], lat.elements[b]
        # for unary algebras the equivalence join is already a congruence
        assert lat.elements[lat.join[a, b]] == p.join(q)
        assert lat.elements[lat.meet[a, b]] == p.meet(q)
    return lat
