"""Finite groups given by Cayley tables, their subgroups and coset spaces.

Elements of a group of order ``n`` are the integers ``0 .. n-1``; the
multiplication table ``cayley[x, y]`` holds the index of the product ``x*y``.
Subgroups are kept both as a sorted tuple of members and as an integer
bitmask, which makes inclusion and intersection tests cheap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, GroupAxiomError, NotASubgroup

ASSOC_CHECK_BOUND = 256
MAX_GROUP_ORDER = 3600
SUBGROUP_ENUM_BOUND = 120


class FiniteGroup:
    """A finite group stored as its multiplication table.

    The table is validated on construction: entries in range, a two-sided
    identity, two-sided inverses, and the Latin-square property.  Full
    associativity is O(n^3) and only checked when ``n <= assoc_bound`` (or
    when ``check_assoc=True`` forces it).
    """

    def __init__(
        self,
        cayley,
        label: str = "G",
        *,
        check_assoc: bool | None = None,
        assoc_bound: int = ASSOC_CHECK_BOUND,
        max_order: int = MAX_GROUP_ORDER,
    ):
        table = np.array(cayley, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupAxiomError("Cayley table must be a non-empty square array")
        n = table.shape[0]
        if n > max_order:
            raise CapacityError(f"group order {n} exceeds the bound {max_order}")
        if table.min() < 0 or table.max() >= n:
            raise GroupAxiomError("Cayley table entries must lie in [0, n)")

        ar = np.arange(n, dtype=np.int32)
        # the identity is the element whose row is the identity permutation
        candidates = np.flatnonzero((table == ar).all(axis=1))
        if len(candidates) == 0:
            raise GroupAxiomError("no left-neutral element")
        e = int(candidates[0])
        if not (table[:, e] == ar).all():
            raise GroupAxiomError(f"element {e} is not a two-sided identity")

        sorted_rows = np.sort(table, axis=1)
        sorted_cols = np.sort(table, axis=0)
        if not (sorted_rows == ar).all() or not (sorted_cols == ar[:, None]).all():
            raise GroupAxiomError("Cayley table is not a Latin square")

        inverse = np.argmax(table == e, axis=1).astype(np.int32)
        if not (table[inverse, ar] == e).all():
            raise GroupAxiomError("inverses are not two-sided")

        if check_assoc is None:
            check_assoc = n <= assoc_bound
        if check_assoc:
            _check_associative(table)

        table.setflags(write=False)
        inverse.setflags(write=False)
        self.order = n
        self.cayley = table
        self.identity = e
        self.inverse = inverse
        self.label = label

    def __repr__(self):
        return f"FiniteGroup({self.label!r}, order={self.order})"

    def __len__(self):
        return self.order

    def mul(self, x: int, y: int) -> int:
        return int(self.cayley[x, y])

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = int(self.cayley[y, x])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool((self.cayley == self.cayley.T).all())

    def elements(self) -> range:
        return range(self.order)

    @classmethod
    def _trusted(cls, table: np.ndarray, identity: int, inverse: np.ndarray, label: str):
        """Skip validation; used for products of already validated groups."""
        obj = cls.__new__(cls)
        table = np.ascontiguousarray(table, dtype=np.int32)
        inverse = np.ascontiguousarray(inverse, dtype=np.int32)
        table.setflags(write=False)
        inverse.setflags(write=False)
        obj.order = table.shape[0]
        obj.cayley = table
        obj.identity = identity
        obj.inverse = inverse
        obj.label = label
        return obj


def _check_associative(table: np.ndarray, chunk: int = 32) -> None:
    n = table.shape[0]
    for start in range(0, n, chunk):
        xs = table[start:start + chunk]  # rows x*y for x in the chunk
        left = table[xs]  # (x*y)*z
        right = table[start:start + chunk][:, table]  # x*(y*z)
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            x, y, z = int(bad[0]) + start, int(bad[1]), int(bad[2])
            raise GroupAxiomError(f"associativity fails at ({x}, {y}, {z})")


# --------------------------------------------------------------------------
# subgroups

def _mask_of(members: Iterable[int]) -> int:
    m = 0
    for x in members:
        m |= 1 << int(x)
    return m


def _members_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _bool_to_mask(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


@dataclass(frozen=True, eq=False)
class SubgroupSet:
    """A subgroup of ``parent`` given by its sorted member indices."""

    parent: FiniteGroup = field(repr=False)
    members: tuple[int, ...]
    mask: int = field(default=0, repr=False)

    def __post_init__(self):
        if not self.mask:
            object.__setattr__(self, "mask", _mask_of(self.members))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x) -> bool:
        return bool(self.mask >> int(x) & 1)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        if not isinstance(other, SubgroupSet):
            return NotImplemented
        return self.parent is other.parent and self.mask == other.mask

    def __hash__(self):
        return hash(self.mask)

    def __le__(self, other: SubgroupSet) -> bool:
        return self.mask & ~other.mask == 0

    def __and__(self, other: SubgroupSet) -> SubgroupSet:
        return _from_mask(self.parent, self.mask & other.mask)

    def sort_key(self):
        return (len(self.members), self.members)

    def notation(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def _from_mask(g: FiniteGroup, mask: int) -> SubgroupSet:
    return SubgroupSet(g, _members_of(mask), mask)


def make_subgroup(g: FiniteGroup, members: Iterable[int]) -> SubgroupSet:
    """Wrap ``members`` as a subgroup after checking the subgroup axioms."""
    ms = tuple(sorted({int(x) for x in members}))
    if not ms or ms[0] < 0 or ms[-1] >= g.order:
        raise NotASubgroup("members out of range or empty")
    arr = np.array(ms)
    inside = np.zeros(g.order, dtype=bool)
    inside[arr] = True
    if not inside[g.identity]:
        raise NotASubgroup("identity missing")
    if not inside[g.cayley[np.ix_(arr, arr)]].all() or not inside[g.inverse[arr]].all():
        raise NotASubgroup("members not closed under product and inverse")
    assert g.order % len(ms) == 0, "Lagrange violated"
    return SubgroupSet(g, ms)


def trivial_subgroup(g: FiniteGroup) -> SubgroupSet:
    return SubgroupSet(g, (g.identity,))


def whole_group(g: FiniteGroup) -> SubgroupSet:
    return SubgroupSet(g, tuple(range(g.order)))


def _closure(g: FiniteGroup, start: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    """Boolean membership of the subgroup generated by ``start`` and ``gens``.

    ``start`` must already be a subset of the generated subgroup and contain
    the identity; it is closed under right multiplication by ``gens``.
    """
    inside = start.copy()
    gens = np.asarray(list(gens), dtype=np.int64)
    if gens.size == 0:
        return inside
    frontier = np.flatnonzero(inside)
    while frontier.size:
        prods = np.unique(g.cayley[np.ix_(frontier, gens)])
        frontier = prods[~inside[prods]]
        inside[frontier] = True
    return inside


def subgroup_generate(g: FiniteGroup, gens: Iterable[int]) -> SubgroupSet:
    gens = sorted({int(x) for x in gens})
    for x in gens:
        if not 0 <= x < g.order:
            raise IndexError(f"element {x} out of range for order {g.order}")
    start = np.zeros(g.order, dtype=bool)
    start[g.identity] = True
    return _from_mask(g, _bool_to_mask(_closure(g, start, gens)))


def join_subgroups(h: SubgroupSet, k: SubgroupSet) -> SubgroupSet:
    return subgroup_generate(h.parent, set(h.members) | set(k.members))


def cyclic_subgroups(g: FiniteGroup) -> list[tuple[int, int]]:
    """Distinct cyclic subgroups as ``(generator, mask)`` pairs."""
    seen: dict[int, int] = {}
    for x in range(g.order):
        m = 0
        y = g.identity
        while True:
            m |= 1 << y
            y = int(g.cayley[y, x])
            if y == g.identity:
                break
        seen.setdefault(m, x)
    return sorted(((x, m) for m, x in seen.items()), key=lambda t: (t[1].bit_count(), t[1]))


def all_subgroups(g: FiniteGroup, max_order: int = SUBGROUP_ENUM_BOUND) -> list[SubgroupSet]:
    """Every subgroup of ``g``, sorted by (size, members).

    Cyclic extension: begin with the cyclic subgroups and keep joining each
    known subgroup with a cyclic subgroup it does not contain until nothing
    new appears.
    """
    if g.order > max_order:
        raise CapacityError(f"subgroup enumeration bound {max_order} exceeded by order {g.order}")
    cyclics = cyclic_subgroups(g)
    # mask -> generator list
    known: dict[int, list[int]] = {}
    queue: list[int] = []
    for x, m in cyclics:
        if m not in known:
            known[m] = [x] if x != g.identity else []
            queue.append(m)
    pos = 0
    while pos < len(queue):
        hmask = queue[pos]
        pos += 1
        hgens = known[hmask]
        start = None
        for x, cmask in cyclics:
            if cmask & ~hmask == 0:
                continue
            if start is None:
                start = np.frombuffer(
                    hmask.to_bytes((g.order + 7) // 8, "little"), dtype=np.uint8
                )
                start = np.unpackbits(start, bitorder="little")[: g.order].astype(bool)
            kmask = _bool_to_mask(_closure(g, start, hgens + [x]))
            if kmask not in known:
                known[kmask] = hgens + [x]
                queue.append(kmask)
    subs = [_from_mask(g, m) for m in known]
    subs.sort(key=SubgroupSet.sort_key)
    return subs


def conjugate(g: FiniteGroup, h: SubgroupSet, x: int) -> int:
    """Mask of ``x h x^-1``."""
    arr = np.array(h.members)
    conj = g.cayley[g.cayley[x, arr], g.inverse[x]]
    return _mask_of(conj.tolist())


def is_normal(g: FiniteGroup, h: SubgroupSet) -> bool:
    if h.parent is not g:
        raise NotASubgroup("subgroup belongs to a different group")
    if h.order in (1, g.order):
        return True
    arr = np.array(h.members)
    inside = np.zeros(g.order, dtype=bool)
    inside[arr] = True
    # x h x^-1 for every x at once
    conj = g.cayley[g.cayley[:, arr], g.inverse[:, None]]
    return bool(inside[conj].all())


def normal_subgroups(g: FiniteGroup, max_order: int = SUBGROUP_ENUM_BOUND) -> list[SubgroupSet]:
    return [h for h in all_subgroups(g, max_order) if is_normal(g, h)]


def is_dedekind(g: FiniteGroup, max_order: int = SUBGROUP_ENUM_BOUND) -> bool:
    if g.is_abelian():
        return True
    return all(is_normal(g, h) for h in all_subgroups(g, max_order))


def direct_product(g: FiniteGroup, h: FiniteGroup, max_order: int = MAX_GROUP_ORDER) -> FiniteGroup:
    """``g x h`` with the pair ``(i, j)`` stored at index ``i*|h| + j``."""
    n, m = g.order, h.order
    if n * m > max_order:
        raise CapacityError(f"product order {n * m} exceeds the bound {max_order}")
    table = g.cayley[:, None, :, None] * m + h.cayley[None, :, None, :]
    table = table.reshape(n * m, n * m)
    inverse = (g.inverse[:, None] * m + h.inverse[None, :]).reshape(-1)
    identity = g.identity * m + h.identity
    return FiniteGroup._trusted(table, identity, inverse, f"{g.label}x{h.label}")


def pair_index(h_order: int, i: int, j: int) -> int:
    return i * h_order + j


def diagonal_subgroup(s: FiniteGroup) -> SubgroupSet:
    """The diagonal ``{(x, x)}`` inside ``direct_product(s, s)``.

    The product group is built here; pass the result's ``parent`` along to
    combine with other subgroups of the same product.
    """
    return diagonal_in(direct_product(s, s), s.order)


def diagonal_in(g: FiniteGroup, n: int) -> SubgroupSet:
    return SubgroupSet(g, tuple(i * n + i for i in range(n)))


def factor_embeddings(s: FiniteGroup) -> tuple[SubgroupSet, SubgroupSet]:
    """``S x {1}`` and ``{1} x S`` inside ``direct_product(s, s)``."""
    return factors_in(direct_product(s, s), s.order, s.identity)


def factors_in(g: FiniteGroup, n: int, e: int) -> tuple[SubgroupSet, SubgroupSet]:
    t1 = SubgroupSet(g, tuple(i * n + e for i in range(n)))
    t2 = SubgroupSet(g, tuple(e * n + j for j in range(n)))
    return t1, t2


@dataclass(frozen=True, eq=False)
class LeftCosetSpace:
    """Left cosets ``xH`` with the minimum element of each coset as its rep."""

    parent: FiniteGroup = field(repr=False)
    subgroup: SubgroupSet = field(repr=False)
    reps: tuple[int, ...]
    coset_of: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.reps)

    def members(self, k: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.coset_of == k))


def left_cosets(g: FiniteGroup, h: SubgroupSet) -> LeftCosetSpace:
    if h.parent is not g:
        raise NotASubgroup("subgroup belongs to a different group")
    coset_of = np.full(g.order, -1, dtype=np.int32)
    arr = np.array(h.members)
    reps = []
    for x in range(g.order):
        if coset_of[x] >= 0:
            continue
        coset_of[g.cayley[x, arr]] = len(reps)
        reps.append(x)
    assert len(reps) * h.order == g.order
    coset_of.setflags(write=False)
    return LeftCosetSpace(g, h, tuple(reps), coset_of)


def small_generating_set(g: FiniteGroup) -> list[int]:
    """Greedy generating set; each new element at least doubles the span."""
    gens: list[int] = []
    current = np.zeros(g.order, dtype=bool)
    current[g.identity] = True
    size = 1
    while size < g.order:
        best, best_span = None, None
        for x in np.flatnonzero(~current):
            span = _closure(g, current, gens + [int(x)])
            if best_span is None or span.sum() > best_span.sum():
                best, best_span = int(x), span
                if best_span.all():
                    break
        gens.append(best)
        current = best_span
        size = int(current.sum())
    return gens


# --------------------------------------------------------------------------
# built-in groups

def _from_perms(perms: Sequence[tuple[int, ...]], label: str) -> FiniteGroup:
    perms = sorted(perms)  # identity permutation sorts first
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int32)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # (p*q)(k) = p(q(k)): apply q first
            table[i, j] = index[tuple(p[k] for k in q)]
    return FiniteGroup(table, label)


def cyclic(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n; ``r^k s^e`` sits at ``e*n + k``."""
    table = np.empty((2 * n, 2 * n), dtype=np.int32)
    for e, a, f, b in itertools.product(range(2), range(n), range(2), range(n)):
        k = (a + (-b if e else b)) % n
        table[e * n + a, f * n + b] = ((e + f) % 2) * n + k
    return FiniteGroup(table, f"D{n}")


def _parity(p: tuple[int, ...]) -> int:
    seen, par = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        par ^= (length - 1) & 1
    return par


def symmetric(n: int) -> FiniteGroup:
    return _from_perms(list(itertools.permutations(range(n))), f"S{n}")


def alternating(n: int) -> FiniteGroup:
    perms = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return _from_perms(perms, f"A{n}")


def quaternion() -> FiniteGroup:
    """Q8 with elements 1, -1, i, -i, j, -j, k, -k in that order."""
    # unit products among 1, i, j, k as (sign, unit)
    unit = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    table = np.empty((8, 8), dtype=np.int32)
    for a in range(8):
        for b in range(8):
            sa, ua = (-1 if a % 2 else 1), a // 2
            sb, ub = (-1 if b % 2 else 1), b // 2
            s, u = unit[ua, ub]
            s *= sa * sb
            table[a, b] = 2 * u + (s < 0)
    return FiniteGroup(table, "Q8")


# --------------------------------------------------------------------------
# Cayley table files

def load_cayley(path, label: str | None = None, **kwargs) -> FiniteGroup:
    """Read the text format: ``n`` on the first line, then ``n`` rows of ``n`` ints.

    Element 0 must be the identity.
    """
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise GroupAxiomError(f"{path}: empty file")
    try:
        n = int(lines[0])
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise GroupAxiomError(f"{path}: {exc}") from None
    if n <= 0 or len(rows) != n or any(len(r) != n for r in rows):
        raise GroupAxiomError(f"{path}: expected {n} rows of {n} integers")
    g = FiniteGroup(rows, label or path.stem, **kwargs)
    if g.identity != 0:
        raise GroupAxiomError(f"{path}: element 0 must be the identity")
    return g


def dump_cayley(g: FiniteGroup) -> str:
    lines = [str(g.order)]
    lines += [" ".join(str(int(v)) for v in row) for row in g.cayley]
    return "\n".join(lines) + "\n"


def log2_bound(n: int) -> int:
    return int(math.floor(math.log2(n))) if n > 1 else 0
