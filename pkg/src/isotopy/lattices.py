"""Finite bounded lattices: construction from a poset, filters, isomorphism,
modularity, and Hasse-diagram export.

Elements are stored in a linear extension of the order (every element comes
after everything below it).  Up-sets and down-sets are kept as integer
bitsets; in that indexing the join of ``a`` and ``b`` is the lowest set bit of
``up[a] & up[b]`` and the meet is the highest set bit of ``down[a] & down[b]``.
"""

from __future__ import annotations

from collections import Counter
from typing import Any, Callable, Sequence

import numpy as np

from .errors import CapacityError, NotALattice
from .groups import (
    SUBGROUP_ENUM_BOUND,
    FiniteGroup,
    all_subgroups,
    is_normal,
    subgroup_generate,
)

ISO_BOUND = 256


class FiniteLattice:
    """A finite lattice with precomputed order, cover, meet and join tables."""

    def __init__(self, elements: Sequence[Any], leq: np.ndarray, name: str = "L"):
        n = len(elements)
        if n == 0:
            raise NotALattice("the empty poset is not a bounded lattice")
        leq = np.asarray(leq, dtype=bool)
        self.size = n
        self.elements = list(elements)
        self.leq = leq
        self.name = name

        up = [_bits(leq[i]) for i in range(n)]
        down = [_bits(leq[:, i]) for i in range(n)]
        self._up, self._down = up, down

        meet = np.empty((n, n), dtype=np.int32)
        join = np.empty((n, n), dtype=np.int32)
        for a in range(n):
            for b in range(a, n):
                u = up[a] & up[b]
                if not u:
                    raise NotALattice(f"elements {a} and {b} have no upper bound")
                j = (u & -u).bit_length() - 1
                if up[j] != u:
                    raise NotALattice(f"elements {a} and {b} have no least upper bound")
                d = down[a] & down[b]
                if not d:
                    raise NotALattice(f"elements {a} and {b} have no lower bound")
                m = d.bit_length() - 1
                if down[m] != d:
                    raise NotALattice(f"elements {a} and {b} have no greatest lower bound")
                join[a, b] = join[b, a] = j
                meet[a, b] = meet[b, a] = m
        self.meet = meet
        self.join = join
        self.bottom = int(np.flatnonzero(leq.all(axis=1))[0])
        self.top = int(np.flatnonzero(leq.all(axis=0))[0])

        covers: list[list[int]] = []
        for a in range(n):
            strict = up[a] & ~(1 << a)
            covers.append([b for b in _indices(strict) if down[b] & strict == 1 << b])
        self.covers = covers

    def __repr__(self):
        return f"FiniteLattice({self.name!r}, size={self.size})"

    def __len__(self):
        return self.size

    def lower_covers(self) -> list[list[int]]:
        lower: list[list[int]] = [[] for _ in range(self.size)]
        for a, ups in enumerate(self.covers):
            for b in ups:
                lower[b].append(a)
        return lower

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, ups in enumerate(self.covers) for b in ups]

    def heights(self) -> list[int]:
        """Length of the longest chain from the bottom to each element."""
        h = [0] * self.size
        for a in range(self.size):  # indices follow a linear extension
            for b in self.covers[a]:
                h[b] = max(h[b], h[a] + 1)
        return h

    def depths(self) -> list[int]:
        d = [0] * self.size
        for a in reversed(range(self.size)):
            for b in self.covers[a]:
                d[a] = max(d[a], d[b] + 1)
        return d

    def index_of(self, payload) -> int:
        return self.elements.index(payload)


def _bits(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def _indices(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lattice_from_poset(
    elements: Sequence[Any], leq: Callable[[Any, Any], bool], name: str = "L"
) -> FiniteLattice:
    """Build a lattice from payloads and an order predicate.

    Payloads are reordered into a linear extension (stable sort by the
    number of elements below); the returned ``elements`` list reflects that.
    """
    elements = list(elements)
    n = len(elements)
    if n == 0:
        raise NotALattice("the empty poset is not a bounded lattice")
    table = np.zeros((n, n), dtype=bool)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = i == j or bool(leq(x, y))
    if not table.diagonal().all():
        raise NotALattice("order predicate is not reflexive")
    if (table & table.T & ~np.eye(n, dtype=bool)).any():
        raise NotALattice("order predicate is not antisymmetric")
    t = table.astype(np.int32)
    if ((t @ t > 0) & ~table).any():
        raise NotALattice("order predicate is not transitive")
    perm = np.argsort(table.sum(axis=0), kind="stable")
    table = table[np.ix_(perm, perm)]
    return FiniteLattice([elements[i] for i in perm], table, name)


def subgroup_lattice(g: FiniteGroup, max_order: int = SUBGROUP_ENUM_BOUND) -> FiniteLattice:
    subs = all_subgroups(g, max_order)
    return lattice_from_poset(subs, lambda h, k: h.mask & ~k.mask == 0, f"Sub({g.label})")


def normal_subgroup_lattice(g: FiniteGroup, max_order: int = SUBGROUP_ENUM_BOUND) -> FiniteLattice:
    subs = [h for h in all_subgroups(g, max_order) if is_normal(g, h)]
    lat = lattice_from_poset(subs, lambda h, k: h.mask & ~k.mask == 0, f"NSub({g.label})")
    # the join of two normal subgroups is their product set
    for a in range(lat.size):
        for b in range(a + 1, lat.size):
            h, k = lat.elements[a], lat.elements[b]
            prod = {int(v) for v in g.cayley[np.ix_(h.members, k.members)].ravel()}
            assert tuple(sorted(prod)) == lat.elements[lat.join[a, b]].members
    return lat


def check_subgroup_joins(lat: FiniteLattice) -> bool:
    """Join table agrees with ``subgroup_generate`` of the union."""
    for a in range(lat.size):
        for b in range(a + 1, lat.size):
            h, k = lat.elements[a], lat.elements[b]
            if subgroup_generate(h.parent, h.members + k.members) != lat.elements[lat.join[a, b]]:
                return False
    return True


def filter_above(lat: FiniteLattice, x: int) -> FiniteLattice:
    """The principal filter ``[x, top]`` with the induced order."""
    if not 0 <= x < lat.size:
        raise IndexError(f"element {x} out of range for a lattice of size {lat.size}")
    keep = np.flatnonzero(lat.leq[x])
    sub = FiniteLattice(
        [lat.elements[i] for i in keep], lat.leq[np.ix_(keep, keep)], f"[{x}, top] in {lat.name}"
    )
    sub.source_indices = [int(i) for i in keep]
    return sub


# --------------------------------------------------------------------------
# isomorphism

def _refined_colors(lats: Sequence[FiniteLattice]) -> list[list[int]]:
    """Colour refinement over the Hasse diagrams of several lattices at once,
    so colours are comparable across them."""
    data = []
    for lat in lats:
        data.append((lat.covers, lat.lower_covers()))
    colors = []
    for lat, (ups, downs) in zip(lats, data):
        h, d = lat.heights(), lat.depths()
        colors.append([(h[i], d[i], len(ups[i]), len(downs[i])) for i in range(lat.size)])
    colors = _compress(colors)
    n_classes = len({c for cs in colors for c in cs})
    while True:
        sigs = []
        for cs, (ups, downs) in zip(colors, data):
            sigs.append([
                (cs[i], tuple(sorted(cs[j] for j in ups[i])), tuple(sorted(cs[j] for j in downs[i])))
                for i in range(len(cs))
            ])
        colors = _compress(sigs)
        k = len({c for cs in colors for c in cs})
        if k == n_classes:
            return colors
        n_classes = k


def _compress(sigs):
    table = {s: i for i, s in enumerate(sorted({s for ss in sigs for s in ss}))}
    return [[table[s] for s in ss] for ss in sigs]


def is_order_isomorphism(l1: FiniteLattice, l2: FiniteLattice, f: Sequence[int]) -> bool:
    if l1.size != l2.size or sorted(f) != list(range(l2.size)):
        return False
    f = np.asarray(f)
    return bool(np.array_equal(l1.leq, l2.leq[np.ix_(f, f)]))


def lattice_isomorphism(
    l1: FiniteLattice, l2: FiniteLattice, max_size: int = ISO_BOUND
) -> list[int] | None:
    """An order isomorphism ``l1 -> l2`` as an index list, or ``None``.

    Refines element classes by Hasse-diagram invariants, then backtracks
    within classes.  Any map returned has been checked in both directions.
    """
    if max(l1.size, l2.size) > max_size:
        raise CapacityError(f"lattice isomorphism bound {max_size} exceeded")
    n = l1.size
    if n != l2.size or len(l1.edges()) != len(l2.edges()):
        return None
    c1, c2 = _refined_colors([l1, l2])
    if Counter(c1) != Counter(c2):
        return None
    by_color: dict[int, list[int]] = {}
    for v, c in enumerate(c2):
        by_color.setdefault(c, []).append(v)
    class_size = Counter(c1)
    order = sorted(range(n), key=lambda v: (class_size[c1[v]], v))
    leq1, leq2 = l1.leq, l2.leq
    f = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        u = order[k]
        done = order[:k]
        for v in by_color[c1[u]]:
            if used[v]:
                continue
            if all(
                leq1[u, w] == leq2[v, f[w]] and leq1[w, u] == leq2[f[w], v] for w in done
            ):
                f[u] = v
                used[v] = True
                if extend(k + 1):
                    return True
                used[v] = False
                f[u] = -1
        return False

    if not extend(0):
        return None
    assert is_order_isomorphism(l1, l2, f)
    return f


# --------------------------------------------------------------------------
# modularity

def find_pentagon(lat: FiniteLattice) -> tuple[int, int, int, int, int] | None:
    """Lexicographically least ``(a, b, c, a^b, a v b)`` spanning an N5.

    ``a < c``, ``b`` is incomparable to both, ``a v b = c v b`` and
    ``a ^ b = c ^ b``.
    """
    leq, meet, join = lat.leq, lat.meet, lat.join
    n = lat.size
    incomparable = ~leq & ~leq.T
    for a in range(n):
        above_a = leq[a].copy()
        above_a[a] = False
        if not above_a.any():
            continue
        for b in np.flatnonzero(incomparable[a]):
            cands = (
                above_a
                & incomparable[b]
                & (meet[b] == meet[a, b])
                & (join[b] == join[a, b])
            )
            hits = np.flatnonzero(cands)
            if hits.size:
                c = int(hits[0])
                return (a, int(b), c, int(meet[a, b]), int(join[a, b]))
    return None


def is_modular(lat: FiniteLattice) -> tuple[bool, tuple[int, int, int, int, int] | None]:
    witness = find_pentagon(lat)
    return witness is None, witness


def is_modular_by_law(lat: FiniteLattice) -> bool:
    """a <= c implies a v (b ^ c) = (a v b) ^ c, over all triples."""
    meet, join, leq = lat.meet, lat.join, lat.leq
    for a, c in zip(*np.nonzero(leq)):
        lhs = join[a, meet[:, c]]
        rhs = meet[join[a, :], c]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_pentagon(lat: FiniteLattice, w: Sequence[int]) -> bool:
    """Check that ``w = (a, b, c, bottom', top')`` spans a sublattice isomorphic to N5."""
    a, b, c, lo, hi = w
    leq, meet, join = lat.leq, lat.meet, lat.join
    return bool(
        a != c and leq[a, c]
        and not leq[a, b] and not leq[b, a] and not leq[b, c] and not leq[c, b]
        and meet[a, b] == meet[c, b] == lo
        and join[a, b] == join[c, b] == hi
    )


def pentagon() -> FiniteLattice:
    """N5 as 0 < a < c < 1 and 0 < b < 1, indexed 0, a, b, c, 1."""
    rel = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (2, 4), (3, 4)}
    return lattice_from_poset(range(5), lambda x, y: x == y or (x, y) in rel, "N5")


def chain(n: int) -> FiniteLattice:
    return lattice_from_poset(range(n), lambda x, y: x <= y, f"C{n}")


# --------------------------------------------------------------------------
# DOT export

def payload_label(x) -> str:
    note = getattr(x, "notation", None)
    return note() if callable(note) else str(x)


def to_dot(lat: FiniteLattice, name: str | None = None) -> str:
    """Hasse diagram in Graphviz DOT; bottom drawn at rank 0."""
    name = name or lat.name
    heights = lat.heights()
    lines = [f'digraph "{_esc(name)}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for i, x in enumerate(lat.elements):
        lines.append(f'  n{i} [label="{_esc(payload_label(x))}"];')
    for r in range(max(heights) + 1):
        same = " ".join(f"n{i};" for i, h in enumerate(heights) if h == r)
        lines.append(f"  {{ rank=same; {same} }}")
    for a, b in lat.edges():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')
