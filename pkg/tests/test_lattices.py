import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from isotopy import groups
from isotopy.errors import CapacityError, NotALattice
from isotopy.lattices import (
    chain,
    check_subgroup_joins,
    filter_above,
    find_pentagon,
    is_modular,
    is_modular_by_law,
    is_order_isomorphism,
    is_pentagon,
    lattice_from_poset,
    lattice_isomorphism,
    normal_subgroup_lattice,
    pentagon,
    subgroup_lattice,
    to_dot,
)
from isotopy.oracles import isomorphic_by_permutations

from conftest import BUILTIN_SMALL


def closure_system(sets, universe=4):
    """Intersection-closed family plus the full set: a lattice under inclusion."""
    family = {frozenset(s) for s in sets} | {frozenset(range(universe))}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(family), 2):
            if a & b not in family:
                family.add(a & b)
                changed = True
    return lattice_from_poset(sorted(family, key=lambda s: (len(s), sorted(s))), frozenset.issubset)


families = st.lists(st.frozensets(st.integers(0, 3)), max_size=5)


def check_lattice_tables(lat):
    n = lat.size
    leq = lat.leq
    for a, b in itertools.product(range(n), repeat=2):
        ups = [c for c in range(n) if leq[a, c] and leq[b, c]]
        downs = [c for c in range(n) if leq[c, a] and leq[c, b]]
        j, m = lat.join[a, b], lat.meet[a, b]
        assert j in ups and all(leq[j, c] for c in ups)
        assert m in downs and all(leq[c, m] for c in downs)
    assert all(leq[lat.bottom, x] and leq[x, lat.top] for x in range(n))
    # covers are exactly the transitive reduction
    for a, b in itertools.product(range(n), repeat=2):
        is_cover = a != b and leq[a, b] and not any(
            c not in (a, b) and leq[a, c] and leq[c, b] for c in range(n)
        )
        assert is_cover == (b in lat.covers[a])


def test_single_element():
    lat = lattice_from_poset(["x"], lambda a, b: True)
    assert lat.size == 1 and lat.bottom == lat.top == 0 and lat.covers == [[]]


def test_empty_rejected():
    with pytest.raises(NotALattice):
        lattice_from_poset([], lambda a, b: True)


def test_non_lattices_rejected():
    # two maximal elements
    with pytest.raises(NotALattice):
        lattice_from_poset([0, 1, 2], lambda a, b: a == b or a == 0)
    # bowtie: two lower and two upper elements, no least upper bound
    rel = {(0, 2), (0, 3), (1, 2), (1, 3)}
    with pytest.raises(NotALattice):
        lattice_from_poset([-1, 0, 1, 2, 3, 4],
                           lambda a, b: a == b or a == -1 or b == 4 or (a, b) in rel)
    with pytest.raises(NotALattice):
        lattice_from_poset([0, 1], lambda a, b: True)


def test_subgroup_lattice_s3(s3):
    lat = subgroup_lattice(s3)
    assert lat.size == 6
    atoms = lat.covers[lat.bottom]
    assert len(atoms) == 4
    assert all(lat.covers[a] == [lat.top] for a in atoms)
    assert len(lat.edges()) == 8
    check_lattice_tables(lat)
    assert check_subgroup_joins(lat)


def test_normal_subgroup_lattices(s3, a5):
    ns = normal_subgroup_lattice(s3)
    assert ns.size == 3 and ns.edges() == [(0, 1), (1, 2)]
    assert normal_subgroup_lattice(a5).size == 2
    for name in ("C6", "C12", "D2"):
        g = BUILTIN_SMALL[name]()
        assert [h.members for h in subgroup_lattice(g).elements] == \
            [h.members for h in normal_subgroup_lattice(g).elements]


def test_subgroup_lattice_a5(a5):
    lat = subgroup_lattice(a5)
    assert lat.size == 59
    # 1 + 15 (order 2) + 10 (order 3) + 6 (order 5) + 5 (V4) + 10 (S3) + 6 (D5) + 5 (A4) + 1
    by_order = {}
    for h in lat.elements:
        by_order[h.order] = by_order.get(h.order, 0) + 1
    assert by_order == {1: 1, 2: 15, 3: 10, 4: 5, 5: 6, 6: 10, 10: 6, 12: 5, 60: 1}


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "C12", "D6"])
def test_subgroup_lattice_tables(name):
    lat = subgroup_lattice(BUILTIN_SMALL[name]())
    check_lattice_tables(lat)
    assert check_subgroup_joins(lat)


def test_filter_above(s3):
    lat = subgroup_lattice(s3)
    top = filter_above(lat, lat.top)
    assert top.size == 1
    whole = filter_above(lat, lat.bottom)
    assert lattice_isomorphism(whole, lat) == list(range(lat.size))
    with pytest.raises(IndexError):
        filter_above(lat, lat.size)
    g = groups.direct_product(s3, s3)
    sub = subgroup_lattice(g)
    above_d = filter_above(sub, sub.index_of(groups.diagonal_in(g, 6)))
    assert above_d.size == 3
    assert lattice_isomorphism(above_d, chain(3)) is not None


def test_isomorphism_examples(s3, q8):
    lat = subgroup_lattice(s3)
    assert lattice_isomorphism(lat, lat) is not None
    assert lattice_isomorphism(chain(3), lat) is None
    assert lattice_isomorphism(subgroup_lattice(q8), normal_subgroup_lattice(q8)) is not None
    with pytest.raises(CapacityError):
        lattice_isomorphism(lat, lat, max_size=5)


def test_isomorphism_distinguishes_same_size():
    # M3 and the 5-chain and N5 all have five elements
    m3 = lattice_from_poset(range(5), lambda a, b: a == b or a == 0 or b == 4)
    lats = [m3, chain(5), pentagon()]
    for i, j in itertools.product(range(3), repeat=2):
        assert (lattice_isomorphism(lats[i], lats[j]) is not None) == (i == j)


@settings(max_examples=80, deadline=None)
@given(f1=families, f2=families)
def test_isomorphism_matches_permutation_oracle(f1, f2):
    l1, l2 = closure_system(f1), closure_system(f2)
    if max(l1.size, l2.size) > 7:
        return
    f = lattice_isomorphism(l1, l2)
    assert (f is not None) == isomorphic_by_permutations(l1, l2)
    if f is not None:
        assert is_order_isomorphism(l1, l2, f)


@settings(max_examples=60, deadline=None)
@given(fam=families, data=st.data())
def test_relabelled_lattice_is_isomorphic(fam, data):
    lat = closure_system(fam)
    perm = data.draw(st.permutations(range(lat.size)))
    shuffled = lattice_from_poset([lat.elements[i] for i in perm], frozenset.issubset)
    f = lattice_isomorphism(lat, shuffled)
    assert f is not None and is_order_isomorphism(lat, shuffled, f)


@settings(max_examples=80, deadline=None)
@given(fam=st.lists(st.frozensets(st.integers(0, 4)), max_size=8))
def test_random_closure_systems_are_lattices_and_modularity_agrees(fam):
    lat = closure_system(fam, universe=5)
    check_lattice_tables(lat)
    modular, witness = is_modular(lat)
    assert modular == is_modular_by_law(lat)
    if witness:
        assert is_pentagon(lat, witness)


def test_modularity_examples(s3):
    assert is_modular(chain(4)) == (True, None)
    n5 = pentagon()
    modular, w = is_modular(n5)
    assert not modular
    assert sorted(w) == [0, 1, 2, 3, 4]
    assert w == (1, 2, 3, 0, 4)
    assert is_modular(subgroup_lattice(s3))[0]


def test_pentagon_witness_is_lexicographically_least():
    n5 = pentagon()
    lat = lattice_from_poset(range(5), lambda a, b: n5.leq[a, b])
    w = find_pentagon(lat)
    candidates = [
        (a, b, c) for a, b, c in itertools.permutations(range(5), 3)
        if is_pentagon(lat, (a, b, c, lat.meet[a, b], lat.join[a, b]))
    ]
    assert w[:3] == min(candidates)


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "D6", "C12"])
def test_modularity_law_agreement_on_subgroup_lattices(name):
    lat = subgroup_lattice(BUILTIN_SMALL[name]())
    assert is_modular(lat)[0] == is_modular_by_law(lat)


def test_dedekind_sub_equals_nsub():
    for name in ("Q8", "C6", "C12", "D2", "C4"):
        g = BUILTIN_SMALL[name]()
        sub, nsub = subgroup_lattice(g), normal_subgroup_lattice(g)
        assert lattice_isomorphism(sub, nsub) == list(range(sub.size))


def test_to_dot(s3):
    lat = subgroup_lattice(s3)
    text = to_dot(lat, "Sub(S3)")
    assert text.startswith('digraph "Sub(S3)" {')
    assert text.count(" -> ") == 8
    assert '[label="{0}"]' in text
    assert '[label="{0,1,2,3,4,5}"]' in text
    assert "rank=same; n0;" in text
    one = to_dot(subgroup_lattice(groups.cyclic(1)))
    assert one.count("label=") == 1 and " -> " not in one
