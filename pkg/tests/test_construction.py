import itertools
import json

import numpy as np
import pytest

from isotopy import groups
from isotopy.construction import (
    SCHEMA_VERSION,
    build_example,
    check_con_correspondence,
    check_isotopy_map,
    check_lemma1,
    complement_identities,
    inverse_witness,
    main_report,
    phi,
    phi_table,
    representative_violation,
    verify_isotopy,
)
from isotopy.errors import DedekindGroupRejected
from isotopy.lattices import chain, lattice_isomorphism, normal_subgroup_lattice

from conftest import BUILTIN_SMALL


def test_build_example_s3(s3_bundle):
    b = s3_bundle
    assert b.g.order == 36
    assert b.t1.order == b.t2.order == b.d.order == 6
    assert all(alg.universe_size == 6 for alg in (b.alg_a, b.alg_b, b.alg_c))
    assert b.alg_a.gen_rows == b.alg_b.gen_rows == b.alg_c.gen_rows
    assert b.alg_a.signature_id == b.alg_b.signature_id == b.alg_c.signature_id
    # T1 = S x {1}: pairs (x, e) sit at index x * |S|
    assert b.t1.members == tuple(x * 6 for x in range(6))
    assert b.t2.members == tuple(range(6))
    assert b.d.members == tuple(x * 7 for x in range(6))


def test_complements(s3_bundle):
    assert all(complement_identities(s3_bundle).values())


def test_dedekind_rejected_by_default(q8):
    with pytest.raises(DedekindGroupRejected):
        build_example(q8)
    with pytest.raises(DedekindGroupRejected):
        build_example(groups.cyclic(4))


@pytest.mark.parametrize("factory", [groups.quaternion, lambda: groups.cyclic(2), lambda: groups.cyclic(1)])
def test_forced_dedekind_example(factory):
    s = factory()
    bundle = build_example(s, allow_dedekind=True)
    assert any("Dedekind" in n for n in bundle.notes)
    assert verify_isotopy(bundle).certified


def test_phi_examples(s3_bundle):
    b = s3_bundle
    n = 6
    # identity cosets map to the identity coset of D
    assert phi(b, 0, 0) == (0, 0)
    for xc, yc in itertools.product(range(6), repeat=2):
        bx, by = phi(b, xc, yc)
        assert by == yc
        x = b.alg_a.cosets.reps[xc]
        y = b.alg_c.cosets.reps[yc]
        # (x2, y1) lands in the D-coset printed by phi
        assert b.alg_b.cosets.coset_of[(x % n) * n + y // n] == bx


def test_phi_representative_independence(s3_bundle):
    assert representative_violation(s3_bundle) is None


def test_phi_certified_s3(s3_bundle):
    w = verify_isotopy(s3_bundle)
    assert w.certified
    assert w.counterexample is None
    assert sorted(w.table.tolist()) == list(range(36))
    inv = inverse_witness(s3_bundle, w)
    assert inv.certified
    assert np.array_equal(inv.table[w.table], np.arange(36))


@pytest.mark.parametrize("name", ["S3", "D4", "A4", "D5", "Q8", "C6"])
def test_phi_certified_small(name):
    bundle = build_example(BUILTIN_SMALL[name](), allow_dedekind=True)
    assert verify_isotopy(bundle).certified


def test_mutated_table_is_caught(s3_bundle):
    table = phi_table(s3_bundle).copy()
    table[[3, 10]] = table[[10, 3]]
    w = check_isotopy_map(table, s3_bundle.alg_a, s3_bundle.alg_b, s3_bundle.alg_c)
    assert not w.certified
    assert not w.homomorphism or not w.second_coordinate_fixed
    assert w.counterexample is not None

    collapsed = phi_table(s3_bundle).copy()
    collapsed[1] = collapsed[7]
    w = check_isotopy_map(collapsed, s3_bundle.alg_a, s3_bundle.alg_b, s3_bundle.alg_c)
    assert not w.bijective and not w.certified


def test_identity_map_is_not_an_isotopy_a_to_b(s3_bundle):
    # the naive identity on indices does not respect the twisted action
    w = check_isotopy_map(np.arange(36), s3_bundle.alg_a, s3_bundle.alg_b, s3_bundle.alg_c)
    assert w.bijective and w.second_coordinate_fixed
    assert not w.homomorphism
    assert w.counterexample["kind"] == "homomorphism"


@pytest.mark.parametrize("name, size", [("C1", 1), ("S3", 3), ("A4", 3), ("D4", 6), ("Q8", 6)])
def test_diagonal_filter_matches_normal_subgroups(name, size):
    s = BUILTIN_SMALL[name]()
    res = check_lemma1(s)
    assert res.holds
    assert res.left.size == res.right.size == size
    assert lattice_isomorphism(res.left, normal_subgroup_lattice(s)) is not None


def test_diagonal_filter_s3_is_a_chain():
    res = check_lemma1(BUILTIN_SMALL["S3"]())
    assert lattice_isomorphism(res.left, chain(3)) is not None


def test_con_correspondence(s3_bundle):
    res = check_con_correspondence(s3_bundle.g, s3_bundle.t1)
    assert res.holds and res.left.size == 6
    res = check_con_correspondence(s3_bundle.g, s3_bundle.d)
    assert res.holds and res.left.size == 3


def test_main_report_s3():
    rep = main_report(BUILTIN_SMALL["S3"]())
    assert rep.passed()
    assert rep.counts["subgroups"] == 6 and rep.counts["normal_subgroups"] == 3
    assert rep.counts["con_a"] == 6 and rep.counts["con_b"] == 3
    assert rep.counts["sub_g"] == 60
    assert rep.congruence_lattices_isomorphic is False
    assert rep.size_comparison == "con_b < con_a"
    assert rep.product["computed"] and rep.product["size"] == 60
    assert not rep.product["modular"] and rep.product["n5_verified"]
    assert rep.lemma1["holds"] and rep.correspondence["holds"]
    assert rep.skipped == []
    d = rep.to_dict(timings=False)
    assert d["schema_version"] == SCHEMA_VERSION
    assert "timings" not in d
    json.dumps(d)


def test_main_report_q8_forced():
    rep = main_report(groups.quaternion(), allow_dedekind=True)
    assert rep.is_dedekind and rep.expected_isomorphic
    assert rep.congruence_lattices_isomorphic is True
    assert rep.counts["con_a"] == rep.counts["con_b"] == 6
    assert rep.product["size"] == 133 and not rep.product["modular"]
    assert rep.passed()


def test_main_report_q8_rejected():
    with pytest.raises(DedekindGroupRejected):
        main_report(groups.quaternion())


def test_main_report_a5(a5_bundle):
    rep = main_report(groups.alternating(5))
    assert rep.counts["con_a"] == 59 and rep.counts["con_b"] == 2
    assert rep.passed()
    assert "product_congruences" in rep.skipped
    assert "lemma1" in rep.skipped and "correspondence" in rep.skipped
    assert rep.operations["used_for_congruences"] < rep.operations["total"]


def test_main_report_skip_product():
    rep = main_report(BUILTIN_SMALL["S3"](), skip_product=True)
    assert rep.product == {"computed": False}
    assert rep.passed()


@pytest.mark.parametrize("name", ["S3", "D4", "A4"])
def test_invariants_non_dedekind(name):
    s = BUILTIN_SMALL[name]()
    rep = main_report(s, skip_product=True)
    assert rep.passed()
    assert rep.counts["con_a"] == rep.counts["subgroups"]
    assert rep.counts["con_b"] == rep.counts["normal_subgroups"]
    assert rep.counts["con_b"] < rep.counts["con_a"]
    assert not rep.congruence_lattices_isomorphic


@pytest.mark.parametrize("name", ["C2", "C6", "Q8"])
def test_invariants_dedekind(name):
    rep = main_report(BUILTIN_SMALL[name](), allow_dedekind=True, skip_product=True)
    assert rep.passed()
    assert rep.congruence_lattices_isomorphic


def test_con_ac_modular_for_c2():
    rep = main_report(groups.cyclic(2), allow_dedekind=True)
    assert rep.product["size"] == 5 and rep.product["modular"]
