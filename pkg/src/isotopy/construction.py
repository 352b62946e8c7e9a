"""The isotopic pair A ~_C B built from a finite non-Dedekind group S.

With ``G = S x S``, ``T1 = S x {1}``, ``T2 = {1} x S`` and ``D`` the diagonal:

* ``A`` is ``G/T1`` and ``C`` is ``G/T2``, both under left multiplication;
* ``B`` is ``G/D`` under the twisted action ``(g1, g2)(x1, x2)D = (g2 x1, g1 x2)D``;
* ``phi((x1, x2)T1, (y1, y2)T2) = ((x2, y1)D, (y1, y2)T2)`` is an isomorphism
  ``A x C -> B x C`` fixing the second coordinate.

``Con A`` is isomorphic to ``Sub(S)`` and ``Con B`` to ``NSub(S)``, so the
two congruence lattices differ whenever ``S`` has a non-normal subgroup.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import CapacityError, DedekindGroupRejected
from .groups import (
    SUBGROUP_ENUM_BOUND,
    FiniteGroup,
    SubgroupSet,
    all_subgroups,
    diagonal_in,
    direct_product,
    factors_in,
    is_dedekind,
    is_normal,
    small_generating_set,
    subgroup_generate,
)
from .gsets import (
    UnaryAlgebra,
    congruence_lattice,
    coset_gset,
    homomorphism_violation,
    product_algebra,
    twisted_gset,
)
from .lattices import (
    FiniteLattice,
    filter_above,
    is_pentagon,
    find_pentagon,
    lattice_isomorphism,
    normal_subgroup_lattice,
    subgroup_lattice,
)

SCHEMA_VERSION = 1
# Sub(S x S) is needed for |S| up to 12
PRODUCT_ENUM_BOUND = 144
# Con(A x C) has a universe of |S|^2 points
PRODUCT_CON_MAX_S = 12


@dataclass(eq=False)
class ExampleBundle:
    s: FiniteGroup
    g: FiniteGroup
    t1: SubgroupSet
    t2: SubgroupSet
    d: SubgroupSet
    alg_a: UnaryAlgebra
    alg_b: UnaryAlgebra
    alg_c: UnaryAlgebra
    notes: list[str] = field(default_factory=list)


@dataclass
class IsotopyWitness:
    """Map table of ``phi`` on ``A x C`` plus the four certificate flags."""

    table: np.ndarray = field(repr=False)
    well_defined: bool
    homomorphism: bool
    bijective: bool
    second_coordinate_fixed: bool
    counterexample: dict[str, Any] | None = None

    @property
    def certified(self) -> bool:
        return self.well_defined and self.homomorphism and self.bijective and self.second_coordinate_fixed

    def flags(self) -> dict[str, bool]:
        return {
            "well_defined": self.well_defined,
            "homomorphism": self.homomorphism,
            "bijective": self.bijective,
            "second_coordinate_fixed": self.second_coordinate_fixed,
        }


def build_example(s: FiniteGroup, allow_dedekind: bool = False) -> ExampleBundle:
    if not allow_dedekind and is_dedekind(s):
        raise DedekindGroupRejected(
            f"{s.label} is a Dedekind group: every subgroup is normal, so Sub(S) = NSub(S) "
            "and Con A, Con B come out isomorphic; pass allow_dedekind to build it anyway"
        )
    n = s.order
    g = direct_product(s, s)
    t1, t2 = factors_in(g, n, s.identity)
    d = diagonal_in(g, n)
    gens = small_generating_set(g)
    alg_a = coset_gset(g, t1, gens, name="A")
    alg_c = coset_gset(g, t2, gens, name="C")
    alg_b = twisted_gset(s, g, gens, name="B")
    notes = [f"S = {s.label}, |G| = {g.order}", f"congruence search uses {len(gens)} of {g.order} operations"]
    if allow_dedekind and is_dedekind(s):
        notes.append("Dedekind group built on request: Con A and Con B should be isomorphic")
    return ExampleBundle(s, g, t1, t2, d, alg_a, alg_b, alg_c, notes)


def complement_identities(bundle: ExampleBundle) -> dict[str, bool]:
    """The intersections are trivial and the pairwise joins are all of G."""
    g, t1, t2, d = bundle.g, bundle.t1, bundle.t2, bundle.d
    e = 1 << g.identity
    full = (1 << g.order) - 1

    def join(h, k):
        return subgroup_generate(g, h.members + k.members).mask

    return {
        "t1_meet_d": t1.mask & d.mask == e,
        "d_meet_t2": d.mask & t2.mask == e,
        "t1_meet_t2": t1.mask & t2.mask == e,
        "t1_join_t2": join(t1, t2) == full,
        "t1_join_d": join(t1, d) == full,
        "d_join_t2": join(d, t2) == full,
    }


def phi(bundle: ExampleBundle, x_coset: int, y_coset: int) -> tuple[int, int]:
    """Image of ``(x_coset, y_coset)`` in ``B x C`` computed from canonical reps."""
    n = bundle.s.order
    x = bundle.alg_a.cosets.reps[x_coset]
    y = bundle.alg_c.cosets.reps[y_coset]
    return _phi_from_reps(bundle, x, y), y_coset


def _phi_from_reps(bundle: ExampleBundle, x, y):
    """First coordinate of the image from arbitrary representatives ``x, y`` of G."""
    n = bundle.s.order
    x2 = np.asarray(x) % n
    y1 = np.asarray(y) // n
    return bundle.alg_b.cosets.coset_of[x2 * n + y1]


def phi_table(bundle: ExampleBundle) -> np.ndarray:
    """``phi`` as a map on ``A x C`` indices (pairs stored as ``i*|C| + j``)."""
    ma, mc = bundle.alg_a.universe_size, bundle.alg_c.universe_size
    xs = np.array(bundle.alg_a.cosets.reps)
    ys = np.array(bundle.alg_c.cosets.reps)
    b = _phi_from_reps(bundle, xs[:, None], ys[None, :])
    return (b * mc + np.arange(mc)[None, :]).reshape(ma * mc).astype(np.int64)


def representative_violation(bundle: ExampleBundle) -> tuple[int, int] | None:
    """Compare ``phi`` on every pair of group elements with its canonical value.

    Returns the first pair ``(x, y)`` of representatives whose image differs
    from the image of the canonical representatives of their cosets.
    """
    g = bundle.g
    coset_a = bundle.alg_a.cosets.coset_of
    coset_c = bundle.alg_c.cosets.coset_of
    canon = phi_table(bundle).reshape(bundle.alg_a.universe_size, bundle.alg_c.universe_size)
    canon_b = canon // bundle.alg_c.universe_size
    elems = np.arange(g.order)
    for x in range(g.order):
        got = _phi_from_reps(bundle, x, elems)
        want = canon_b[coset_a[x], coset_c[elems]]
        bad = np.flatnonzero(got != want)
        if bad.size:
            return x, int(bad[0])
    return None


def check_isotopy_map(table, a: UnaryAlgebra, b: UnaryAlgebra, c: UnaryAlgebra,
                      well_defined: bool = True,
                      counterexample: dict[str, Any] | None = None) -> IsotopyWitness:
    """Certify a map ``A x C -> B x C`` given as a table over pair indices."""
    table = np.asarray(table, dtype=np.int64)
    mc = c.universe_size
    ac = product_algebra(a, c)
    bc = product_algebra(b, c)
    if a.universe_size != b.universe_size:
        return IsotopyWitness(table, well_defined, False, False, False,
                              {"kind": "size", "sizes": [a.universe_size, b.universe_size]})

    hom_bad = homomorphism_violation(table, ac, bc)
    homomorphism = hom_bad is None
    if hom_bad and counterexample is None:
        counterexample = {"kind": "homomorphism", "label": hom_bad[0], "point": hom_bad[1]}

    _, first, counts = np.unique(table, return_index=True, return_counts=True)
    bijective = len(first) == bc.universe_size
    if not bijective and counterexample is None:
        dup = int(np.flatnonzero(counts > 1)[0]) if (counts > 1).any() else 0
        hits = np.flatnonzero(table == table[first[dup]])[:2]
        counterexample = {"kind": "injectivity", "points": [int(v) for v in hits]}

    second = table % mc == np.arange(table.size) % mc
    second_fixed = bool(second.all())
    if not second_fixed and counterexample is None:
        counterexample = {"kind": "second_coordinate", "point": int(np.flatnonzero(~second)[0])}

    return IsotopyWitness(table, well_defined, homomorphism, bijective, second_fixed, counterexample)


def verify_isotopy(bundle: ExampleBundle) -> IsotopyWitness:
    rep_bad = representative_violation(bundle)
    cex = None
    if rep_bad is not None:
        cex = {"kind": "well_defined", "representatives": list(rep_bad)}
    return check_isotopy_map(phi_table(bundle), bundle.alg_a, bundle.alg_b, bundle.alg_c,
                             rep_bad is None, cex)


def inverse_witness(bundle: ExampleBundle, witness: IsotopyWitness) -> IsotopyWitness:
    """The inverse of a certified ``phi`` certifies ``B ~_C A``."""
    inv = np.empty_like(witness.table)
    inv[witness.table] = np.arange(witness.table.size)
    return check_isotopy_map(inv, bundle.alg_b, bundle.alg_a, bundle.alg_c)


@dataclass
class LatticeComparison:
    holds: bool
    left: FiniteLattice
    right: FiniteLattice
    bijection: list[int] | None


def check_lemma1(s: FiniteGroup, max_order: int = PRODUCT_ENUM_BOUND,
                 g: FiniteGroup | None = None, sub: FiniteLattice | None = None) -> LatticeComparison:
    """Is the filter above the diagonal in Sub(S x S) isomorphic to NSub(S)?

    ``g`` may be passed as an existing ``S x S`` and ``sub`` as its
    already computed subgroup lattice.
    """
    if g is None:
        g = direct_product(s, s)
    if sub is None:
        sub = subgroup_lattice(g, max_order)
    d = diagonal_in(g, s.order)
    upper = filter_above(sub, sub.index_of(d))
    nsub = normal_subgroup_lattice(s, max_order)
    f = lattice_isomorphism(upper, nsub)
    return LatticeComparison(f is not None, upper, nsub, f)


def check_con_correspondence(g: FiniteGroup, h: SubgroupSet, max_order: int = PRODUCT_ENUM_BOUND,
                             sub: FiniteLattice | None = None,
                             con: FiniteLattice | None = None) -> LatticeComparison:
    """Con(G/H) against the interval [H, G] of Sub(G)."""
    if con is None:
        con = congruence_lattice(coset_gset(g, h))
    if sub is None:
        sub = subgroup_lattice(g, max_order)
    upper = filter_above(sub, sub.index_of(h))
    f = lattice_isomorphism(con, upper)
    return LatticeComparison(f is not None, con, upper, f)


# --------------------------------------------------------------------------
# the report

@dataclass
class VerificationReport:
    group: dict[str, Any]
    is_dedekind: bool
    allow_dedekind: bool
    counts: dict[str, int | None] = field(default_factory=dict)
    complements: dict[str, bool] = field(default_factory=dict)
    isotopy: dict[str, Any] = field(default_factory=dict)
    congruence_lattices_isomorphic: bool | None = None
    size_comparison: str | None = None
    product: dict[str, Any] = field(default_factory=dict)
    lemma1: dict[str, Any] = field(default_factory=dict)
    correspondence: dict[str, Any] = field(default_factory=dict)
    operations: dict[str, int] = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def expected_isomorphic(self) -> bool:
        return self.is_dedekind

    def passed(self) -> bool:
        """All computed verdicts match what the construction predicts."""
        if not self.isotopy.get("certified"):
            return False
        if not self.isotopy.get("inverse_certified"):
            return False
        if not all(self.complements.values()):
            return False
        if self.congruence_lattices_isomorphic is None:
            return False
        if self.congruence_lattices_isomorphic != self.expected_isomorphic:
            return False
        c = self.counts
        if c.get("con_a") != c.get("subgroups") or c.get("con_b") != c.get("normal_subgroups"):
            return False
        if self.product.get("computed") and not self.is_dedekind and self.product.get("modular"):
            return False
        for part in (self.lemma1, self.correspondence):
            if part.get("computed") and not part.get("holds"):
                return False
        return True

    def to_dict(self, timings: bool = True) -> dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "group": self.group,
            "is_dedekind": self.is_dedekind,
            "allow_dedekind": self.allow_dedekind,
            "counts": self.counts,
            "complements": self.complements,
            "isotopy": self.isotopy,
            "congruence_lattices_isomorphic": self.congruence_lattices_isomorphic,
            "expected_isomorphic": self.expected_isomorphic,
            "size_comparison": self.size_comparison,
            "product": self.product,
            "lemma1": self.lemma1,
            "correspondence": self.correspondence,
            "operations": self.operations,
            "skipped": self.skipped,
            "notes": self.notes,
            "passed": self.passed(),
        }
        if timings:
            out["timings"] = self.timings
        return out


@contextmanager
def _timed(sink: dict[str, float], stage: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        sink[stage] = round(time.perf_counter() - t0, 6)


def main_report(
    s: FiniteGroup,
    allow_dedekind: bool = False,
    skip_product: bool = False,
    max_order: int = PRODUCT_ENUM_BOUND,
    max_universe: int | None = None,
    max_congruences: int | None = None,
) -> VerificationReport:
    """Run the whole pipeline for ``S``.

    Stages that hit a capacity bound are listed under ``skipped`` instead
    of aborting the report.
    """
    con_kwargs = {}
    if max_universe is not None:
        con_kwargs["max_universe"] = max_universe
    if max_congruences is not None:
        con_kwargs["max_congruences"] = max_congruences

    dedekind = is_dedekind(s, max(max_order, s.order))
    report = VerificationReport(
        group={"label": s.label, "order": s.order}, is_dedekind=dedekind, allow_dedekind=allow_dedekind
    )

    with _timed(report.timings, "build"):
        bundle = build_example(s, allow_dedekind)
    report.notes.extend(bundle.notes)
    report.operations = {
        "total": bundle.alg_a.n_ops,
        "used_for_congruences": len(bundle.alg_a.gen_rows),
    }
    report.complements = complement_identities(bundle)

    with _timed(report.timings, "subgroups"):
        subs = all_subgroups(s, max(max_order, s.order))
        report.counts["subgroups"] = len(subs)
        report.counts["normal_subgroups"] = sum(is_normal(s, h) for h in subs)

    with _timed(report.timings, "isotopy"):
        wit = verify_isotopy(bundle)
        inv = inverse_witness(bundle, wit) if wit.certified else None
    report.isotopy = {**wit.flags(), "certified": wit.certified,
                      "inverse_certified": bool(inv and inv.certified),
                      "counterexample": wit.counterexample}

    with _timed(report.timings, "congruences"):
        con_a = congruence_lattice(bundle.alg_a, **con_kwargs)
        con_b = congruence_lattice(bundle.alg_b, **con_kwargs)
    report.counts["con_a"] = con_a.size
    report.counts["con_b"] = con_b.size
    report.size_comparison = (
        "equal" if con_a.size == con_b.size else ("con_b < con_a" if con_b.size < con_a.size else "con_a < con_b")
    )

    with _timed(report.timings, "isomorphism"):
        if con_a.size != con_b.size:
            report.congruence_lattices_isomorphic = False
        else:
            report.congruence_lattices_isomorphic = lattice_isomorphism(con_a, con_b) is not None

    if skip_product or s.order > PRODUCT_CON_MAX_S:
        report.product = {"computed": False}
        report.skipped.append("product_congruences")
    else:
        with _timed(report.timings, "product"):
            try:
                con_ac = congruence_lattice(product_algebra(bundle.alg_a, bundle.alg_c, "AxC"), **con_kwargs)
            except CapacityError as exc:
                con_ac = None
                report.product = {"computed": False, "reason": str(exc)}
                report.skipped.append("product_congruences")
        if con_ac is not None:
            w = find_pentagon(con_ac)
            report.counts["con_ac"] = con_ac.size
            report.product = {
                "computed": True,
                "size": con_ac.size,
                "modular": w is None,
                "n5_witness": list(w) if w else None,
                "n5_verified": bool(w and is_pentagon(con_ac, w)),
                "n5_blocks": [con_ac.elements[i].notation() for i in w] if w else None,
            }

    with _timed(report.timings, "sub_g"):
        try:
            sub_g = subgroup_lattice(bundle.g, max_order)
            report.counts["sub_g"] = sub_g.size
        except CapacityError as exc:
            sub_g = None
            sub_g_reason = str(exc)

    with _timed(report.timings, "lemma1"):
        try:
            if sub_g is None:
                raise CapacityError(sub_g_reason)
            lem = check_lemma1(s, max_order, bundle.g, sub_g)
            report.lemma1 = {"computed": True, "holds": lem.holds,
                             "filter_size": lem.left.size, "nsub_size": lem.right.size}
        except CapacityError as exc:
            report.lemma1 = {"computed": False, "reason": str(exc)}
            report.skipped.append("lemma1")

    with _timed(report.timings, "correspondence"):
        try:
            if sub_g is None:
                raise CapacityError(sub_g_reason)
            cor = check_con_correspondence(bundle.g, bundle.t1, max_order, sub_g, con_a)
            report.correspondence = {"computed": True, "holds": cor.holds,
                                     "con_size": cor.left.size, "filter_size": cor.right.size}
        except CapacityError as exc:
            report.correspondence = {"computed": False, "reason": str(exc)}
            report.skipped.append("correspondence")

    return report
