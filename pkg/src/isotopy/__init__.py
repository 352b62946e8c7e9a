"""Isotopic finite algebras whose congruence lattices are not isomorphic.

Coset G-sets ``A = G/T1``, ``B = G/D`` (twisted action) and ``C = G/T2`` over
``G = S x S``, with the machinery to certify ``A x C ≅ B x C`` and compare
``Con A`` with ``Con B``.
"""

from .construction import (
    ExampleBundle,
    IsotopyWitness,
    VerificationReport,
    build_example,
    check_con_correspondence,
    check_lemma1,
    main_report,
    phi,
    verify_isotopy,
)
from .errors import (
    CapacityError,
    DedekindGroupRejected,
    GroupAxiomError,
    NotALattice,
    SignatureMismatch,
)
from .groups import (
    FiniteGroup,
    LeftCosetSpace,
    SubgroupSet,
    all_subgroups,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    is_dedekind,
    is_normal,
    left_cosets,
    normal_subgroups,
    quaternion,
    subgroup_generate,
    symmetric,
)
from .gsets import (
    Partition,
    UnaryAlgebra,
    all_congruences,
    congruence_lattice,
    coset_gset,
    principal_congruence,
    product_algebra,
    twisted_gset,
)
from .lattices import (
    FiniteLattice,
    filter_above,
    is_modular,
    lattice_from_poset,
    lattice_isomorphism,
    normal_subgroup_lattice,
    subgroup_lattice,
)

__version__ = "0.1.0"
