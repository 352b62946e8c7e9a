"""Exception types shared across the package."""


class IsotopyError(Exception):
    """Base class for all package errors."""


class CapacityError(IsotopyError):
    """A configured size bound would be exceeded."""


class GroupAxiomError(IsotopyError, ValueError):
    """A Cayley table does not define a group."""


class NotASubgroup(IsotopyError, ValueError):
    pass


class NotALattice(IsotopyError, ValueError):
    """Some pair of elements lacks a meet or a join."""


class SignatureMismatch(IsotopyError, ValueError):
    pass


class DedekindGroupRejected(IsotopyError):
    """The construction was asked to run on a Dedekind group.

    Every subgroup of such a group is normal, so Sub(S) = NSub(S) and the
    two congruence lattices come out isomorphic.
    """
