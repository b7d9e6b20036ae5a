"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its taxonomy: 1 for a violated identity, 2 for bad input,
3 for an exceeded resource bound.
"""


class TreeHeckeError(Exception):
    exit_code = 2


class UsageError(TreeHeckeError):
    """Malformed input: unparsable permutations, out-of-range parameters."""

    exit_code = 2


class ResourceError(TreeHeckeError):
    exit_code = 3


class VerificationFailure(TreeHeckeError):
    """A mathematical identity that must hold was found to be violated."""

    exit_code = 1


class RangeError(UsageError):
    pass


class InvalidWord(UsageError):
    pass


class InvalidPermutation(UsageError):
    pass


class NotTransitive(UsageError):
    pass


class IllegalPath(UsageError):
    pass


class SkeletonTooShort(UsageError):
    pass


class MissingStructureConstants(UsageError):
    def __init__(self, u, v):
        self.pair = (u, v)
        super().__init__(f"no structure constants for pair u={list(u)}, v={list(v)}")


class GroupTooLarge(ResourceError):
    pass


class EnumerationTooLarge(ResourceError):
    pass


class NonExactDivision(VerificationFailure):
    pass


class NotExpressible(VerificationFailure):
    pass
