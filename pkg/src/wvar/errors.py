"""Exception types shared across the package.

The CLI maps these onto exit codes: bad user input -> 2, a refuted
component claim -> 1, and an internal invariant violation -> 3.
"""


class InputError(ValueError):
    """Invalid user-supplied data (algebra type, case file, claim file...)."""


class ClaimRefuted(Exception):
    """A component-decomposition claim failed verification."""


class InternalConsistencyError(AssertionError):
    """A mathematical invariant that should hold by theory failed.

    These signal bugs (or an inconsistent basis convention), never bad input.
    """
