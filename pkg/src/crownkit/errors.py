"""Exception hierarchy for crownkit."""


class CrownkitError(Exception):
    """Base class for all crownkit errors."""


class ConfigurationError(CrownkitError):
    """Unsupported space name or invalid run configuration."""


class DecompositionError(CrownkitError):
    """Eigenstructure of the abelian action is numerically degenerate."""


class StructureError(CrownkitError):
    """A structural identity of the algebra failed beyond tolerance."""


class NotHermitianError(StructureError):
    """No central element inducing a complex structure on p exists."""


class DomainError(CrownkitError):
    """Argument outside its admissible domain (not in p, outside the cell, ...)."""


class SingularityError(CrownkitError):
    """Operation requested at a non-regular point where it is singular."""


class FrameError(CrownkitError):
    """Chart frame is singular or too ill-conditioned to invert."""


class SamplingError(CrownkitError):
    """No valid sample points could be drawn for a verification suite."""


class UsageError(CrownkitError):
    """Invalid command-line usage (exit status 2)."""
