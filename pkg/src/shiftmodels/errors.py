"""Exception types shared across the toolkit.

Class names match the error tokens used in operation contracts; every message
names the quantity or operation that failed so CLI reports stay diagnosable.
"""


class ToolkitError(Exception):
    """Base class for all toolkit-raised errors."""


class NonFinite(ToolkitError):
    """Input contains NaN or infinite entries."""


class Singular(ToolkitError):
    """Linear system is singular at the configured rank tolerance."""


class AmbientMismatch(ToolkitError):
    """Vector indices or dimension are incompatible with the operator."""


class NotBoundedBelow(ToolkitError):
    """Operator has no positive lower bound (T*T not invertible)."""


class NotConcave(ToolkitError):
    """Operation requires a concave operator."""


class NotPure(ToolkitError):
    """Operation requires a pure operator (no residual invariant part)."""


class NoWanderingSubspace(ToolkitError):
    """Defect iterates do not span the space."""


class UnsupportedRegime(ToolkitError):
    """Operator representation not supported by this operation."""


class OneInSpectrum(ToolkitError):
    """Cayley transform undefined: 1 lies in the spectrum at tolerance."""


class OutsideDisc(ToolkitError):
    """Evaluation point lies outside the model's convergence disc."""


class TailNotConvergent(ToolkitError):
    """Series tail cannot be brought below tolerance within the term cap."""


class ZeroConstantTerm(ToolkitError):
    """Series inversion requires a nonzero constant term."""


class ZeroOnBoundary(ToolkitError):
    """Blaschke zero must lie strictly inside the unit disc."""


class SymbolSingularAtOrigin(ToolkitError):
    """Symbol takes the value 1 at the origin; (phi+1)/(phi-1) undefined."""


class TruncationTooSmall(ToolkitError):
    """Requested truncation order cannot resolve the computation."""


class InvalidAutomorphism(ToolkitError):
    """Disc automorphism parameter outside its valid range."""
