"""Exception types shared across the package.

Grouped by the module that raises them; all derive from StairwellError so
callers can catch the package's failures with one handler.
"""


class StairwellError(Exception):
    """Base class for all errors raised by this package."""


# ---- pauli ----------------------------------------------------------------

class NonFiniteCoefficient(StairwellError):
    """A chain element or composed product contains NaN or infinity."""


class ChainTooLong(StairwellError):
    """explicit_product() was asked for more factors than its term budget allows."""


# ---- potential ------------------------------------------------------------

class NonIncreasingBreakpoints(StairwellError):
    """Breakpoints must be strictly increasing."""


class LengthMismatch(StairwellError):
    """len(levels) must equal len(breakpoints) + 1."""


class InvalidSpec(StairwellError):
    """A builder spec or potential contains out-of-domain values."""


class EmptySamples(StairwellError):
    """discretize() needs at least two samples."""


class UnsortedSamples(StairwellError):
    """discretize() samples must have strictly increasing x."""


class PotentialFormatError(StairwellError):
    """A potential definition file failed schema validation."""


# ---- scattering -----------------------------------------------------------

class DegenerateKappa(StairwellError):
    """E equals a region level; the plane-wave transfer matrix is singular there."""


class BothRegionsDegenerate(StairwellError):
    """E matches the levels on both sides of an interface."""


class EvanescentLead(StairwellError):
    """No propagating incident wave: E is at or below the lead level."""


class UnequalLeads(StairwellError):
    """T/R are defined only when the two outer lead levels are equal."""


class ChainOverflow(StairwellError):
    """The transfer chain produced non-finite coefficients despite rescaling."""


# ---- resonance ------------------------------------------------------------

class InvalidRange(StairwellError):
    """A scan range or grid size is out of domain."""


class BadPermutation(StairwellError):
    """A well ordering is not a rearrangement of the reference multiset."""


# ---- scan / output --------------------------------------------------------

class IoError(StairwellError):
    """Output emission failed."""


class EmptyData(IoError):
    """Refusing to write an empty spectrum or grid."""
