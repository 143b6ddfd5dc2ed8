"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`QHopfError`,
so callers (and the command line front end) can catch a single type.
"""


class QHopfError(ValueError):
    """Base class for all library errors."""


class SingularQuaternion(QHopfError, ZeroDivisionError):
    """Inverse requested for a quaternion of (numerically) zero norm."""


class NotNormalized(QHopfError):
    """Amplitudes, spinors or unit quaternions off the unit sphere."""


class NotUnitary(QHopfError):
    """A local operation that is not a 2x2 unitary."""


class AtProjectionPole(QHopfError):
    """Point coincides with the pole excluded by the chosen chart."""


class OutOfDisk(QHopfError):
    """Section parameters with |z|^2 + |w|^2 > 1."""


class UndefinedPhase(QHopfError):
    """Quaternionic phase of the chart coordinate is undefined."""


class ZOnAxis(QHopfError):
    """Quantity needs w/z but z vanishes."""


class DegenerateEndpoints(QHopfError):
    """Geodesic requested between identical or antipodal points."""


class TrivialSchmidtAxis(QHopfError):
    """Transport-based Schmidt decomposition needs z != 0."""


class Degenerate(QHopfError):
    """Schmidt coefficients coincide (or one vanishes), so the frame is not unique."""


class FiberMismatch(QHopfError):
    """Start spinor does not lie over the first point of the loop."""


class PoleCrossing(QHopfError):
    """A sample leaves the north chart of the section used for transport."""


class LoopNotClosed(QHopfError):
    """Loop end point differs from its start point."""


class PathNotClosed(QHopfError):
    """Evolution path is not closed."""


class NotAntisymmetric(QHopfError):
    """Spin(5) coefficient matrix is not antisymmetric."""


class NotDensityMatrix(QHopfError):
    """Matrix is not Hermitian, unit trace and positive semidefinite."""


class SeparableBoundary(QHopfError):
    """Hyperbolic formula evaluated at a separable (boundary) state."""


class BoundaryState(QHopfError):
    """Rapidity requested for a rank one density matrix."""


class SingularAmplitude(QHopfError):
    """Purification amplitude of rank one where rank two is required."""


class OffSubbundle(QHopfError):
    """Amplitude matrix with det C not real positive."""
