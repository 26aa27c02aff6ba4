"""Exception types raised by the library.

The CLI maps these onto exit codes: configuration problems exit 2,
numerical/model errors exit 3, file format and I/O problems exit 4.
"""


class MimoManifoldError(Exception):
    """Base class for all library errors."""


class ConfigError(MimoManifoldError):
    """Invalid experiment configuration."""


class IoFormatError(MimoManifoldError):
    """Malformed data file (matrix CSV, ensemble index, scenario, params)."""


class EvenM(MimoManifoldError):
    """Number of spatial basis functions / virtual angles must be odd."""


class EmptyTable(MimoManifoldError):
    """Tabulated steering model has no samples."""


class UnsortedTable(MimoManifoldError):
    """Tabulated steering azimuths are not strictly increasing in [-pi, pi)."""


class ZeroMatrix(MimoManifoldError):
    """Condition number requested for an all-zero matrix."""


class GridTooCoarse(MimoManifoldError):
    """Integration grid too coarse for the requested basis size."""


class NonSquare(MimoManifoldError):
    """Channel factorization requires square steering matrices (M == N)."""


class IllConditioned(MimoManifoldError):
    """Steering matrix condition number exceeds the inversion gate."""


class ZeroChannel(MimoManifoldError):
    """Residual undefined for an all-zero channel matrix."""


class EmptyRange(MimoManifoldError):
    """Scenario generator range is empty."""


class ZeroEnergy(MimoManifoldError):
    """Ensemble has zero average energy; cannot normalize."""


class ShapeMismatch(MimoManifoldError):
    """Matrix operands have incompatible shapes."""


class EmptyEnsemble(MimoManifoldError):
    """Operation requires at least one channel realization."""


class MissingSteering(MimoManifoldError):
    """Model parameters lack target-array steering matrices."""


class NotUla(MimoManifoldError):
    """Conventional virtual-channel machinery requires ULAs at both ends."""


class UnnormalizedEnsemble(MimoManifoldError):
    """Capacity evaluation requires an average-energy-normalized ensemble."""


class SingularCorrelation(MimoManifoldError):
    """Correlation matrix solve failed even after diagonal loading."""


class NonFinite(MimoManifoldError):
    """Input matrix contains NaN or infinite entries."""
