"""Spectra and scattering for 1D Schrodinger operators with a point
singularity, over the full U(2) family of self-adjoint connection
conditions."""

from .errors import (
    ConfigError,
    CouplingOutOfRange,
    ExtrapolationFailure,
    NoDecaySeparation,
    NonConvergence,
    NotUnitaryError,
    PoleError,
    SeriesFailure,
    SingularSAEError,
    StepFailure,
    WindowTooSmall,
)
from .results import Level, ScatteringResult, SpectrumResult
from .u2ext import ExtensionSpec, decompose, named_extension, recompose

__version__ = "0.1.0"
