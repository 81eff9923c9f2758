"""Massive MIMO link simulation under heavy-tailed alpha-stable noise."""

from ._backend import backend_name
from .chanest import EstimationResult, SolverOptions
from .detect import SymbolAlphabet, qpsk
from .rates import RateEstimate
from .stable import StableNoiseSpec
from .system import CoherenceBlock, PilotBook, PowerProfile, make_pilots

__version__ = "0.1.0"

__all__ = [
    "CoherenceBlock",
    "EstimationResult",
    "PilotBook",
    "PowerProfile",
    "RateEstimate",
    "SolverOptions",
    "StableNoiseSpec",
    "SymbolAlphabet",
    "backend_name",
    "make_pilots",
    "qpsk",
    "__version__",
]
