"""Bayesian lower bounds (Weiss-Weinstein family, Bayesian Cramer-Rao,
Ziv-Zakai) on circular frequency estimation error under a von Mises prior,
with a MAP Monte Carlo validation harness."""

from .benchmarks import BoundPoint, bcrb, fisher_information, zzb
from .mapsim import McConfig, McResult, map_estimate, run_monte_carlo, wrap_error
from .numerics import QuadratureSpec
from .prior import VonMisesPrior
from .signal_model import ObservationVector, SignalConfig, ambiguity, generate, snr_from_cn0
from .testpoints import TestPointConfig, TestPointSet, build, even_points, sidelobe_points
from .wwb import QMatrix, WwbResult, optimize_s, wwb_value

__all__ = [
    "BoundPoint", "bcrb", "fisher_information", "zzb",
    "McConfig", "McResult", "map_estimate", "run_monte_carlo", "wrap_error",
    "QuadratureSpec", "VonMisesPrior",
    "ObservationVector", "SignalConfig", "ambiguity", "generate", "snr_from_cn0",
    "TestPointConfig", "TestPointSet", "build", "even_points", "sidelobe_points",
    "QMatrix", "WwbResult", "optimize_s", "wwb_value",
]

__version__ = "0.1.0"
