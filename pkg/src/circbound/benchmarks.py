"""Benchmark bounds: Bayesian Cramer-Rao and the Ziv-Zakai closed form."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import normal_tail, regularized_lower_gamma
from .prior import VonMisesPrior

__all__ = ["BoundPoint", "fisher_information", "bcrb", "zzb"]


@dataclass(frozen=True)
class BoundPoint:
    """Uniform result record shared by all bound kinds."""

    snr: float
    K: int
    mse_bound: float
    db: float
    kind: str


def fisher_information(K: int, snr: float) -> float:
    """SNR * K(K-1)(2K-1)/3, i.e. 2 SNR sum_{k=0}^{K-1} k^2."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if snr <= 0.0:
        raise ValueError(f"snr must be > 0, got {snr}")
    return snr * K * (K - 1) * (2 * K - 1) / 3.0


def bcrb(prior: VonMisesPrior, K: int, snr: float) -> float:
    """1 / (J_F + kappa I1(kappa)/I0(kappa))."""
    denom = fisher_information(K, snr) + prior.kappa * prior.bessel_ratio()
    if denom == 0.0:
        raise ZeroDivisionError("no data or prior information (K=1, kappa=0)")
    return 1.0 / denom


def zzb(prior: VonMisesPrior, K: int, snr: float) -> float:
    """Closed-form Ziv-Zakai bound.

    J_F^{-1} Gamma_{1.5}(0.5 K SNR) + sigma_theta^2 * 2 Phi(sqrt(K SNR)),
    where sigma_theta^2 is the clamped prior variance surrogate.
    """
    if K < 2:
        raise ValueError(f"K must be >= 2, got {K}")
    ks = K * snr
    asymptotic = regularized_lower_gamma(1.5, 0.5 * ks) / fisher_information(K, snr)
    floor = prior.variance() * 2.0 * normal_tail(math.sqrt(ks))
    return asymptotic + floor
