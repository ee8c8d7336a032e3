"""Discrete observation model for the normalized circular frequency.

x_k = A e^{i(theta k + phi)} + n_k, k = 0..K-1, with circular complex white
Gaussian noise of variance 2 sigma^2 per sample and A = sqrt(2 sigma^2 SNR).
Everything is in normalized radians per sample; Hz appears only in the CLI.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prior import VonMisesPrior

__all__ = ["SignalConfig", "ObservationVector", "snr_from_cn0", "cn0_from_snr"]


@dataclass(frozen=True)
class SignalConfig:
    """K coherent samples at linear power ratio `snr`, known phase `phi`."""

    K: int
    snr: float
    phi: float = 0.0
    sigma2: float = 1.0

    def __post_init__(self):
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if self.snr <= 0.0:
            raise ValueError(f"snr must be > 0, got {self.snr}")
        if self.sigma2 <= 0.0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")

    @property
    def amplitude(self) -> float:
        """A = sqrt(2 sigma^2 SNR); derived, never stored."""
        return math.sqrt(2.0 * self.sigma2 * self.snr)


@dataclass(frozen=True)
class ObservationVector:
    """K complex samples plus the generating frequency, kept for error scoring."""

    samples: np.ndarray
    truth: float


def snr_from_cn0(cn0_dbhz: float, bandwidth_hz: float) -> float:
    """Linear SNR from a carrier-to-noise density ratio and sampling bandwidth."""
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth_hz}")
    return 10.0 ** (cn0_dbhz / 10.0) / bandwidth_hz


def cn0_from_snr(snr: float, bandwidth_hz: float) -> float:
    """Inverse of snr_from_cn0, in dB-Hz."""
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth_hz}")
    return 10.0 * math.log10(snr * bandwidth_hz)


def generate(config: SignalConfig, theta: float, rng: np.random.Generator) -> ObservationVector:
    """Draw one observation vector at frequency `theta`."""
    if not (-math.pi <= theta <= math.pi):
        raise ValueError(f"theta outside [-pi, pi]: {theta}")
    k = np.arange(config.K)
    clean = config.amplitude * np.exp(1j * (theta * k + config.phi))
    sigma = math.sqrt(config.sigma2)
    noise = sigma * (rng.standard_normal(config.K) + 1j * rng.standard_normal(config.K))
    return ObservationVector(samples=clean + noise, truth=theta)


def ambiguity(
    config: SignalConfig,
    obs: ObservationVector,
    prior: VonMisesPrior,
    theta_grid: np.ndarray,
) -> np.ndarray:
    """Log a-posteriori objective on a frequency grid (theta-free terms dropped).

    2 K SNR Re{e^{-j phi} (1/K) sum_k (x_k / A) e^{-j theta k}} + kappa cos(theta - mu).
    The samples are normalized by the amplitude so the data term carries the
    correct statistical weight against the prior term.
    """
    theta_grid = np.asarray(theta_grid, dtype=float)
    k = np.arange(config.K)
    basis = np.exp(-1j * np.outer(theta_grid, k))
    coherent = (basis @ (obs.samples / config.amplitude)) / config.K
    data_term = 2.0 * config.K * config.snr * np.real(np.exp(-1j * config.phi) * coherent)
    return data_term + prior.kappa * np.cos(theta_grid - prior.mu)
