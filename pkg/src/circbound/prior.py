"""Von Mises prior on the normalized circular frequency.

Density, log-density, sampling, Bessel ratio, and the variance surrogate used
by the Ziv-Zakai closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import DomainError, bessel_i0, bessel_i1

__all__ = ["VonMisesPrior", "UNIFORM_VARIANCE"]

# variance of the uniform distribution on [-pi, pi]; the normal-approximation
# surrogate -2 ln(I1/I0) diverges as kappa -> 0, so it is clamped here
UNIFORM_VARIANCE = math.pi**2 / 3.0


@dataclass(frozen=True)
class VonMisesPrior:
    """Location `mu` (radians in [-pi, pi]) and concentration `kappa` >= 0."""

    mu: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if not (-math.pi <= self.mu <= math.pi):
            raise ValueError(f"mu must lie in [-pi, pi], got {self.mu}")
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be >= 0, got {self.kappa}")

    @property
    def log_norm(self) -> float:
        """ln(2 pi I0(kappa)), the log normalizing constant."""
        return math.log(2.0 * math.pi * bessel_i0(self.kappa))

    def pdf(self, theta: float) -> float:
        """Density e^{kappa cos(theta-mu)} / (2 pi I0(kappa)) on [-pi, pi], 0 outside."""
        if not math.isfinite(theta):
            raise DomainError(f"theta must be finite, got {theta}")
        if not (-math.pi <= theta <= math.pi):
            return 0.0
        return math.exp(self.kappa * math.cos(theta - self.mu) - self.log_norm)

    def log_pdf(self, theta: float) -> float:
        if not (-math.pi <= theta <= math.pi):
            raise DomainError(f"theta outside support [-pi, pi]: {theta}")
        return self.kappa * math.cos(theta - self.mu) - self.log_norm

    def pdf_array(self, theta: np.ndarray) -> np.ndarray:
        """Vectorized pdf; support handled by masking."""
        theta = np.asarray(theta, dtype=float)
        out = np.exp(self.kappa * np.cos(theta - self.mu) - self.log_norm)
        return np.where((theta >= -math.pi) & (theta <= math.pi), out, 0.0)

    def sample(self, rng: np.random.Generator, size=None):
        """Draw from the prior; uniform on [-pi, pi] when kappa = 0.

        Uses the Best-Fisher rejection sampler (numpy's Generator.vonmises);
        results are wrapped into [-pi, pi].
        """
        draws = rng.vonmises(self.mu, self.kappa, size=size)
        return np.mod(draws + math.pi, 2.0 * math.pi) - math.pi

    def bessel_ratio(self) -> float:
        """I1(kappa) / I0(kappa), in [0, 1)."""
        if self.kappa == 0.0:
            return 0.0
        return bessel_i1(self.kappa) / bessel_i0(self.kappa)

    def variance(self) -> float:
        """Variance surrogate used by the ZZB closed form.

        The normal-approximation value -2 ln(I1/I0) clamped at the uniform
        variance pi^2/3 (it diverges as kappa -> 0 while the true circular
        spread is bounded).
        """
        if self.kappa == 0.0:
            return UNIFORM_VARIANCE
        return min(-2.0 * math.log(self.bessel_ratio()), UNIFORM_VARIANCE)
