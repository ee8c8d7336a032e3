"""Shared independent oracles used across the test suite.

Every oracle here is implemented from first principles (series, quadrature,
direct sums, Monte Carlo expectations) so it cannot share a bug with the
library code it checks.
"""
from __future__ import annotations

import math

import numpy as np

from circbound.prior import VonMisesPrior
from circbound.signal_model import SignalConfig


def bessel_series_oracle(x: float, order: int) -> float:
    """Defining power series sum_m (x/2)^{2m+order} / (m! (m+order)!).

    Terms are accumulated with compensated summation; the running-product
    form keeps every intermediate within double range up to x ~ 700.
    """
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    half = 0.5 * x
    term = half**order / math.factorial(order)
    terms = [term]
    m = 1
    while True:
        term *= half * half / (m * (m + order))
        terms.append(term)
        if term < 1e-20 * math.fsum(terms):
            return math.fsum(terms)
        m += 1


def dirichlet_sum_oracle(h: float, K: int) -> float:
    """Direct O(K) cosine sum, the definition."""
    return float(sum(math.cos(h * k) for k in range(K)))


def mu_exponent_oracle(weights, offsets, K: int, snr: float) -> float:
    """Gaussian product-integral value of the data exponents.

    For weights w_l summing to 1 and complex means m_l(k) = A e^{i(theta+a_l)k},
    integral_x prod_l p(x|theta+a_l)^{w_l} dx = exp(sum_k snr (|sum_l w_l
    e^{i a_l k}|^2 - 1)), independent of theta. Derived from completing the
    square in the Gaussian exponent -- entirely independent of the kernel
    algebra in the library.
    """
    k = np.arange(K)
    acc = np.zeros(K, dtype=complex)
    for w, a in zip(weights, offsets):
        acc += w * np.exp(1j * a * k)
    return snr * float(np.sum(np.abs(acc) ** 2 - 1.0))


# weight/offset layouts of the four cross score-product expectations
CROSS_LAYOUTS = {
    1: lambda si, sj, hi, hj: (((1 - si - sj), si, sj), (0.0, hi, hj)),
    2: lambda si, sj, hi, hj: (((si - sj), sj, (1 - si)), (0.0, hj, -hi)),
    3: lambda si, sj, hi, hj: (((sj - si), si, (1 - sj)), (0.0, hi, -hj)),
    4: lambda si, sj, hi, hj: (((si + sj - 1), (1 - si), (1 - sj)), (0.0, -hi, -hj)),
}


def prior_power_integral_oracle(prior: VonMisesPrior, weights, offsets) -> float:
    """ln of integral of prod_l pdf(theta + a_l)^{w_l} over the common support.

    Written directly in terms of pdf calls and adaptive quadrature, so the
    support limits and the integrand both come from the density itself.
    """
    from scipy.integrate import quad

    lo = max(-math.pi - min(offsets), -math.pi)
    hi = min(math.pi - max(offsets), math.pi)
    if hi <= lo:
        return -math.inf

    def f(theta: float) -> float:
        out = 1.0
        for w, a in zip(weights, offsets):
            out *= prior.pdf(theta + a) ** w
        return out

    val, _ = quad(f, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-12)
    return math.log(val)


def q_element_mc_oracle(
    h_i: float,
    h_j: float,
    s: float,
    prior: VonMisesPrior,
    config: SignalConfig,
    trials: int,
    seed: int,
) -> tuple[float, float]:
    """Monte Carlo estimate of the defining score-product expectation ratio.

    Draws theta from the prior and x from the likelihood, forms the two
    likelihood-ratio score differences directly from joint-density ratios,
    and averages. Returns (estimate, standard error of the estimate).
    """
    rng = np.random.default_rng(seed)
    K, A = config.K, config.amplitude
    theta = prior.sample(rng, trials)
    k = np.arange(K)
    clean = A * np.exp(1j * np.outer(theta, k))
    noise = rng.standard_normal((trials, K)) + 1j * rng.standard_normal((trials, K))
    x = clean + noise

    def ratio_pow(shift: float, p: float) -> np.ndarray:
        # [p(x, theta+shift) / p(x, theta)]^p, zero where the shifted
        # frequency leaves the prior support
        t2 = theta + shift
        inside = (t2 >= -math.pi) & (t2 <= math.pi)
        m2 = A * np.exp(1j * np.outer(t2, k))
        log_lik = (
            np.sum(np.abs(x - clean) ** 2, axis=1)
            - np.sum(np.abs(x - m2) ** 2, axis=1)
        ) / 2.0
        log_prior = prior.kappa * (np.cos(t2 - prior.mu) - np.cos(theta - prior.mu))
        return np.where(inside, np.exp(p * (log_lik + log_prior)), 0.0)

    score_i = ratio_pow(h_i, s) - ratio_pow(-h_i, 1.0 - s)
    score_j = ratio_pow(h_j, s) - ratio_pow(-h_j, 1.0 - s)
    prod = score_i * score_j
    den = ratio_pow(h_i, s).mean() * ratio_pow(h_j, s).mean()
    est = float(prod.mean() / den)
    se = float(prod.std(ddof=1) / math.sqrt(trials) / den)
    return est, se
