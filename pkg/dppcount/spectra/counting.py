"""Counting distributions E(k; J) and their CLT / LCLT diagnostics.

N(J) is a sum of independent Bernoulli variables with success probabilities
lambda_l(J), so E(k; J) is the coefficient of z^k in prod_l (1 - lambda_l +
lambda_l z): a Poisson-binomial law computed by repeated convolution.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateDistribution, InvalidArgument
from .special_functions import gaussian_cdf, gaussian_pdf

logger = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-14
LOG_CONCAVITY_SLACK = 1e-10
TABULATION_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class CountDistribution:
    probabilities: np.ndarray
    mu: float
    sigma2: float
    source: object = None

    @classmethod
    def from_probabilities(cls, probabilities, source=None):
        """Build a law whose mean and variance are its own moments."""
        p = np.asarray(probabilities, dtype=float)
        mu, sigma2 = moments(p)
        return cls(probabilities=p, mu=mu, sigma2=sigma2, source=source)

    @property
    def sigma(self):
        return math.sqrt(self.sigma2)

    def __len__(self):
        return self.probabilities.size

    def __getitem__(self, k):
        if 0 <= k < self.probabilities.size:
            return float(self.probabilities[k])
        return 0.0

    def support(self):
        """Indices k with E(k) above the tabulation floor."""
        return np.flatnonzero(self.probabilities > TABULATION_FLOOR)


@dataclass(frozen=True)
class LogConcavity:
    holds: bool
    first_violation: int = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True, eq=False)
class LcltReport:
    lclt_sup: float
    clt_sup: float
    per_k: list = field(default_factory=list)
    log_concave: bool = True
    floor_used: float = DEFAULT_FLOOR


def _check_probabilities(lambdas):
    lam = np.asarray(lambdas, dtype=float).ravel()
    if lam.size and (not np.all(np.isfinite(lam)) or lam.min() < 0.0 or lam.max() > 1.0):
        raise InvalidArgument("success probabilities must lie in [0, 1]")
    return lam


def moments(probabilities):
    p = np.asarray(probabilities, dtype=float)
    k = np.arange(p.size)
    mu = float(np.dot(k, p))
    sigma2 = float(np.dot((k - mu) ** 2, p))
    return mu, sigma2


def mean_variance(lambdas):
    """mu = sum lambda, sigma^2 = sum lambda (1 - lambda)."""
    lam = _check_probabilities(lambdas)
    return float(np.sum(lam)), float(np.sum(lam * (1.0 - lam)))


def poisson_binomial(lambdas, source=None):
    """Law of the number of successes, convolved in ascending-lambda order."""
    lam = np.sort(_check_probabilities(lambdas))
    dist = np.ones(1)
    for p in lam:
        nxt = np.empty(dist.size + 1)
        nxt[:-1] = dist * (1.0 - p)
        nxt[-1] = 0.0
        nxt[1:] += dist * p
        dist = nxt
    mu, sigma2 = mean_variance(lam)
    return CountDistribution(probabilities=dist, mu=mu, sigma2=sigma2, source=source)


def distribution_from_spectrum(spectrum):
    return poisson_binomial(spectrum.retained(), source=spectrum)


def log_concavity_check(dist, floor=DEFAULT_FLOOR):
    """E(k)^2 >= E(k-1) E(k+1) wherever all three exceed ``floor``."""
    if not floor > 0:
        raise InvalidArgument(f"log-concavity floor must be positive, got {floor}")
    p = dist.probabilities if isinstance(dist, CountDistribution) else np.asarray(dist, float)
    for k in range(1, p.size - 1):
        lo, mid, hi = p[k - 1], p[k], p[k + 1]
        if lo < floor or mid < floor or hi < floor:
            continue
        if mid * mid < lo * hi * (1.0 - LOG_CONCAVITY_SLACK):
            return LogConcavity(holds=False, first_violation=k)
    return LogConcavity(holds=True)


def _standardise(dist):
    if not dist.sigma2 > 0.0:
        raise DegenerateDistribution(
            f"distribution has variance {dist.sigma2!r}; the Gaussian comparison needs sigma > 0"
        )
    return dist.mu, math.sqrt(dist.sigma2)


def gaussian_approximation(dist, ks):
    """The limiting form phi((k - mu)/sigma) / sigma at the given counts."""
    mu, sigma = _standardise(dist)
    ks = np.asarray(ks, dtype=float)
    return gaussian_pdf((ks - mu) / sigma) / sigma


def lclt_distance(dist):
    """sup_k |sigma E(k) - phi((k - mu)/sigma)| over the tabulated counts."""
    mu, sigma = _standardise(dist)
    ks = dist.support()
    gauss = gaussian_pdf((ks - mu) / sigma)
    return float(np.max(np.abs(sigma * dist.probabilities[ks] - gauss)))


def clt_distance(dist):
    """Kolmogorov distance between the count cdf and the Gaussian cdf.

    Both one-sided limits of every jump are compared, including the jump past
    the last tabulated count.
    """
    mu, sigma = _standardise(dist)
    p = dist.probabilities
    ks = np.arange(p.size + 1)
    cdf = np.concatenate([np.cumsum(p), [1.0]])
    cdf_before = np.concatenate([[0.0], cdf[:-1]])
    phi = gaussian_cdf((ks - mu) / sigma)
    return float(max(np.max(np.abs(cdf - phi)), np.max(np.abs(cdf_before - phi))))


def lclt_report(dist, floor=DEFAULT_FLOOR):
    mu, sigma = _standardise(dist)
    ks = dist.support()
    gauss = gaussian_pdf((ks - mu) / sigma)
    scaled = sigma * dist.probabilities[ks]
    per_k = [
        (int(k), float(dist.probabilities[k]), float(g / sigma), float(dist.probabilities[k] - g / sigma))
        for k, g in zip(ks, gauss)
    ]
    return LcltReport(
        lclt_sup=float(np.max(np.abs(scaled - gauss))),
        clt_sup=clt_distance(dist),
        per_k=per_k,
        log_concave=log_concavity_check(dist, floor).holds,
        floor_used=floor,
    )
