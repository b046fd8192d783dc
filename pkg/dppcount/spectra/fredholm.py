"""Nystrom discretisation of K on J and the quantities built from its spectrum.

The operator K restricted to J is replaced by A_ij = sqrt(w_i) K(x_i, x_j)
sqrt(w_j) on a Gauss-Legendre rule. Its eigenvalues approximate the
lambda_l(J) that enter the Fredholm determinant
Xi(1 - xi; J) = prod_l (1 - xi lambda_l(J)).
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidArgument, NonContractiveOperator
from .quadrature import DEFAULT_TRUNCATION, rule_on, truncated_interval

logger = logging.getLogger(__name__)

MIN_NYSTROM_ORDER = 20
DEFAULT_CLAMP_TOLERANCE = 1e-10
RETENTION_FLOOR = 1e-16
DROPPED_MASS_LIMIT = 1e-12
ZERO_FLOOR = 1e-14
# Largest double below one; saturated eigenvalues are placed here so their
# generating-function zeros stay strictly negative.
_BELOW_ONE = float(np.nextafter(1.0, 0.0))


@dataclass(frozen=True, eq=False)
class Spectrum:
    lambdas: np.ndarray
    clamped: int = 0
    max_excursion: float = 0.0
    region: tuple = (0.0, 0.0)
    kernel_name: str = ""
    quad_order: int = 0
    trace: float = field(default=float("nan"))

    @classmethod
    def from_eigenvalues(cls, lambdas, **metadata):
        """Wrap an explicitly known spectrum (sorted descending, checked)."""
        lam = np.sort(np.asarray(lambdas, dtype=float))[::-1]
        if lam.size and (lam[-1] < 0.0 or lam[0] > 1.0):
            raise InvalidArgument("explicit eigenvalues must lie in [0, 1]")
        metadata.setdefault("trace", float(np.sum(lam)))
        return cls(lambdas=lam, **metadata)

    @property
    def mu_l(self):
        """lambda / (1 - lambda); infinite for saturated eigenvalues."""
        with np.errstate(divide="ignore"):
            return self.lambdas / (1.0 - self.lambdas)

    def retained(self):
        """Eigenvalues that contribute to counting convolutions."""
        keep = self.lambdas >= RETENTION_FLOOR
        dropped = float(np.sum(self.lambdas[~keep]))
        if dropped >= DROPPED_MASS_LIMIT:
            logger.warning(
                "keeping all %d eigenvalues of %s: negligible tail carries %.3e",
                self.lambdas.size, self.kernel_name, dropped,
            )
            return self.lambdas
        return self.lambdas[keep]


def nystrom_matrix(kernel, rule):
    """Symmetrised Nystrom matrix of ``kernel`` on ``rule``."""
    root_w = np.sqrt(rule.weights)
    a = root_w[:, None] * kernel.matrix(rule.nodes) * root_w[None, :]
    if kernel.is_complex:
        return 0.5 * (a + a.conj().T)
    return 0.5 * (np.real(a) + np.real(a).T)


def _prepare(region, order, truncation):
    a, b = truncated_interval(region[0], region[1], truncation)
    if order is not None and order < MIN_NYSTROM_ORDER:
        raise InvalidArgument(
            f"Nystrom order must be at least {MIN_NYSTROM_ORDER}, got {order}"
        )
    return (a, b), rule_on(a, b, order)


def nystrom_spectrum(
    kernel,
    region,
    order=None,
    truncation=DEFAULT_TRUNCATION,
    clamp_tolerance=DEFAULT_CLAMP_TOLERANCE,
):
    """Eigenvalues of K on ``region``, clamped into [0, 1] and sorted descending."""
    (a, b), rule = _prepare(region, order, truncation)
    matrix = nystrom_matrix(kernel, rule)
    logger.debug("eigensolve of %s on (%g, %g): n=%d", kernel.name, a, b, rule.order)
    raw = np.linalg.eigvalsh(matrix)

    excursion = float(max(0.0, -raw.min(), raw.max() - 1.0))
    if excursion > clamp_tolerance:
        raise NonContractiveOperator(
            f"{kernel.name} on ({a:g}, {b:g}) has an eigenvalue {excursion:.3e} outside "
            f"[0, 1] with {rule.order} nodes",
            excursion=excursion,
        )
    outside = int(np.count_nonzero((raw < 0.0) | (raw > 1.0)))
    if outside:
        logger.debug("clamped %d eigenvalues (max excursion %.3e)", outside, excursion)
    lambdas = np.clip(raw, 0.0, 1.0)[::-1]

    trace = float(np.dot(rule.weights, kernel.diagonal(rule.nodes)))
    if abs(lambdas.sum() - trace) > 1e-10 * max(1.0, trace):
        logger.warning(
            "%s on (%g, %g): eigenvalue sum %.12g differs from quadrature trace %.12g",
            kernel.name, a, b, lambdas.sum(), trace,
        )
    return Spectrum(
        lambdas=lambdas,
        clamped=outside,
        max_excursion=excursion,
        region=(a, b),
        kernel_name=kernel.name,
        quad_order=rule.order,
        trace=trace,
    )


def fredholm_det(spectrum, xi):
    """Xi(1 - xi; J) = prod_l (1 - xi lambda_l)."""
    factors = 1.0 - float(xi) * spectrum.lambdas
    if np.all(factors > 0.0):
        return float(np.exp(np.sum(np.log(factors))))
    return float(np.prod(factors))


def xi_zeros(spectrum):
    """Zeros z_l = -(1 - lambda_l) / lambda_l of Xi(z; J), nearest the origin first."""
    lam = spectrum.lambdas[spectrum.lambdas > ZERO_FLOOR]
    lam = np.minimum(lam, _BELOW_ONE)
    return -(1.0 - lam) / lam


def trace_mean_variance(
    kernel,
    region,
    order=None,
    truncation=DEFAULT_TRUNCATION,
):
    """mu_J = tr K_J and sigma_J^2 = tr K_J - tr K_J^2 by double quadrature."""
    _, rule = _prepare(region, order, truncation)
    mu = float(np.dot(rule.weights, kernel.diagonal(rule.nodes)))
    matrix = nystrom_matrix(kernel, rule)
    sigma2 = mu - float(np.sum(np.abs(matrix) ** 2))
    return mu, sigma2
