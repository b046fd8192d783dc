"""Gauss-Legendre rules and their images on the regions J_s.

Nodes are the roots of the degree-n Legendre polynomial, found by a Newton
iteration on the three-term recurrence from the cosine initial guess. Only
the non-negative half is iterated; the other half is its mirror image so
rules are exactly symmetric about the centre of the interval.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgument

logger = logging.getLogger(__name__)

MAX_ORDER = 2000
MAX_NEWTON_STEPS = 100
NEWTON_TOLERANCE = 1e-15

DEFAULT_TRUNCATION = 12.0
DEFAULT_MIN_ORDER = 60
DEFAULT_NODES_PER_UNIT = 6.0


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    interval: tuple = (-1.0, 1.0)

    def integrate(self, func):
        return float(np.dot(self.weights, func(self.nodes)))


def _legendre(n, x):
    """Return (P_n(x), P_n'(x)) by upward recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre(n):
    """Return the n-point Gauss-Legendre rule on [-1, 1]."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidArgument(f"quadrature order must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= MAX_ORDER:
        raise InvalidArgument(f"quadrature order must lie in [1, {MAX_ORDER}], got {n}")

    half = (n + 1) // 2
    i = np.arange(1, half + 1, dtype=float)
    # Positive roots, largest first.
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5))
    for _ in range(MAX_NEWTON_STEPS):
        p, dp = _legendre(n, x)
        step = p / dp
        x = x - step
        if np.max(np.abs(step)) <= NEWTON_TOLERANCE:
            break
    else:
        logger.debug("Legendre roots for n=%d stopped at step %.3e", n, np.max(np.abs(step)))

    odd = n % 2 == 1
    if odd:
        x[-1] = 0.0
    _, dp = _legendre(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)

    if odd:
        nodes = np.concatenate([-x[:-1], [0.0], x[-2::-1]])
        weights = np.concatenate([w[:-1], w[-1:], w[-2::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return QuadratureRule(nodes=nodes, weights=weights, order=n)


def map_to_interval(rule, a, b):
    """Affine image of a rule on [-1, 1] onto (a, b)."""
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidArgument(
            f"interval ({a}, {b}) is not finite; truncate semi-infinite regions first"
        )
    if a >= b:
        raise InvalidArgument(f"interval endpoints must satisfy a < b, got ({a}, {b})")
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return QuadratureRule(
        nodes=half * rule.nodes + mid,
        weights=half * rule.weights,
        order=rule.order,
        interval=(a, b),
    )


def truncated_interval(a, b, truncation=DEFAULT_TRUNCATION):
    """Replace an infinite right end point by the soft-edge wall ``truncation``."""
    a = float(a)
    b = float(b)
    if math.isinf(b) and b > 0:
        b = float(truncation)
    if a >= b:
        raise InvalidArgument(
            f"region ({a}, {b}) is empty after truncation at {truncation}"
        )
    return a, b


def default_order(length, min_order=DEFAULT_MIN_ORDER, nodes_per_unit=DEFAULT_NODES_PER_UNIT):
    """Order policy: ``nodes_per_unit`` nodes per unit length, never below ``min_order``."""
    order = max(int(min_order), int(math.ceil(nodes_per_unit * float(length))))
    return min(order, MAX_ORDER)


def rule_on(a, b, order=None):
    """Gauss-Legendre rule of the given (or default) order on (a, b)."""
    if order is None:
        order = default_order(b - a)
        logger.debug("default quadrature order %d on (%g, %g)", order, a, b)
    return map_to_interval(gauss_legendre(order), a, b)
