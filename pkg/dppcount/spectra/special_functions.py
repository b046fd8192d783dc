"""Scalar special functions used by the kernels and the diagnostics.

Evaluation is delegated to ``scipy.special``; these wrappers fix the
supported ranges and the accuracy each caller may rely on.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .exceptions import DomainError, InvalidArgument

AIRY_RANGE = (-40.0, 20.0)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class AccuracyContract:
    abs_tol: float
    rel_tol: float
    valid_range: tuple

    def accepts(self, value, reference):
        """True when ``value`` meets either tolerance against ``reference``."""
        err = abs(value - reference)
        return err <= self.abs_tol or err <= self.rel_tol * abs(reference)


AIRY_CONTRACT = AccuracyContract(abs_tol=1e-11, rel_tol=1e-10, valid_range=AIRY_RANGE)
GAMMA_CONTRACT = AccuracyContract(abs_tol=1e-14, rel_tol=1e-12, valid_range=(0.0, math.inf))
GAUSSIAN_CDF_CONTRACT = AccuracyContract(abs_tol=1e-12, rel_tol=0.0, valid_range=(-math.inf, math.inf))


def _scalar_or_array(value, original):
    if np.ndim(original) == 0:
        return float(value)
    return value


def _airy(x):
    arr = np.asarray(x, dtype=float)
    lo, hi = AIRY_RANGE
    if not np.all((arr >= lo) & (arr <= hi)):
        raise DomainError(f"Airy functions are supported on [{lo}, {hi}]")
    ai, aip, _, _ = special.airy(arr)
    return ai, aip


def airy_ai(x):
    ai, _ = _airy(x)
    return _scalar_or_array(ai, x)


def airy_ai_prime(x):
    _, aip = _airy(x)
    return _scalar_or_array(aip, x)


def airy_pair(x):
    """Return (Ai(x), Ai'(x)) in one evaluation."""
    ai, aip = _airy(x)
    return _scalar_or_array(ai, x), _scalar_or_array(aip, x)


def regularized_lower_gamma(a, x):
    """P(a, x) = 1 - exp(-x) sum_{j<a} x^j / j! for positive integer ``a``."""
    a_arr = np.asarray(a)
    x_arr = np.asarray(x, dtype=float)
    if not np.issubdtype(a_arr.dtype, np.integer):
        if not np.all(np.mod(a_arr, 1) == 0):
            raise InvalidArgument("first argument of P(a, x) must be an integer")
    if np.any(a_arr < 1):
        raise InvalidArgument("first argument of P(a, x) must be at least 1")
    if np.any(x_arr < 0) or not np.all(np.isfinite(x_arr)):
        raise InvalidArgument("second argument of P(a, x) must be finite and non-negative")
    value = np.clip(special.gammainc(a_arr.astype(float), x_arr), 0.0, 1.0)
    if np.ndim(a) == 0 and np.ndim(x) == 0:
        return float(value)
    return value


def gaussian_pdf(x):
    arr = np.asarray(x, dtype=float)
    return _scalar_or_array(INV_SQRT_2PI * np.exp(-0.5 * arr * arr), x)


def gaussian_cdf(x):
    arr = np.asarray(x, dtype=float)
    return _scalar_or_array(special.ndtr(arr), x)
