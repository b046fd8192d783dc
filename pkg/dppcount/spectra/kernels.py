"""Correlation kernels and rank-one conditioning.

A kernel wraps a broadcasting function ``f(x, y)``; ``matrix`` evaluates it
on the outer grid of two node vectors. Arguments are real for the line
kernels and complex (points of the plane) for Ginibre.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import DegenerateConditioning, InvalidArgument
from .special_functions import airy_pair

REAL_SYMMETRIC = "real-symmetric"
COMPLEX_HERMITIAN = "complex-Hermitian"

CONDITIONING_FLOOR = 1e-14
AIRY_NEAR_DIAGONAL = 1e-4


@dataclass(frozen=True)
class Kernel:
    name: str
    function: Callable
    symmetry: str = REAL_SYMMETRIC
    natural_domain: str = "(-inf, inf)"

    @property
    def is_complex(self):
        return self.symmetry == COMPLEX_HERMITIAN

    def evaluate(self, x, y):
        value = self.function(np.asarray(x), np.asarray(y))
        value = np.asarray(value)[()]
        return complex(value) if self.is_complex else float(value)

    def diagonal(self, xs):
        xs = np.asarray(xs)
        return np.real(self.function(xs, xs))

    def matrix(self, xs, ys=None):
        xs = np.asarray(xs)
        ys = xs if ys is None else np.asarray(ys)
        return self.function(xs[:, None], ys[None, :])


def sine_kernel(density=1.0):
    """K(x,y) = sin(pi rho (x-y)) / (pi (x-y)); the diagonal is rho."""
    density = float(density)
    if density <= 0:
        raise InvalidArgument(f"density must be positive, got {density}")

    def function(x, y):
        return density * np.sinc(density * (x - y))

    name = "sine" if density == 1.0 else f"sine[density={density:g}]"
    return Kernel(name=name, function=function)


def sine_pm_kernel(sign):
    """(K_sin(x,y) +/- K_sin(x,-y)) / 2.

    On a symmetric interval (-s, s) this is the projection of the sine kernel
    onto even (+) or odd (-) functions.
    """
    if sign in ("+", 1, "plus"):
        eps, label = 1.0, "sine-plus"
    elif sign in ("-", -1, "minus"):
        eps, label = -1.0, "sine-minus"
    else:
        raise InvalidArgument(f"sign must be '+' or '-', got {sign!r}")

    def function(x, y):
        return 0.5 * (np.sinc(x - y) + eps * np.sinc(x + y))

    return Kernel(name=label, function=function, natural_domain="(0, inf)")


def _airy_function(x, y):
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    ai_x, aip_x = airy_pair(x)
    ai_y, aip_y = airy_pair(y)
    numerator = np.broadcast_to(ai_x * aip_y - ai_y * aip_x, xb.shape)
    diff = xb - yb
    near = np.abs(diff) < AIRY_NEAR_DIAGONAL

    out = np.empty(xb.shape)
    far = ~near
    out[far] = numerator[far] / diff[far]
    if np.any(near):
        # Expansion about the midpoint m: the difference quotient loses about
        # eight digits within 1e-4 of the diagonal.
        h = diff[near]
        m = 0.5 * (xb[near] + yb[near])
        ai, aip = airy_pair(m)
        on_diagonal = aip * aip - m * ai * ai
        curvature = (2.0 * m * m * ai * ai - 2.0 * m * aip * aip - ai * aip) / 12.0
        out[near] = on_diagonal - h * h * curvature
    return out


def airy_kernel():
    """(Ai(x)Ai'(y) - Ai(y)Ai'(x)) / (x - y), diagonal Ai'(x)^2 - x Ai(x)^2."""
    return Kernel(name="airy", function=_airy_function)


def _ginibre_function(w, z):
    w = np.asarray(w, dtype=complex)
    z = np.asarray(z, dtype=complex)
    exponent = -0.5 * (np.abs(w) ** 2 + np.abs(z) ** 2) + w * np.conj(z)
    return np.exp(exponent) / math.pi


def ginibre_kernel():
    """(1/pi) exp(-(|w|^2 + |z|^2)/2 + w conj(z)) on points of the plane."""
    return Kernel(
        name="ginibre",
        function=_ginibre_function,
        symmetry=COMPLEX_HERMITIAN,
        natural_domain="complex plane",
    )


def deflate(base, p):
    """Condition ``base`` on a point at ``p``.

    K_p(x, y) = K(x, y) - K(x, p) K(p, y) / K(p, p). The result vanishes on
    the row and column through ``p`` and may itself be deflated again.
    """
    k_pp = float(np.real(base.evaluate(p, p)))
    if not k_pp > CONDITIONING_FLOOR:
        raise DegenerateConditioning(
            f"cannot condition {base.name} at {p}: K(p, p) = {k_pp:.3e}"
        )
    base_function = base.function

    def function(x, y):
        return base_function(x, y) - base_function(x, p) * base_function(p, y) / k_pp

    return Kernel(
        name=f"{base.name}|{p:g}" if not isinstance(p, complex) else f"{base.name}|{p}",
        function=function,
        symmetry=base.symmetry,
        natural_domain=base.natural_domain,
    )
