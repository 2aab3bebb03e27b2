"""Rational points h/k and the additive characters e(x), e_k(a)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RationalPoint:
    """Reduced fraction h/k together with the inverse of h modulo k.

    The untwisted point is represented as h=0, k=1, h_bar=0.
    """

    h: int
    k: int
    h_bar: int

    @property
    def alpha(self) -> float:
        return self.h / self.k

    def __str__(self) -> str:
        return f"{self.h}/{self.k}"


def make_rational_point(h: int, k: int) -> RationalPoint:
    """Reduce h/k to lowest terms and attach h_bar with h*h_bar = 1 (mod k).

    Accepts 0 <= h < k. Non-reduced fractions are reduced rather than
    rejected: every sum evaluated at h/k depends only on the reduced point,
    and the inverse residue requires coprimality.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer, got k={k}")
    if not 0 <= h < k:
        raise ValueError(f"h must satisfy 0 <= h < k, got h={h}, k={k}")
    g = math.gcd(h, k)
    if g > 1:
        h //= g
        k //= g
    h_bar = 0 if k == 1 else pow(h, -1, k)
    return RationalPoint(h, k, h_bar)


def e(x: float) -> complex:
    """The additive character exp(2*pi*i*x).

    The argument is reduced mod 1 before exponentiation so accuracy does not
    degrade for large x.
    """
    if not math.isfinite(x):
        raise ValueError(f"e() requires a finite argument, got {x!r}")
    return cmath.exp(complex(0.0, TWO_PI * (x - math.floor(x))))


def e_k(a: int, k: int) -> complex:
    """exp(2*pi*i*a/k), computed from the exact residue a mod k."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got k={k}")
    return e((a % k) / k)
