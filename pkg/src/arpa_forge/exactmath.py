"""Exact rational arithmetic helpers and the combinatorial identities used as oracles.

All fractional quantities are :class:`fractions.Fraction`, which is always stored
reduced with a positive denominator, so equality is structural.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

Rational = Fraction

__all__ = [
    "Rational",
    "binom",
    "h_lagrange",
    "s_sum",
    "u_sum",
    "lcm_of_denominators",
    "format_fraction",
    "parse_fraction",
]


def binom(n: int, r: int) -> int:
    """Binomial coefficient C(n, r), with C(n, r) = 0 whenever r < 0 or r > n."""
    if n < 0:
        raise ValueError(f"binom requires n >= 0, got n={n}")
    if r < 0 or r > n:
        return 0
    return math.comb(n, r)


def _binom0(n: int, r: int) -> int:
    # Internal variant: a negative top index counts as an empty range.
    if n < 0:
        return 0
    return binom(n, r)


def h_lagrange(A: Iterable[int], B: Iterable[int]) -> Fraction:
    """Sum over i in B of prod_{a in A}(i - a) / prod_{b in B, b != i}(i - b).

    Equals 1 when |B| = |A| + 1 and 0 when |B| > |A| + 1.
    """
    A = list(A)
    B = list(B)
    if len(set(B)) != len(B):
        raise ValueError("elements of B must be pairwise distinct")
    if len(A) >= len(B):
        raise ValueError(f"need |A| < |B|, got |A|={len(A)}, |B|={len(B)}")
    total = Fraction(0)
    for i in B:
        num = math.prod(i - a for a in A)
        den = math.prod(i - b for b in B if b != i)
        total += Fraction(num, den)
    return total


def s_sum(a: int, b: int, c: int) -> int:
    """S(a, b, c) = sum_{r >= 0} (-1)^r C(a, r) C(b - r, c - r)."""
    if min(a, b, c) < 0:
        raise ValueError("s_sum arguments must be natural numbers")
    if c > b:
        raise ValueError(f"s_sum requires c <= b, got c={c}, b={b}")
    return sum((-1) ** r * binom(a, r) * _binom0(b - r, c - r) for r in range(a + 1))


def u_sum(a: int, b: int, c: int, d: int, e: int) -> int:
    """U(a, b, c, d, e) = sum_{r >= 0} (-1)^r C(a, r) C(b - r, c - r) C(d - r, e - r)."""
    if min(a, b, c, d, e) < 0:
        raise ValueError("u_sum arguments must be natural numbers")
    if c > b or e > d:
        raise ValueError(f"u_sum requires c <= b and e <= d, got {(a, b, c, d, e)}")
    return sum(
        (-1) ** r * binom(a, r) * _binom0(b - r, c - r) * _binom0(d - r, e - r)
        for r in range(a + 1)
    )


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    """Least positive integer m such that m * v is integral for every v."""
    m = 1
    for v in values:
        m = math.lcm(m, Fraction(v).denominator)
    return m


def format_fraction(v: Fraction) -> str:
    """Render as ``a/b`` (or ``a`` for integers); never as a decimal."""
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())
