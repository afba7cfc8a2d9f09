"""Exact rational and modular arithmetic primitives shared by all modules.

Rationals are ``fractions.Fraction`` throughout: always stored reduced,
denominator >= 1, zero is 0/1.  Big integers are plain Python ``int``.
All values are immutable and safe to share between tasks.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

RationalLike = Fraction | int | str

__all__ = [
    "mod_inverse",
    "rational_is_integer",
    "rational_mod1",
    "kronecker_symbol",
    "is_prime",
]


def mod_inverse(a: int, n: int) -> int:
    """Inverse of a modulo n, i.e. b with a*b == 1 (mod n).

    Returns the representative in [0, n); for n > 1 this lies in [1, n).
    Raises ValueError ("no inverse") when gcd(a, n) != 1.
    """
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    g = gcd(a, n)
    if g != 1:
        raise ValueError(f"no inverse: gcd({a}, {n}) = {g}")
    return pow(a, -1, n)


def rational_is_integer(x: RationalLike) -> bool:
    """True iff x reduces to an integer (denominator 1)."""
    return Fraction(x).denominator == 1


def rational_mod1(x: RationalLike) -> Fraction:
    """Fractional part x - floor(x), an exact rational in [0, 1)."""
    return Fraction(x) % 1


def kronecker_symbol(a: int, n: int) -> int:
    """Jacobi/Legendre symbol (a|n) for odd positive n; values in {-1, 0, 1}."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"modulus must be odd and positive, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (desk-scale inputs)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True
