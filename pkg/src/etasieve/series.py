"""Truncated power-series engine over exact integers.

Series are plain lists of Python ints, index n holding the coefficient of
q^n.  Eta-quotient expansion multiplies the factor (1 - q^m)^e into an
accumulator one m at a time; a single multiplication or division by
(1 - q^m) is a strided in-place pass, so exponent e costs |e| passes and
the whole expansion stays exact with O(K^2) worst-case work.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .eta import EtaQuotientSpec, leading_exponent

__all__ = [
    "QExpansion",
    "series_mul",
    "series_inverse",
    "eta_factor_series",
    "expand",
    "progression_coeffs",
    "ExpansionCache",
]


@dataclass(frozen=True)
class QExpansion:
    """Exact q-power prefix plus the integer coefficient array c(0..K)."""

    prefix: Fraction
    coeffs: tuple[int, ...]

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int) -> int:
        return self.coeffs[n]

    def truncated(self, k: int) -> "QExpansion":
        if k > self.truncation:
            raise ValueError(f"cannot extend truncation {self.truncation} to {k}")
        return QExpansion(self.prefix, self.coeffs[: k + 1])


def series_mul(s1: list[int], s2: list[int], trunc: int) -> list[int]:
    """Cauchy product of two coefficient arrays, truncated at q^trunc."""
    if len(s1) <= trunc or len(s2) <= trunc:
        raise ValueError("both factors must be truncated at >= trunc")
    out = [0] * (trunc + 1)
    for i in range(trunc + 1):
        a = s1[i]
        if a == 0:
            continue
        for j in range(trunc + 1 - i):
            b = s2[j]
            if b:
                out[i + j] += a * b
    return out


def series_inverse(s: list[int], trunc: int) -> list[int]:
    """Multiplicative inverse of a series with unit constant term +-1."""
    if len(s) <= trunc:
        raise ValueError("series must be truncated at >= trunc")
    lead = s[0]
    if lead not in (1, -1):
        raise ValueError(
            f"constant term must be 1 or -1 for an integer inverse, got {lead}"
        )
    out = [0] * (trunc + 1)
    out[0] = lead
    for n in range(1, trunc + 1):
        acc = 0
        for j in range(1, n + 1):
            a = s[j]
            if a:
                acc += a * out[n - j]
        out[n] = -lead * acc
    return out


def _apply_factor(coeffs: list[int], m: int, e: int) -> None:
    """Multiply the accumulator in place by (1 - q^m)^e, e any integer."""
    top = len(coeffs) - 1
    if e > 0:
        for _ in range(e):
            for n in range(top, m - 1, -1):
                coeffs[n] -= coeffs[n - m]
    else:
        for _ in range(-e):
            for n in range(m, top + 1):
                coeffs[n] += coeffs[n - m]


def _class_multiplicities(delta: int, g: int) -> dict[int, int]:
    """Residues mod delta hit by the two defining products, with counts."""
    mults: dict[int, int] = {g % delta: 1}
    neg = (-g) % delta
    mults[neg] = mults.get(neg, 0) + 1
    return mults


def _apply_class_product(
    coeffs: list[int], delta: int, residue: int, e: int
) -> None:
    """Multiply in every factor (1 - q^m)^e with m > 0, m = residue mod delta."""
    if e == 0:
        return
    top = len(coeffs) - 1
    start = residue if residue > 0 else delta
    for m in range(start, top + 1, delta):
        _apply_factor(coeffs, m, e)


def eta_factor_series(delta: int, g: int, e: int, trunc: int) -> list[int]:
    """Series of the (delta, g) factor raised to integer exponent e.

    Each of the two defining congruence products (exponents = +g and = -g
    mod delta) contributes e, so when the classes coincide (g = 0 or
    2g = delta) every factor appears squared.
    """
    coeffs = [0] * (trunc + 1)
    coeffs[0] = 1
    for residue, mult in _class_multiplicities(delta, g).items():
        _apply_class_product(coeffs, delta, residue, mult * e)
    return coeffs


def expand(spec: EtaQuotientSpec, trunc: int) -> QExpansion:
    """Exact q-expansion of a spec through q^trunc.

    The prefix is the leading exponent; the series has constant term 1.
    """
    coeffs = [0] * (trunc + 1)
    coeffs[0] = 1
    for term in spec.terms:
        if term.classes_coincide:
            # the coinciding products contribute 2r = doubled, an integer
            _apply_class_product(
                coeffs, term.delta, term.g % term.delta, term.doubled
            )
        else:
            e = term.doubled // 2
            for residue, mult in _class_multiplicities(term.delta, term.g).items():
                _apply_class_product(coeffs, term.delta, residue, mult * e)
    return QExpansion(leading_exponent(spec), tuple(coeffs))


def progression_coeffs(
    spec: EtaQuotientSpec, trunc: int, m: int, t: int
) -> list[int]:
    """Coefficients c(t), c(m+t), c(2m+t), ... for indices up to trunc."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if not 0 <= t < m:
        raise ValueError(f"residue must satisfy 0 <= t < m, got t={t}, m={m}")
    return list(expand(spec, trunc).coeffs[t::m])


class ExpansionCache:
    """Per-spec coefficient cache, grown geometrically on demand.

    Intended for witness collection, where many lookups hit the same few
    rotated specs at small indices.  Not synchronized: share read-only or
    give each task its own instance.
    """

    def __init__(self) -> None:
        self._series: dict[EtaQuotientSpec, tuple[int, ...]] = {}

    def coefficient(self, spec: EtaQuotientSpec, n: int) -> int:
        series = self._series.get(spec)
        if series is None or len(series) <= n:
            grown = max(2 * n, 64)
            series = expand(spec, grown).coeffs
            self._series[spec] = series
        return series[n]
