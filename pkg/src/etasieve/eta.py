"""Generalized eta-quotient specifications and their exact exponent data.

A specification is a level N together with exponents r attached to class
keys (delta, g) where delta | N and 0 <= g <= delta//2.  The key (delta, g)
names the product over all m > 0 with m congruent to +g or -g mod delta of
(1 - q^m), carrying the q-power prefix (delta/2)*P2(g/delta); because that
product is symmetric in g and -g, keys are canonicalized to the smaller
residue representative.  When g == 0 or 2g == delta the two congruence
classes coincide and the defining product doubles up, which is what makes
half-integer exponents legal exactly there (the trivial key (1, 0) means
the square of the classical Dedekind eta).

Exponents are stored doubled (as 2*r) so the structure itself is
integer-only.  Specs are immutable values; every operation here is pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, NamedTuple

from .arith import RationalLike, rational_mod1

__all__ = [
    "EtaTerm",
    "EtaQuotientSpec",
    "SpecValidationError",
    "canonical_class",
    "bernoulli_p2",
    "validate_spec",
    "leading_exponent",
    "rotate",
    "weight",
    "spec_to_json",
    "spec_from_json",
]


class SpecValidationError(ValueError):
    """Raised with the complete list of constraint violations."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class EtaTerm(NamedTuple):
    """One factor class: exponent doubled/2 attached to the key (delta, g)."""

    delta: int
    g: int
    doubled: int  # 2 * exponent; odd only allowed at g == 0 or 2g == delta

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.doubled, 2)

    @property
    def classes_coincide(self) -> bool:
        """True when g and -g name the same residue class mod delta."""
        return (2 * self.g) % self.delta == 0


@dataclass(frozen=True)
class EtaQuotientSpec:
    """Level N plus the tuple of exponents, keys canonical and sorted."""

    level: int
    terms: tuple[EtaTerm, ...]

    @classmethod
    def from_exponents(
        cls, level: int, exponents: Mapping[tuple[int, int], RationalLike]
    ) -> "EtaQuotientSpec":
        return validate_spec(level, exponents)

    def exponent_map(self) -> dict[tuple[int, int], Fraction]:
        return {(t.delta, t.g): t.exponent for t in self.terms}

    def __str__(self) -> str:
        inner = ", ".join(
            f"({t.delta},{t.g})^{t.exponent}" for t in self.terms
        )
        return f"EtaQuotientSpec(N={self.level}: {inner})"


def canonical_class(delta: int, g: int) -> tuple[int, int]:
    """Canonical key for the pair of residue classes {g, -g} mod delta."""
    gm = g % delta
    return delta, min(gm, delta - gm)


def bernoulli_p2(x: RationalLike) -> Fraction:
    """Second Bernoulli function {x}^2 - {x} + 1/6, exact rational."""
    f = rational_mod1(x)
    return f * f - f + Fraction(1, 6)


def validate_spec(
    level: int, exponents: Mapping[tuple[int, int], RationalLike]
) -> EtaQuotientSpec:
    """Canonicalize and validate a candidate spec.

    Keys are replaced by their canonical class representative, like keys
    merged, zero exponents dropped.  Raises SpecValidationError carrying
    every violation found: non-divisor delta, out-of-range values, or a
    half-integer exponent away from g == 0 and 2g == delta.
    """
    violations: list[str] = []
    if level < 1:
        violations.append(f"level must be a positive integer, got {level}")

    merged: dict[tuple[int, int], int] = {}
    for (delta, g), raw in exponents.items():
        if delta < 1:
            violations.append(f"delta must be positive, got {delta}")
            continue
        if level >= 1 and level % delta != 0:
            violations.append(f"delta {delta} does not divide level {level}")
            continue
        try:
            r = Fraction(raw)
        except (ValueError, ZeroDivisionError, TypeError):
            violations.append(f"exponent at ({delta},{g}) is not rational: {raw!r}")
            continue
        doubled = r * 2
        if doubled.denominator != 1:
            violations.append(
                f"exponent at ({delta},{g}) must be an integer or half-integer, got {r}"
            )
            continue
        key = canonical_class(delta, g)
        merged[key] = merged.get(key, 0) + doubled.numerator

    terms = []
    for (delta, g), doubled in sorted(merged.items()):
        if doubled == 0:
            continue
        if doubled % 2 != 0 and not (g == 0 or 2 * g == delta):
            violations.append(
                f"half-integer exponent at ({delta},{g}) is only allowed "
                f"at g = 0 or 2g = delta"
            )
            continue
        terms.append(EtaTerm(delta, g, doubled))

    if violations:
        raise SpecValidationError(violations)
    return EtaQuotientSpec(level, tuple(terms))


def leading_exponent(spec: EtaQuotientSpec) -> Fraction:
    """Exact q-power multiplying the expansion: (1/2) sum delta*r*P2(g/delta).

    The reduced denominator always divides 12N.
    """
    total = Fraction(0)
    for t in spec.terms:
        total += Fraction(t.delta * t.doubled, 4) * bernoulli_p2(Fraction(t.g, t.delta))
    return total


def rotate(spec: EtaQuotientSpec, a: int) -> EtaQuotientSpec:
    """Re-index every class key (delta, g) to (delta, a*g mod delta).

    Requires gcd(a, N) = 1; the map permutes the +-g orbits, so exponent
    values are carried over unchanged.
    """
    if gcd(a, spec.level) != 1:
        raise ValueError(f"a = {a} is not a unit modulo level {spec.level}")
    merged: dict[tuple[int, int], int] = {}
    for t in spec.terms:
        key = canonical_class(t.delta, a * t.g)
        merged[key] = merged.get(key, 0) + t.doubled
    terms = tuple(
        EtaTerm(delta, g, doubled)
        for (delta, g), doubled in sorted(merged.items())
        if doubled != 0
    )
    return EtaQuotientSpec(spec.level, terms)


def weight(spec: EtaQuotientSpec) -> Fraction:
    """Modular weight: the sum of exponents attached to g = 0 classes."""
    return sum(
        (Fraction(t.doubled, 2) for t in spec.terms if t.g == 0), Fraction(0)
    )


def spec_to_json(spec: EtaQuotientSpec) -> dict:
    """Serialize to the CLI input format (exponents as num/den, den in {1,2})."""
    terms = []
    for t in spec.terms:
        if t.doubled % 2 == 0:
            num, den = t.doubled // 2, 1
        else:
            num, den = t.doubled, 2
        terms.append({"delta": t.delta, "g": t.g, "num": num, "den": den})
    return {"N": spec.level, "terms": terms}


def spec_from_json(obj: object) -> EtaQuotientSpec:
    """Parse the JSON input format, validating shape before content."""
    if not isinstance(obj, dict):
        raise SpecValidationError(["spec must be a JSON object"])
    level = obj.get("N")
    raw_terms = obj.get("terms")
    shape: list[str] = []
    if not isinstance(level, int):
        shape.append('"N" must be an integer')
    if not isinstance(raw_terms, list):
        shape.append('"terms" must be a list')
    if shape:
        raise SpecValidationError(shape)

    exponents: dict[tuple[int, int], Fraction] = {}
    for i, entry in enumerate(raw_terms):
        if not isinstance(entry, dict):
            shape.append(f"terms[{i}] must be an object")
            continue
        try:
            delta, g = int(entry["delta"]), int(entry["g"])
            num, den = int(entry["num"]), int(entry["den"])
        except (KeyError, TypeError, ValueError):
            shape.append(f"terms[{i}] must carry integer delta, g, num, den")
            continue
        if den not in (1, 2):
            shape.append(f"terms[{i}]: den must be 1 or 2, got {den}")
            continue
        key = (delta, g)
        exponents[key] = exponents.get(key, Fraction(0)) + Fraction(num, den)
    if shape:
        raise SpecValidationError(shape)
    return validate_spec(level, exponents)
