"""Linear-incongruence sieve for arithmetic progressions of coefficients.

For a progression (m, t) and every unit d modulo 24*N*m, there is at most
one witness: the minimal n >= 0 with d^2*(n + P_a) - P = t (mod m), where
P and P_a are the leading exponents of the spec and of its rotation by
a = d^(-1).  The coefficient at n of the rotated expansion then rules out
a linear congruence c(mn + t) = 0 (mod p) for every prime p not dividing
it.  Exclusions from different witnesses combine, so primes not dividing
the gcd of all witness coefficients are excluded.

Verdict labels: ALL_PRIMES_EXCLUDED is the unit-coefficient certificate
(some witness coefficient is +-1, the generalization of the constant term
1 always being a witness when n = 0 solves the congruence).  Reports with
gcd 1 reached only by combining non-unit witnesses keep the verdict
EXCLUDED_EXCEPT_DIVISORS; their excluded-prime set is still every prime.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import mod_inverse
from .eta import EtaQuotientSpec, leading_exponent, rotate
from .series import ExpansionCache

__all__ = [
    "Witness",
    "Verdict",
    "SieveReport",
    "SieveScan",
    "solve_min_n",
    "collect_witnesses",
    "sieve",
    "sieve_all_t",
    "verify_witness",
]


class Verdict(enum.Enum):
    ALL_PRIMES_EXCLUDED = "ALL_PRIMES_EXCLUDED"
    EXCLUDED_EXCEPT_DIVISORS = "EXCLUDED_EXCEPT_DIVISORS"
    NO_WITNESS = "NO_WITNESS"


@dataclass(frozen=True)
class Witness:
    """One sieve instance: unit d, its inverse a, minimal n, and c_(r_a)(n)."""

    d: int
    a: int
    n: int
    coefficient: int

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "a": self.a,
            "n": self.n,
            "coefficient": str(self.coefficient),
        }


@dataclass(frozen=True)
class SieveReport:
    """Aggregated witnesses for one progression (m, t).

    gcd_all is the gcd of all witness coefficients (0 when no witness);
    primes not dividing it admit no linear congruence on (m, t).  skipped
    counts units whose congruence target was non-integral (those d carry
    no witness); partial marks a truncated d enumeration.
    """

    m: int
    t: int
    witnesses: tuple[Witness, ...]
    gcd_all: int
    verdict: Verdict
    skipped: int = 0
    partial: bool = False

    def excludes_prime(self, p: int) -> bool:
        """True when some witness certifies no congruence mod p."""
        if not self.witnesses:
            return False
        return self.gcd_all == 1 or self.gcd_all % p != 0

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "t": self.t,
            "verdict": self.verdict.value,
            "gcd": str(self.gcd_all),
            "witnesses": [w.to_json() for w in self.witnesses],
            "skipped": self.skipped,
            "partial": self.partial,
        }


@dataclass(frozen=True)
class SieveScan:
    """Reports for every residue t mod m, plus the survivor set."""

    m: int
    reports: tuple[SieveReport, ...]
    survivors: tuple[int, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "reports": [r.to_json() for r in self.reports],
            "survivors": list(self.survivors),
        }


def solve_min_n(
    spec: EtaQuotientSpec, m: int, t: int, d: int
) -> tuple[int, int] | None:
    """Minimal nonnegative n solving the witness congruence for unit d.

    Returns (n, a) with a the inverse of d modulo 24*N*m, or None when the
    exact rational target t + P - d^2*P_a is not an integer (that d then
    contributes no witness; it is a value, not an error).
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if not 0 <= t < m:
        raise ValueError(f"residue must satisfy 0 <= t < m, got t={t}")
    modulus = 24 * spec.level * m
    a = mod_inverse(d, modulus)  # raises for non-unit d
    target = t + leading_exponent(spec) - d * d * leading_exponent(rotate(spec, a))
    if target.denominator != 1:
        return None
    if m == 1:
        return 0, a
    n = (mod_inverse(d * d % m, m) * target.numerator) % m
    return n, a


def _rotation_table(
    spec: EtaQuotientSpec, scale: int
) -> dict[int, tuple[EtaQuotientSpec, int]]:
    """Rotated spec and scaled leading exponent for each unit a mod N."""
    table: dict[int, tuple[EtaQuotientSpec, int]] = {}
    for a in range(spec.level):
        if gcd(a, spec.level) != 1:
            continue
        rotated = rotate(spec, a if spec.level > 1 else 1)
        scaled = leading_exponent(rotated) * scale
        assert scaled.denominator == 1
        table[a % spec.level] = (rotated, scaled.numerator)
    return table


def collect_witnesses(
    spec: EtaQuotientSpec,
    m: int,
    t: int,
    dedupe: bool = True,
    *,
    d_max: int | None = None,
    early_exit: bool = True,
    cache: ExpansionCache | None = None,
) -> tuple[list[Witness], int]:
    """Witnesses over all units d in [1, 24*N*m), plus the skipped-d count.

    Duplicates (same rotated spec and same n) are dropped when dedupe is
    set, keeping the smallest d.  With early_exit, collection stops as
    soon as a unit coefficient settles the verdict.  d_max truncates the
    enumeration for exploratory runs.
    """
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if not 0 <= t < m:
        raise ValueError(f"residue must satisfy 0 <= t < m, got t={t}")
    if cache is None:
        cache = ExpansionCache()
    modulus = 24 * spec.level * m
    bound = modulus if d_max is None else min(d_max + 1, modulus)

    # denominators of all leading exponents divide 12N; scale once.
    scale = 12 * spec.level
    rotations = _rotation_table(spec, scale)
    base = leading_exponent(spec) * scale
    assert base.denominator == 1
    base_num = base.numerator

    witnesses: list[Witness] = []
    seen: set[tuple[int, int]] = set()
    skipped = 0
    for d in range(1, bound):
        if gcd(d, modulus) != 1:
            continue
        a = pow(d, -1, modulus)
        rotated, scaled_pa = rotations[a % spec.level]
        target_num = t * scale + base_num - d * d * scaled_pa
        if target_num % scale != 0:
            skipped += 1
            continue
        x = target_num // scale
        n = (pow(d * d % m, -1, m) * x) % m if m > 1 else 0
        key = (a % spec.level, n)
        if dedupe and key in seen:
            continue
        seen.add(key)
        coefficient = cache.coefficient(rotated, n)
        witnesses.append(Witness(d, a, n, coefficient))
        if early_exit and coefficient in (1, -1):
            break
    return witnesses, skipped


def _aggregate(
    m: int, t: int, witnesses: list[Witness], skipped: int, partial: bool
) -> SieveReport:
    g = 0
    unit = False
    for w in witnesses:
        g = gcd(g, w.coefficient)
        if w.coefficient in (1, -1):
            unit = True
    if not witnesses:
        verdict = Verdict.NO_WITNESS
    elif unit:
        verdict = Verdict.ALL_PRIMES_EXCLUDED
    else:
        verdict = Verdict.EXCLUDED_EXCEPT_DIVISORS
    return SieveReport(m, t, tuple(witnesses), g, verdict, skipped, partial)


def sieve(
    spec: EtaQuotientSpec,
    m: int,
    t: int,
    *,
    d_max: int | None = None,
    cache: ExpansionCache | None = None,
) -> SieveReport:
    """Full report for one progression (m, t)."""
    witnesses, skipped = collect_witnesses(spec, m, t, d_max=d_max, cache=cache)
    return _aggregate(m, t, witnesses, skipped, d_max is not None)


def sieve_all_t(
    spec: EtaQuotientSpec, m: int, *, d_max: int | None = None
) -> SieveScan:
    """One report per residue t in [0, m); survivors keep a non-unit verdict."""
    cache = ExpansionCache()
    reports = tuple(
        sieve(spec, m, t, d_max=d_max, cache=cache) for t in range(m)
    )
    survivors = tuple(
        r.t for r in reports if r.verdict is not Verdict.ALL_PRIMES_EXCLUDED
    )
    return SieveScan(m, reports, survivors)


def verify_witness(
    spec: EtaQuotientSpec, m: int, t: int, witness: Witness
) -> bool:
    """Re-check a witness against its exact rational congruence.

    Independent of the solving path: evaluates d^2*(n + P_a) - P - t as a
    Fraction and tests membership in m*Z, and re-derives the coefficient.
    """
    d, a, n = witness.d, witness.a, witness.n
    if (a * d) % (24 * spec.level * m) != 1:
        return False
    rotated = rotate(spec, a)
    diff = (
        Fraction(d * d) * (n + leading_exponent(rotated))
        - leading_exponent(spec)
        - t
    )
    if diff.denominator != 1 or diff.numerator % m != 0:
        return False
    # solutions form n + mZ (d^2 is a unit mod m), so minimal means n < m
    if not 0 <= n < m:
        return False
    from .series import expand

    return expand(rotated, n).coeffs[n] == witness.coefficient
