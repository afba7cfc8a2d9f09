"""Empirical congruence scanner: the brute-force counterpart of the sieve.

Checks candidate statements "every coefficient on the progression (m, t)
is divisible by p" against the exact expansion up to a truncation bound.
A scan proves nothing; every report is flagged empirical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_prime
from .eta import EtaQuotientSpec
from .series import QExpansion, expand

__all__ = ["ScanResult", "verify_congruence", "find_congruences", "scan_to_json"]


@dataclass(frozen=True)
class ScanResult:
    """Outcome of checking c(mn+t) = 0 (mod p) for all mn+t <= holds_up_to."""

    m: int
    t: int
    p: int
    holds_up_to: int
    counterexample: tuple[int, int] | None  # (n, coefficient mod p)

    @property
    def holds(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        ce = None
        if self.counterexample is not None:
            ce = {"n": self.counterexample[0], "residue": self.counterexample[1]}
        return {
            "m": self.m,
            "t": self.t,
            "p": self.p,
            "K": self.holds_up_to,
            "holds": self.holds,
            "counterexample": ce,
            "flagged": "empirical",
        }


def _check_progression(
    expansion: QExpansion, m: int, t: int, p: int, trunc: int
) -> ScanResult:
    for n, idx in enumerate(range(t, trunc + 1, m)):
        residue = expansion.coeffs[idx] % p
        if residue:
            return ScanResult(m, t, p, trunc, (n, residue))
    return ScanResult(m, t, p, trunc, None)


def verify_congruence(
    spec: EtaQuotientSpec,
    m: int,
    t: int,
    p: int,
    trunc: int,
    *,
    expansion: QExpansion | None = None,
) -> ScanResult:
    """Scan one progression; returns the first counterexample if any.

    Reduction happens on the exact integer expansion, which may be passed
    in to share across many (t, p) queries.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if not 0 <= t < m:
        raise ValueError(f"residue must satisfy 0 <= t < m, got t={t}")
    if trunc < t:
        raise ValueError(f"truncation {trunc} is below the residue {t}")
    if expansion is None or expansion.truncation < trunc:
        expansion = expand(spec, trunc)
    return _check_progression(expansion, m, t, p, trunc)


def find_congruences(
    spec: EtaQuotientSpec,
    m: int,
    p: int,
    trunc: int,
    *,
    expansion: QExpansion | None = None,
) -> list[int]:
    """All residues t whose congruence mod p survives scanning up to trunc.

    Each hit is empirical-to-trunc only; the sieve bounds this list from
    above, never the other way around.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    if trunc < m - 1:
        raise ValueError(f"truncation {trunc} does not cover every residue mod {m}")
    if expansion is None or expansion.truncation < trunc:
        expansion = expand(spec, trunc)
    return [
        t
        for t in range(m)
        if _check_progression(expansion, m, t, p, trunc).holds
    ]


def scan_to_json(m: int, p: int, trunc: int, congruences: list[int]) -> dict:
    """Discovery-mode report: candidate residues, flagged empirical."""
    return {
        "m": m,
        "p": p,
        "K": trunc,
        "congruences": list(congruences),
        "flagged": "empirical",
    }
