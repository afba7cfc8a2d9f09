"""Multiplier system and numeric checks of the transformation behavior.

The multiplier of a (delta, g) factor under a matrix in Gamma0(12*delta)
is computed two independent ways: a closed form reduced mod 1, and the
exact Dedekind-sum-style formula (a sawtooth double sum plus a Bernoulli
term).  The two must agree mod 1; the exact value's reduced denominator
divides 12*delta.

Numeric routines evaluate the defining q-products directly in extended
precision (default 40 significant digits against the 30-digit floor the
tolerances assume).  Truncation depth is the caller's responsibility and
should satisfy |q|^K < 1e-30 at the lowest point involved; helpers for
that rule are exported.  Points must stay above a configurable
imaginary-part floor, below which truncation is unreliable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .arith import RationalLike, rational_mod1
from .eta import EtaQuotientSpec, bernoulli_p2, leading_exponent, weight
from .series import expand

__all__ = [
    "IntegerMatrix2x2",
    "sawtooth",
    "mu_simplified",
    "mu_exact",
    "truncation_depth",
    "eta_eval_numeric",
    "verify_transformation",
    "average_identity_check",
    "gamma1_modulus_check",
    "random_gamma0_matrix",
    "make_transform_corpus",
    "run_transform_corpus",
]

DEFAULT_DPS = 40
DEFAULT_IM_FLOOR = 0.5


@dataclass(frozen=True)
class IntegerMatrix2x2:
    """A determinant-one integer matrix (a b; c d) acting on the upper half-plane."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        det = self.a * self.d - self.b * self.c
        if det != 1:
            raise ValueError(f"determinant must be 1, got {det}")

    @classmethod
    def identity(cls) -> "IntegerMatrix2x2":
        return cls(1, 0, 0, 1)

    @classmethod
    def translation(cls, b: int) -> "IntegerMatrix2x2":
        return cls(1, b, 0, 1)

    def in_gamma0(self, n: int) -> bool:
        return self.c % n == 0

    def in_gamma1(self, n: int) -> bool:
        return self.c % n == 0 and (self.a - 1) % n == 0 and (self.d - 1) % n == 0

    def __neg__(self) -> "IntegerMatrix2x2":
        return IntegerMatrix2x2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "IntegerMatrix2x2":
        return IntegerMatrix2x2(self.d, -self.b, -self.c, self.a)

    def apply(self, z: mp.mpc) -> mp.mpc:
        """Moebius action (a*z + b) / (c*z + d)."""
        z = mp.mpc(z)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def automorphy(self, z: mp.mpc) -> mp.mpc:
        """The factor c*z + d."""
        return self.c * mp.mpc(z) + self.d


def sawtooth(x: RationalLike) -> Fraction:
    """Sawtooth ((x)): {x} - 1/2 for non-integral x, 0 on integers.

    The zero case is read as "x integral", matching how the function is
    used (it is periodic with period 1 everywhere it appears).
    """
    f = rational_mod1(x)
    if f == 0:
        return Fraction(0)
    return f - Fraction(1, 2)


def mu_simplified(A: IntegerMatrix2x2, g: int, delta: int) -> Fraction:
    """Multiplier of the (delta, g) factor under A, reduced into [0, 1).

    Valid for A in Gamma0(12*delta) and 0 <= g < delta; the closed form is
    (1/2)*d*b*delta*P2(a*g/delta) - (a-1)/4 + (1/2)*floor(a*g/delta) mod 1.
    """
    if not 0 <= g < delta:
        raise ValueError(f"g must satisfy 0 <= g < delta, got g={g}, delta={delta}")
    if not A.in_gamma0(12 * delta):
        raise ValueError(f"matrix {A} is not in Gamma0({12 * delta})")
    value = (
        Fraction(A.d * A.b * delta, 2) * bernoulli_p2(Fraction(A.a * g, delta))
        - Fraction(A.a - 1, 4)
        + Fraction((A.a * g) // delta, 2)
    )
    return rational_mod1(value)


def mu_exact(A: IntegerMatrix2x2, g: int, delta: int) -> Fraction:
    """Exact multiplier via the sawtooth sum formula (not reduced mod 1).

    Requires A in Gamma0(delta) with a >= 1.  The double product of
    sawtooth values is accumulated in integer arithmetic over the common
    denominator 4*delta*a^2, so large a stays cheap.
    """
    if A.a <= 0:
        raise ValueError(
            "apply a sign normalization first (A and -A act identically)"
        )
    if not A.in_gamma0(delta):
        raise ValueError(f"matrix {A} is not in Gamma0({delta})")
    a, b, c, d = A.a, A.b, A.c, A.d
    da = delta * a
    acc = 0
    for j in range(1, a):
        rem = (c * j + a * g) % da
        if rem == 0:
            continue
        acc += (2 * j - a) * (2 * rem - da)
    return (
        Fraction(acc, 4 * delta * a * a)
        + Fraction(delta * b, 2 * a) * bernoulli_p2(Fraction(a * g, delta))
        - Fraction(c, 12 * delta * a)
    )


def truncation_depth(im_z: float, *, digits: int = 30) -> int:
    """Smallest product length K with |q|^K below 10^-digits at height im_z."""
    if im_z <= 0:
        raise ValueError("point must lie in the upper half-plane")
    return int(digits * math.log(10) / (2 * math.pi * im_z)) + 1


def _e(x, dps: int) -> mp.mpc:
    """exp(2*pi*i*x) for a real/complex/Fraction argument."""
    with mp.workdps(dps):
        if isinstance(x, Fraction):
            x = mp.mpf(x.numerator) / x.denominator
        return mp.exp(2j * mp.pi * mp.mpc(x))


def _q_power(z: mp.mpc, exponent: Fraction, dps: int) -> mp.mpc:
    """q^exponent = exp(2*pi*i*z*exponent) with the principal determination."""
    with mp.workdps(dps):
        scaled = mp.mpc(z) * mp.mpf(exponent.numerator) / exponent.denominator
        return mp.exp(2j * mp.pi * scaled)


def eta_eval_numeric(
    delta: int,
    g: int,
    z,
    trunc: int,
    *,
    dps: int = DEFAULT_DPS,
    im_floor: float = DEFAULT_IM_FLOOR,
) -> mp.mpc:
    """Truncated numeric value of the (delta, g) factor at a point z.

    Deterministic given (z, trunc, dps).  Raises when Im(z) is below the
    floor ("truncation unreliable"); callers probing lower points must
    lower the floor and raise trunc per the |q|^K rule.  Factors with
    |q^m| below the working precision are skipped, as they differ from 1
    by less than the roundoff already committed.
    """
    z = mp.mpc(z)
    if z.imag < im_floor:
        raise ValueError(
            f"truncation unreliable: Im(z) = {float(z.imag):.6g} below floor {im_floor}"
        )
    g %= delta
    with mp.workdps(dps):
        q = mp.exp(2j * mp.pi * z)
        negligible = mp.mpf(10) ** (-dps - 10)
        res_pos, res_neg = g, (-g) % delta
        prod = mp.mpc(1)
        qpow = mp.mpc(1)
        for m in range(1, trunc + 1):
            qpow *= q
            if abs(qpow) < negligible:
                break
            r = m % delta
            if r == res_pos:
                prod *= 1 - qpow
            if r == res_neg:
                prod *= 1 - qpow
        prefix = Fraction(delta, 2) * bernoulli_p2(Fraction(g, delta))
        return _q_power(z, prefix, dps) * prod


def verify_transformation(
    delta: int,
    g: int,
    A: IntegerMatrix2x2,
    z,
    trunc: int,
    *,
    dps: int = DEFAULT_DPS,
    im_floor: float = 1e-4,
) -> mp.mpf:
    """Residual of the transformation law for the (delta, g) factor under A.

    Compares the value at A*z against multiplier times automorphy factor
    (present only for g = 0 classes) times the value of the rotated-index
    factor at z.  Both z and A*z must clear the floor; trunc must satisfy
    the |q|^K rule at the lower of the two points.
    """
    if not A.in_gamma0(12 * delta):
        raise ValueError(f"matrix {A} is not in Gamma0({12 * delta})")
    g %= delta
    z = mp.mpc(z)
    az = A.apply(z)
    lhs = eta_eval_numeric(delta, g, az, trunc, dps=dps, im_floor=im_floor)
    mu = mu_simplified(A, g, delta)
    rhs = _e(mu, dps) * eta_eval_numeric(
        delta, (A.a * g) % delta, z, trunc, dps=dps, im_floor=im_floor
    )
    if g == 0:
        rhs *= A.automorphy(z)
    with mp.workdps(dps):
        return abs(lhs - rhs)


def _series_at(coeffs, point_q: mp.mpc) -> mp.mpc:
    """Horner evaluation of an integer coefficient array at q = point_q."""
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * point_q + c
    return acc


def average_identity_check(
    spec: EtaQuotientSpec,
    m: int,
    t: int,
    z,
    trunc: int,
    *,
    dps: int = DEFAULT_DPS,
    im_floor: float = DEFAULT_IM_FLOOR,
) -> mp.mpf:
    """Residual of the progression-slice average identity.

    Left side: the phase-weighted average of the full expansion evaluated
    at (z + lam)/m over lam in [0, m).  Right side: the progression
    series in integer powers of q at z, with prefix exponent
    (t + P)/m.  Both sides are truncated at the same coefficient index,
    so the residual is pure roundoff.
    """
    z = mp.mpc(z)
    if z.imag < im_floor:
        raise ValueError(
            f"truncation unreliable: Im(z) = {float(z.imag):.6g} below floor {im_floor}"
        )
    if not 0 <= t < m:
        raise ValueError(f"residue must satisfy 0 <= t < m, got t={t}")
    expansion = expand(spec, trunc)
    prefix = expansion.prefix
    with mp.workdps(dps):
        lhs = mp.mpc(0)
        for lam in range(m):
            w = (z + lam) / m
            value = _q_power(w, prefix, dps) * _series_at(
                expansion.coeffs, mp.exp(2j * mp.pi * w)
            )
            lhs += _e(-Fraction(lam) * (t + prefix) / m, dps) * value
        lhs /= m
        rhs = _q_power(z, (t + prefix) / m, dps) * _series_at(
            expansion.coeffs[t :: m], mp.exp(2j * mp.pi * z)
        )
        return abs(lhs - rhs)


def gamma1_modulus_check(
    spec: EtaQuotientSpec,
    m: int,
    t: int,
    A: IntegerMatrix2x2,
    z,
    trunc: int,
    *,
    dps: int = DEFAULT_DPS,
    im_floor: float = 1e-4,
) -> mp.mpf:
    """Modulus-level residual of the progression slice's invariance under A.

    For A in Gamma1(24*N*m) the slice picks up only a root of unity and
    the automorphy factor to the weight k, so |value at A*z| must equal
    |c*z + d|^k * |value at z|.  Only moduli are compared: k may be
    half-integral, and the root of unity is not pinned down.
    """
    level = 24 * spec.level * m
    if not A.in_gamma1(level):
        raise ValueError(f"matrix {A} is not in Gamma1({level})")
    if not 0 <= t < m:
        raise ValueError(f"residue must satisfy 0 <= t < m, got t={t}")
    z = mp.mpc(z)
    az = A.apply(z)
    for point in (z, az):
        if point.imag < im_floor:
            raise ValueError(
                f"truncation unreliable: Im = {float(point.imag):.6g} below floor {im_floor}"
            )
    expansion = expand(spec, trunc)
    slice_coeffs = expansion.coeffs[t :: m]
    exponent = (t + expansion.prefix) / m
    k = weight(spec)
    with mp.workdps(dps):

        def slice_value(w: mp.mpc) -> mp.mpc:
            return _q_power(w, exponent, dps) * _series_at(
                slice_coeffs, mp.exp(2j * mp.pi * w)
            )

        jmod = abs(A.automorphy(z))
        k_float = mp.mpf(k.numerator) / k.denominator
        return abs(abs(slice_value(az)) - jmod**k_float * abs(slice_value(z)))


# ---------------------------------------------------------------------------
# randomized corpora
# ---------------------------------------------------------------------------


def random_gamma0_matrix(
    n: int,
    rng: random.Random,
    *,
    a_bound: int = 10_000,
    translation_weight: float = 0.1,
) -> IntegerMatrix2x2:
    """Random matrix in Gamma0(n) with positive a and entries of modest size."""
    if rng.random() < translation_weight:
        return IntegerMatrix2x2.translation(rng.randint(-20, 20))
    c = n * rng.choice([1, 1, 1, 2, 2, 3]) * rng.choice([1, -1])
    while True:
        a = rng.randint(1, a_bound)
        if math.gcd(a, c) == 1:
            break
    d = pow(a, -1, abs(c))
    # shift d by multiples of |c| to randomize while keeping a*d = 1 (mod c)
    d += abs(c) * rng.randint(0, max(0, (a_bound - d) // abs(c)))
    b = (a * d - 1) // c
    return IntegerMatrix2x2(a, b, c, d)


def make_transform_corpus(
    seed: int, count: int, *, dps: int = DEFAULT_DPS
) -> list[dict]:
    """Deterministic corpus of transformation-law cases.

    Each case records the class (delta, g), the matrix, the evaluation
    point z (chosen as the preimage of a point with imaginary part at
    least 0.5, so the transformed point clears the 0.5 floor), the
    truncation depth from the |q|^K rule at the lower point, and the
    tolerance.  The generating seed is embedded in every case id.
    """
    rng = random.Random(seed)
    cases = []
    for i in range(count):
        delta = rng.randint(1, 6)
        g = rng.randrange(delta)
        A = random_gamma0_matrix(
            12 * delta, rng, a_bound=200, translation_weight=0.12
        )
        im_w = rng.uniform(0.5, 1.1)
        if A.c == 0:
            z = mp.mpc(rng.uniform(-0.5, 0.5), im_w)
        else:
            # put Re(w) near the pole a/c so the preimage is not too low
            re_w = A.a / A.c + rng.uniform(-0.25, 0.25)
            z = A.inverse().apply(mp.mpc(re_w, im_w))
        az = A.apply(z)
        lowest = min(float(z.imag), float(az.imag))
        trunc = truncation_depth(lowest, digits=dps - 8) + 16
        cases.append(
            {
                "id": f"seed{seed}-case{i:02d}",
                "delta": delta,
                "g": g,
                "matrix": [A.a, A.b, A.c, A.d],
                "z": [float(z.real), float(z.imag)],
                "K": trunc,
                "tol": 1e-8,
            }
        )
    return cases


def run_transform_corpus(cases: list[dict], *, dps: int = DEFAULT_DPS) -> list[dict]:
    """Run verify_transformation on corpus cases; append residual and pass."""
    results = []
    for case in cases:
        a, b, c, d = case["matrix"]
        A = IntegerMatrix2x2(a, b, c, d)
        z = mp.mpc(case["z"][0], case["z"][1])
        residual = verify_transformation(
            case["delta"], case["g"], A, z, case["K"], dps=dps, im_floor=1e-7
        )
        out = dict(case)
        out["residual"] = float(residual)
        out["pass"] = bool(residual < case["tol"])
        results.append(out)
    return results
