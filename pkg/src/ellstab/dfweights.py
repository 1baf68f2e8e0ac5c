"""Weight-polynomial and GIT weight machinery.

Two independent routes to the Donaldson-Futaki invariant of a point
degeneration on P^1 are implemented and cross-checked:

  * the valuative route beta(p) / deg L, and
  * the weight route: total weights of the monomial bases of H^0(kL) under
    the one-parameter action fixing p, corrected by the boundary/twist
    fiber weights at the two fixed points, fed through the CM-weight
    expansion.  The CM weight is 2 deg L times the Donaldson-Futaki
    invariant on a curve; the quotient must agree with the beta route
    exactly, or the computation aborts.

Hilbert-Mumford weights use the convention

    mu(x, lambda) = -min over the support of x of <lambda, exponent>,

under which a sum-zero 1-PS flips sign with its inverse and GIT
semistability is mu >= 0 for every 1-PS.  The sign is anchored by the
weight-zero pencil degenerations of semistable-boundary cubic pencils and
by negativity of the destabilizing 1-PS on Weierstrass data with a starred
extreme fiber; both anchors live in the test suite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .exactmath import BinaryForm, ExactMathError, Place
from .stability import InternalInvariantError, LogTwistedCurve, StabilityError, beta


@dataclass(frozen=True)
class WeightData:
    """Leading Hilbert and weight polynomial data of a polarized family.

    p(k) = a0 k^n + a1 k^(n-1) + ...,  w(k) = b0 k^(n+1) + b1 k^n + ...;
    the optional hat pair carries the divisor part (q(k) = a_hat0 k^(n-1)
    + ..., w_hat(k) = b_hat0 k^n + ...).
    """

    n: int
    a0: Fraction
    a1: Fraction
    b0: Fraction
    b1: Fraction
    a_hat0: Optional[Fraction] = None
    b_hat0: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.a0 <= 0:
            raise StabilityError("Hilbert polynomial leading coefficient must be positive")
        if (self.a_hat0 is None) != (self.b_hat0 is None):
            raise StabilityError("divisor-part data requires both a_hat0 and b_hat0")


@dataclass(frozen=True)
class OnePS:
    """Diagonal one-parameter subgroup with sum-zero integer weights."""

    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.weights) != 0:
            raise StabilityError("1-PS weights must sum to zero")

    def pairing(self, exponent: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.weights, exponent))

    def inverse(self) -> "OnePS":
        return OnePS(tuple(-w for w in self.weights))


def factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def cm_weight(data: WeightData) -> Fraction:
    """Weight of the (log) CM line at a fixed point of the family.

    2 ((n+1)!/a0) (b1 a0 - a1 b0), plus ((n+1)!/a0) (b_hat0 a0 - a_hat0 b0)
    when divisor-part data is present.
    """
    factor = Fraction(factorial(data.n + 1), 1) / data.a0
    total = 2 * factor * (data.b1 * data.a0 - data.a1 * data.b0)
    if data.a_hat0 is not None:
        assert data.b_hat0 is not None
        total += factor * (data.b_hat0 * data.a0 - data.a_hat0 * data.b0)
    return total


def weight_sum_p1(d: int, k: int, w0: int, w1: int) -> int:
    """Total 1-PS weight of the degree-kd monomial basis on P^1.

    The basis s^(kd-i) t^i, 0 <= i <= kd, with coordinate weights (w0, w1)
    gives sum_i (i w1 + (kd - i) w0).
    """
    if d < 1 or k < 1:
        raise StabilityError("degree and twist order must be positive integers")
    return sum(i * w1 + (k * d - i) * w0 for i in range(k * d + 1))


def _weight_polynomial_coefficients(d: Fraction) -> tuple[Fraction, Fraction]:
    # Fit w(k) = b0 k^2 + b1 k through the degeneration weights (vanishing
    # order at p), evaluated at integer points after clearing denominators.
    r = d.denominator
    big_d = int(d * r)
    w1 = Fraction(weight_sum_p1(big_d, 1, 0, 1))
    w2 = Fraction(weight_sum_p1(big_d, 2, 0, 1))
    b0_scaled = (w2 - 2 * w1) / 2
    b1_scaled = w1 - b0_scaled
    return b0_scaled / (r * r), b1_scaled / r


def point_degeneration_df(pair: LogTwistedCurve, p: Place) -> Fraction:
    """Donaldson-Futaki invariant of degenerating a Fano pair to a point.

    Returns beta(p) / d, and independently recomputes it through the weight
    route: the pure weight data (b0, b1) comes from the vanishing-order
    filtration at p; the boundary and twist contribute fiber weights at the
    two fixed points of the action (0 at p, d per unit of coefficient at
    the opposite fixed point, where everything away from p lands); the log
    CM weight is then 2d times the invariant.  Exact disagreement between
    the routes is an invariant breach and raises.
    """
    if pair.genus != 0:
        raise StabilityError("point degenerations live over genus-0 bases")
    if p.degree != 1:
        raise StabilityError("the degenerating point must have degree 1")
    if not pair.is_fano():
        raise StabilityError("DF = beta/vol needs an anticanonically polarized pair")
    d = pair.polarization_degree
    df_beta = beta(pair, p) / d

    s = pair.log_twisted_degree
    b_p = pair.boundary.coefficient(p)
    b0, b1 = _weight_polynomial_coefficients(d)
    data = WeightData(
        n=1,
        a0=d,
        a1=Fraction(1),
        b0=b0,
        b1=b1,
        a_hat0=s,
        b_hat0=d * (s - b_p),
    )
    df_weight = cm_weight(data) / (2 * d)
    if df_weight != df_beta:
        raise InternalInvariantError(
            f"DF route mismatch: beta route {df_beta}, weight route {df_weight}"
        )
    return df_beta


# -- Hilbert-Mumford weights -------------------------------------------------

#: A ternary form: monomial exponents (i, j, k) -> nonzero coefficient.
TernaryForm = Mapping[tuple[int, int, int], Fraction]

_TERNARY_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xyz])|(?P<op>[-+*^]))"
)


def parse_ternary(text: str) -> dict[tuple[int, int, int], Fraction]:
    """Parse a ternary form literal such as ``x^2*z - 3*y^3 + x*y*z``."""
    pos = 0
    tokens: list[tuple[str, str]] = []
    while pos < len(text):
        m = _TERNARY_TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ExactMathError(
                f"ternary literal: unexpected character {text[pos]!r} at column {pos + 1}"
            )
        for kind in ("num", "var", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind)))
        pos = m.end()
    if not tokens:
        raise ExactMathError("ternary literal: empty input")

    form: dict[tuple[int, int, int], Fraction] = {}
    i = 0
    n = len(tokens)
    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        coeff = Fraction(1)
        exponent = [0, 0, 0]
        saw = False
        while i < n:
            kind, value = tokens[i]
            if kind == "num":
                coeff *= Fraction(value)
            elif kind == "var":
                power = 1
                if i + 2 < n and tokens[i + 1] == ("op", "^") and tokens[i + 2][0] == "num":
                    power = int(tokens[i + 2][1])
                    i += 2
                exponent["xyz".index(value)] += power
            else:
                break
            i += 1
            saw = True
            if i < n and tokens[i] == ("op", "*"):
                i += 1
                continue
            break
        if not saw:
            raise ExactMathError("ternary literal: empty term")
        key = tuple(exponent)
        form[key] = form.get(key, Fraction(0)) + sign * coeff
    return {k: c for k, c in form.items() if c != 0}


def hm_weight_form(form: TernaryForm, lam: OnePS) -> int:
    """mu(form, lam) = -min over the support of <lam, exponent>."""
    support = [e for e, c in form.items() if c != 0]
    if not support:
        raise StabilityError("the zero form has no Hilbert-Mumford weight")
    return -min(lam.pairing(e) for e in support)


def hm_weight_pencil(f: TernaryForm, g: TernaryForm, lam: OnePS) -> int:
    """mu of the pencil <f, g> in its Pluecker embedding.

    The Pluecker support of f ^ g consists of the exponent pairs with
    nonzero antisymmetrized coefficient, which is invariant under change of
    basis of the pencil; the weight of a pair is the sum of the monomial
    pairings.
    """
    support: list[int] = []
    exponents = sorted(set(f) | set(g))
    pairs = []
    for a_index in range(len(exponents)):
        for b_index in range(a_index + 1, len(exponents)):
            ea, eb = exponents[a_index], exponents[b_index]
            coefficient = f.get(ea, Fraction(0)) * g.get(eb, Fraction(0)) - f.get(
                eb, Fraction(0)
            ) * g.get(ea, Fraction(0))
            if coefficient != 0:
                pairs.append(lam.pairing(ea) + lam.pairing(eb))
    if not pairs:
        raise StabilityError("proportional forms do not span a pencil")
    return -min(pairs)


def miranda_weight(A: BinaryForm, B: BinaryForm, a: int) -> int:
    """GIT weight of Weierstrass data (A, B) under diag(q^a, q^-a) on P^1.

    The configuration point lives in the weighted projective space with
    A-coordinates of weight 2 and B-coordinates of weight 3.  Its weighted
    degree-6 monomials are cubic in the A-slots or quadratic in the B-slots
    (nothing mixes, 2 and 3 only combine to 6 as 2+2+2 and 3+3), so the
    Hilbert-Mumford weight of the embedded point is

        -min(3 * min slot weight of A,  2 * min slot weight of B),

    where slot i of a degree-D factor carries weight a (D - 2i) and an
    identically zero factor contributes no monomials.
    """
    if a < 1:
        raise StabilityError("the 1-PS exponent must be a positive integer")
    candidates = []
    for factor, multiplier in ((A, 3), (B, 2)):
        if factor.is_zero():
            continue
        slots = [
            a * (factor.degree - 2 * i)
            for i, coefficient in enumerate(factor.coeffs)
            if coefficient != 0
        ]
        candidates.append(multiplier * min(slots))
    if not candidates:
        raise StabilityError("A and B cannot both vanish")
    return -min(candidates)
