"""Shared generators and builders for the test suite (seeded, deterministic)."""

from __future__ import annotations

import random
from fractions import Fraction

from ellstab.canbundle import euler_number
from ellstab.exactmath import BinaryForm, DivisorP1, Place, UniPoly
from ellstab.stability import LogTwistedCurve
from ellstab.weierstrass import FiberConfig, FiberEntry, KodairaType, WeierstrassModel


def rational(rng: random.Random, max_den: int, lo: int = -10, hi: int = 10) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_unipoly(rng: random.Random, max_deg: int, height: int = 10) -> UniPoly:
    degree = rng.randint(0, max_deg)
    coeffs = [rng.randint(-height, height) for _ in range(degree + 1)]
    return UniPoly(coeffs)


def random_model(rng: random.Random, chi: int = 1, height: int = 10) -> WeierstrassModel:
    """Random Weierstrass model with integer coefficients; retries until valid."""
    while True:
        a = BinaryForm(4 * chi, [rng.randint(-height, height) for _ in range(4 * chi + 1)])
        b = BinaryForm(6 * chi, [rng.randint(-height, height) for _ in range(6 * chi + 1)])
        if a.is_zero() and b.is_zero():
            continue
        if ((a**3) * 4 + (b**2) * 27).is_zero():
            continue
        return WeierstrassModel(a, b, chi)


_REDUCED_TYPES = (
    [KodairaType.I(n) for n in range(1, 10)]
    + [KodairaType("II"), KodairaType("III"), KodairaType("IV")]
)
_STARRED_TYPES = (
    [KodairaType.I_star(n) for n in range(0, 6)]
    + [KodairaType("IV*"), KodairaType("III*"), KodairaType("II*")]
)


def random_config(rng: random.Random, chi: int = 1, allow_multiple: bool = True) -> FiberConfig:
    """Random valid configuration: Euler budget 12*chi, one optional multiple fiber."""
    entries: list[FiberEntry] = []
    if allow_multiple and rng.random() < 0.5:
        m = rng.randint(2, 6)
        n = rng.choice([0, 0, 0, 1, 2])
        entries.append(FiberEntry(KodairaType.I(n), multiplicity=m))
    budget = 12 * chi - sum(e.place_degree * euler_number(e.type) for e in entries)
    while budget > 0:
        pool = [t for t in _REDUCED_TYPES + _STARRED_TYPES if euler_number(t) <= budget]
        fiber_type = rng.choice(pool)
        degree = 1
        if fiber_type.tag == "I" and rng.random() < 0.2:
            degree = rng.randint(1, budget // euler_number(fiber_type))
        entries.append(FiberEntry(fiber_type, place_degree=degree))
        budget -= degree * euler_number(fiber_type)
    return FiberConfig(tuple(entries), chi)


def random_fano_pair(
    rng: random.Random, max_den: int = 60, max_points: int = 4
) -> LogTwistedCurve:
    """Random anticanonically polarized log-twisted curve (genus 0)."""
    while True:
        count = rng.randint(0, max_points)
        coefficients = []
        for _ in range(count):
            den = rng.randint(2, max_den)
            num = rng.randint(1, den - 1)
            coefficients.append(Fraction(num, den))
        budget = 2 - sum(coefficients)
        if budget <= 0:
            continue
        den = rng.randint(1, max_den)
        twist = Fraction(rng.randint(0, max(int(budget * den) - 1, 0)), den)
        d = 2 - sum(coefficients) - twist
        if d <= 0:
            continue
        boundary = DivisorP1(
            {Place.rational_point(i): c for i, c in enumerate(coefficients)}
        )
        return LogTwistedCurve(0, boundary, twist, d)
