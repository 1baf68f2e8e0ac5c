"""Canonical bundle formula bookkeeping for elliptic fibrations over P^1.

The relative canonical class of a minimal elliptic surface decomposes into
a discriminant part, supported on the singular fibers with coefficients
1 - lct, and a moduli part of degree (pole order of the functional
invariant)/12.  This module tabulates the per-type log canonical thresholds
and Euler numbers, validates fiber configurations against the Euler-number
budget 12*chi, and assembles the base datum (discriminant divisor, moduli
degree) that the stability criteria consume.

Per-fiber lct values:
    I_n -> 1,   II -> 5/6,  III -> 3/4,  IV -> 2/3,
    I_n* -> 1/2, IV* -> 1/3, III* -> 1/4, II* -> 1/6,
    multiple fiber of multiplicity m -> 1/m.
Euler numbers:
    I_n -> n,   II -> 2,  III -> 3,  IV -> 4,
    I_n* -> n+6, IV* -> 8, III* -> 9, II* -> 10.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exactmath import DivisorP1, Place, UniPoly
from .weierstrass import FiberConfig, KodairaType


class ConfigError(ValueError):
    """A fiber configuration violated its invariants."""


_LCT_BY_TAG = {
    "I": Fraction(1),
    "II": Fraction(5, 6),
    "III": Fraction(3, 4),
    "IV": Fraction(2, 3),
    "I*": Fraction(1, 2),
    "IV*": Fraction(1, 3),
    "III*": Fraction(1, 4),
    "II*": Fraction(1, 6),
}

_EULER_BY_TAG = {
    "II": 2,
    "III": 3,
    "IV": 4,
    "IV*": 8,
    "III*": 9,
    "II*": 10,
}


@dataclass(frozen=True)
class LctEntry:
    """One row of the fiber-type table: type, lct, Euler number."""

    type: KodairaType
    lct: Fraction
    euler: int


def lct_of_type(fiber_type: KodairaType) -> Fraction:
    """lct of the reduced fiber of the given type."""
    return _LCT_BY_TAG[fiber_type.tag]


def euler_number(fiber_type: KodairaType) -> int:
    """Topological Euler number of the fiber (multiplicity-independent)."""
    if fiber_type.tag == "I":
        return fiber_type.n
    if fiber_type.tag == "I*":
        return fiber_type.n + 6
    return _EULER_BY_TAG[fiber_type.tag]


def table_entry(fiber_type: KodairaType) -> LctEntry:
    return LctEntry(fiber_type, lct_of_type(fiber_type), euler_number(fiber_type))


def lct_of_fiber(fiber_type: KodairaType, m: int = 1) -> Fraction:
    """lct of a possibly multiple fiber: table value for m = 1, else 1/m.

    Multiple fibers only occur with I-type reduction; an additive type with
    m > 1 is rejected.
    """
    if m < 1:
        raise ConfigError("multiplicity must be positive")
    if m == 1:
        return lct_of_type(fiber_type)
    if fiber_type.tag != "I":
        raise ConfigError("additive fibers cannot be multiple")
    return Fraction(1, m)


def moduli_contribution(fiber_type: KodairaType) -> Fraction:
    """Per-fiber moduli degree: (euler - 12(1 - lct)) / 12.

    Works out to n/12 for I_n and I_n* and 0 for every other type; a
    multiple fiber contributes through its reduced type.
    """
    value = Fraction(euler_number(fiber_type) - 12 * (1 - lct_of_type(fiber_type)), 12)
    if value < 0:
        raise AssertionError(
            f"negative moduli contribution for {fiber_type}: lct/euler tables broken"
        )
    return value


@dataclass(frozen=True)
class BaseData:
    """Base curve datum produced by the canonical bundle formula.

    ``discriminant_divisor`` has coefficient 1 - lct at each singular fiber
    (all in [0, 1)); ``moduli_degree`` is nonnegative and, together with
    the non-multiple discriminant contributions, accounts for chi.
    """

    discriminant_divisor: DivisorP1
    moduli_degree: Fraction
    chi: int

    def boundary_degree(self) -> Fraction:
        return self.discriminant_divisor.degree()

    def total_degree(self) -> Fraction:
        """deg(B + M)."""
        return self.boundary_degree() + self.moduli_degree


def validate_config(config: FiberConfig) -> list[str]:
    """Check a configuration; returns human-readable violations (empty = ok).

    Checks: Euler numbers weighted by cluster degree sum to 12*chi;
    multiplicity m > 1 occurs only on I-type fibers; when chi = 1 there is
    at most one multiple fiber (counted geometrically, so a cluster of
    degree > 1 cannot be multiple).
    """
    violations = []
    for entry in config.entries:
        if entry.multiplicity > 1 and entry.type.tag != "I":
            violations.append(
                f"{entry}: additive fibers cannot be multiple"
            )
    total = sum(e.place_degree * euler_number(e.type) for e in config.entries)
    if total != 12 * config.chi:
        violations.append(
            f"Euler numbers sum to {total}, expected 12*chi = {12 * config.chi}"
        )
    if config.chi == 1:
        multiple_count = sum(
            e.place_degree for e in config.entries if e.multiplicity > 1
        )
        if multiple_count > 1:
            violations.append(
                f"chi = 1 allows at most one multiple fiber, found {multiple_count}"
            )
    return violations


def _marker_place(degree: int, taken: set, hint: str) -> Place:
    # Synthetic positions for config entries that carry no place: distinct
    # squarefree markers t^deg + c, labeled by the fiber they stand for.
    c = 1
    while True:
        q = UniPoly((Fraction(c),) + (Fraction(0),) * (degree - 1) + (Fraction(1),))
        place = Place.finite(q, display_name=hint)
        if place not in taken:
            taken.add(place)
            return place
        c += 1


def base_data(config: FiberConfig) -> BaseData:
    """Discriminant divisor and moduli degree of a validated configuration.

    The discriminant coefficient at each fiber is 1 - lct (with the
    multiplicity rule); the moduli degree is the sum of per-entry
    contributions, which reproduces deg(B + M) = 2 - 1/m for a chi = 1
    surface with one multiple fiber of multiplicity m.
    """
    violations = validate_config(config)
    if violations:
        raise ConfigError("; ".join(violations))
    divisor = DivisorP1()
    taken = {e.place for e in config.entries if e.place is not None}
    moduli = Fraction(0)
    for index, entry in enumerate(config.entries):
        coefficient = 1 - lct_of_fiber(entry.type, entry.multiplicity)
        place = entry.place
        if place is None:
            hint = f"fiber#{index}:{entry.type}"
            place = _marker_place(entry.place_degree, taken, hint)
        if coefficient != 0:
            divisor = divisor.add_term(place, coefficient)
        moduli += entry.place_degree * moduli_contribution(entry.type)
    return BaseData(discriminant_divisor=divisor, moduli_degree=moduli, chi=config.chi)


def twisted_canonical_degree(
    genus: int,
    base: BaseData,
    extra_multiple: Iterable[int] = (),
) -> Fraction:
    """deg kappa = (2g - 2) + deg B + deg M for the base curve.

    ``extra_multiple`` lists multiplicities of multiple fibers imposed on
    top of the base datum (each adds 1 - 1/m to the boundary degree).
    """
    degree = Fraction(2 * genus - 2) + base.total_degree()
    for m in extra_multiple:
        if m < 1:
            raise ConfigError("multiplicity must be positive")
        degree += 1 - Fraction(1, m)
    return degree
