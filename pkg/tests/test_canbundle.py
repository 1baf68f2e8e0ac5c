"""Tests for canonical-bundle-formula bookkeeping."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ellstab.canbundle import (
    ConfigError,
    base_data,
    euler_number,
    lct_of_fiber,
    lct_of_type,
    moduli_contribution,
    table_entry,
    twisted_canonical_degree,
    validate_config,
)
from ellstab.exactmath import valuation
from ellstab.weierstrass import (
    FiberConfig,
    FiberEntry,
    KodairaType,
    NonMinimalModelError,
    WeierstrassModel,
    analyze,
    discriminant,
    minimalize,
)
from helpers import random_config, random_model

K = KodairaType
E = FiberEntry


def cfg(*entries: FiberEntry, chi: int = 1) -> FiberConfig:
    return FiberConfig(tuple(entries), chi)


# -- tables ---------------------------------------------------------------------


def test_lct_table_values():
    expected = {
        "I0": Fraction(1),
        "I7": Fraction(1),
        "II": Fraction(5, 6),
        "III": Fraction(3, 4),
        "IV": Fraction(2, 3),
        "I0*": Fraction(1, 2),
        "I4*": Fraction(1, 2),
        "II*": Fraction(1, 6),
        "III*": Fraction(1, 4),
        "IV*": Fraction(1, 3),
    }
    for name, value in expected.items():
        assert lct_of_type(K.parse(name)) == value
        assert 0 < value <= 1


def test_euler_table_values():
    expected = {
        "I0": 0,
        "I5": 5,
        "II": 2,
        "III": 3,
        "IV": 4,
        "I0*": 6,
        "I3*": 9,
        "IV*": 8,
        "III*": 9,
        "II*": 10,
    }
    for name, value in expected.items():
        assert euler_number(K.parse(name)) == value


def test_euler_matches_delta_valuation_of_sample_models():
    # The Euler number of each type equals v(Delta) of a Weierstrass
    # realization; checked over the analyze() output of explicit models.
    samples = [
        ("0", "t"),  # II* at infinity, II at 0
        ("t^2", "t^3 + t^4"),
        ("1", "t + 1"),
        ("0", "t^4 + t^5"),
    ]
    for a, b in samples:
        model = WeierstrassModel.from_literals(a, b, 1)
        delta = discriminant(model)
        for entry in analyze(model).entries:
            assert euler_number(entry.type) == int(valuation(delta, entry.place))


def test_lct_of_fiber_multiplicity_rule():
    assert lct_of_fiber(K.parse("II*"), 1) == Fraction(1, 6)
    assert lct_of_fiber(K.I(5), 1) == 1
    assert lct_of_fiber(K.I(0), 3) == Fraction(1, 3)
    assert lct_of_fiber(K.I(2), 4) == Fraction(1, 4)
    with pytest.raises(ConfigError):
        lct_of_fiber(K.parse("IV"), 2)


def test_tables_total_over_constructible_types():
    for fiber_type in (
        [K.I(n) for n in range(0, 20)]
        + [K.I_star(n) for n in range(0, 20)]
        + [K.parse(s) for s in ("II", "III", "IV", "IV*", "III*", "II*")]
    ):
        row = table_entry(fiber_type)
        assert 0 < row.lct <= 1
        assert row.euler >= 0
        assert moduli_contribution(fiber_type) >= 0


# -- validation -------------------------------------------------------------------


def test_validate_examples():
    ok = cfg(E(K.parse("II*")), E(K.parse("II")))
    assert validate_config(ok) == []
    short = cfg(E(K.parse("IV*")), *[E(K.I(1))] * 3)
    assert any("Euler" in v for v in validate_config(short))
    with_multiple = cfg(E(K.I(0), multiplicity=2), E(K.parse("IV*")), *[E(K.I(1))] * 4)
    assert validate_config(with_multiple) == []


def test_validate_rejects_multiple_additive_and_double_multiples():
    bad_type = cfg(E(K.parse("II"), multiplicity=2), E(K.parse("II*")))
    assert any("multiple" in v for v in validate_config(bad_type))
    two_multiples = cfg(
        E(K.I(0), multiplicity=2),
        E(K.I(0), multiplicity=3),
        *[E(K.I(1))] * 12,
    )
    assert any("at most one" in v for v in validate_config(two_multiples))


# -- base data ---------------------------------------------------------------------


def test_base_data_ii_star_plus_ii():
    model = WeierstrassModel.from_literals("0", "t", 1)
    base = base_data(analyze(model))
    coefficients = sorted(c for _, c in base.discriminant_divisor)
    assert coefficients == [Fraction(1, 6), Fraction(5, 6)]
    assert base.boundary_degree() == 1
    assert base.moduli_degree == 0


def test_base_data_twelve_nodal_fibers():
    base = base_data(cfg(*[E(K.I(1))] * 12))
    assert base.boundary_degree() == 0
    assert base.moduli_degree == 1


def test_base_data_multiple_fiber_budget():
    base = base_data(cfg(E(K.I(0), multiplicity=2), *[E(K.I(1))] * 12))
    assert base.boundary_degree() == Fraction(1, 2)
    assert base.moduli_degree == 1
    assert base.total_degree() == Fraction(3, 2) == 2 - Fraction(1, 2)


def test_base_data_requires_valid_config():
    with pytest.raises(ConfigError):
        base_data(cfg(E(K.parse("IV*"))))


def test_marker_places_are_distinct():
    base = base_data(cfg(E(K.parse("II*")), E(K.parse("II"))))
    places = base.discriminant_divisor.support()
    assert len(places) == 2 and places[0] != places[1]


# -- twisted canonical degree --------------------------------------------------------


def test_twisted_canonical_degree_examples():
    model = WeierstrassModel.from_literals("0", "t", 1)
    base = base_data(analyze(model))
    assert twisted_canonical_degree(0, base) == -1
    cy = base_data(cfg(E(K.I(0), multiplicity=2), *[E(K.I(1))] * 12))
    assert twisted_canonical_degree(0, cy) == Fraction(-1, 2)
    assert twisted_canonical_degree(0, cy, extra_multiple=[2]) == 0
    assert twisted_canonical_degree(1, base_data(cfg(*[E(K.I(1))] * 12))) == 1
    # Formula-level boundary: genus 1 with nothing on the base.
    from ellstab.canbundle import BaseData
    from ellstab.exactmath import DivisorP1

    empty = BaseData(DivisorP1(), Fraction(0), chi=1)
    assert twisted_canonical_degree(1, empty) == 0


# -- bookkeeping properties ------------------------------------------------------------


def test_bookkeeping_on_random_weierstrass_models():
    rng = random.Random(11)
    for _ in range(40):
        model = random_model(rng, chi=rng.choice([1, 1, 1, 2]))
        try:
            config = analyze(model)
        except NonMinimalModelError:
            model, _ = minimalize(model)
            config = analyze(model)
        base = base_data(config)
        assert base.moduli_degree >= 0
        for entry in config.entries:
            assert moduli_contribution(entry.type) >= 0
        # Weierstrass models have no multiple fibers: deg B + deg M = chi.
        assert base.total_degree() == model.chi
        # Cross-check deg M against (sum of Delta valuations)/12 - sum(1 - lct).
        delta = discriminant(model)
        lhs = (
            sum(
                Fraction(e.place_degree * int(valuation(delta, e.place)))
                for e in config.entries
            )
            / 12
        )
        rhs = sum(
            (Fraction(e.place_degree) * (1 - lct_of_fiber(e.type, e.multiplicity))
             for e in config.entries),
            Fraction(0),
        )
        assert base.moduli_degree == lhs - rhs


def test_multiple_fiber_total_degree_rule():
    rng = random.Random(13)
    for _ in range(60):
        config = random_config(rng, allow_multiple=True)
        m = config.multiple_fiber_multiplicity()
        base = base_data(config)
        if m > 1:
            assert base.total_degree() == 2 - Fraction(1, m)
        else:
            assert base.total_degree() == 1
        # chi accounting: the moduli degree plus the non-multiple part of
        # the discriminant always equals chi.
        reduced_part = sum(
            (Fraction(e.place_degree) * (1 - lct_of_fiber(e.type, 1))
             for e in config.entries
             if e.multiplicity == 1),
            Fraction(0),
        )
        assert base.moduli_degree + reduced_part == config.chi
