"""Weierstrass models over P^1 and Kodaira classification of their fibers.

A model is a pair of binary forms (A of degree 4*chi, B of degree 6*chi)
cutting out y^2 z = x^3 + A x z^2 + B z^3 in a projective bundle over P^1;
chi = 1 is the rational elliptic case.  Over residue characteristic 0 the
Kodaira type at a place is a pure function of the orders of vanishing
(v(A), v(B), v(Delta)), so classification is a table lookup once the
valuation triple is known; the test suite checks the table row by row
against an independent step-by-step Tate's algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .exactmath import (
    INF,
    BinaryForm,
    Place,
    Valuation,
    place_profile,
    valuation,
)


class ModelError(ValueError):
    """Invalid Weierstrass data (generically singular, degree mismatch, ...)."""


class NonMinimalModelError(ModelError):
    """Analysis hit a place where v(A) >= 4 and v(B) >= 6."""

    def __init__(self, place: Place):
        self.place = place
        super().__init__(
            f"model is non-minimal at {place.label()}; run minimalize first"
        )


class InconsistentTripleError(ValueError):
    """A valuation triple no Weierstrass model can produce."""


# -- Kodaira types -----------------------------------------------------------

_ADDITIVE_TAGS = ("II", "III", "IV", "I*", "IV*", "III*", "II*")
_ALL_TAGS = ("I",) + _ADDITIVE_TAGS


@dataclass(frozen=True)
class KodairaType:
    """A Kodaira fiber type: I_n, II, III, IV, I_n*, IV*, III*, or II*.

    ``n`` is meaningful only for the I and I* series (I_0 is the smooth
    fiber).  Instances print and parse in the conventional notation
    ("I0", "I5", "II*", "I2*", ...).
    """

    tag: str
    n: int = 0

    def __post_init__(self) -> None:
        if self.tag not in _ALL_TAGS:
            raise ValueError(f"unknown Kodaira tag {self.tag!r}")
        if self.tag not in ("I", "I*") and self.n != 0:
            raise ValueError(f"type {self.tag} does not carry an index")
        if self.n < 0:
            raise ValueError("fiber index must be nonnegative")

    @classmethod
    def I(cls, n: int) -> "KodairaType":  # noqa: E743 - conventional name
        return cls("I", n)

    @classmethod
    def I_star(cls, n: int) -> "KodairaType":
        return cls("I*", n)

    @classmethod
    def parse(cls, text: str) -> "KodairaType":
        s = text.strip()
        if s in ("II", "III", "IV", "II*", "III*", "IV*"):
            return cls(s)
        star = s.endswith("*")
        body = s[:-1] if star else s
        if body.startswith("I") and body[1:].isdigit():
            return cls("I*" if star else "I", int(body[1:]))
        raise ValueError(f"unknown Kodaira type {text!r}")

    @property
    def is_smooth(self) -> bool:
        return self.tag == "I" and self.n == 0

    @property
    def is_multiplicative(self) -> bool:
        """I_n with n >= 1 (nodal reduction)."""
        return self.tag == "I" and self.n >= 1

    @property
    def is_additive(self) -> bool:
        return self.tag != "I"

    @property
    def is_reduced(self) -> bool:
        """Reduced in Kodaira's sense: smooth, I_n, II, III or IV."""
        return self.tag in ("I", "II", "III", "IV")

    def __str__(self) -> str:
        if self.tag == "I":
            return f"I{self.n}"
        if self.tag == "I*":
            return f"I{self.n}*"
        return self.tag

    def __repr__(self) -> str:
        return f"KodairaType({self})"


class _NonMinimal:
    """Marker returned by classify_fiber for v(A) >= 4, v(B) >= 6."""

    def __repr__(self) -> str:
        return "NON_MINIMAL"


NON_MINIMAL = _NonMinimal()


# -- fiber configurations ----------------------------------------------------


@dataclass(frozen=True)
class FiberEntry:
    """One classified fiber: type, multiplicity, cluster degree, place.

    ``place_degree`` > 1 means a cluster of that many Galois-conjugate
    fibers sharing the type.  ``place`` is set when the entry came from an
    actual model; configurations supplied directly may leave it None.
    """

    type: KodairaType
    multiplicity: int = 1
    place_degree: int = 1
    place: Optional[Place] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.multiplicity < 1 or self.place_degree < 1:
            raise ValueError("multiplicity and place degree must be positive")

    def __str__(self) -> str:
        m = f"{self.multiplicity}x" if self.multiplicity > 1 else ""
        at = f" at {self.place.label()}" if self.place is not None else ""
        deg = f" (deg {self.place_degree})" if self.place_degree > 1 else ""
        return f"{m}{self.type}{at}{deg}"


@dataclass(frozen=True)
class FiberConfig:
    """The multiset of singular fibers of an elliptic surface with given chi."""

    entries: tuple[FiberEntry, ...]
    chi: int = 1

    def __post_init__(self) -> None:
        if self.chi < 1:
            raise ValueError("chi must be positive")

    def multiple_fiber_multiplicity(self) -> int:
        """m(X): the multiplicity of the unique multiple fiber, or 1."""
        ms = [e.multiplicity for e in self.entries if e.multiplicity > 1]
        return ms[0] if ms else 1

    def types(self) -> list[KodairaType]:
        return [e.type for e in self.entries]

    def __str__(self) -> str:
        body = ", ".join(str(e) for e in self.entries)
        return f"FiberConfig(chi={self.chi}: {body})"


# -- models ------------------------------------------------------------------


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 z = x^3 + A x z^2 + B z^3 with deg A = 4 chi, deg B = 6 chi."""

    A: BinaryForm
    B: BinaryForm
    chi: int = 1

    def __post_init__(self) -> None:
        if self.chi < 1:
            raise ModelError("chi must be a positive integer")
        if self.A.degree != 4 * self.chi or self.B.degree != 6 * self.chi:
            raise ModelError(
                f"need deg A = {4 * self.chi} and deg B = {6 * self.chi}, "
                f"got {self.A.degree} and {self.B.degree}"
            )
        if self.A.is_zero() and self.B.is_zero():
            raise ModelError("A and B cannot both vanish identically")
        if ((self.A**3) * 4 + (self.B**2) * 27).is_zero():
            raise ModelError("generically singular model: 4A^3 + 27B^2 = 0")

    @classmethod
    def from_literals(cls, a_text: str, b_text: str, chi: int = 1) -> "WeierstrassModel":
        from .exactmath import parse_poly

        a = BinaryForm.from_unipoly(parse_poly(a_text), 4 * chi)
        b = BinaryForm.from_unipoly(parse_poly(b_text), 6 * chi)
        return cls(a, b, chi)


def discriminant(model: WeierstrassModel) -> BinaryForm:
    """Delta = 4 A^3 + 27 B^2, a form of degree 12 chi."""
    delta = (model.A**3) * 4 + (model.B**2) * 27
    if delta.is_zero():
        raise ModelError("generically singular model: 4A^3 + 27B^2 = 0")
    return delta


def classify_fiber(
    vA: Valuation, vB: Valuation, vD: int
) -> Union[KodairaType, _NonMinimal]:
    """Kodaira type from the valuation triple (residue characteristic 0).

    vA and vB may be INF (identically zero form); vD must be finite.  The
    classification is total on triples that a model can realize and raises
    InconsistentTripleError on the rest.
    """
    if vD is INF or vD < 0:
        raise InconsistentTripleError("v(Delta) must be a finite nonnegative integer")
    if vD == 0:
        return KodairaType.I(0)
    if vA == 0:
        if vB != 0:
            raise InconsistentTripleError(
                f"v(A) = 0 with v(Delta) = {vD} > 0 forces v(B) = 0, got {vB}"
            )
        return KodairaType.I(vD)
    if vB == 0:
        raise InconsistentTripleError("v(B) = 0 and v(A) > 0 force v(Delta) = 0")
    # Additive types: vA >= 1 (possibly INF) and vB >= 1.
    if vB == 1:
        if vD != 2:
            raise InconsistentTripleError("v(B) = 1 forces v(Delta) = 2")
        return KodairaType("II")
    if vA == 1:
        if vD != 3:
            raise InconsistentTripleError("v(A) = 1, v(B) >= 2 force v(Delta) = 3")
        return KodairaType("III")
    if vB == 2:
        if vD != 4:
            raise InconsistentTripleError("v(A) >= 2, v(B) = 2 force v(Delta) = 4")
        return KodairaType("IV")
    # Now vA >= 2 and vB >= 3.
    if vA >= 4 and vB >= 6:
        return NON_MINIMAL
    if vD == 6:
        return KodairaType.I_star(0)
    if vA == 2 and vB == 3:
        if vD < 6:
            raise InconsistentTripleError("v(A) = 2, v(B) = 3 force v(Delta) >= 6")
        return KodairaType.I_star(vD - 6)
    # Now vA >= 3, vB >= 4, and vD > 6 rules out I0*.
    if vB == 4:
        if vD != 8:
            raise InconsistentTripleError("v(A) >= 3, v(B) = 4 force v(Delta) = 8")
        return KodairaType("IV*")
    if vA == 3:
        if vD != 9:
            raise InconsistentTripleError("v(A) = 3, v(B) >= 5 force v(Delta) = 9")
        return KodairaType("III*")
    if vB == 5:
        if vD != 10:
            raise InconsistentTripleError("v(A) >= 4, v(B) = 5 force v(Delta) = 10")
        return KodairaType("II*")
    raise InconsistentTripleError(f"no table row matches ({vA}, {vB}, {vD})")


def analyze(model: WeierstrassModel) -> FiberConfig:
    """Classify every singular fiber of a minimal model.

    Weierstrass models carry a section, so every multiplicity is 1.  The
    place degrees times the Delta-valuations sum to 12 chi.  Raises
    NonMinimalModelError (naming the place) on non-minimal input.
    """
    delta = discriminant(model)
    profile = place_profile([model.A, model.B, delta])
    entries = []
    for place, (vA, vB, vD) in profile:
        if vD == 0:
            continue
        assert vD is not INF
        fiber = classify_fiber(vA, vB, int(vD))
        if fiber is NON_MINIMAL:
            raise NonMinimalModelError(place)
        entries.append(
            FiberEntry(type=fiber, multiplicity=1, place_degree=place.degree, place=place)
        )
    total = sum(e.place_degree * _delta_valuation(e, model, delta) for e in entries)
    assert total == 12 * model.chi, "Delta valuations must sum to deg Delta"
    return FiberConfig(entries=tuple(entries), chi=model.chi)


def _delta_valuation(entry: FiberEntry, model: WeierstrassModel, delta: BinaryForm) -> int:
    assert entry.place is not None
    v = valuation(delta, entry.place)
    assert v is not INF
    return int(v)


def minimalize(
    model: WeierstrassModel,
) -> tuple[WeierstrassModel, list[tuple[Place, int]]]:
    """Remove every place with v(A) >= 4 and v(B) >= 6, lowering chi.

    Each reduction step divides A by q^4 and B by q^6 (or by powers of s at
    infinity) and drops chi by deg q; iterates to a fixed point.  Returns
    the minimal model together with (place, steps) for every reduction.
    """
    A, B, chi = model.A, model.B, model.chi
    removed: dict[Place, int] = {}
    while True:
        candidates = _nonminimal_places(A, B)
        if not candidates:
            break
        for place in candidates:
            reduction = chi - place.degree
            if reduction < 1:
                raise ModelError(
                    "model is a twist of a constant family below the "
                    "elliptic-surface threshold"
                )
            if place.is_infinity:
                A = A.div_s_power(4)
                B = B.div_s_power(6)
            else:
                A = A.div_finite_power(place.q, 4)  # type: ignore[arg-type]
                B = B.div_finite_power(place.q, 6)  # type: ignore[arg-type]
            chi = reduction
            removed[place] = removed.get(place, 0) + 1
    result = WeierstrassModel(A, B, chi)
    report = sorted(removed.items(), key=lambda kv: kv[0].sort_key())
    return result, report


def _nonminimal_places(A: BinaryForm, B: BinaryForm) -> list[Place]:
    reference = [f for f in (A, B) if not f.is_zero()]
    places = []
    for place, _ in place_profile(reference):
        vA, vB = valuation(A, place), valuation(B, place)
        if vA >= 4 and vB >= 6:
            places.append(place)
    return places
