"""Exact arithmetic over the rationals for curves on the projective line.

Everything here is integer/Fraction based; no floating point enters at any
point.  The module provides:

  Rational    -- alias for fractions.Fraction (always lowest terms,
                 positive denominator).
  UniPoly     -- dense univariate polynomials over the rationals in the
                 affine coordinate t.
  BinaryForm  -- homogeneous forms F(s, t) of a declared degree d, stored
                 as the d+1 coefficients of s^(d-i) t^i.  Leading-zero
                 padding encodes vanishing at the point at infinity (s = 0).
  Place       -- closed points of P^1 over Q: either infinity, or the
                 vanishing locus of a monic squarefree polynomial q(t)
                 (a cluster of Galois-conjugate geometric points).
  DivisorP1   -- formal Q-divisors supported on places.

Per-point orders of vanishing are obtained by gcd refinement of squarefree
clusters, never by factoring into Q-irreducibles: every downstream quantity
depends only on valuation vectors and cluster degrees.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

Rational = Fraction


class ExactMathError(ValueError):
    """Raised for malformed arithmetic input (bad literals, singular matrices)."""


class _PositiveInfinity:
    """Order-of-vanishing of the zero form.  Compares above every integer."""

    _instance: Optional["_PositiveInfinity"] = None

    def __new__(cls) -> "_PositiveInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("ellstab-valuation-infinity")

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __add__(self, other: object) -> "_PositiveInfinity":
        return self

    __radd__ = __add__


INF = _PositiveInfinity()

#: An order of vanishing: a nonnegative integer, or INF for the zero form.
Valuation = Union[int, _PositiveInfinity]


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p' into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ExactMathError(f"not a rational number: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Canonical string form: 'p/q', or 'p' when the denominator is 1."""
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# Univariate polynomials over Q
# ---------------------------------------------------------------------------


def _pseudo_remainder(a: list[int], b: list[int]) -> list[int]:
    """Integer pseudo-remainder of a by b (coefficients low to high).

    Each elimination step first scales the remainder by lc(b), so the whole
    division stays in Z.  Requires b nonzero and len(a) >= len(b).
    """
    lead = b[-1]
    width = len(b)
    rem = list(a)
    for i in range(len(a) - width, -1, -1):
        top = rem[i + width - 1]
        rem = [c * lead for c in rem]
        if top:
            for j in range(width):
                rem[i + j] -= top * b[j]
    del rem[len(b) - 1 :]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


class UniPoly:
    """Dense univariate polynomial over Q in the variable t.

    Coefficients are stored lowest degree first with the leading coefficient
    nonzero; the zero polynomial is the empty tuple and its ``degree`` is
    None (a sentinel, deliberately not -1, so that arithmetic on degrees of
    zero polynomials fails loudly instead of silently).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Union[int, Fraction]]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls(())

    @classmethod
    def one(cls) -> "UniPoly":
        return cls((1,))

    @classmethod
    def constant(cls, c: Union[int, Fraction]) -> "UniPoly":
        return cls((c,))

    @classmethod
    def t(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c: Union[int, Fraction] = 1) -> "UniPoly":
        return cls((0,) * k + (c,))

    # -- structure ----------------------------------------------------------

    @property
    def degree(self) -> Optional[int]:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ExactMathError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: Union["UniPoly", int, Fraction]) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(other))
        if self.is_zero() or other.is_zero():
            return UniPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def scale(self, c: Fraction) -> "UniPoly":
        return UniPoly(tuple(c * a for a in self.coeffs))

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ExactMathError("negative polynomial power")
        result = UniPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Exact field division with remainder; ``other`` must be nonzero."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        assert dq is not None
        lead = other.coeffs[-1]
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - dq - 1, -1, -1):
            c = rem[i + dq] / lead
            if c == 0:
                continue
            quo[i] = c
            for j, b in enumerate(other.coeffs):
                rem[i + j] -= c * b
        return UniPoly(quo), UniPoly(rem)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ExactMathError("exact_div: division left a remainder")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading())

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def _integer_primitive(self) -> list[int]:
        # Clear denominators and strip integer content; [] for zero.
        if self.is_zero():
            return []
        scale = 1
        for c in self.coeffs:
            scale = scale // math.gcd(scale, c.denominator) * c.denominator
        ints = [int(c * scale) for c in self.coeffs]
        content = 0
        for v in ints:
            content = math.gcd(content, v)
        return [v // content for v in ints]

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic greatest common divisor.

        Computed by a primitive pseudo-remainder sequence over the integers;
        the rational Euclidean algorithm blows its coefficients up
        quadratically on the degree-20+ discriminants this library feeds it.
        """
        a, b = self._integer_primitive(), other._integer_primitive()
        if len(a) < len(b):
            a, b = b, a
        while b:
            rem = _pseudo_remainder(a, b)
            content = 0
            for v in rem:
                content = math.gcd(content, v)
            if content > 1:
                rem = [v // content for v in rem]
            a, b = b, rem
        if not a:
            return UniPoly.zero()
        return UniPoly(a).monic()

    def squarefree_part(self) -> "UniPoly":
        """Radical: the product of the distinct irreducible factors (char 0)."""
        if self.is_zero():
            raise ExactMathError("zero polynomial has no squarefree part")
        if self.degree == 0:
            return UniPoly.one()
        return self.exact_div(self.gcd(self.derivative())).monic()

    def evaluate(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def valuation_at(self, q: "UniPoly") -> Valuation:
        """Largest k with q^k dividing self; INF for the zero polynomial."""
        if self.is_zero():
            return INF
        if q.is_zero() or q.degree == 0:
            raise ExactMathError("valuation requires a nonconstant modulus")
        k = 0
        f = self
        while True:
            quo, rem = f.divmod(q)
            if not rem.is_zero():
                return k
            f = quo
            k += 1

    # -- formatting ---------------------------------------------------------

    def __repr__(self) -> str:
        return f"UniPoly({self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                body = format_rational(abs(c))
            else:
                tpow = "t" if i == 1 else f"t^{i}"
                body = tpow if abs(c) == 1 else f"{format_rational(abs(c))}*{tpow}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>t)|(?P<op>[-+*^]))"
)


def parse_poly(text: str) -> UniPoly:
    """Parse a polynomial literal such as ``4*t^3 - 2/3*t + 1``.

    Accepted syntax: rational or integer coefficients, the variable t,
    and the operators + - * ^.  Raises ExactMathError with the offending
    position for anything else.
    """
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ExactMathError(
                f"polynomial literal: unexpected character {text[pos]!r} at column {pos + 1}"
            )
        for kind in ("num", "var", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    if not tokens:
        raise ExactMathError("polynomial literal: empty input")

    result = UniPoly.zero()
    i = 0
    n = len(tokens)

    def fail(where: int, why: str) -> ExactMathError:
        return ExactMathError(f"polynomial literal: {why} at column {where + 1}")

    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise fail(len(text) - 1, "dangling sign")
        coeff = Fraction(1)
        exponent = 0
        saw_factor = False
        while True:
            kind, value, start = tokens[i]
            if kind == "num":
                coeff *= Fraction(value)
            elif kind == "var":
                power = 1
                if i + 1 < n and tokens[i + 1] == ("op", "^", tokens[i + 1][2]):
                    if i + 2 >= n or tokens[i + 2][0] != "num" or "/" in tokens[i + 2][1]:
                        raise fail(start, "exponent must be a nonnegative integer")
                    power = int(tokens[i + 2][1])
                    i += 2
                exponent += power
            else:
                raise fail(start, f"unexpected operator {value!r}")
            i += 1
            saw_factor = True
            if i < n and tokens[i][0] == "op" and tokens[i][1] == "*":
                i += 1
                if i >= n:
                    raise fail(len(text) - 1, "dangling '*'")
                continue
            break
        if not saw_factor:
            raise fail(0, "empty term")
        result = result + UniPoly.monomial(exponent, sign * coeff)
    return result


# ---------------------------------------------------------------------------
# Homogeneous binary forms on P^1
# ---------------------------------------------------------------------------


class BinaryForm:
    """Homogeneous form of declared degree d with coefficients of s^(d-i) t^i.

    Exactly d+1 coefficient slots are stored; the zero form is permitted and
    reported by ``is_zero``.  The declared degree matters: padding a lower
    degree polynomial into a higher degree form records vanishing at s = 0.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Iterable[Union[int, Fraction]]):
        cs = tuple(Fraction(c) for c in coeffs)
        if degree < 0:
            raise ExactMathError("binary form degree must be nonnegative")
        if len(cs) != degree + 1:
            raise ExactMathError(
                f"degree-{degree} form needs {degree + 1} coefficients, got {len(cs)}"
            )
        self.degree = degree
        self.coeffs = cs

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls(degree, (0,) * (degree + 1))

    @classmethod
    def from_unipoly(cls, p: UniPoly, degree: int) -> "BinaryForm":
        """Homogenize p(t) to the given degree (raises if deg p exceeds it)."""
        if p.degree is not None and p.degree > degree:
            raise ExactMathError(
                f"cannot homogenize degree-{p.degree} polynomial to degree {degree}"
            )
        return cls(degree, tuple(p.coefficient(i) for i in range(degree + 1)))

    @classmethod
    def monomial(cls, degree: int, t_power: int, c: Union[int, Fraction] = 1) -> "BinaryForm":
        """c * s^(degree - t_power) * t^t_power."""
        if not 0 <= t_power <= degree:
            raise ExactMathError("monomial exponent out of range")
        return cls(degree, tuple(c if i == t_power else 0 for i in range(degree + 1)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BinaryForm)
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.coeffs))

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.degree != other.degree:
            raise ExactMathError("cannot add forms of different degrees")
        return BinaryForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: Union["BinaryForm", int, Fraction]) -> "BinaryForm":
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(other))
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, out)

    __rmul__ = __mul__

    def scale(self, c: Fraction) -> "BinaryForm":
        return BinaryForm(self.degree, tuple(c * a for a in self.coeffs))

    def __pow__(self, n: int) -> "BinaryForm":
        result = BinaryForm(0, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def dehomogenize(self) -> UniPoly:
        """F(1, t) as a univariate polynomial."""
        return UniPoly(self.coeffs)

    def val_at_infinity(self) -> Valuation:
        """Order of vanishing at s = 0: the declared degree minus the t-degree."""
        if self.is_zero():
            return INF
        top = max(i for i, c in enumerate(self.coeffs) if c != 0)
        return self.degree - top

    def div_s_power(self, k: int) -> "BinaryForm":
        """Exact division by s^k."""
        v = self.val_at_infinity()
        if v is not INF and v < k:
            raise ExactMathError("form is not divisible by that power of s")
        return BinaryForm(self.degree - k, self.coeffs[: self.degree - k + 1])

    def div_finite_power(self, q: UniPoly, k: int) -> "BinaryForm":
        """Exact division by the degree-(k deg q) homogenization of q^k."""
        dq = q.degree
        if dq is None or dq == 0:
            raise ExactMathError("division requires a nonconstant place polynomial")
        quotient = self.dehomogenize()
        for _ in range(k):
            quotient = quotient.exact_div(q)
        return BinaryForm.from_unipoly(quotient, self.degree - k * dq)

    def evaluate(self, s: Fraction, t: Fraction) -> Fraction:
        return sum(
            (c * s ** (self.degree - i) * t**i for i, c in enumerate(self.coeffs)),
            Fraction(0),
        )

    def __repr__(self) -> str:
        return f"BinaryForm(deg={self.degree}, {self})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            factors = []
            if self.degree - i > 0:
                factors.append("s" if self.degree - i == 1 else f"s^{self.degree - i}")
            if i > 0:
                factors.append("t" if i == 1 else f"t^{i}")
            body = "*".join(factors) if factors else ""
            if abs(c) != 1 or not body:
                body = format_rational(abs(c)) + ("*" + body if body else "")
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# Places and divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A closed point of P^1 over Q.

    Finite places carry a monic squarefree q(t); ``irreducible`` records
    whether q is known to be a single Galois orbit (always true in degree 1,
    unknown for gcd-refined clusters of higher degree).  The point at
    infinity is its own kind.  Equality and hashing ignore ``irreducible``
    and ``display_name``: two places are equal iff same kind and same q.
    """

    q: Optional[UniPoly]  # None encodes the place at infinity
    irreducible: bool = field(default=False, compare=False)
    display_name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.q is not None:
            if self.q.is_zero() or self.q.degree == 0:
                raise ExactMathError("finite place needs a nonconstant polynomial")
            if self.q.leading() != 1:
                raise ExactMathError("finite place polynomial must be monic")
            if self.q.gcd(self.q.derivative()).degree != 0:
                raise ExactMathError("finite place polynomial must be squarefree")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(q=None, irreducible=True)

    @classmethod
    def finite(cls, q: UniPoly, display_name: Optional[str] = None) -> "Place":
        qm = q.monic()
        return cls(q=qm, irreducible=(qm.degree == 1), display_name=display_name)

    @classmethod
    def rational_point(cls, c: Union[int, Fraction]) -> "Place":
        """The place t = c."""
        return cls.finite(UniPoly((-Fraction(c), 1)))

    @property
    def is_infinity(self) -> bool:
        return self.q is None

    @property
    def degree(self) -> int:
        return 1 if self.q is None else self.q.degree  # type: ignore[return-value]

    def label(self) -> str:
        if self.display_name is not None:
            return self.display_name
        return "infinity" if self.q is None else str(self.q)

    def __repr__(self) -> str:
        return f"Place({self.label()})"

    def sort_key(self) -> tuple:
        if self.q is None:
            return (0,)
        return (1, self.degree, self.q.coeffs)


class DivisorP1:
    """Formal Q-divisor on P^1: a finite map Place -> nonzero Rational."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Place, Fraction]] = None):
        self.terms: dict[Place, Fraction] = {}
        if terms:
            for place, coefficient in terms.items():
                c = Fraction(coefficient)
                if c != 0:
                    self.terms[place] = c

    def coefficient(self, place: Place) -> Fraction:
        return self.terms.get(place, Fraction(0))

    def support(self) -> list[Place]:
        return sorted(self.terms, key=Place.sort_key)

    def degree(self) -> Fraction:
        return sum((c * p.degree for p, c in self.terms.items()), Fraction(0))

    def add_term(self, place: Place, coefficient: Fraction) -> "DivisorP1":
        new = dict(self.terms)
        new[place] = new.get(place, Fraction(0)) + coefficient
        return DivisorP1(new)

    def max_coefficient(self) -> Fraction:
        """Largest coefficient, 0 for the empty divisor."""
        return max(self.terms.values(), default=Fraction(0))

    def __iter__(self) -> Iterator[tuple[Place, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DivisorP1) and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{format_rational(c)}*({p.label()})" for p, c in self)
        return f"DivisorP1({body or '0'})"


# ---------------------------------------------------------------------------
# Valuations and place profiles
# ---------------------------------------------------------------------------


def valuation(form: BinaryForm, place: Place) -> Valuation:
    """Order of vanishing of the form at the place (INF for the zero form)."""
    if form.is_zero():
        return INF
    if place.is_infinity:
        return form.val_at_infinity()
    return form.dehomogenize().valuation_at(place.q)  # type: ignore[arg-type]


def place_profile(
    forms: Sequence[BinaryForm],
) -> list[tuple[Place, tuple[Valuation, ...]]]:
    """Partition the common zero locus into places with uniform valuations.

    Returns (place, valuation per input form) pairs covering the zero locus
    of the product of the nonzero inputs.  Clusters are split by gcd until
    every input form has constant order of vanishing on each cluster; they
    need not be irreducible.  Output order: infinity first, then finite
    clusters by (degree, coefficients).
    """
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        raise ExactMathError("indeterminate profile: all forms are zero")

    dehoms = [f.dehomogenize() for f in nonzero]
    product = UniPoly.one()
    for p in dehoms:
        if p.degree is not None and p.degree > 0:
            product = product * p
    clusters: list[UniPoly] = []
    if product.degree is not None and product.degree > 0:
        clusters = [product.squarefree_part()]

    # Split any cluster on which some form's order of vanishing is not
    # uniform: after removing q^k exactly, a residual common factor with q
    # tells the cluster apart.
    changed = True
    while changed:
        changed = False
        for poly in dehoms:
            refined: list[UniPoly] = []
            for q in clusters:
                k = poly.valuation_at(q)
                reduced = poly
                for _ in range(int(k)):
                    reduced = reduced.exact_div(q)
                g = q.gcd(reduced)
                if g.degree is not None and 0 < g.degree < q.degree:
                    refined.extend([g.monic(), q.exact_div(g).monic()])
                    changed = True
                else:
                    refined.append(q)
            clusters = refined

    result: list[tuple[Place, tuple[Valuation, ...]]] = []
    inf_values = tuple(valuation(f, Place.infinity()) for f in forms)
    if any(v is INF or v > 0 for v, f in zip(inf_values, forms) if not f.is_zero()):
        result.append((Place.infinity(), inf_values))
    finite_places = sorted((Place.finite(q) for q in clusters), key=Place.sort_key)
    for place in finite_places:
        result.append((place, tuple(valuation(f, place) for f in forms)))
    return result


def mobius(form: BinaryForm, g: Sequence[Sequence[Union[int, Fraction]]]) -> BinaryForm:
    """Compose the form with the linear substitution (s, t) -> g . (s, t)."""
    a, b = Fraction(g[0][0]), Fraction(g[0][1])
    c, d = Fraction(g[1][0]), Fraction(g[1][1])
    if a * d - b * c == 0:
        raise ExactMathError("mobius substitution matrix is singular")
    s_image = BinaryForm(1, (a, b))  # a*s + b*t
    t_image = BinaryForm(1, (c, d))
    result = BinaryForm.zero(form.degree)
    for i, coefficient in enumerate(form.coeffs):
        if coefficient == 0:
            continue
        term = (s_image ** (form.degree - i)) * (t_image**i)
        result = result + term.scale(coefficient)
    return result
