"""Log-twisted K-stability of curve bases and adiabatic verdicts.

For a log-twisted Fano curve (P^1, B, T, L) with L = -(K + B + T) of degree
d > 0, point degenerations decide everything.  The three equivalent
criteria, each computed here independently and cross-checked:

  * threshold:  max boundary coefficient versus deg(B + T) / 2,
  * beta:       beta(p) = (1 - b_p) d - d^2/2, minimized over points,
  * delta:      min over points of (1 - b_p) / (d/2) versus 1.

The adiabatic dictionary: a klt-trivial fibration over a curve is uniformly
adiabatically K-stable iff its base datum is log-twisted K-stable, and the
alpha/delta invariants of the total space converge to (inf lct of fibers,
twice that) in the adiabatic limit.  Verdicts carry the label of the
statement that justifies them so reports are auditable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .canbundle import BaseData, base_data, lct_of_fiber, twisted_canonical_degree
from .exactmath import DivisorP1, Place, format_rational
from .weierstrass import FiberConfig, KodairaType


class StabilityError(ValueError):
    """Input outside the hypotheses of the criterion being invoked."""


class InternalInvariantError(AssertionError):
    """Two independent routes to the same quantity disagreed."""


@dataclass(frozen=True)
class LogTwistedCurve:
    """(genus, boundary divisor, twist degree T, polarization degree d).

    Boundary coefficients live in [0, 1); T >= 0 is the degree of the
    numerical twist class; d > 0 is the degree of the polarization.  The
    pair is anticanonically polarized (log-twisted Fano) when genus = 0 and
    d = 2 - deg(boundary) - T.
    """

    genus: int
    boundary: DivisorP1
    moduli_degree: Fraction
    polarization_degree: Fraction

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise StabilityError("genus must be nonnegative")
        if self.polarization_degree <= 0:
            raise StabilityError("polarization degree must be positive")
        if self.moduli_degree < 0:
            raise StabilityError("twist degree must be nonnegative")
        for place, coefficient in self.boundary:
            if not 0 <= coefficient < 1:
                raise StabilityError(
                    f"boundary coefficient {coefficient} at {place.label()} "
                    "outside [0, 1)"
                )

    @property
    def log_twisted_degree(self) -> Fraction:
        """deg(B) + T."""
        return self.boundary.degree() + self.moduli_degree

    def is_fano(self) -> bool:
        return (
            self.genus == 0
            and self.polarization_degree == 2 - self.log_twisted_degree
            and self.polarization_degree > 0
        )


class VerdictTag(enum.Enum):
    UniformlyKStable = "UniformlyKStable"
    KSemistableNotUniform = "KSemistableNotUniform"
    KUnstable = "KUnstable"
    KStableByCY = "KStableByCY"
    KStableByGeneralType = "KStableByGeneralType"


_STABLE_TAGS = (
    VerdictTag.UniformlyKStable,
    VerdictTag.KStableByCY,
    VerdictTag.KStableByGeneralType,
)


class CscKNote(enum.Enum):
    ExistsBySmoothCase = "ExistsBySmoothCase"
    NotApplicable = "NotApplicable"
    Unknown = "Unknown"


@dataclass(frozen=True)
class Verdict:
    tag: VerdictTag
    witness: Optional[Place] = None
    justification: str = ""

    def __post_init__(self) -> None:
        if self.tag is VerdictTag.KUnstable and self.witness is None:
            raise StabilityError("an instability verdict must carry a witness place")

    @property
    def is_uniformly_stable(self) -> bool:
        return self.tag in _STABLE_TAGS

    def to_json_dict(self) -> dict:
        out: dict = {"tag": self.tag.value, "by": self.justification}
        if self.witness is not None:
            out["witness"] = self.witness.label()
        return out

    def __str__(self) -> str:
        w = f" (witness: {self.witness.label()})" if self.witness else ""
        return f"{self.tag.value}{w} [{self.justification}]"


@dataclass(frozen=True)
class AdiabaticReport:
    base_verdict: Verdict
    total_space_verdict: Verdict
    csck_note: CscKNote
    alpha_limit: Fraction
    delta_limit: Fraction

    def __post_init__(self) -> None:
        if self.delta_limit != 2 * self.alpha_limit:
            raise InternalInvariantError("delta limit must equal twice alpha limit")

    def to_json_dict(self) -> dict:
        return {
            "base": self.base_verdict.to_json_dict(),
            "total": self.total_space_verdict.to_json_dict(),
            "csck": self.csck_note.value,
            "alpha_limit": format_rational(self.alpha_limit),
            "delta_limit": format_rational(self.delta_limit),
        }


# -- point invariants --------------------------------------------------------


def beta(pair: LogTwistedCurve, p: Place) -> Fraction:
    """beta of the point degeneration at p: (1 - b_p) d - d^2 / 2.

    On a curve vol(L - x p) = d - x and the pseudoeffective threshold is d,
    so the integral in the valuative criterion closes to d^2/2; the log
    discrepancy of the point is 1 - b_p.
    """
    if pair.genus != 0:
        raise StabilityError("point beta is computed on genus-0 bases")
    d = pair.polarization_degree
    b_p = pair.boundary.coefficient(p)
    return (1 - b_p) * d - d * d / 2


def s_invariant(pair: LogTwistedCurve) -> Fraction:
    """Expected vanishing order S of any point: vol^-1 integral of d - x."""
    return pair.polarization_degree / 2


def j_invariant(pair: LogTwistedCurve, p: Place) -> Fraction:
    """j(p) = tau vol - integral of vol(L - x p) = d^2 / 2, every point alike."""
    d = pair.polarization_degree
    return d * d / 2


def delta(pair: LogTwistedCurve) -> Fraction:
    """min over points of A(p) / S = 2 (1 - b_p) / d.

    The minimum over all of P^1 is attained either at the largest boundary
    coefficient or at a generic point with b = 0, so only those compete.
    """
    if pair.genus != 0:
        raise StabilityError("delta is computed on genus-0 bases")
    d = pair.polarization_degree
    worst = pair.boundary.max_coefficient()
    return 2 * (1 - worst) / d


def perturbed_beta(
    pair: LogTwistedCurve, p: Place, ord_d: Fraction, eps: Fraction
) -> Fraction:
    """beta of the perturbed pair (B + eps*D, T, (1 - eps) L) at p.

    D is an anticanonical Q-divisor with ord_p(D) = ord_d; the boundary
    gains eps*ord_d at p and the polarization rescales by 1 - eps.  At
    eps = 0 this is exactly beta(pair, p).
    """
    eps = Fraction(eps)
    ord_d = Fraction(ord_d)
    if not 0 <= eps < 1:
        raise StabilityError("perturbation parameter must satisfy 0 <= eps < 1")
    d = pair.polarization_degree
    if ord_d < 0 or ord_d > d:
        raise StabilityError("ord_p of an anticanonical divisor lies in [0, d]")
    b_p = pair.boundary.coefficient(p)
    scaled = (1 - eps) * d
    return ((1 - b_p) - eps * ord_d) * scaled - scaled * scaled / 2


# -- verdicts ----------------------------------------------------------------


def _worst_place(boundary: DivisorP1) -> Optional[Place]:
    worst: Optional[Place] = None
    value = Fraction(0)
    for place, coefficient in boundary:
        if coefficient > value:
            worst, value = place, coefficient
    return worst


def fano_verdict(pair: LogTwistedCurve) -> Verdict:
    """K-stability of an anticanonically polarized log-twisted curve.

    Uniformly K-stable iff max b_p < (deg B + T)/2, semistable at equality,
    K-unstable beyond it with the extremal point as witness.  The delta and
    min-beta trichotomies are recomputed independently and must agree.
    """
    if not pair.is_fano():
        raise StabilityError(
            "pair is not log-twisted Fano; use curve_verdict for the dispatch"
        )
    d = pair.polarization_degree
    threshold = pair.log_twisted_degree / 2
    worst_value = pair.boundary.max_coefficient()

    delta_value = delta(pair)
    min_beta = min(
        [beta(pair, place) for place, _ in pair.boundary] + [d - d * d / 2]
    )
    threshold_sign = (worst_value > threshold) - (worst_value < threshold)
    delta_sign = (1 > delta_value) - (1 < delta_value)
    beta_sign = (0 > min_beta) - (0 < min_beta)
    if not threshold_sign == delta_sign == beta_sign:
        raise InternalInvariantError(
            f"threshold/delta/beta disagree: {threshold_sign}/{delta_sign}/{beta_sign}"
        )

    by = (
        f"Cor. appc / Thm P^1: max coefficient {format_rational(worst_value)} vs "
        f"deg(B+T)/2 = {format_rational(threshold)}; delta = {format_rational(delta_value)}"
    )
    if threshold_sign < 0:
        return Verdict(VerdictTag.UniformlyKStable, None, by)
    if threshold_sign == 0:
        return Verdict(VerdictTag.KSemistableNotUniform, None, by)
    return Verdict(VerdictTag.KUnstable, _worst_place(pair.boundary), by)


def curve_verdict(pair: LogTwistedCurve) -> Verdict:
    """Dispatch on the sign of deg(K + B + T) = (2g - 2) + deg B + T."""
    kappa = Fraction(2 * pair.genus - 2) + pair.log_twisted_degree
    if kappa < 0:
        if pair.genus != 0:
            raise StabilityError("log-twisted Fano curve must be rational")
        return fano_verdict(pair)
    if kappa == 0:
        # Boundary coefficients < 1 make the pair klt, hence uniformly stable.
        return Verdict(
            VerdictTag.KStableByCY, None, "Prop. bhj9394(1): log-twisted Calabi-Yau"
        )
    return Verdict(
        VerdictTag.KStableByGeneralType, None, "Prop. bhj9394(2): log-twisted general type"
    )


def _is_two_i0_star(config: FiberConfig) -> bool:
    # The only semistable-but-polystable boundary the GIT comparison pins
    # down: exactly two I0* fibers (possibly one conjugate pair) and m = 1.
    if config.chi != 1 or config.multiple_fiber_multiplicity() != 1:
        return False
    if not all(e.type == KodairaType.I_star(0) for e in config.entries):
        return False
    return sum(e.place_degree for e in config.entries) == 2


def alpha_delta_limits(config: FiberConfig) -> tuple[Fraction, Fraction]:
    """Adiabatic limits of alpha and delta: (inf fiber lct, twice that)."""
    inf_lct = min(
        [lct_of_fiber(e.type, e.multiplicity) for e in config.entries],
        default=Fraction(1),
    )
    inf_lct = min(inf_lct, Fraction(1))
    return inf_lct, 2 * inf_lct


def pair_from_base(base: BaseData) -> LogTwistedCurve:
    """The log-twisted curve a base datum defines, polarized by |deg kappa|.

    For the Fano range deg(B + M) < 2 the natural polarization is the
    anticanonical degree 2 - deg(B + M); otherwise the degree only matters
    through its positivity and 1 is used at the Calabi-Yau boundary.
    """
    s = base.total_degree()
    d = abs(2 - s) if s != 2 else Fraction(1)
    return LogTwistedCurve(
        genus=0,
        boundary=base.discriminant_divisor,
        moduli_degree=base.moduli_degree,
        polarization_degree=d,
    )


def adiabatic_verdict(config: FiberConfig) -> AdiabaticReport:
    """Stability of the total space over P^1 from its fiber configuration.

    Builds the base datum through the canonical bundle formula, decides
    log-twisted K-stability of the base, and transfers the verdict to the
    total space (the adiabatic equivalence for klt-trivial fibrations over
    a curve).  A uniform verdict for a smooth total space comes with a cscK
    existence note.
    """
    base = base_data(config)
    pair = pair_from_base(base)
    base_verdict = curve_verdict(pair)

    if base_verdict.tag is VerdictTag.KSemistableNotUniform and _is_two_i0_star(config):
        base_verdict = Verdict(
            base_verdict.tag,
            base_verdict.witness,
            base_verdict.justification
            + "; polystable: two I0*-type fibers (GIT comparison)",
        )

    if base_verdict.tag is VerdictTag.KUnstable:
        total = Verdict(
            VerdictTag.KUnstable,
            base_verdict.witness,
            "Cor. 234 via Thm dd: base is log-twisted K-unstable",
        )
        note = CscKNote.NotApplicable
    elif base_verdict.is_uniformly_stable:
        total = Verdict(
            base_verdict.tag,
            None,
            "Cor. K-fib / Thm dd: base is log-twisted K-stable",
        )
        note = CscKNote.ExistsBySmoothCase
    else:
        total = Verdict(
            base_verdict.tag,
            None,
            "Thm dd: base is log-twisted K-semistable, not uniformly",
        )
        note = CscKNote.Unknown

    alpha_limit, delta_limit = alpha_delta_limits(config)
    return AdiabaticReport(
        base_verdict=base_verdict,
        total_space_verdict=total,
        csck_note=note,
        alpha_limit=alpha_limit,
        delta_limit=delta_limit,
    )


def canonical_fibration_verdict(genus: int, base: BaseData, klt: bool) -> Verdict:
    """Adiabatic verdict for a canonically polarized surface fibration.

    deg kappa > 0 gives uniform stability, deg kappa = 0 gives uniform
    stability for klt pairs and plain semistability otherwise; for
    deg kappa < 0 the verdict defers to the Fano criterion and is only
    conclusive when that criterion is uniform.
    """
    kappa = twisted_canonical_degree(genus, base)
    if kappa > 0:
        return Verdict(
            VerdictTag.UniformlyKStable, None, "Cor. j2e: deg kappa > 0"
        )
    if kappa == 0:
        if klt:
            return Verdict(
                VerdictTag.UniformlyKStable, None, "Cor. j2e: deg kappa = 0, klt"
            )
        return Verdict(
            VerdictTag.KSemistableNotUniform, None, "Cor. j2e: deg kappa = 0, lc"
        )
    pair = LogTwistedCurve(
        genus=0,
        boundary=base.discriminant_divisor,
        moduli_degree=base.moduli_degree,
        polarization_degree=-kappa,
    )
    fano = fano_verdict(pair)
    if fano.tag is VerdictTag.UniformlyKStable:
        return Verdict(
            VerdictTag.UniformlyKStable,
            None,
            "Cor. d2e: base is uniformly Ding-stable log-twisted Fano",
        )
    return Verdict(
        VerdictTag.KSemistableNotUniform,
        None,
        "theorem coverage gap: Cor. d2e needs a uniformly Ding-stable base "
        f"(base verdict: {fano.tag.value})",
    )
