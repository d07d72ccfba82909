"""Solve generator variances that make the two line states indistinguishable.

Security requires the eavesdropper's current variance, voltage variance and
voltage-current cross moment to be identical in the LH and HL states. Given
the four resistors and one anchor variance, those three conditions fix the
remaining variances uniquely; this module evaluates the closed-form solution
and checks the conditions for arbitrary variance sets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import LineState, NoiseVariances, ResistorQuad, theoretical_moments
from .errors import InfeasibleConfigError, SingularDenominatorError, ValidationError

# Denominator magnitudes below SINGULAR_RTOL times the sum of their term
# magnitudes are pure cancellation noise, not meaningful values.
SINGULAR_RTOL = 1e-15

# Both sides of a condition below this magnitude compare absolutely, not
# relatively; the cross moment is legitimately zero for same-pair setups.
_ZERO_SCALE = 1e-30


@dataclass(frozen=True, slots=True)
class SecurityResiduals:
    """Relative mismatch of each observable between the LH and HL states."""

    current_residual: float
    voltage_residual: float
    cross_residual: float

    @property
    def worst(self) -> float:
        return max(self.current_residual, self.voltage_residual, self.cross_residual)

    def within(self, tolerance: float) -> bool:
        """True when all three residuals are below ``tolerance``."""
        return self.worst < tolerance


@dataclass(frozen=True, slots=True)
class Feasibility:
    """Outcome of a feasibility screen: a boolean plus the failure reason."""

    feasible: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.feasible


def _guarded_ratio(name: str, numerator_terms: tuple, denominator_terms: tuple) -> float:
    denominator = sum(denominator_terms)
    scale = sum(abs(t) for t in denominator_terms)
    if abs(denominator) < SINGULAR_RTOL * scale:
        raise SingularDenominatorError(
            f"denominator for {name} is {denominator:.3e} against term scale {scale:.3e}; "
            "the resistor set is too close to degenerate"
        )
    return sum(numerator_terms) / denominator


def solve_variances(quad: ResistorQuad, v_la_sq: float) -> NoiseVariances:
    """Compute the unique variance set securing ``quad``, anchored at ``v_la_sq``.

    The anchor is the variance of Alice's low-state generator; the other three
    are linear in it, so any other anchor can be had by rescaling afterward.

    Raises SingularDenominatorError for near-degenerate resistor sets and
    InfeasibleConfigError when a computed variance is not strictly positive.
    """
    if not isinstance(v_la_sq, (int, float)) or isinstance(v_la_sq, bool):
        raise ValidationError(f"v_la_sq must be a real number, got {v_la_sq!r}")
    if not v_la_sq > 0:
        raise ValidationError(f"v_la_sq must be positive, got {v_la_sq!r}")
    r_la, r_ha, r_lb, r_hb = quad.r_la, quad.r_ha, quad.r_lb, quad.r_hb

    v_hb_sq = v_la_sq * _guarded_ratio(
        "v_hb_sq",
        (r_lb * (r_ha + r_hb), -r_ha * r_hb, -(r_hb**2)),
        (r_la**2, r_lb * (r_la - r_ha), -r_ha * r_la),
    )
    v_ha_sq = v_la_sq * _guarded_ratio(
        "v_ha_sq",
        (r_ha**2, r_lb * (r_hb + r_ha), r_ha * r_hb),
        (r_la**2, r_lb * (r_la + r_hb), r_hb * r_la),
    )
    v_lb_sq = v_la_sq * _guarded_ratio(
        "v_lb_sq",
        (r_lb**2, r_lb * (r_ha - r_hb), -r_ha * r_hb),
        (r_la**2, r_la * (r_hb - r_ha), -r_ha * r_hb),
    )

    for name, value in (("v_hb_sq", v_hb_sq), ("v_ha_sq", v_ha_sq), ("v_lb_sq", v_lb_sq)):
        if not value > 0:
            raise InfeasibleConfigError(name, value)
    return NoiseVariances(v_la_sq=v_la_sq, v_ha_sq=v_ha_sq, v_lb_sq=v_lb_sq, v_hb_sq=v_hb_sq)


def _relative_difference(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs))
    if scale < _ZERO_SCALE:
        return abs(lhs - rhs)
    return abs(lhs - rhs) / scale


def check_security(quad: ResistorQuad, variances: NoiseVariances) -> SecurityResiduals:
    """Measure how far a variance set is from securing the configuration.

    Evaluates the three observables in both states and returns the relative
    difference per observable (absolute when both sides are essentially zero).
    A configuration is secure when all residuals fall below the caller's
    tolerance; see SecurityResiduals.within.
    """
    lh = theoretical_moments(LineState.LH, quad, variances)
    hl = theoretical_moments(LineState.HL, quad, variances)
    return SecurityResiduals(
        current_residual=_relative_difference(lh.current_variance, hl.current_variance),
        voltage_residual=_relative_difference(lh.voltage_variance, hl.voltage_variance),
        cross_residual=_relative_difference(lh.cross_moment, hl.cross_moment),
    )


def is_feasible(quad: ResistorQuad, v_la_sq: float) -> Feasibility:
    """Screen a resistor set: can it be secured with positive variances?

    Never raises for solver failures; the reason lands in the diagnostic.
    """
    try:
        solve_variances(quad, v_la_sq)
    except InfeasibleConfigError as exc:
        return Feasibility(False, f"{exc.variance_name} would be {exc.value:.6g} V**2")
    except SingularDenominatorError as exc:
        return Feasibility(False, str(exc))
    return Feasibility(True)
