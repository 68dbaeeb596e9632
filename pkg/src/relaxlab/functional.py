"""Pairwise-difference energies and their weak lower-semicontinuous envelope.

The raw energy of ``u`` under an integrand ``f`` is the double integral of
``f(u(x) - u(y))`` over the unit square.  For piecewise-constant ``u`` this
is the exact finite sum ``sum_ij m_i * m_j * f(v_i - v_j)`` over the value
histogram; no quadrature is involved.

Under the triple-well integrand the envelope has a closed form.  Writing
``m`` for the mean of ``u``, the minimizing weak limits oscillate between a
lower level ``z`` and ``z + 1``, with ``z`` constrained by
``z <= ess inf u`` and ``ess sup u <= z + 1``.  The envelope value is the
constrained minimum of ``(m - z)**2 + (m - z - 1)**2``.  Three equivalent
routes are implemented (a direct projection formula, the quadratic in the
lower level, and the quadratic in the well midpoint); they must always agree
within ``eps_check`` and serve as mutual cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .numerics import (
    DEFAULT_TOL,
    INF,
    TolerancePolicy,
    ValidationError,
    clamp,
    ext_to_jsonable,
    weighted_term,
)
from .pcfn import PiecewiseConstantFn, histogram, stats


def energy(
    u: PiecewiseConstantFn,
    f: Callable[[float], float],
    tol: TolerancePolicy = DEFAULT_TOL,
) -> float:
    """Double integral of ``f(u(x) - u(y))`` over the unit square.

    Exact for piecewise-constant ``u``: the histogram reduces the double
    integral to a sum over ordered value pairs.  Infinity is a legitimate
    value, not an error.
    """
    hist = histogram(u, tol)
    total = 0.0
    for vi, mi in zip(hist.values, hist.measures):
        for vj, mj in zip(hist.values, hist.measures):
            total += weighted_term(mi * mj, f(vi - vj))
    return total


def convex_lower_bound(u: PiecewiseConstantFn, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Energy under the convexified integrand: 0 iff the range of ``u`` is <= 1."""
    ess_inf, ess_sup, _ = stats(u)
    return 0.0 if ess_sup - ess_inf <= 1.0 + tol.eps_check else INF


def two_value_feasible(u: PiecewiseConstantFn, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True iff ``u`` takes at most two values and, if two, at distance 1.

    Equivalent to finiteness of the raw triple-well energy: with three or
    more values, or two values at distance other than 1, some difference of
    positive measure falls outside the wells.
    """
    hist = histogram(u, tol)
    if len(hist) > 2:
        return False
    if len(hist) == 2:
        return abs((hist.values[1] - hist.values[0]) - 1.0) <= tol.eps_well
    return True


class RelaxationCase(str, Enum):
    """Which part of the well-level constraint is active at the optimum."""

    UNCONSTRAINED = "unconstrained"  # range <= 1/2: the constraint is slack
    SINGLE_Z = "single_z"            # range = 1: a single admissible level
    INTERIOR = "interior"            # range in (1/2, 1): boundary-clamped
    INFEASIBLE = "infeasible"        # range > 1: no finite-energy weak limit


@dataclass(frozen=True)
class RelaxationResult:
    """Envelope value and the optimal oscillation parameters.

    w_star is the offset of the optimal well midpoint from the mean of
    ``u``; z_star is the optimal lower well level (z_star = w_star + mean
    - 1/2); t = mean - z_star is the limiting measure of the upper wells.
    For infeasible inputs the parameters are None and the value is +inf.
    """

    feasible: bool
    w_star: Optional[float]
    z_star: Optional[float]
    t: Optional[float]
    value: float
    case: RelaxationCase

    def to_json_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "w_star": self.w_star,
            "z_star": self.z_star,
            "t": self.t,
            "value": ext_to_jsonable(self.value),
            "case": self.case.value,
        }


def _infeasible() -> RelaxationResult:
    return RelaxationResult(False, None, None, None, INF, RelaxationCase.INFEASIBLE)


def _classify(rng: float, tol: TolerancePolicy) -> RelaxationCase:
    if rng <= 0.5 + tol.eps_check:
        return RelaxationCase.UNCONSTRAINED
    if abs(rng - 1.0) <= tol.eps_check:
        return RelaxationCase.SINGLE_Z
    return RelaxationCase.INTERIOR


def _project(x: float, lo: float, hi: float) -> float:
    # Ranges within eps_check above 1 leave a sliver lo > hi; collapse it.
    if lo > hi:
        return 0.5 * (lo + hi)
    return clamp(x, lo, hi)


def relax_closed_form(u: PiecewiseConstantFn, tol: TolerancePolicy = DEFAULT_TOL) -> RelaxationResult:
    """Envelope via projection of the midpoint offset.

    With the mean subtracted, the value is ``2*w**2 + 1/2`` minimized over
    ``w`` in [ess_sup - mean - 1/2, ess_inf - mean + 1/2]; the objective is
    strictly convex, so clamping 0 into the interval is the exact minimizer.
    """
    ess_inf, ess_sup, mean = stats(u)
    rng = ess_sup - ess_inf
    if rng > 1.0 + tol.eps_check:
        return _infeasible()
    w = _project(0.0, ess_sup - mean - 0.5, ess_inf - mean + 0.5)
    value = 2.0 * w * w + 0.5
    z = w + mean - 0.5
    return RelaxationResult(True, w, z, mean - z, value, _classify(rng, tol))


def relax_via_lower_well(u: PiecewiseConstantFn, tol: TolerancePolicy = DEFAULT_TOL) -> RelaxationResult:
    """Envelope via the quadratic in the lower well level.

    Minimizes ``(mean - z)**2 + (mean - z - 1)**2`` over z in
    [ess_sup - 1, ess_inf].
    """
    ess_inf, ess_sup, mean = stats(u)
    rng = ess_sup - ess_inf
    if rng > 1.0 + tol.eps_check:
        return _infeasible()
    z = _project(mean - 0.5, ess_sup - 1.0, ess_inf)
    value = (mean - z) ** 2 + (mean - z - 1.0) ** 2
    return RelaxationResult(True, z - mean + 0.5, z, mean - z, value, _classify(rng, tol))


def relax_via_midpoint(u: PiecewiseConstantFn, tol: TolerancePolicy = DEFAULT_TOL) -> RelaxationResult:
    """Envelope via the quadratic in the absolute well midpoint.

    Minimizes ``2*mean**2 - 4*w*mean + 2*w**2 + 1/2`` over w in
    [ess_sup - 1/2, ess_inf + 1/2]; here w is the midpoint itself, and the
    reported offset is w - mean.
    """
    ess_inf, ess_sup, mean = stats(u)
    rng = ess_sup - ess_inf
    if rng > 1.0 + tol.eps_check:
        return _infeasible()
    w = _project(mean, ess_sup - 0.5, ess_inf + 0.5)
    value = 2.0 * mean * mean - 4.0 * w * mean + 2.0 * w * w + 0.5
    z = w - 0.5
    return RelaxationResult(True, w - mean, z, mean - z, value, _classify(rng, tol))


def unit_range_energy(u: PiecewiseConstantFn, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Envelope value in the pinned case (range exactly 1).

    When the range of ``u`` equals 1 the only admissible lower level is
    ``ess inf u`` and the envelope is
    ``(mean - ess_inf)**2 + (mean - ess_sup)**2``.
    """
    ess_inf, ess_sup, mean = stats(u)
    if abs((ess_sup - ess_inf) - 1.0) > tol.eps_check:
        raise ValidationError(
            f"range must equal 1 within eps_check, got {ess_sup - ess_inf!r}"
        )
    return (mean - ess_inf) ** 2 + (mean - ess_sup) ** 2
