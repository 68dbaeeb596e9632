"""Extended-real conventions, shared tolerances, and the error hierarchy.

Energies in this package take values in [0, +inf].  Rather than wrapping
floats, we use plain ``float`` with ``math.inf`` as the single infinite
value and validate at the boundaries: NaN and -inf are rejected on input,
never propagated.  The one place IEEE arithmetic disagrees with integration
theory is ``0 * inf`` (NaN in IEEE, 0 for a null set in a Lebesgue sum);
:func:`weighted_term` pins that down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf


class RelaxlabError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RelaxlabError, ValueError):
    """Input violates a documented contract (bad value, shape, or schema)."""


class InfeasibleError(RelaxlabError):
    """The requested construction does not exist for this input."""


class ConsistencyError(RelaxlabError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Shared tolerances.

    eps_well:  membership tolerance for the integrand well points; inputs
               arrive through floating-point parsing, so wells are bands.
    eps_eq:    value-equality tolerance when merging histogram entries.
    eps_check: slack for feasibility comparisons and cross-formula checks.
    """

    eps_well: float = 1e-9
    eps_eq: float = 1e-12
    eps_check: float = 1e-10

    def __post_init__(self) -> None:
        for name in ("eps_well", "eps_eq", "eps_check"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be a finite positive real, got {v!r}")


DEFAULT_TOL = TolerancePolicy()


def as_extended(x: float, name: str = "value") -> float:
    """Validate ``x`` as an extended real: finite or +inf, never NaN or -inf."""
    x = float(x)
    if math.isnan(x):
        raise ValidationError(f"{name} is NaN")
    if x == -INF:
        raise ValidationError(f"{name} is -inf; only +inf is representable")
    return x


def ext_add(a: float, b: float) -> float:
    """Sum of extended reals: exact for finite operands, inf-absorbing."""
    return as_extended(a, "a") + as_extended(b, "b")


def weighted_term(weight: float, v: float) -> float:
    """One summand ``weight * v`` of a Lebesgue sum.

    A zero weight returns 0 even for ``v = inf``: null sets do not
    contribute to an integral.  Negative weights indicate a malformed
    measure and are rejected.
    """
    if not (weight >= 0):
        raise ValidationError(f"weight must be nonnegative, got {weight!r}")
    v = as_extended(v, "v")
    if weight == 0.0:
        return 0.0
    return weight * v


def clamp(x: float, lo: float, hi: float) -> float:
    """Nearest point of [lo, hi] to ``x``.

    An empty interval (lo > hi) is an error; callers translate it into
    infeasibility of their own constraint set.
    """
    if lo > hi:
        raise ValidationError(f"empty interval: lo={lo!r} > hi={hi!r}")
    return min(max(x, lo), hi)


def ext_to_jsonable(x: float):
    """JSON encoding of an extended real: finite as a number, +inf as "inf"."""
    return "inf" if x == INF else float(x)


def ext_from_jsonable(v, name: str = "value") -> float:
    """Inverse of :func:`ext_to_jsonable`."""
    if v == "inf":
        return INF
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f'{name}: expected a number or "inf", got {v!r}')
    return as_extended(v, name)
