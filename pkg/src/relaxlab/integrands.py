"""The integrand family for pairwise-difference energies.

Four kinds, all even and nonnegative, all mapping a real difference to an
extended real:

* ``TripleWell``: 0 at -1 and 1, value 1 at 0, +inf everywhere else.  The
  wells have infinite depth: any difference off {-1, 0, 1} is forbidden.
* ``TripleWellConvexEnvelope``: the lower-semicontinuous convex envelope of
  the triple well, i.e. 0 on [-1, 1] and +inf outside.
* ``FiniteWellApprox(n)``: the finite approximation
  ``min(n*(z-1)**2, n*(z+1)**2, 1 + n*z**2)``, which increases pointwise in
  ``n`` to the triple well.
* ``TabulatedIntegrand``: values on a finite grid, linear between finite
  neighbors, +inf next to an infinite neighbor and outside the grid.

``convexify`` computes the lower convex envelope of a tabulated integrand
from the lower hull of its finite epigraph points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import (
    DEFAULT_TOL,
    INF,
    TolerancePolicy,
    ValidationError,
    ext_from_jsonable,
    ext_to_jsonable,
)


def triple_well(z: float, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Triple well: 0 at +-1, 1 at 0, +inf otherwise (within ``eps_well``)."""
    if abs(z - 1.0) <= tol.eps_well or abs(z + 1.0) <= tol.eps_well:
        return 0.0
    if abs(z) <= tol.eps_well:
        return 1.0
    return INF


def triple_well_convex_envelope(z: float, tol: TolerancePolicy = DEFAULT_TOL) -> float:
    """Convex envelope of the triple well: 0 on [-1, 1], +inf outside."""
    if abs(z) <= 1.0 + tol.eps_well:
        return 0.0
    return INF


def finite_well_approx(n: int, z: float) -> float:
    """Finite approximant ``min(n*(z-1)**2, n*(z+1)**2, 1 + n*z**2)``.

    Nondecreasing in ``n``, everywhere finite, equal to the triple well at
    {-1, 0, 1} for every ``n >= 1``, and diverging elsewhere as ``n`` grows.
    """
    if n < 1:
        raise ValidationError(f"approximation index must be >= 1, got {n!r}")
    return min(n * (z - 1.0) ** 2, n * (z + 1.0) ** 2, 1.0 + n * z * z)


@dataclass(frozen=True)
class TripleWell:
    """Callable triple-well integrand."""

    tol: TolerancePolicy = field(default=DEFAULT_TOL)

    def __call__(self, z: float) -> float:
        return triple_well(z, self.tol)


@dataclass(frozen=True)
class TripleWellConvexEnvelope:
    """Callable convex envelope of the triple well."""

    tol: TolerancePolicy = field(default=DEFAULT_TOL)

    def __call__(self, z: float) -> float:
        return triple_well_convex_envelope(z, self.tol)


@dataclass(frozen=True)
class FiniteWellApprox:
    """Callable finite approximant of the triple well."""

    n: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"approximation index must be an integer >= 1, got {self.n!r}")

    def __call__(self, z: float) -> float:
        return finite_well_approx(self.n, z)


class TabulatedIntegrand:
    """Integrand given by values on a strictly increasing grid.

    Between grid points the value is the linear interpolant when both
    neighbors are finite and +inf otherwise; outside the grid it is +inf.
    The infinite extension is the conservative choice: tabulation never
    invents finiteness.
    """

    def __init__(self, zs, vals) -> None:
        zs = np.asarray(zs, dtype=float)
        vals = np.asarray(vals, dtype=float)
        if zs.ndim != 1 or vals.ndim != 1 or zs.size == 0:
            raise ValidationError("zs and vals must be nonempty 1-d arrays")
        if zs.size != vals.size:
            raise ValidationError(f"length mismatch: {zs.size} grid points, {vals.size} values")
        if not np.all(np.isfinite(zs)):
            i = int(np.flatnonzero(~np.isfinite(zs))[0])
            raise ValidationError(f"zs[{i}] is not finite")
        if np.any(np.diff(zs) <= 0):
            i = int(np.flatnonzero(np.diff(zs) <= 0)[0]) + 1
            raise ValidationError(f"zs[{i}] does not increase strictly")
        bad = np.isnan(vals) | (vals == -np.inf) | (vals < 0)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise ValidationError(f"vals[{i}] must be a nonnegative real or inf, got {vals[i]!r}")
        self.zs = zs
        self.vals = vals
        self.zs.setflags(write=False)
        self.vals.setflags(write=False)

    def __call__(self, z: float) -> float:
        zs, vals = self.zs, self.vals
        if z < zs[0] or z > zs[-1]:
            return INF
        i = int(np.searchsorted(zs, z))
        if i < zs.size and zs[i] == z:
            return float(vals[i])
        lo, hi = vals[i - 1], vals[i]
        if not (np.isfinite(lo) and np.isfinite(hi)):
            return INF
        s = (z - zs[i - 1]) / (zs[i] - zs[i - 1])
        return float(lo + s * (hi - lo))

    @property
    def is_finite(self) -> bool:
        """True when every tabulated value is finite."""
        return bool(np.all(np.isfinite(self.vals)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TabulatedIntegrand)
            and np.array_equal(self.zs, other.zs)
            and np.array_equal(self.vals, other.vals)
        )

    def __repr__(self) -> str:
        return f"TabulatedIntegrand(zs={self.zs.tolist()!r}, vals={self.vals.tolist()!r})"

    def to_json_dict(self) -> dict:
        return {
            "zs": [float(z) for z in self.zs],
            "vals": [ext_to_jsonable(v) for v in self.vals],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "TabulatedIntegrand":
        if not isinstance(obj, dict) or "zs" not in obj or "vals" not in obj:
            raise ValidationError('tabulated integrand must be {"zs": [...], "vals": [...]}')
        vals = [ext_from_jsonable(v, f"vals[{i}]") for i, v in enumerate(obj["vals"])]
        return cls(obj["zs"], vals)


def convexify(tab: TabulatedIntegrand) -> TabulatedIntegrand:
    """Lower convex envelope of a tabulated integrand.

    Takes the lower hull of the finite points of the graph (monotone-chain
    sweep over the already-sorted grid), keeping only strict hull vertices;
    collinear interior points are dropped.  The result is convex, agrees
    with or lies below the input at every grid point, and is +inf outside
    the hull's z-range.
    """
    finite = np.isfinite(tab.vals)
    if not np.any(finite):
        raise ValidationError("all grid values are infinite: empty effective domain")
    xs = tab.zs[finite]
    ys = tab.vals[finite]
    hull_x: list[float] = []
    hull_y: list[float] = []
    for x, y in zip(xs, ys):
        while len(hull_x) >= 2:
            cross = (hull_x[-1] - hull_x[-2]) * (y - hull_y[-2]) - (
                hull_y[-1] - hull_y[-2]
            ) * (x - hull_x[-2])
            if cross <= 0.0:
                hull_x.pop()
                hull_y.pop()
            else:
                break
        hull_x.append(float(x))
        hull_y.append(float(y))
    return TabulatedIntegrand(np.array(hull_x), np.array(hull_y))


def tabulate(f, zs) -> TabulatedIntegrand:
    """Sample a callable integrand on a grid."""
    zs = np.asarray(zs, dtype=float)
    return TabulatedIntegrand(zs, np.array([f(z) for z in zs]))
