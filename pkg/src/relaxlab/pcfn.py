"""Piecewise-constant functions on the unit interval.

A function is a sorted breakpoint vector 0 = b0 < b1 < ... < bk = 1 with one
value per half-open interval [b_{i-1}, b_i).  Every interval has positive
length, so essential inf/sup coincide with the plain min/max of the interval
values.  The value histogram (distinct values with aggregated lengths) is the
sufficient statistic for every pairwise-difference energy in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .numerics import DEFAULT_TOL, TolerancePolicy, ValidationError


class FnStats(NamedTuple):
    ess_inf: float
    ess_sup: float
    mean: float


@dataclass(frozen=True)
class ValueHistogram:
    """Distinct values with their total Lebesgue measure, ascending by value."""

    values: np.ndarray
    measures: np.ndarray

    def __post_init__(self) -> None:
        assert abs(float(np.sum(self.measures)) - 1.0) <= 1e-12, "measures must sum to 1"
        assert np.all(self.measures > 0), "measures must be positive"
        self.values.setflags(write=False)
        self.measures.setflags(write=False)

    def __len__(self) -> int:
        return int(self.values.size)


class PiecewiseConstantFn:
    """A piecewise-constant function on (0, 1)."""

    def __init__(self, breakpoints, values) -> None:
        bp = np.asarray(breakpoints, dtype=float)
        vals = np.asarray(values, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ValidationError("breakpoints must be a 1-d array with at least 2 entries")
        if vals.ndim != 1:
            raise ValidationError("values must be a 1-d array")
        for i, b in enumerate(bp):
            if not math.isfinite(b):
                raise ValidationError(f"breakpoints[{i}] is not finite")
        if bp[0] != 0.0:
            raise ValidationError(f"breakpoints[0] must be 0, got {bp[0]!r}")
        if bp[-1] != 1.0:
            raise ValidationError(f"breakpoints[{bp.size - 1}] must be 1, got {bp[-1]!r}")
        diffs = np.diff(bp)
        if np.any(diffs <= 0):
            i = int(np.flatnonzero(diffs <= 0)[0]) + 1
            raise ValidationError(f"breakpoints[{i}] does not increase strictly")
        if vals.size != bp.size - 1:
            raise ValidationError(
                f"values has {vals.size} entries for {bp.size - 1} intervals"
            )
        for i, v in enumerate(vals):
            if not math.isfinite(v):
                raise ValidationError(f"values[{i}] is not finite")
        self.breakpoints = bp
        self.values = vals
        self.breakpoints.setflags(write=False)
        self.values.setflags(write=False)

    def __repr__(self) -> str:
        return (
            f"PiecewiseConstantFn(breakpoints={self.breakpoints.tolist()!r}, "
            f"values={self.values.tolist()!r})"
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PiecewiseConstantFn)
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values)
        )

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def to_json_dict(self) -> dict:
        return {
            "breakpoints": [float(b) for b in self.breakpoints],
            "values": [float(v) for v in self.values],
        }

    @classmethod
    def from_json_dict(cls, obj) -> "PiecewiseConstantFn":
        if not isinstance(obj, dict):
            raise ValidationError("function input must be a JSON object")
        for key in ("breakpoints", "values"):
            if key not in obj:
                raise ValidationError(f"{key}: missing")
            seq = obj[key]
            if not isinstance(seq, list):
                raise ValidationError(f"{key}: expected a list")
            for i, x in enumerate(seq):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise ValidationError(f"{key}[{i}]: expected a number, got {x!r}")
        return cls(obj["breakpoints"], obj["values"])


def constant(c: float) -> PiecewiseConstantFn:
    """The constant function u = c."""
    return PiecewiseConstantFn([0.0, 1.0], [c])


def step(t: float, upper: float = 1.0, lower: float = 0.0) -> PiecewiseConstantFn:
    """Step taking ``upper`` on (0, t) and ``lower`` on (t, 1)."""
    if not 0.0 < t < 1.0:
        raise ValidationError(f"step location must lie in (0, 1), got {t!r}")
    return PiecewiseConstantFn([0.0, t, 1.0], [upper, lower])


def stats(u: PiecewiseConstantFn) -> FnStats:
    """Essential inf, essential sup, and the mean of ``u``."""
    mean = float(np.dot(u.values, u.lengths))
    return FnStats(float(np.min(u.values)), float(np.max(u.values)), mean)


def histogram(u: PiecewiseConstantFn, tol: TolerancePolicy = DEFAULT_TOL) -> ValueHistogram:
    """Merge intervals whose values agree within ``eps_eq``.

    Entries come out ascending by value; each merged value is the
    measure-weighted mean of its group.
    """
    order = np.argsort(u.values, kind="stable")
    vals = u.values[order]
    meas = u.lengths[order]
    out_vals: list[float] = []
    out_meas: list[float] = []
    group_mass = meas[0]
    group_moment = vals[0] * meas[0]
    prev = vals[0]
    for v, m in zip(vals[1:], meas[1:]):
        if v - prev <= tol.eps_eq:
            group_mass += m
            group_moment += v * m
        else:
            out_vals.append(group_moment / group_mass)
            out_meas.append(group_mass)
            group_mass = m
            group_moment = v * m
        prev = v
    out_vals.append(group_moment / group_mass)
    out_meas.append(group_mass)
    return ValueHistogram(np.array(out_vals), np.array(out_meas))


def shift(u: PiecewiseConstantFn, c: float) -> PiecewiseConstantFn:
    """Add the constant ``c`` to every value; breakpoints are unchanged."""
    return PiecewiseConstantFn(u.breakpoints, u.values + float(c))


def negate(u: PiecewiseConstantFn) -> PiecewiseConstantFn:
    """Pointwise negation."""
    return PiecewiseConstantFn(u.breakpoints, -u.values)


def cumulative_at(u: PiecewiseConstantFn, xs) -> np.ndarray:
    """Exact cumulative integrals of ``u`` from 0 to each point of ``xs``."""
    xs = np.asarray(xs, dtype=float)
    cum = np.concatenate(([0.0], np.cumsum(u.values * u.lengths)))
    idx = np.clip(np.searchsorted(u.breakpoints, xs, side="right") - 1, 0, u.values.size - 1)
    return cum[idx] + u.values[idx] * (xs - u.breakpoints[idx])


def interval_means(u: PiecewiseConstantFn, edges) -> np.ndarray:
    """Exact means of ``u`` on consecutive intervals given by ``edges``."""
    edges = np.asarray(edges, dtype=float)
    cum = cumulative_at(u, edges)
    return np.diff(cum) / np.diff(edges)


def moments(u: PiecewiseConstantFn, max_order: int) -> np.ndarray:
    """Exact monomial moments: integral of u(x) * x**k for k = 0..max_order."""
    a = u.breakpoints[:-1]
    b = u.breakpoints[1:]
    out = np.empty(max_order + 1)
    for k in range(max_order + 1):
        out[k] = float(np.dot(u.values, (b ** (k + 1) - a ** (k + 1)) / (k + 1)))
    return out
