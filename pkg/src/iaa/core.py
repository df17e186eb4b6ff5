"""Interval algebra and agreement-based type-1 fuzzy sets.

A group of respondents answers a question by marking closed intervals on a
continuous rating scale. Stacking those intervals yields a non-parametric
fuzzy set: the membership degree at a scale point is the fraction of
respondent intervals covering that point, so a set built from N intervals only
takes values k/N. Membership functions are sampled on a uniform grid over the
scale; the grid samples the underlying step function, it never moves interval
endpoints.

Everything here is a pure function over immutable values and is safe to call
concurrently. Results do not depend on the order of the input intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import (
    DomainViolationError,
    EmptyInputError,
    EmptySetError,
    GridMismatchError,
    InvalidIntervalError,
)

# Grid points come from floating-point linspace, so tests against them allow
# this much slack instead of demanding bit-exact values. Interval endpoints
# themselves are never snapped to the grid.
SNAP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DomainGrid:
    """Uniform discretization of the response scale [min, max].

    ``step`` must evenly divide the span (within rounding tolerance). Grid
    points are min, min + step, ..., max with both endpoints exact.
    """

    min: float = 0.0
    max: float = 10.0
    step: float = 0.01

    def __post_init__(self):
        for name in ("min", "max", "step"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"grid {name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.min >= self.max:
            raise ValueError(f"grid min {self.min} must be below max {self.max}")
        if self.step <= 0:
            raise ValueError(f"grid step must be positive, got {self.step}")
        span = (self.max - self.min) / self.step
        if abs(span - round(span)) > SNAP_TOLERANCE:
            raise ValueError(
                f"step {self.step} does not evenly divide [{self.min}, {self.max}]"
            )

    @property
    def point_count(self) -> int:
        """Number of grid points, including both endpoints."""
        return round((self.max - self.min) / self.step) + 1

    @cached_property
    def _points(self) -> np.ndarray:
        xs = np.linspace(self.min, self.max, self.point_count)
        xs.flags.writeable = False
        return xs

    def points(self) -> np.ndarray:
        """Read-only array of grid points."""
        return self._points


@dataclass(frozen=True, order=True)
class Interval:
    """Closed interval [left, right] on the response scale.

    A degenerate interval with left == right models a point response.
    """

    left: float
    right: float

    def __post_init__(self):
        for name in ("left", "right"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidIntervalError(
                    f"interval {name} endpoint must be finite, got {value!r}"
                )
            object.__setattr__(self, name, float(value))
        if self.left > self.right:
            raise InvalidIntervalError(
                f"interval left endpoint {self.left} exceeds right endpoint {self.right}"
            )

    @property
    def length(self) -> float:
        return self.right - self.left

    def contains(self, x: float, tol: float = SNAP_TOLERANCE) -> bool:
        """Closed containment test with slack for float grid points."""
        return self.left - tol <= x <= self.right + tol

    def within(self, grid: DomainGrid, tol: float = SNAP_TOLERANCE) -> bool:
        return self.left >= grid.min - tol and self.right <= grid.max + tol

    def shifted(self, delta: float) -> "Interval":
        return Interval(self.left + delta, self.right + delta)


@dataclass(frozen=True, eq=False)
class FuzzySet:
    """Membership function sampled at the points of a domain grid."""

    grid: DomainGrid
    memberships: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.memberships, dtype=np.float64)
        if mu.ndim != 1 or mu.size != self.grid.point_count:
            raise ValueError(
                f"expected {self.grid.point_count} membership values, got shape {mu.shape}"
            )
        if np.any(mu < 0.0) or np.any(mu > 1.0) or not np.all(np.isfinite(mu)):
            raise ValueError("membership degrees must lie in [0, 1]")
        mu = mu.copy()
        mu.flags.writeable = False
        object.__setattr__(self, "memberships", mu)


def build_iaa(intervals: Iterable[Interval], grid: DomainGrid) -> FuzzySet:
    """Combine respondent intervals into an agreement fuzzy set.

    Membership at grid point x is |{i : l_i <= x <= r_i}| / N with closed
    endpoints on both sides, N being the number of intervals supplied (so N
    shrinks when respondents skip a question). A set of intervals that all
    miss the grid points entirely (a point response between grid points)
    yields an everywhere-zero set.
    """
    ivs = list(intervals)
    if not ivs:
        raise EmptyInputError("at least one interval is required to build a fuzzy set")
    for pos, iv in enumerate(ivs):
        if not iv.within(grid):
            raise DomainViolationError(
                f"interval {pos} [{iv.left}, {iv.right}] lies outside "
                f"the domain [{grid.min}, {grid.max}]"
            )
    xs = grid.points()
    counts = np.zeros(xs.shape, dtype=np.int64)
    for iv in ivs:
        counts += (xs >= iv.left - SNAP_TOLERANCE) & (xs <= iv.right + SNAP_TOLERANCE)
    return FuzzySet(grid, counts / len(ivs))


def jaccard(a: FuzzySet, b: FuzzySet) -> float:
    """Jaccard similarity of two fuzzy sets on the same grid.

    Sum of pointwise minima over sum of pointwise maxima across the whole
    grid; points outside both supports contribute zero to both sums, so the
    result is unchanged by restricting to the union of supports. Two
    everywhere-zero sets count as identical (1.0) to keep reflexivity.
    """
    if a.grid != b.grid:
        raise GridMismatchError(
            f"grids differ: [{a.grid.min}, {a.grid.max}] step {a.grid.step} "
            f"vs [{b.grid.min}, {b.grid.max}] step {b.grid.step}"
        )
    lo = float(np.minimum(a.memberships, b.memberships).sum())
    hi = float(np.maximum(a.memberships, b.memberships).sum())
    if hi == 0.0:
        return 1.0
    return lo / hi


def centroid(fs: FuzzySet) -> float:
    """Membership-weighted mean of the grid points."""
    mu = fs.memberships
    total = float(mu.sum())
    if total == 0.0:
        raise EmptySetError("centroid of an everywhere-zero fuzzy set is undefined")
    return float((fs.grid.points() * mu).sum()) / total


def height(fs: FuzzySet) -> float:
    """Maximum membership degree; 1.0 means some point lies in every interval."""
    return float(fs.memberships.max())


def support_size(fs: FuzzySet) -> float:
    """Grid measure of the support: step times the number of positive points.

    Counting is closed on both endpoints, so a single interval of length L
    measures L plus one step (e.g. [3, 7] at step 0.1 reports 4.1). The
    convention is reported as-is rather than corrected, to keep results
    reproducible bit for bit.
    """
    return fs.grid.step * int(np.count_nonzero(fs.memberships))


def mode_count(fs: FuzzySet) -> int:
    """Number of agreement peaks of a piecewise-constant membership function.

    A peak is a maximal run of equal membership values strictly greater than
    both neighbouring runs, with the domain boundaries treated as lower.
    Zero-valued runs never count, so an everywhere-zero set has no modes.
    More than one peak signals distinct interpretations of the same word.
    """
    mu = fs.memberships
    change = np.flatnonzero(np.diff(mu) != 0.0)
    values = mu[np.concatenate(([0], change + 1))]
    last = values.size - 1
    count = 0
    for i, v in enumerate(values):
        if v <= 0.0:
            continue
        if (i == 0 or values[i - 1] < v) and (i == last or values[i + 1] < v):
            count += 1
    return count
