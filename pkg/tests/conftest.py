"""Shared test fixtures and independent oracles.

The oracle functions below deliberately avoid the library's vectorized code
paths: they re-derive the same quantities with plain Python loops straight
from the definitions, so agreement between the two is meaningful evidence
rather than the implementation testing itself. Treat them as frozen; fixes
belong in the library, not here.
"""

from __future__ import annotations

import random
from typing import Sequence

import pytest

from iaa import Dataset, DomainGrid, Interval, ResponseRecord

WORDS = (
    "impossible to do",
    "extremely difficult",
    "moderately difficult",
    "a little bit difficult",
    "not at all difficult",
)
GROUPS = ("patient", "physio", "surgeon")

# Where on the 0..10 scale each word's responses concentrate, low to high.
ANCHORS = (0.8, 2.2, 4.5, 6.5, 9.0)


def membership_oracle(
    intervals: Sequence[tuple[float, float]],
    xs: Sequence[float],
    tol: float = 1e-9,
) -> list[float]:
    """Agreement membership from first principles: containment count over N."""
    n = len(intervals)
    out = []
    for x in xs:
        count = 0
        for left, right in intervals:
            if left - tol <= x <= right + tol:
                count += 1
        out.append(count / n)
    return out


def jaccard_oracle(mu_a: Sequence[float], mu_b: Sequence[float]) -> float:
    """Sum-of-minima over sum-of-maxima, accumulated pointwise."""
    if len(mu_a) != len(mu_b):
        raise ValueError("membership vectors differ in length")
    lo = 0.0
    hi = 0.0
    for a, b in zip(mu_a, mu_b):
        lo += min(a, b)
        hi += max(a, b)
    return 1.0 if hi == 0.0 else lo / hi


def centroid_oracle(mu: Sequence[float], xs: Sequence[float]) -> float:
    num = 0.0
    den = 0.0
    for x, m in zip(xs, mu):
        num += x * m
        den += m
    if den == 0.0:
        raise ZeroDivisionError("empty fuzzy set")
    return num / den


def random_interval(
    rng: random.Random, grid: DomainGrid, aligned: bool = False
) -> Interval:
    """Uniform random interval inside the grid bounds.

    With ``aligned=True`` both endpoints land exactly on grid points, which
    some centroid properties require.
    """
    if aligned:
        xs = grid.points()
        i, j = sorted((rng.randrange(xs.size), rng.randrange(xs.size)))
        return Interval(float(xs[i]), float(xs[j]))
    a, b = sorted((rng.uniform(grid.min, grid.max), rng.uniform(grid.min, grid.max)))
    return Interval(a, b)


def random_interval_set(
    rng: random.Random,
    grid: DomainGrid,
    max_n: int = 30,
    aligned: bool = False,
) -> list[Interval]:
    return [
        random_interval(rng, grid, aligned)
        for _ in range(rng.randint(1, max_n))
    ]


def synthetic_dataset(
    seed: int = 2024,
    participants: int = 12,
    grid: DomainGrid | None = None,
    identical_groups: bool = False,
) -> Dataset:
    """Survey-shaped random dataset: three groups answering five words.

    Responses for each word cluster around that word's anchor so the models
    come out in scale order, like real rating-vocabulary data would. With
    ``identical_groups=True`` every group gets a copy of the same response
    set, making all cross-group similarities exactly 1.
    """
    grid = grid or DomainGrid()
    rng = random.Random(seed)
    shared: dict[tuple[int, str], Interval] = {}
    records = []
    for group in GROUPS:
        for p in range(participants):
            pid = f"{group[:3]}{p + 1:02d}"
            for word, anchor in zip(WORDS, ANCHORS):
                key = (p, word)
                if identical_groups and key in shared:
                    interval = shared[key]
                else:
                    center = anchor + rng.uniform(-0.8, 0.8)
                    half = rng.uniform(0.2, 1.5)
                    left = max(grid.min, round(center - half, 2))
                    right = min(grid.max, round(center + half, 2))
                    interval = Interval(min(left, right), max(left, right))
                    shared[key] = interval
                records.append(ResponseRecord(pid, group, word, interval))
    return Dataset(grid, WORDS, tuple(records))


@pytest.fixture
def unit_grid() -> DomainGrid:
    """The worked-example grid: 0..10 at integer steps."""
    return DomainGrid(0, 10, 1)


@pytest.fixture
def tenth_grid() -> DomainGrid:
    return DomainGrid(0, 10, 0.1)


@pytest.fixture
def survey_dataset() -> Dataset:
    return synthetic_dataset()
