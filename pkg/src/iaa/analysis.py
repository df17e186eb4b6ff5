"""Group-level modelling and comparison of descriptor words.

The pipeline runs in three stages. First each (group, word) pair gets a
fuzzy-set model built from that group's intervals. Then, for every word that
all groups answered, the groups are compared pairwise by Jaccard similarity,
giving one symmetric matrix per word plus their entry-wise average. Finally a
descriptor table summarises each model (centroid, height, support size, mode
count) and the centroid gaps between adjacent words expose how evenly the
word scale is spaced within each group.

Words that some group never answered are excluded from the similarity stage
rather than silently biasing the average; they are listed in
``AnalysisResult.skipped_words`` with the groups that lack them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import FuzzySet, build_iaa, centroid, height, jaccard, mode_count, support_size
from .errors import (
    EmptyGroupError,
    EmptyInputError,
    EmptySetError,
    GroupListMismatchError,
    UnknownGroupError,
)
from .ingest import Dataset, GroupSpec, select_group


@dataclass(frozen=True)
class SimilarityMatrix:
    """Pairwise Jaccard similarities between groups, one row/column each."""

    groups: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        k = len(self.groups)
        if values.shape != (k, k):
            raise ValueError(f"expected a {k}x{k} matrix, got shape {values.shape}")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    def value(self, a: str, b: str) -> float:
        return float(self.values[self.groups.index(a), self.groups.index(b)])


@dataclass(frozen=True)
class DescriptorRow:
    """Shape summary of one group's model of one word.

    ``centroid`` is NaN when the model has empty support (possible only for
    degenerate intervals that fall between grid points).
    """

    group: str
    word: str
    n_responses: int
    centroid: float
    height: float
    support: float
    modes: int


@dataclass(frozen=True)
class GapRow:
    """Centroid distance between two adjacent words within one group.

    A negative gap means the later word in the questionnaire order landed at
    a smaller centroid, i.e. the group's models violate the intended word
    ordering.
    """

    group: str
    earlier_word: str
    later_word: str
    gap: float
    flags: tuple[str, ...]


@dataclass(frozen=True)
class AnalysisResult:
    dataset: Dataset
    groups: tuple[GroupSpec, ...]
    models: Mapping[str, Mapping[str, FuzzySet]]
    skipped_words: Mapping[str, tuple[str, ...]]
    matrices: Mapping[str, SimilarityMatrix]
    average: SimilarityMatrix | None
    descriptors: tuple[DescriptorRow, ...]
    gaps: tuple[GapRow, ...]
    group_centroid_means: Mapping[str, float]

    def group_names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.groups)


def build_models(
    ds: Dataset, groups: Sequence[GroupSpec]
) -> tuple[dict[str, dict[str, FuzzySet]], dict[str, tuple[str, ...]]]:
    """Fuzzy sets per word and group, plus the words some group left blank.

    Returns ``(models, skipped)`` where ``models[word][group]`` exists only
    for (word, group) pairs with at least one response and ``skipped`` maps
    each incompletely answered word to the groups missing it.
    """
    models: dict[str, dict[str, FuzzySet]] = {}
    skipped: dict[str, tuple[str, ...]] = {}
    for word in ds.words:
        per_group: dict[str, FuzzySet] = {}
        missing: list[str] = []
        for spec in groups:
            intervals = select_group(ds, spec, word)
            if intervals:
                per_group[spec.name] = build_iaa(intervals, ds.grid)
            else:
                missing.append(spec.name)
        if per_group:
            models[word] = per_group
        if missing:
            skipped[word] = tuple(missing)
    return models, skipped


def similarity_matrix(
    sets: Mapping[str, FuzzySet], order: Sequence[str]
) -> SimilarityMatrix:
    """Symmetric unit-diagonal Jaccard matrix over ``order``."""
    k = len(order)
    values = np.ones((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            values[i, j] = values[j, i] = jaccard(sets[order[i]], sets[order[j]])
    return SimilarityMatrix(tuple(order), values)


def average_similarity(matrices: Sequence[SimilarityMatrix]) -> SimilarityMatrix:
    """Entry-wise mean of matrices sharing one group list."""
    if not matrices:
        raise EmptyInputError("no similarity matrices to average")
    groups = matrices[0].groups
    for m in matrices[1:]:
        if m.groups != groups:
            raise GroupListMismatchError(
                f"cannot average matrices over {m.groups} with {groups}"
            )
    stacked = np.stack([m.values for m in matrices])
    return SimilarityMatrix(groups, stacked.mean(axis=0))


def _descriptor_row(group: str, word: str, n: int, fs: FuzzySet) -> DescriptorRow:
    try:
        c = centroid(fs)
    except EmptySetError:
        c = math.nan
    return DescriptorRow(
        group=group,
        word=word,
        n_responses=n,
        centroid=c,
        height=height(fs),
        support=support_size(fs),
        modes=mode_count(fs),
    )


def _gap_rows(
    group: str, words: Sequence[str], centroids: Mapping[str, float]
) -> list[GapRow]:
    present = [w for w in words if w in centroids]
    gaps: list[GapRow] = []
    for earlier, later in zip(present, present[1:]):
        gaps.append(
            GapRow(group, earlier, later, centroids[later] - centroids[earlier], ())
        )
    finite = [g.gap for g in gaps if math.isfinite(g.gap)]
    lo = min(finite) if finite else math.nan
    hi = max(finite) if finite else math.nan
    flagged: list[GapRow] = []
    for g in gaps:
        flags: list[str] = []
        if math.isfinite(g.gap):
            if g.gap == lo:
                flags.append("min")
            if g.gap == hi:
                flags.append("max")
            if g.gap < 0:
                flags.append("ordering_violation")
        flagged.append(GapRow(g.group, g.earlier_word, g.later_word, g.gap, tuple(flags)))
    return flagged


def analyze(ds: Dataset, groups: Sequence[GroupSpec] | None = None) -> AnalysisResult:
    """Run the full pipeline over a dataset.

    ``groups`` defaults to one spec per group label in first-appearance
    order; pass explicit specs to reorder or to add merged groups. Pairwise
    matrices and their average are produced only when at least two groups are
    modelled, so a single-group dataset still yields models and descriptors.
    """
    if groups is None:
        groups = [GroupSpec(name) for name in ds.group_labels()]
    groups = tuple(groups)
    names = [spec.name for spec in groups]
    if len(set(names)) != len(names):
        raise ValueError(f"group names must be distinct, got {names}")
    if not groups:
        raise EmptyInputError("no groups to analyze")

    present = set(ds.group_labels())
    for spec in groups:
        missing = sorted(spec.members - present)
        if missing:
            raise UnknownGroupError(
                f"group spec {spec.name!r} references unknown groups: "
                f"{', '.join(missing)}"
            )
        if not any(rec.group in spec.members for rec in ds.records):
            raise EmptyGroupError(f"group {spec.name!r} has no responses")

    models, skipped = build_models(ds, groups)

    matrices: dict[str, SimilarityMatrix] = {}
    if len(groups) >= 2:
        for word in ds.words:
            if word in models and word not in skipped:
                matrices[word] = similarity_matrix(models[word], names)
    average = average_similarity(list(matrices.values())) if matrices else None

    descriptors: list[DescriptorRow] = []
    gaps: list[GapRow] = []
    centroid_means: dict[str, float] = {}
    for spec in groups:
        centroids: dict[str, float] = {}
        for word in ds.words:
            fs = models.get(word, {}).get(spec.name)
            if fs is None:
                continue
            n = len(select_group(ds, spec, word))
            row = _descriptor_row(spec.name, word, n, fs)
            descriptors.append(row)
            centroids[word] = row.centroid
        finite = [c for c in centroids.values() if math.isfinite(c)]
        centroid_means[spec.name] = (
            sum(finite) / len(finite) if finite else math.nan
        )
        gaps.extend(_gap_rows(spec.name, ds.words, centroids))

    return AnalysisResult(
        dataset=ds,
        groups=groups,
        models=models,
        skipped_words=skipped,
        matrices=matrices,
        average=average,
        descriptors=tuple(descriptors),
        gaps=tuple(gaps),
        group_centroid_means=centroid_means,
    )
