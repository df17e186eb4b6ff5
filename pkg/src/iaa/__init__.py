"""Interval-valued survey modelling with the interval agreement approach.

Respondents mark an interval on a numeric scale instead of ticking a single
point; each word's model is the fuzzy set whose membership at x is the
fraction of respondents whose interval covers x. This package builds those
models, compares them across respondent groups, and ships the tooling around
that: dataset ingestion, report generation, and a small capture service.
"""

from .core import (
    SNAP_TOLERANCE,
    DomainGrid,
    FuzzySet,
    Interval,
    build_iaa,
    centroid,
    height,
    jaccard,
    mode_count,
    support_size,
)
from .analysis import (
    AnalysisResult,
    DescriptorRow,
    GapRow,
    SimilarityMatrix,
    analyze,
    average_similarity,
    build_models,
    similarity_matrix,
)
from .errors import (
    DomainViolationError,
    DuplicateResponseError,
    EmptyGroupError,
    EmptyInputError,
    EmptySetError,
    GridMismatchError,
    GroupListMismatchError,
    IaaError,
    InvalidIntervalError,
    MissingModelError,
    ParseError,
    RecordError,
    UnknownGroupError,
    UnknownWordError,
)
from .ingest import (
    Dataset,
    GroupSpec,
    ResponseRecord,
    canonical_word,
    parse_dataset,
    select_group,
    serialize_dataset,
    validate_dataset,
)
from .server import ResponseStore, Survey, create_server

__version__ = "0.1.0"

__all__ = [
    "SNAP_TOLERANCE",
    "DomainGrid",
    "Interval",
    "FuzzySet",
    "build_iaa",
    "jaccard",
    "centroid",
    "height",
    "support_size",
    "mode_count",
    "Dataset",
    "ResponseRecord",
    "GroupSpec",
    "canonical_word",
    "parse_dataset",
    "validate_dataset",
    "serialize_dataset",
    "select_group",
    "AnalysisResult",
    "SimilarityMatrix",
    "DescriptorRow",
    "GapRow",
    "analyze",
    "build_models",
    "similarity_matrix",
    "average_similarity",
    "Survey",
    "ResponseStore",
    "create_server",
    "IaaError",
    "RecordError",
    "ParseError",
    "InvalidIntervalError",
    "DomainViolationError",
    "DuplicateResponseError",
    "UnknownWordError",
    "UnknownGroupError",
    "EmptyInputError",
    "EmptyGroupError",
    "EmptySetError",
    "GridMismatchError",
    "GroupListMismatchError",
    "MissingModelError",
    "__version__",
]
