"""Survey dataset parsing, validation, and group selection.

Two on-disk formats carry the same data. CSV is a flat record list with the
header ``participant_id,group,word,left,right``; the scale and word order are
supplied by the caller (the file carries neither). JSON embeds them::

    {
      "scale": {"min": 0, "max": 10, "step": 0.01},
      "words": ["impossible to do", ...],
      "responses": [
        {"participant_id": "p01", "group": "patient",
         "word": "impossible to do", "left": 0.0, "right": 1.5},
        ...
      ]
    }

The JSON schema is also the capture service's export format, so a served
survey round-trips through here unchanged. Words are matched
case-insensitively after trimming and stored lowercased; group labels are
trimmed but kept case-sensitive. Parsing is single-threaded; the resulting
``Dataset`` is immutable and safe to share across threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .core import DomainGrid, Interval
from .errors import (
    DomainViolationError,
    DuplicateResponseError,
    IaaError,
    InvalidIntervalError,
    ParseError,
    RecordError,
    UnknownGroupError,
    UnknownWordError,
)

CSV_HEADER = ("participant_id", "group", "word", "left", "right")


def canonical_word(word: str) -> str:
    """Trimmed, lowercased descriptor label."""
    return word.strip().lower()


@dataclass(frozen=True)
class ResponseRecord:
    """One participant's interval for one word."""

    participant_id: str
    group: str
    word: str
    interval: Interval


@dataclass(frozen=True)
class Dataset:
    """Validated survey data over one domain grid.

    ``words`` preserves questionnaire order; every record references a listed
    word, fits the grid, and is the only response for its (participant, word)
    pair.
    """

    grid: DomainGrid
    words: tuple[str, ...]
    records: tuple[ResponseRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        object.__setattr__(self, "records", tuple(self.records))
        if len(set(self.words)) != len(self.words):
            raise ParseError("word list contains duplicates")
        for w in self.words:
            if not w or w != canonical_word(w):
                raise ParseError(f"word {w!r} must be nonempty and canonical")
        declared = set(self.words)
        seen: set[tuple[str, str]] = set()
        for rec in self.records:
            if not rec.participant_id or not rec.group or not rec.word:
                raise ParseError(
                    f"record for participant {rec.participant_id!r} has an empty field"
                )
            if rec.word not in declared:
                raise UnknownWordError(
                    f"word {rec.word!r} is not declared for this dataset",
                    participant=rec.participant_id,
                    word=rec.word,
                )
            if not rec.interval.within(self.grid):
                raise DomainViolationError(
                    f"interval [{rec.interval.left}, {rec.interval.right}] outside "
                    f"[{self.grid.min}, {self.grid.max}]",
                    participant=rec.participant_id,
                    word=rec.word,
                )
            key = (rec.participant_id, rec.word)
            if key in seen:
                raise DuplicateResponseError(
                    f"participant {rec.participant_id!r} answered {rec.word!r} twice",
                    participant=rec.participant_id,
                    word=rec.word,
                )
            seen.add(key)

    def group_labels(self) -> tuple[str, ...]:
        """Distinct group labels in first-appearance order."""
        out: list[str] = []
        for rec in self.records:
            if rec.group not in out:
                out.append(rec.group)
        return tuple(out)

    def participant_ids(self) -> tuple[str, ...]:
        out: list[str] = []
        for rec in self.records:
            if rec.participant_id not in out:
                out.append(rec.participant_id)
        return tuple(out)


@dataclass(frozen=True)
class GroupSpec:
    """A group to model: a single label or a merge of several.

    Merged groups concatenate their members' responses with equal per-response
    weight, so a 12+12 merge weights individuals rather than groups.
    """

    name: str
    members: frozenset[str] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not self.name.strip():
            raise ValueError("group name must be nonempty")
        members = self.members
        if members is None:
            members = frozenset({self.name})
        else:
            members = frozenset(members)
        if not members:
            raise ValueError(f"group spec {self.name!r} has no members")
        object.__setattr__(self, "members", members)


def _read_source(source: str | bytes | IO) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    if isinstance(source, str):
        return source.lstrip("﻿")
    raise ParseError(f"unsupported input type {type(source).__name__}")


def _scale_value(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not a finite number")
    return value


def _check_record(
    participant: str,
    group: str,
    word: str,
    left: float,
    right: float,
    grid: DomainGrid,
    declared: set[str] | None,
    seen: set[tuple[str, str]],
    location: str,
) -> ResponseRecord | RecordError:
    """Validate one parsed row; returns the record or the error describing it."""
    if left > right:
        return InvalidIntervalError(
            f"left endpoint {left} exceeds right endpoint {right}",
            location=location,
            participant=participant,
            word=word,
        )
    interval = Interval(left, right)
    if not interval.within(grid):
        return DomainViolationError(
            f"interval [{left}, {right}] outside the scale [{grid.min}, {grid.max}]",
            location=location,
            participant=participant,
            word=word,
        )
    if declared is not None and word not in declared:
        return UnknownWordError(
            f"word {word!r} is not in the declared word list",
            location=location,
            participant=participant,
            word=word,
        )
    key = (participant, word)
    if key in seen:
        return DuplicateResponseError(
            f"participant {participant!r} already answered {word!r}",
            location=location,
            participant=participant,
            word=word,
        )
    seen.add(key)
    return ResponseRecord(participant, group, word, interval)


def _parse_csv(
    text: str, grid: DomainGrid, words: tuple[str, ...] | None
) -> tuple[Dataset | None, list[IaaError]]:
    issues: list[IaaError] = []
    try:
        rows = list(csv.reader(io.StringIO(text)))
    except csv.Error as exc:
        return None, [ParseError(f"malformed CSV: {exc}")]
    if not rows:
        return None, [ParseError("empty input: missing CSV header")]
    header = tuple(cell.strip().lower() for cell in rows[0])
    if header != CSV_HEADER:
        return None, [
            ParseError(
                f"expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}",
                location="line 1",
            )
        ]

    declared = set(words) if words is not None else None
    order: list[str] = list(words) if words is not None else []
    records: list[ResponseRecord] = []
    seen: set[tuple[str, str]] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        location = f"line {lineno}"
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # blank line
        if len(row) != len(CSV_HEADER):
            issues.append(
                ParseError(
                    f"expected {len(CSV_HEADER)} fields, got {len(row)}",
                    location=location,
                )
            )
            continue
        participant, group = row[0].strip(), row[1].strip()
        word = canonical_word(row[2])
        if not participant or not group or not word:
            issues.append(
                ParseError(
                    "participant_id, group, and word must be nonempty",
                    location=location,
                    participant=participant or None,
                    word=word or None,
                )
            )
            continue
        try:
            left = _scale_value(row[3])
            right = _scale_value(row[4])
        except ValueError:
            issues.append(
                ParseError(
                    f"left/right must be finite decimal numbers, "
                    f"got {row[3]!r}/{row[4]!r}",
                    location=location,
                    participant=participant,
                    word=word,
                )
            )
            continue
        result = _check_record(
            participant, group, word, left, right, grid, declared, seen, location
        )
        if isinstance(result, RecordError):
            issues.append(result)
            continue
        if words is None and word not in order:
            order.append(word)
        records.append(result)

    if issues:
        return None, issues
    return Dataset(grid, tuple(order), tuple(records)), []


def _parse_json(
    text: str, grid_override: DomainGrid | None, words: tuple[str, ...] | None
) -> tuple[Dataset | None, list[IaaError]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        return None, [ParseError(f"malformed JSON: {exc}")]
    if not isinstance(doc, dict):
        return None, [ParseError("top-level JSON value must be an object")]
    for key in ("scale", "words", "responses"):
        if key not in doc:
            return None, [ParseError(f"missing required key {key!r}")]

    if grid_override is not None:
        grid = grid_override
    else:
        scale = doc["scale"]
        if not isinstance(scale, dict):
            return None, [ParseError("'scale' must be an object", location="scale")]
        try:
            grid = DomainGrid(
                _number(scale, "min"), _number(scale, "max"), _number(scale, "step")
            )
        except (ParseError, ValueError) as exc:
            return None, [ParseError(f"invalid scale: {exc}", location="scale")]

    if words is not None:
        order = list(words)
    else:
        raw_words = doc["words"]
        if not isinstance(raw_words, list) or not all(
            isinstance(w, str) for w in raw_words
        ):
            return None, [ParseError("'words' must be a list of strings", location="words")]
        order = []
        for w in raw_words:
            cw = canonical_word(w)
            if not cw:
                return None, [ParseError("empty word label", location="words")]
            if cw in order:
                return None, [ParseError(f"duplicate word {cw!r}", location="words")]
            order.append(cw)

    raw = doc["responses"]
    if not isinstance(raw, list):
        return None, [ParseError("'responses' must be a list", location="responses")]

    issues: list[IaaError] = []
    records: list[ResponseRecord] = []
    declared = set(order)
    seen: set[tuple[str, str]] = set()
    expected_keys = {"participant_id", "group", "word", "left", "right"}
    for idx, entry in enumerate(raw):
        location = f"responses[{idx}]"
        if not isinstance(entry, dict):
            issues.append(ParseError("response must be an object", location=location))
            continue
        if set(entry) != expected_keys:
            issues.append(
                ParseError(
                    f"response keys must be exactly {sorted(expected_keys)}, "
                    f"got {sorted(entry)}",
                    location=location,
                )
            )
            continue
        participant = entry["participant_id"]
        group = entry["group"]
        word = entry["word"]
        if not all(isinstance(v, str) for v in (participant, group, word)):
            issues.append(
                ParseError(
                    "participant_id, group, and word must be strings",
                    location=location,
                )
            )
            continue
        participant, group, word = participant.strip(), group.strip(), canonical_word(word)
        if not participant or not group or not word:
            issues.append(
                ParseError(
                    "participant_id, group, and word must be nonempty",
                    location=location,
                )
            )
            continue
        try:
            left = _number(entry, "left")
            right = _number(entry, "right")
        except ParseError as exc:
            exc.location = location
            exc.participant = participant
            exc.word = word
            issues.append(exc)
            continue
        result = _check_record(
            participant, group, word, left, right, grid, declared, seen, location
        )
        if isinstance(result, RecordError):
            issues.append(result)
            continue
        records.append(result)

    if issues:
        return None, issues
    return Dataset(grid, tuple(order), tuple(records)), []


def _number(obj: dict, key: str) -> float:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{key!r} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ParseError(f"{key!r} must be finite, got {value!r}")
    return value


def validate_dataset(
    source: str | bytes | IO,
    fmt: str,
    *,
    grid: DomainGrid | None = None,
    words: Sequence[str] | None = None,
) -> tuple[Dataset | None, list[IaaError]]:
    """Parse without raising; returns the dataset or every issue found.

    Record-level problems do not stop the scan, so one run reports them all.
    ``grid`` defaults to the scale embedded in JSON input and to the standard
    0..10 step 0.01 grid for CSV; passing it explicitly overrides both.
    ``words`` pins the questionnaire order (CSV otherwise uses first
    appearance, JSON its own word list).
    """
    canon_words = None
    if words is not None:
        canon_words = tuple(canonical_word(w) for w in words)
        if len(set(canon_words)) != len(canon_words) or "" in canon_words:
            return None, [ParseError("word override must be distinct nonempty labels")]
    try:
        text = _read_source(source)
    except ParseError as exc:
        return None, [exc]
    if fmt == "csv":
        return _parse_csv(text, grid or DomainGrid(), canon_words)
    if fmt == "json":
        return _parse_json(text, grid, canon_words)
    raise ValueError(f"unknown format {fmt!r}, expected 'csv' or 'json'")


def parse_dataset(
    source: str | bytes | IO,
    fmt: str,
    *,
    grid: DomainGrid | None = None,
    words: Sequence[str] | None = None,
) -> Dataset:
    """Parse and validate a dataset, raising the first issue found."""
    dataset, issues = validate_dataset(source, fmt, grid=grid, words=words)
    if issues:
        raise issues[0]
    assert dataset is not None
    return dataset


def serialize_dataset(ds: Dataset, fmt: str) -> str:
    """Render a dataset back to CSV or JSON; parse(serialize(ds)) == ds.

    Floats are written with ``repr`` so every endpoint survives the round
    trip bit for bit.
    """
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in ds.records:
            writer.writerow(
                [
                    rec.participant_id,
                    rec.group,
                    rec.word,
                    repr(rec.interval.left),
                    repr(rec.interval.right),
                ]
            )
        return out.getvalue()
    if fmt == "json":
        doc = {
            "scale": {"min": ds.grid.min, "max": ds.grid.max, "step": ds.grid.step},
            "words": list(ds.words),
            "responses": [
                {
                    "participant_id": rec.participant_id,
                    "group": rec.group,
                    "word": rec.word,
                    "left": rec.interval.left,
                    "right": rec.interval.right,
                }
                for rec in ds.records
            ],
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}, expected 'csv' or 'json'")


def select_group(ds: Dataset, spec: GroupSpec, word: str) -> list[Interval]:
    """Intervals for one word from every member group, in dataset order.

    Merged groups concatenate; nothing is deduplicated or reweighted.
    """
    w = canonical_word(word)
    if w not in ds.words:
        raise UnknownWordError(f"word {w!r} is not part of this dataset", word=w)
    present = set(ds.group_labels())
    missing = sorted(spec.members - present)
    if missing:
        raise UnknownGroupError(
            f"group spec {spec.name!r} references unknown groups: {', '.join(missing)}"
        )
    return [
        rec.interval
        for rec in ds.records
        if rec.group in spec.members and rec.word == w
    ]
