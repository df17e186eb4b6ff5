"""Local capture service: serve the survey form and persist responses.

The service exposes three JSON endpoints plus optional static assets for the
browser form:

* ``GET /api/survey`` - the survey definition (word list and scale).
* ``POST /api/submit`` - one participant's full response set, validated with
  the same rules as dataset parsing before anything is stored.
* ``GET /api/export`` - everything stored so far, rendered as the dataset
  JSON schema, so the export feeds straight back into ``parse_dataset``.

Persistence is a single append-only file with one JSON line per accepted
submission. Appends are serialized under a lock and fsynced, so a crash can
lose at most the line being written; a truncated final line is skipped on
replay. Submissions are idempotent per participant: replaying an identical
payload is a no-op, while a conflicting payload for an already-recorded
participant is rejected.
"""

from __future__ import annotations

import json
import logging
import math
import os
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .core import DomainGrid, Interval
from .errors import (
    DomainViolationError,
    DuplicateResponseError,
    IaaError,
    InvalidIntervalError,
    ParseError,
    UnknownWordError,
)
from .ingest import Dataset, ResponseRecord, canonical_word, serialize_dataset

log = logging.getLogger(__name__)

MAX_BODY_BYTES = 1 << 20

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".json": "application/json; charset=utf-8",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}

_FALLBACK_PAGE = """<!DOCTYPE html>
<html><head><title>interval survey</title></head>
<body>
<h1>Interval survey service</h1>
<p>No capture form is installed. The API is available at:</p>
<ul>
<li><code>GET /api/survey</code></li>
<li><code>POST /api/submit</code></li>
<li><code>GET /api/export</code></li>
</ul>
</body></html>
"""


@dataclass(frozen=True)
class Survey:
    """What respondents are asked: the words and the scale they share."""

    grid: DomainGrid
    words: tuple[str, ...]

    def __post_init__(self):
        words = tuple(canonical_word(w) for w in self.words)
        if not words:
            raise ValueError("survey needs at least one word")
        if len(set(words)) != len(words) or "" in words:
            raise ValueError("survey words must be distinct and nonempty")
        object.__setattr__(self, "words", words)

    def definition(self) -> dict:
        return {
            "words": list(self.words),
            "scale": {
                "min": self.grid.min,
                "max": self.grid.max,
                "step": self.grid.step,
            },
        }


def _canonical_line(submission: dict) -> str:
    return json.dumps(submission, sort_keys=True, separators=(",", ":"))


class ResponseStore:
    """Append-only log of accepted submissions, replayed into memory on open.

    Thread-safe: all mutation happens under one lock, and readers get
    snapshots. One store must own its file exclusively.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._submissions: list[dict] = []
        self._by_participant: dict[str, str] = {}
        self._replay()

    def _replay(self) -> None:
        if not self.path.exists():
            return
        raw = self.path.read_bytes().decode("utf-8")
        lines = raw.split("\n")
        trailing = lines.pop()  # text after the last newline, "" when intact
        for index, line in enumerate(lines):
            if not line:
                continue
            try:
                submission = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"corrupt response log {self.path}: line {index + 1}: {exc}"
                ) from exc
            if (
                not isinstance(submission, dict)
                or not isinstance(submission.get("participant_id"), str)
                or not isinstance(submission.get("responses"), list)
            ):
                raise ParseError(
                    f"corrupt response log {self.path}: line {index + 1}: "
                    "not a stored submission"
                )
            self._remember(submission)
        if trailing.strip():
            # Interrupted append: the submission was never acknowledged, so
            # dropping it is the correct recovery.
            log.warning(
                "%s: discarding truncated final line (%d bytes)",
                self.path,
                len(trailing),
            )
            self.path.write_bytes((("\n".join(lines)) + "\n" if lines else "").encode("utf-8"))

    def _remember(self, submission: dict) -> None:
        participant = submission["participant_id"]
        self._submissions.append(submission)
        self._by_participant[participant] = _canonical_line(submission)

    def append(self, submission: dict) -> bool:
        """Persist one submission; returns False for an identical replay.

        Raises DuplicateResponseError when the participant already submitted
        something different.
        """
        canonical = _canonical_line(submission)
        participant = submission["participant_id"]
        with self._lock:
            existing = self._by_participant.get(participant)
            if existing is not None:
                if existing == canonical:
                    return False
                raise DuplicateResponseError(
                    f"participant {participant!r} already submitted a different "
                    "response set",
                    participant=participant,
                )
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(canonical + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            self._remember(submission)
            return True

    def snapshot(self) -> list[dict]:
        with self._lock:
            return list(self._submissions)

    def __len__(self) -> int:
        with self._lock:
            return len(self._submissions)


def validate_submission(body: object, survey: Survey) -> dict:
    """Check a submit payload and return it in storage form.

    The storage form has trimmed identifiers, canonical word labels, and
    float endpoints, so equality of stored submissions is equality of
    meaning.
    """
    if not isinstance(body, dict):
        raise ParseError("submission must be a JSON object")
    expected = {"participant_id", "group", "responses"}
    if set(body) != expected:
        raise ParseError(
            f"submission keys must be exactly {sorted(expected)}, got {sorted(body)}"
        )
    participant = body["participant_id"]
    group = body["group"]
    if not isinstance(participant, str) or not participant.strip():
        raise ParseError("participant_id must be a nonempty string")
    if not isinstance(group, str) or not group.strip():
        raise ParseError("group must be a nonempty string")
    participant, group = participant.strip(), group.strip()
    raw = body["responses"]
    if not isinstance(raw, list):
        raise ParseError("'responses' must be a list")

    responses: list[dict] = []
    seen: set[str] = set()
    for idx, entry in enumerate(raw):
        where = f"responses[{idx}]"
        if not isinstance(entry, dict) or set(entry) != {"word", "left", "right"}:
            raise ParseError(
                "each response must be an object with keys word/left/right",
                location=where,
            )
        word = entry["word"]
        if not isinstance(word, str):
            raise ParseError("'word' must be a string", location=where)
        word = canonical_word(word)
        if word not in survey.words:
            raise UnknownWordError(
                f"word {word!r} is not part of this survey",
                location=where,
                participant=participant,
                word=word,
            )
        if word in seen:
            raise DuplicateResponseError(
                f"word {word!r} appears twice in one submission",
                location=where,
                participant=participant,
                word=word,
            )
        ends: dict[str, float] = {}
        for key in ("left", "right"):
            value = entry[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(f"{key!r} must be a number", location=where)
            value = float(value)
            if not math.isfinite(value):
                raise ParseError(f"{key!r} must be finite", location=where)
            ends[key] = value
        if ends["left"] > ends["right"]:
            raise InvalidIntervalError(
                f"left endpoint {ends['left']} exceeds right endpoint {ends['right']}",
                location=where,
                participant=participant,
                word=word,
            )
        interval = Interval(ends["left"], ends["right"])
        if not interval.within(survey.grid):
            raise DomainViolationError(
                f"interval [{interval.left}, {interval.right}] outside the scale "
                f"[{survey.grid.min}, {survey.grid.max}]",
                location=where,
                participant=participant,
                word=word,
            )
        seen.add(word)
        responses.append({"word": word, "left": interval.left, "right": interval.right})

    return {"participant_id": participant, "group": group, "responses": responses}


def export_dataset(survey: Survey, store: ResponseStore) -> Dataset:
    """Accumulated submissions as a validated dataset."""
    records: list[ResponseRecord] = []
    for submission in store.snapshot():
        for entry in submission["responses"]:
            records.append(
                ResponseRecord(
                    submission["participant_id"],
                    submission["group"],
                    entry["word"],
                    Interval(entry["left"], entry["right"]),
                )
            )
    return Dataset(survey.grid, survey.words, tuple(records))


class CaptureHandler(BaseHTTPRequestHandler):
    """Request handler bound to a survey, store, and optional UI directory
    via server attributes (see :func:`create_server`)."""

    server_version = "iaa-capture/0.1"

    @property
    def survey(self) -> Survey:
        return self.server.survey  # type: ignore[attr-defined]

    @property
    def store(self) -> ResponseStore:
        return self.server.store  # type: ignore[attr-defined]

    @property
    def ui_dir(self) -> Path | None:
        return self.server.ui_dir  # type: ignore[attr-defined]

    def log_message(self, format: str, *args) -> None:
        log.debug("%s - %s", self.address_string(), format % args)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload, indent=2).encode("utf-8") + b"\n"
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, exc: IaaError) -> None:
        info: dict = {"kind": exc.kind, "message": str(exc)}
        for attr in ("location", "participant", "word"):
            value = getattr(exc, attr, None)
            if value:
                info[attr] = value
        self._send_json(status, {"error": info})

    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        path = self.path.split("?", 1)[0]
        if path == "/api/survey":
            self._send_json(200, self.survey.definition())
            return
        if path == "/api/export":
            try:
                text = serialize_dataset(export_dataset(self.survey, self.store), "json")
            except IaaError as exc:
                self._send_error_json(500, exc)
                return
            body = text.encode("utf-8")
            self.send_response(200)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return
        self._serve_static(path)

    def do_POST(self) -> None:  # noqa: N802
        path = self.path.split("?", 1)[0]
        if path != "/api/submit":
            self._send_json(404, {"error": {"kind": "not_found", "message": path}})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            length = -1
        if length < 0 or length > MAX_BODY_BYTES:
            self._send_json(
                413, {"error": {"kind": "parse_error", "message": "body too large"}}
            )
            return
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            self._send_error_json(400, ParseError(f"malformed JSON: {exc}"))
            return
        try:
            submission = validate_submission(body, self.survey)
        except DuplicateResponseError as exc:
            self._send_error_json(409, exc)
            return
        except IaaError as exc:
            self._send_error_json(400, exc)
            return
        try:
            appended = self.store.append(submission)
        except DuplicateResponseError as exc:
            self._send_error_json(409, exc)
            return
        except OSError as exc:
            self._send_json(
                500,
                {"error": {"kind": "storage_failure", "message": str(exc)}},
            )
            return
        self._send_json(
            200,
            {
                "accepted": True,
                "stored": appended,
                "participant_id": submission["participant_id"],
                "responses": len(submission["responses"]),
            },
        )

    def _serve_static(self, path: str) -> None:
        if path == "/":
            path = "/index.html"
        if self.ui_dir is None:
            if path == "/index.html":
                body = _FALLBACK_PAGE.encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/html; charset=utf-8")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
            self._send_json(404, {"error": {"kind": "not_found", "message": path}})
            return
        root = self.ui_dir.resolve()
        target = (root / path.lstrip("/")).resolve()
        if not target.is_relative_to(root) or not target.is_file():
            self._send_json(404, {"error": {"kind": "not_found", "message": path}})
            return
        body = target.read_bytes()
        ctype = _CONTENT_TYPES.get(target.suffix.lower(), "application/octet-stream")
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def create_server(
    survey: Survey,
    store: ResponseStore,
    *,
    host: str = "127.0.0.1",
    port: int = 8080,
    ui_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    """Build a ready-to-run threading HTTP server; caller owns its lifecycle.

    Pass ``port=0`` to bind an ephemeral port (useful in tests); the bound
    address is ``server.server_address``.
    """
    server = ThreadingHTTPServer((host, port), CaptureHandler)
    server.survey = survey  # type: ignore[attr-defined]
    server.store = store  # type: ignore[attr-defined]
    server.ui_dir = Path(ui_dir) if ui_dir is not None else None  # type: ignore[attr-defined]
    return server
