"""Command-line interface: validate, analyze, serve.

``iaa validate`` checks a dataset file and reports every problem with its
location. ``iaa analyze`` runs the modelling pipeline and writes the report
tables (and optionally SVG figures) into an output directory. ``iaa serve``
hosts the browser capture form together with the submit/export API.

Output directory resolution: ``--out`` wins, then the ``IAA_OUT``
environment variable, then ``./iaa-report``. Analyze output is
deterministic: the same input and flags produce byte-identical files.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .analysis import AnalysisResult, analyze
from .core import DomainGrid
from .errors import IaaError, ParseError, RecordError
from .ingest import GroupSpec, canonical_word, validate_dataset
from .reporting import (
    render_centroids_csv,
    render_gaps_csv,
    render_group_plot,
    render_heights_csv,
    render_matrix_csv,
    render_modes_csv,
    render_models_csv,
    render_summary,
    render_supports_csv,
    render_word_plot,
    slugify,
)
from .server import ResponseStore, Survey, create_server

log = logging.getLogger(__name__)

DEFAULT_OUT = "iaa-report"


def _add_scale_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scale-min", type=float, default=None, help="scale lower bound (default 0)"
    )
    parser.add_argument(
        "--scale-max", type=float, default=None, help="scale upper bound (default 10)"
    )
    parser.add_argument(
        "--step", type=float, default=None, help="grid resolution (default 0.01)"
    )


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="dataset file (CSV or JSON)")
    parser.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="input format (default: from the file extension)",
    )
    parser.add_argument(
        "--words",
        default=None,
        help="comma-separated word order override",
    )
    _add_scale_flags(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iaa",
        description=(
            "Model interval-valued survey responses as fuzzy sets and compare "
            "how groups of respondents understand rating-scale words."
        ),
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser(
        "validate", help="check a dataset file and report every problem"
    )
    _add_input_flags(p_validate)

    p_analyze = sub.add_parser(
        "analyze", help="build word models and write report tables"
    )
    _add_input_flags(p_analyze)
    p_analyze.add_argument(
        "--merge",
        action="append",
        default=[],
        metavar="NAME=g1,g2",
        help="add a merged group, e.g. --merge PS=physio,surgeon (repeatable)",
    )
    p_analyze.add_argument(
        "--out", default=None, help="output directory (fallback: $IAA_OUT)"
    )
    p_analyze.add_argument(
        "--plots", action="store_true", help="also write SVG figures"
    )

    p_serve = sub.add_parser(
        "serve", help="host the capture form and response API"
    )
    p_serve.add_argument(
        "--survey-words",
        required=True,
        metavar="w1,w2,...",
        help="comma-separated descriptor words, in questionnaire order",
    )
    _add_scale_flags(p_serve)
    p_serve.add_argument(
        "--store",
        default="responses.ndjson",
        help="append-only response log (default: responses.ndjson)",
    )
    p_serve.add_argument(
        "--ui", default=None, help="directory of capture form static assets"
    )
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)

    return parser


def _grid_from_flags(args: argparse.Namespace) -> DomainGrid | None:
    """Explicit grid when any scale flag was given, else None."""
    if args.scale_min is None and args.scale_max is None and args.step is None:
        return None
    return DomainGrid(
        args.scale_min if args.scale_min is not None else 0.0,
        args.scale_max if args.scale_max is not None else 10.0,
        args.step if args.step is not None else 0.01,
    )


def _resolve_format(args: argparse.Namespace) -> str:
    if args.format:
        return args.format
    suffix = Path(args.input).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix == ".json":
        return "json"
    raise SystemExit(
        f"iaa: cannot infer the format of {args.input!r}; pass --format csv|json"
    )


def _load(args: argparse.Namespace):
    fmt = _resolve_format(args)
    words = None
    if args.words:
        words = [w for w in (s.strip() for s in args.words.split(",")) if w]
    try:
        raw = Path(args.input).read_bytes()
    except OSError as exc:
        return None, [ParseError(f"cannot read {args.input}: {exc}")]
    return validate_dataset(raw, fmt, grid=_grid_from_flags(args), words=words)


def _print_issues(issues) -> None:
    for issue in issues:
        if isinstance(issue, RecordError):
            print(f"error: {issue.describe()}", file=sys.stderr)
        else:
            print(f"error: {issue.kind}: {issue}", file=sys.stderr)


def cmd_validate(args: argparse.Namespace) -> int:
    dataset, issues = _load(args)
    if issues:
        _print_issues(issues)
        print(f"invalid: {len(issues)} problem(s) found", file=sys.stderr)
        return 1
    print(
        f"valid: {len(dataset.participant_ids())} participants, "
        f"{len(dataset.words)} words, {len(dataset.records)} records"
    )
    return 0


def _parse_merges(merges: list[str]) -> list[tuple[str, list[str]]]:
    out = []
    for spec in merges:
        name, eq, members = spec.partition("=")
        name = name.strip()
        groups = [g for g in (s.strip() for s in members.split(",")) if g]
        if not eq or not name or not groups:
            raise SystemExit(
                f"iaa: bad --merge {spec!r}; expected NAME=group1,group2"
            )
        out.append((name, groups))
    return out


def _group_specs(dataset, merges: list[str]) -> list[GroupSpec]:
    specs = [GroupSpec(name) for name in dataset.group_labels()]
    taken = {spec.name for spec in specs}
    for name, members in _parse_merges(merges):
        if name in taken:
            raise SystemExit(f"iaa: merged group name {name!r} already exists")
        taken.add(name)
        specs.append(GroupSpec(name, frozenset(members)))
    return specs


def _unique_paths(names: list[str]) -> None:
    seen: dict[str, str] = {}
    for name in names:
        if name in seen:
            raise SystemExit(
                f"iaa: output name collision: {name!r} (labels differing only "
                "in punctuation or case?)"
            )
        seen[name] = name


def _render_outputs(result: AnalysisResult, plots: bool) -> dict[str, str]:
    """All artifact files for one run, name -> content."""
    files: dict[str, str] = {}
    for word, matrix in result.matrices.items():
        files[f"similarity_{slugify(word)}.csv"] = render_matrix_csv(matrix)
    if result.average is not None:
        files["similarity_average.csv"] = render_matrix_csv(result.average)
    files["centroids.csv"] = render_centroids_csv(result)
    files["heights.csv"] = render_heights_csv(result)
    files["supports.csv"] = render_supports_csv(result)
    files["modes.csv"] = render_modes_csv(result)
    files["centroid_gaps.csv"] = render_gaps_csv(result)
    for name in result.group_names():
        files[f"models_{slugify(name)}.csv"] = render_models_csv(result, name)
    if plots:
        for name in result.group_names():
            files[f"models_{slugify(name)}.svg"] = render_group_plot(result, name)
        for word in result.dataset.words:
            if word in result.models:
                files[f"word_{slugify(word)}.svg"] = render_word_plot(result, word)
    _unique_paths(list(files))
    return files


def cmd_analyze(args: argparse.Namespace) -> int:
    dataset, issues = _load(args)
    if issues:
        _print_issues(issues)
        return 1

    try:
        result = analyze(dataset, _group_specs(dataset, args.merge))
    except IaaError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return 1

    out_dir = Path(args.out or os.environ.get("IAA_OUT") or DEFAULT_OUT)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"iaa: cannot create {out_dir}: {exc}", file=sys.stderr)
        return 1

    files = _render_outputs(result, args.plots)
    written: list[Path] = []
    try:
        for name in sorted(files):
            path = out_dir / name
            path.write_text(files[name], encoding="utf-8", newline="\n")
            written.append(path)
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        print(f"iaa: write failed, partial output removed: {exc}", file=sys.stderr)
        return 1

    sys.stdout.write(render_summary(result))
    print(f"wrote {len(written)} files to {out_dir}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    words = [w for w in (s.strip() for s in args.survey_words.split(",")) if w]
    if not words:
        print("iaa: --survey-words must list at least one word", file=sys.stderr)
        return 1
    grid = _grid_from_flags(args) or DomainGrid()
    try:
        survey = Survey(grid, tuple(canonical_word(w) for w in words))
        store = ResponseStore(args.store)
    except (IaaError, ValueError) as exc:
        print(f"iaa: {exc}", file=sys.stderr)
        return 1
    if args.ui is not None and not Path(args.ui).is_dir():
        print(f"iaa: --ui {args.ui!r} is not a directory", file=sys.stderr)
        return 1
    server = create_server(
        survey, store, host=args.host, port=args.port, ui_dir=args.ui
    )
    host, port = server.server_address[:2]
    print(f"serving survey on http://{host}:{port}/ ({len(store)} stored responses)")
    print(f"responses are appended to {store.path}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        print("\nshutting down")
    finally:
        server.server_close()
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handlers = {
        "validate": cmd_validate,
        "analyze": cmd_analyze,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
