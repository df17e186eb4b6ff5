"""Acceptance suite: the contract this package must honour, one test per
criterion, each printing a PASS/FAIL line with the measured numbers.

Run with ``pytest tests/test_acceptance.py -v`` (the status lines print even
under output capture). Tolerances here are fixed; loosening them is not a
fix, it is a defect.
"""

import json
import random
import string
import threading
import time
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from iaa import (
    DomainGrid,
    GroupSpec,
    IaaError,
    Interval,
    ResponseStore,
    Survey,
    analyze,
    build_iaa,
    centroid,
    create_server,
    height,
    jaccard,
    parse_dataset,
    serialize_dataset,
    support_size,
    validate_dataset,
)
from iaa.cli import main
from conftest import (
    GROUPS,
    WORDS,
    jaccard_oracle,
    membership_oracle,
    random_interval,
    random_interval_set,
    synthetic_dataset,
)


@pytest.fixture
def announce(capsys):
    """Print a status line that survives pytest's output capture."""

    def _announce(line: str) -> None:
        with capsys.disabled():
            print(line)

    return _announce


def verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


class TestWorkedExample:
    def test_two_interval_membership_golden(self, announce):
        grid = DomainGrid(0, 10, 1)
        intervals = [Interval(3, 5), Interval(4, 7)]
        fs = build_iaa(intervals, grid)
        expected = np.zeros(11)
        expected[3] = 0.5
        expected[4] = expected[5] = 1.0
        expected[6] = expected[7] = 0.5
        exact = bool(np.array_equal(fs.memberships, expected))

        times = []
        for _ in range(200):
            t0 = time.perf_counter()
            build_iaa(intervals, grid)
            times.append(time.perf_counter() - t0)
        best = min(times)
        fast = best < 1e-3

        announce(
            f"worked example: {verdict(exact and fast)} "
            f"(exact={exact}, best build time {best * 1e6:.0f} us < 1 ms)"
        )
        assert exact, f"memberships {fs.memberships} != {expected}"
        assert fast, f"construction took {best:.6f}s, limit 1 ms"


class TestConstructionOracle:
    def test_1000_random_instances_match_containment_counts(self, announce):
        grid = DomainGrid(0, 10, 0.1)
        xs = [float(x) for x in grid.points()]
        rng = random.Random(42)
        start = time.perf_counter()
        worst = 0.0
        for _ in range(1000):
            ivs = random_interval_set(rng, grid, max_n=30)
            fs = build_iaa(ivs, grid)
            expected = membership_oracle([(iv.left, iv.right) for iv in ivs], xs)
            worst = max(worst, float(np.abs(fs.memberships - expected).max()))
        elapsed = time.perf_counter() - start
        ok = worst <= 1e-12 and elapsed < 5.0
        announce(
            f"construction oracle: {verdict(ok)} "
            f"(1000 instances, max |diff| {worst:.2e} <= 1e-12, {elapsed:.2f}s < 5s)"
        )
        assert worst <= 1e-12
        assert elapsed < 5.0


class TestJaccardProperties:
    def test_1000_random_pairs(self, announce):
        grid = DomainGrid(0, 10, 0.1)
        rng = random.Random(1234)
        worst_oracle = 0.0
        worst_symmetry = 0.0
        reflexive_ok = True
        bounds_ok = True
        disjoint_ok = True
        for _ in range(1000):
            a = build_iaa(random_interval_set(rng, grid, max_n=12), grid)
            b = build_iaa(random_interval_set(rng, grid, max_n=12), grid)
            ab = jaccard(a, b)
            worst_symmetry = max(worst_symmetry, abs(ab - jaccard(b, a)))
            bounds_ok &= 0.0 <= ab <= 1.0
            reflexive_ok &= jaccard(a, a) == 1.0
            worst_oracle = max(
                worst_oracle,
                abs(ab - jaccard_oracle(a.memberships, b.memberships)),
            )
        left = build_iaa([Interval(0, 2)], grid)
        right = build_iaa([Interval(7, 9)], grid)
        disjoint_ok = jaccard(left, right) == 0.0
        ok = (
            worst_oracle <= 1e-12
            and worst_symmetry == 0.0
            and reflexive_ok
            and bounds_ok
            and disjoint_ok
        )
        announce(
            f"jaccard properties: {verdict(ok)} "
            f"(1000 pairs, reflexive={reflexive_ok}, symmetry diff "
            f"{worst_symmetry:.1e}, bounded={bounds_ok}, disjoint0={disjoint_ok}, "
            f"oracle diff {worst_oracle:.2e} <= 1e-12)"
        )
        assert ok


class TestDescriptorProperties:
    N_CASES = 500

    def test_rectangle_centroid_is_midpoint(self, announce):
        grid = DomainGrid(0, 10, 0.1)
        rng = random.Random(7)
        worst = 0.0
        for _ in range(self.N_CASES):
            iv = random_interval(rng, grid, aligned=True)
            c = centroid(build_iaa([iv], grid))
            worst = max(worst, abs(c - (iv.left + iv.right) / 2.0))
        ok = worst <= 1e-9
        announce(
            f"rectangle centroid: {verdict(ok)} "
            f"({self.N_CASES} cases, max |centroid - midpoint| {worst:.2e} <= 1e-9)"
        )
        assert ok

    def test_centroid_translation_equivariance(self, announce):
        grid = DomainGrid(0, 20, 0.1)
        xs = grid.points()
        rng = random.Random(8)
        worst = 0.0
        for _ in range(self.N_CASES):
            # Index-based construction keeps both the base set and its
            # translate exactly on grid points.
            n = rng.randint(1, 8)
            pairs = [
                sorted((rng.randrange(0, 60), rng.randrange(0, 60)))
                for _ in range(n)
            ]
            shift = rng.randrange(0, 100)
            base = [Interval(float(xs[i]), float(xs[j])) for i, j in pairs]
            moved = [
                Interval(float(xs[i + shift]), float(xs[j + shift]))
                for i, j in pairs
            ]
            delta = shift * grid.step
            c0 = centroid(build_iaa(base, grid))
            c1 = centroid(build_iaa(moved, grid))
            worst = max(worst, abs((c1 - c0) - delta))
        ok = worst <= 1e-9
        announce(
            f"centroid translation: {verdict(ok)} "
            f"({self.N_CASES} cases, max |shift error| {worst:.2e} <= 1e-9)"
        )
        assert ok

    def test_height_is_quantized(self, announce):
        grid = DomainGrid(0, 10, 0.1)
        rng = random.Random(9)
        ok = True
        for _ in range(self.N_CASES):
            ivs = random_interval_set(rng, grid, max_n=30)
            h = height(build_iaa(ivs, grid)) * len(ivs)
            ok &= abs(h - round(h)) <= 1e-9
        announce(
            f"height quantization: {verdict(ok)} "
            f"({self.N_CASES} cases, height * N always within 1e-9 of an integer)"
        )
        assert ok

    def test_support_grows_with_added_intervals(self, announce):
        grid = DomainGrid(0, 10, 0.1)
        rng = random.Random(10)
        ok = True
        for _ in range(self.N_CASES):
            ivs = random_interval_set(rng, grid, max_n=10)
            before = support_size(build_iaa(ivs, grid))
            after = support_size(build_iaa(ivs + [random_interval(rng, grid)], grid))
            ok &= after >= before - 1e-12
        announce(
            f"support monotonicity: {verdict(ok)} "
            f"({self.N_CASES} cases, support never shrank when adding an interval)"
        )
        assert ok


class TestEquidistanceFixture:
    @staticmethod
    def _dataset(centers):
        from test_analysis import equidistant_dataset

        return equidistant_dataset(centers=centers)

    def test_uniform_centers_give_uniform_gaps(self, announce):
        result = analyze(self._dataset((1, 3, 5, 7, 9)))
        gaps = [g.gap for g in result.gaps]
        worst = max(abs(g - 2.0) for g in gaps)
        no_violation = not any(
            "ordering_violation" in g.flags for g in result.gaps
        )
        ok = worst <= 1e-6 and no_violation and len(gaps) == 4
        announce(
            f"equidistant fixture: {verdict(ok)} "
            f"(four gaps, max |gap - 2.0| {worst:.2e} <= 1e-6, ordering clean)"
        )
        assert ok

    def test_perturbed_word_shifts_two_gaps(self, announce):
        from test_analysis import equidistant_dataset

        result = analyze(
            equidistant_dataset(centers=(1, 3, 5, 7, 9), shift_word="word 3", delta=1.0)
        )
        gaps = [g.gap for g in result.gaps]
        expected = [2.0, 3.0, 1.0, 2.0]
        worst = max(abs(g - e) for g, e in zip(gaps, expected))
        ok = worst <= 1e-6
        announce(
            f"perturbed fixture: {verdict(ok)} "
            f"(gaps {[round(g, 3) for g in gaps]} vs {expected}, "
            f"max error {worst:.2e} <= 1e-6)"
        )
        assert ok


class TestPipelineShape:
    def test_three_groups_plus_composite(self, announce):
        start = time.perf_counter()
        ds = synthetic_dataset()
        specs = [GroupSpec(g) for g in GROUPS]
        specs.append(GroupSpec("ps", frozenset({"physio", "surgeon"})))
        result = analyze(ds, specs)

        shape_ok = set(result.matrices) == set(WORDS)
        sym_ok = True
        diag_ok = True
        for matrix in result.matrices.values():
            shape_ok &= matrix.values.shape == (4, 4)
            sym_ok &= bool(np.array_equal(matrix.values, matrix.values.T))
            diag_ok &= bool(np.array_equal(np.diag(matrix.values), np.ones(4)))
        avg_ok = result.average is not None and result.average.values.shape == (4, 4)

        identical = analyze(
            synthetic_dataset(identical_groups=True),
            [GroupSpec(g) for g in GROUPS],
        )
        off_diag_ok = all(
            np.allclose(m.values, 1.0) for m in identical.matrices.values()
        )
        elapsed = time.perf_counter() - start
        ok = (
            shape_ok and sym_ok and diag_ok and avg_ok and off_diag_ok
            and elapsed < 10.0
        )
        announce(
            f"pipeline shape: {verdict(ok)} "
            f"(five 4x4 matrices symmetric={sym_ok} unit-diagonal={diag_ok}, "
            f"average={avg_ok}, identical-groups all 1.000={off_diag_ok}, "
            f"{elapsed:.2f}s < 10s)"
        )
        assert ok


class TestAnalyzeDeterminism:
    def test_byte_identical_reruns(self, announce, tmp_path):
        src = tmp_path / "survey.json"
        src.write_text(serialize_dataset(synthetic_dataset(), "json"))
        outs = []
        for name in ("one", "two"):
            out = tmp_path / name
            code = main(
                [
                    "analyze",
                    str(src),
                    "--merge",
                    "ps=physio,surgeon",
                    "--plots",
                    "--out",
                    str(out),
                ]
            )
            assert code == 0
            outs.append(out)
        names = sorted(p.name for p in outs[0].iterdir())
        same_names = names == sorted(p.name for p in outs[1].iterdir())
        diffs = [
            name
            for name in names
            if (outs[0] / name).read_bytes() != (outs[1] / name).read_bytes()
        ]
        ok = same_names and not diffs
        announce(
            f"analyze determinism: {verdict(ok)} "
            f"({len(names)} files byte-identical across two runs)"
        )
        assert same_names
        assert diffs == []


class TestIngestRoundTrip:
    def test_round_trip_and_fuzz(self, announce):
        ds = synthetic_dataset()
        assert len(ds.participant_ids()) == 36
        csv_back = parse_dataset(
            serialize_dataset(ds, "csv"), "csv", grid=ds.grid, words=ds.words
        )
        json_back = parse_dataset(serialize_dataset(ds, "json"), "json")
        round_trip_ok = csv_back == ds and json_back == ds

        rng = random.Random(2718)
        alphabet = string.printable
        snippets = [
            "participant_id,group,word,left,right",
            '{"scale"', '"responses"', '"words"', "nan", "inf", ",,,,",
            "1e999", '"left": 1', "\x00", "p01,patient,w,1,2",
        ]
        crashes = 0
        first_failure = None
        cases = 10_000
        for _ in range(cases):
            if rng.random() < 0.4:
                text = "".join(
                    rng.choice(alphabet) for _ in range(rng.randrange(0, 80))
                )
            else:
                text = "".join(
                    rng.choice(snippets) + rng.choice("\n, ")
                    for _ in range(rng.randrange(1, 6))
                )
            fmt = rng.choice(("csv", "json"))
            try:
                dataset, issues = validate_dataset(text, fmt)
                if dataset is None and not issues:
                    crashes += 1  # silent failure is as bad as a crash
                for issue in issues:
                    assert isinstance(issue, IaaError)
                    assert issue.kind
            except Exception as exc:  # IaaError included: must be collected
                crashes += 1
                if first_failure is None:
                    first_failure = (fmt, text[:80], repr(exc))
        ok = round_trip_ok and crashes == 0
        announce(
            f"ingest round-trip: {verdict(ok)} "
            f"(csv+json identity on 36x5 dataset={round_trip_ok}, "
            f"{cases} fuzz cases, {crashes} crashes)"
        )
        assert round_trip_ok
        assert crashes == 0, f"first failure: {first_failure}"


@pytest.fixture
def capture_service(tmp_path):
    survey = Survey(DomainGrid(), WORDS)
    store = ResponseStore(tmp_path / "responses.ndjson")
    server = create_server(survey, store, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    try:
        yield f"http://{host}:{port}"
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


def _post(url, payload):
    req = urllib.request.Request(
        url,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(req, timeout=10) as resp:
        return resp.status, json.loads(resp.read())


class TestCaptureRoundTrip:
    SELECTIONS = [(0, 1.5), (1, 3), (3, 6), (5, 8), (8, 10)]

    def test_scripted_client_export_matches_input(self, announce, capture_service):
        payload = {
            "participant_id": "scripted01",
            "group": "patient",
            "responses": [
                {"word": w, "left": l, "right": r}
                for w, (l, r) in zip(WORDS, self.SELECTIONS)
            ],
        }
        status, _ = _post(f"{capture_service}/api/submit", payload)
        with urllib.request.urlopen(
            f"{capture_service}/api/export", timeout=10
        ) as resp:
            raw = resp.read()
        ds = parse_dataset(raw, "json")
        parsed_ok = len(ds.records) == 5
        by_word = {rec.word: rec.interval for rec in ds.records}
        worst = max(
            max(abs(by_word[w].left - l), abs(by_word[w].right - r))
            for w, (l, r) in zip(WORDS, self.SELECTIONS)
        )
        ok = status == 200 and parsed_ok and worst <= 0.1
        announce(
            f"capture round-trip: {verdict(ok)} "
            f"(export parsed clean={parsed_ok}, max endpoint error "
            f"{worst:.3f} <= 0.1)"
        )
        assert ok

    def test_ten_concurrent_participants(self, announce, capture_service):
        barrier = threading.Barrier(10)

        def run(i):
            payload = {
                "participant_id": f"client{i:02d}",
                "group": "patient",
                "responses": [
                    {"word": w, "left": l, "right": r}
                    for w, (l, r) in zip(WORDS, self.SELECTIONS)
                ],
            }
            barrier.wait(timeout=10)
            return _post(f"{capture_service}/api/submit", payload)[0]

        with ThreadPoolExecutor(max_workers=10) as pool:
            statuses = list(pool.map(run, range(10)))
        with urllib.request.urlopen(
            f"{capture_service}/api/export", timeout=10
        ) as resp:
            doc = json.loads(resp.read())
        participants = {r["participant_id"] for r in doc["responses"]}
        complete = all(
            sum(1 for r in doc["responses"] if r["participant_id"] == p) == 5
            for p in participants
        )
        ok = (
            all(s == 200 for s in statuses)
            and len(participants) == 10
            and complete
        )
        announce(
            f"concurrent capture: {verdict(ok)} "
            f"(10 clients accepted={all(s == 200 for s in statuses)}, "
            f"{len(participants)} participants complete in export)"
        )
        assert ok
