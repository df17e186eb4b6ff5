"""Capture service tests: endpoints, persistence, concurrency, recovery."""

import json
import threading
import urllib.error
import urllib.request
from concurrent.futures import ThreadPoolExecutor

import pytest

from iaa import DomainGrid, ResponseStore, Survey, create_server, parse_dataset
from iaa.server import export_dataset, validate_submission
from conftest import WORDS


@pytest.fixture
def survey():
    return Survey(DomainGrid(), WORDS)


@pytest.fixture
def running_server(survey, tmp_path):
    store = ResponseStore(tmp_path / "responses.ndjson")
    server = create_server(survey, store, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    try:
        yield f"http://{host}:{port}", store
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


def get_json(url):
    with urllib.request.urlopen(url, timeout=10) as resp:
        return resp.status, json.loads(resp.read())


def post_json(url, payload):
    data = json.dumps(payload).encode()
    req = urllib.request.Request(
        url, data=data, headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req, timeout=10) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def submission(pid="p01", group="patient", pairs=None):
    pairs = pairs if pairs is not None else [(0, 1.5), (1, 3), (3, 6), (5, 8), (8, 10)]
    return {
        "participant_id": pid,
        "group": group,
        "responses": [
            {"word": w, "left": l, "right": r} for w, (l, r) in zip(WORDS, pairs)
        ],
    }


class TestSurveyEndpoint:
    def test_definition_has_words_and_scale_only(self, running_server):
        base, _ = running_server
        status, doc = get_json(f"{base}/api/survey")
        assert status == 200
        assert set(doc) == {"words", "scale"}
        assert doc["words"] == list(WORDS)
        assert doc["scale"] == {"min": 0.0, "max": 10.0, "step": 0.01}


class TestSubmit:
    def test_accepted_submission_appears_in_export(self, running_server):
        base, _ = running_server
        status, doc = post_json(f"{base}/api/submit", submission())
        assert status == 200
        assert doc["accepted"] is True
        assert doc["stored"] is True
        _, exported = get_json(f"{base}/api/export")
        assert len(exported["responses"]) == 5
        assert exported["responses"][0]["participant_id"] == "p01"

    def test_reversed_interval_rejected_with_kind(self, running_server):
        base, _ = running_server
        bad = submission(pairs=[(3, 1.5), (1, 3), (3, 6), (5, 8), (8, 10)])
        status, doc = post_json(f"{base}/api/submit", bad)
        assert status == 400
        assert doc["error"]["kind"] == "invalid_interval"
        assert doc["error"]["location"] == "responses[0]"

    def test_unknown_word_rejected(self, running_server, survey):
        base, _ = running_server
        payload = submission()
        payload["responses"][0]["word"] = "made up"
        status, doc = post_json(f"{base}/api/submit", payload)
        assert status == 400
        assert doc["error"]["kind"] == "unknown_word"

    def test_out_of_scale_rejected(self, running_server):
        base, _ = running_server
        payload = submission(pairs=[(0, 11), (1, 3), (3, 6), (5, 8), (8, 10)])
        status, doc = post_json(f"{base}/api/submit", payload)
        assert status == 400
        assert doc["error"]["kind"] == "domain_violation"

    def test_malformed_json_rejected(self, running_server):
        base, _ = running_server
        req = urllib.request.Request(
            f"{base}/api/submit",
            data=b"{not json",
            headers={"Content-Type": "application/json"},
        )
        with pytest.raises(urllib.error.HTTPError) as info:
            urllib.request.urlopen(req, timeout=10)
        assert info.value.code == 400

    def test_identical_resubmission_is_idempotent(self, running_server):
        base, store = running_server
        post_json(f"{base}/api/submit", submission())
        status, doc = post_json(f"{base}/api/submit", submission())
        assert status == 200
        assert doc["stored"] is False  # nothing appended the second time
        assert len(store) == 1

    def test_conflicting_resubmission_conflicts(self, running_server):
        base, _ = running_server
        post_json(f"{base}/api/submit", submission())
        changed = submission(pairs=[(0, 2), (1, 3), (3, 6), (5, 8), (8, 10)])
        status, doc = post_json(f"{base}/api/submit", changed)
        assert status == 409
        assert doc["error"]["kind"] == "duplicate_response"

    def test_skipped_words_are_allowed(self, running_server):
        base, _ = running_server
        payload = {
            "participant_id": "p09",
            "group": "patient",
            "responses": [{"word": WORDS[2], "left": 4.0, "right": 6.0}],
        }
        status, _ = post_json(f"{base}/api/submit", payload)
        assert status == 200
        _, exported = get_json(f"{base}/api/export")
        assert len(exported["responses"]) == 1

    def test_duplicate_word_within_submission_rejected(self, running_server):
        base, _ = running_server
        payload = submission()
        payload["responses"].append(
            {"word": WORDS[0], "left": 0.0, "right": 1.0}
        )
        status, doc = post_json(f"{base}/api/submit", payload)
        assert status == 409
        assert doc["error"]["kind"] == "duplicate_response"


class TestExport:
    def test_round_trips_through_the_parser(self, running_server):
        base, _ = running_server
        post_json(f"{base}/api/submit", submission("p01", "patient"))
        post_json(f"{base}/api/submit", submission("p02", "physio"))
        with urllib.request.urlopen(f"{base}/api/export", timeout=10) as resp:
            raw = resp.read()
        ds = parse_dataset(raw, "json")
        assert len(ds.records) == 10
        assert ds.words == WORDS
        assert ds.grid == DomainGrid()

    def test_empty_store_exports_empty_dataset(self, running_server):
        base, _ = running_server
        status, doc = get_json(f"{base}/api/export")
        assert status == 200
        assert doc["responses"] == []
        assert doc["words"] == list(WORDS)


class TestConcurrency:
    def test_simultaneous_participants_all_recorded(self, running_server):
        base, store = running_server
        barrier = threading.Barrier(10)

        def submit(i):
            barrier.wait(timeout=10)
            return post_json(
                f"{base}/api/submit", submission(f"p{i:02d}", "patient")
            )

        with ThreadPoolExecutor(max_workers=10) as pool:
            results = list(pool.map(submit, range(10)))
        assert all(status == 200 for status, _ in results)
        assert len(store) == 10
        _, exported = get_json(f"{base}/api/export")
        participants = {r["participant_id"] for r in exported["responses"]}
        assert len(participants) == 10
        assert len(exported["responses"]) == 50


class TestPersistence:
    def test_restart_replays_the_log(self, survey, tmp_path):
        path = tmp_path / "responses.ndjson"
        store = ResponseStore(path)
        store.append(validate_submission(submission(), survey))
        reopened = ResponseStore(path)
        assert len(reopened) == 1
        ds = export_dataset(survey, reopened)
        assert len(ds.records) == 5

    def test_truncated_final_line_is_dropped(self, survey, tmp_path):
        path = tmp_path / "responses.ndjson"
        store = ResponseStore(path)
        store.append(validate_submission(submission("p01"), survey))
        store.append(validate_submission(submission("p02"), survey))
        with open(path, "a") as fh:
            fh.write('{"participant_id": "p03", "group": "pa')  # crash artifact
        reopened = ResponseStore(path)
        assert len(reopened) == 2
        # The file itself was healed so later appends stay parseable
        reopened.append(validate_submission(submission("p03"), survey))
        final = ResponseStore(path)
        assert len(final) == 3

    def test_corrupt_middle_line_refuses_to_load(self, survey, tmp_path):
        path = tmp_path / "responses.ndjson"
        path.write_text('{"broken": \n{"participant_id": "x"}\n')
        from iaa import ParseError

        with pytest.raises(ParseError, match="line 1"):
            ResponseStore(path)

    def test_identical_replay_via_store_is_noop(self, survey, tmp_path):
        store = ResponseStore(tmp_path / "r.ndjson")
        first = store.append(validate_submission(submission(), survey))
        second = store.append(validate_submission(submission(), survey))
        assert first is True
        assert second is False


class TestStaticAssets:
    def test_fallback_page_lists_api(self, running_server):
        base, _ = running_server
        with urllib.request.urlopen(f"{base}/", timeout=10) as resp:
            body = resp.read().decode()
        assert "/api/survey" in body

    def test_ui_directory_is_served(self, survey, tmp_path):
        ui = tmp_path / "ui"
        ui.mkdir()
        (ui / "index.html").write_text("<html><body>capture form</body></html>")
        (ui / "style.css").write_text("body { margin: 0 }")
        store = ResponseStore(tmp_path / "r.ndjson")
        server = create_server(survey, store, port=0, ui_dir=ui)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        host, port = server.server_address[:2]
        try:
            with urllib.request.urlopen(f"http://{host}:{port}/", timeout=10) as resp:
                assert b"capture form" in resp.read()
            with urllib.request.urlopen(
                f"http://{host}:{port}/style.css", timeout=10
            ) as resp:
                assert resp.headers["Content-Type"].startswith("text/css")
            with pytest.raises(urllib.error.HTTPError) as info:
                urllib.request.urlopen(
                    f"http://{host}:{port}/../secret.txt", timeout=10
                )
            assert info.value.code == 404
        finally:
            server.shutdown()
            server.server_close()
            thread.join(timeout=5)
