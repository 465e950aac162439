import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

import fixture_docs
from tosaudit import corpus, interface_assess, pipeline


def build_fixture_corpus(root):
    """Materialize the synthetic corpus under root; returns root."""
    manifest = corpus.CorpusManifest(created_at="2025-11-01T00:00:00Z")
    for platform in fixture_docs.PLATFORMS:
        media_kind, text = fixture_docs.DOCS[platform]
        payload = text.encode("utf-8")
        entry = corpus.SnapshotEntry(
            platform=platform,
            source_url=f"https://example.org/{platform}/terms",
            retrieved_at="2025-11-01T00:00:00Z",
            content_digest=corpus.digest_bytes(payload),
            payload_path="",
            media_kind=media_kind,
        )
        manifest, stored = corpus.store_snapshot(
            manifest, entry, payload, str(root))
        assert stored
    cfg_path = root / pipeline.EXTRACTION_CONFIG_NAME
    cfg_path.write_text(
        json.dumps(fixture_docs.EXTRACTION_CONFIG, indent=2) + "\n",
        encoding="utf-8")
    adir = root / pipeline.ASSESSMENTS_DIR
    for platform in fixture_docs.PLATFORMS:
        assessment = interface_assess.assessment_from_dict(
            fixture_docs.assessment_dict(platform))
        interface_assess.store_assessment(str(adir), assessment)
    return root


@pytest.fixture(scope="session")
def fixture_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return build_fixture_corpus(root)


class _FixtureHandler(BaseHTTPRequestHandler):
    """Serves the fixture documents at /tos/<platform>."""

    def do_GET(self):
        if self.path == "/slow":
            time.sleep(2)
            self._send(200, "text/plain", b"finally")
            return
        if self.path.startswith("/tos/"):
            platform = self.path[len("/tos/"):]
            doc = fixture_docs.DOCS.get(platform)
            if doc is not None:
                media_kind, text = doc
                ctype = ("text/html; charset=utf-8" if media_kind == "html"
                         else "text/plain; charset=utf-8")
                self._send(200, ctype, text.encode("utf-8"))
                return
        self._send(404, "text/plain", b"not found")

    def _send(self, status, ctype, body):
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture(scope="session")
def http_base():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _FixtureHandler)
    server.daemon_threads = True
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    thread.join(timeout=5)


@pytest.fixture(scope="session")
def pipeline_run(fixture_corpus):
    results, failures = pipeline.run_pipeline(str(fixture_corpus))
    return results, failures


@pytest.fixture(scope="session")
def results_by_platform(pipeline_run):
    results, _ = pipeline_run
    return {r.platform: r for r in results}
