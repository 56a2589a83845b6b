"""Shared fixtures: a recording upstream stub and a running gateway."""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from http.client import HTTPConnection
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from fpguard.logstore import LogStore
from fpguard.profiles import SessionStore
from fpguard.proxy import GatewayProxy, SessionRegistry


@dataclass
class RecordedRequest:
    method: str
    path: str
    headers: list[tuple[str, str]]
    body: bytes


@dataclass
class CannedResponse:
    status: int = 200
    headers: list[tuple[str, str]] = field(default_factory=list)
    body: bytes = b""


class UpstreamStub:
    """Origin server that records every request it sees and answers with
    per-path canned responses. Sends no implicit headers, so the bytes a
    client observes are exactly what the test configured."""

    def __init__(self):
        self.requests: list[RecordedRequest] = []
        self.responses: dict[str, CannedResponse] = {}
        self._lock = threading.Lock()
        stub = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args):
                pass

            def _serve(self):
                length = int(self.headers.get("Content-Length") or 0)
                body = self.rfile.read(length) if length else b""
                with stub._lock:
                    stub.requests.append(RecordedRequest(
                        self.command, self.path, list(self.headers.items()), body,
                    ))
                    canned = stub.responses.get(self.path, CannedResponse())
                self.send_response_only(canned.status)
                has_length = False
                for name, value in canned.headers:
                    if name.lower() == "content-length":
                        has_length = True
                    self.send_header(name, value)
                if not has_length:
                    self.send_header("Content-Length", str(len(canned.body)))
                self.end_headers()
                if self.command != "HEAD":
                    self.wfile.write(canned.body)

            do_GET = do_POST = do_HEAD = do_PUT = do_DELETE = _serve

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.server.daemon_threads = True
        self.thread = threading.Thread(
            target=lambda: self.server.serve_forever(poll_interval=0.05), daemon=True)
        self.thread.start()

    @property
    def port(self) -> int:
        return self.server.server_address[1]

    def url(self, path: str) -> str:
        return f"http://127.0.0.1:{self.port}{path}"

    def on(self, path: str, body: bytes = b"", status: int = 200,
           headers: list[tuple[str, str]] | None = None) -> None:
        self.responses[path] = CannedResponse(status, headers or [], body)

    def reset(self) -> None:
        with self._lock:
            self.requests.clear()

    def close(self) -> None:
        self.server.shutdown()
        self.server.server_close()


class GatewayFixture:
    """Gateway wired for tests, plus a raw-ish HTTP client through it."""

    def __init__(self, tmp_path, master_seed=None, idle_timeout=3600.0, assets_dir=None,
                 capacity_bytes=1024 * 1024):
        self.session_store = SessionStore()
        self.log_store = LogStore(tmp_path / "logs", capacity_bytes=capacity_bytes)
        self.registry = SessionRegistry(idle_timeout_s=idle_timeout,
                                        on_expire=self.session_store.clear)
        self.proxy = GatewayProxy(
            session_store=self.session_store,
            log_store=self.log_store,
            registry=self.registry,
            master_seed=master_seed,
            assets_dir=assets_dir,
        )
        self.server = self.proxy.make_server("127.0.0.1", 0)
        self.thread = threading.Thread(
            target=lambda: self.server.serve_forever(poll_interval=0.05), daemon=True)
        self.thread.start()

    @property
    def port(self) -> int:
        return self.server.server_address[1]

    def request(self, method: str, url: str, headers: dict | None = None,
                body: bytes | None = None):
        """One absolute-form request through the proxy; returns
        (status, header-pairs, body)."""
        conn = HTTPConnection("127.0.0.1", self.port, timeout=10)
        try:
            conn.request(method, url, body=body, headers=headers or {})
            response = conn.getresponse()
            data = response.read()
            return response.status, response.getheaders(), data
        finally:
            conn.close()

    def get_json(self, url: str):
        status, _, body = self.request("GET", url)
        return status, json.loads(body)

    def post_json(self, url: str, payload) -> tuple[int, dict]:
        body = json.dumps(payload).encode()
        status, _, data = self.request(
            "POST", url, headers={"Content-Type": "application/json"}, body=body
        )
        return status, json.loads(data)

    def session_id(self) -> str:
        """The session token the gateway assigned this client."""
        _, payload = self.get_json("/__fpguard/config")
        return payload["session_id"]

    def close(self) -> None:
        self.server.shutdown()
        self.server.server_close()
        self.log_store.close()


@pytest.fixture
def upstream():
    stub = UpstreamStub()
    yield stub
    stub.close()


@pytest.fixture
def gateway(tmp_path):
    fixture = GatewayFixture(tmp_path)
    yield fixture
    fixture.close()


@pytest.fixture
def seeded_gateway(tmp_path):
    fixture = GatewayFixture(tmp_path, master_seed=20240)
    yield fixture
    fixture.close()
