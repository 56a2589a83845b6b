"""HTTP forward proxy: header rewriting, payload injection, reserved endpoints.

Every outbound request is rewritten per the client's session profile;
every HTML response gets the payload script injected at document-start
position. Paths under /__fpguard/ on any origin are answered by the
gateway itself and never reach an upstream, which gives the in-page
payload a same-origin beacon target and the UI a stable home.
"""

from __future__ import annotations

import gzip
import json
import logging
import os
import secrets
import select
import socket
import ssl
import threading
import time
import zlib
from dataclasses import dataclass
from http.client import HTTPConnection, HTTPSConnection
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .headers import HeaderMap, apply_rules, compile_rules
from .htmlinject import InjectionOutcome, encode_bootstrap, inject_payload
from .logstore import BatchValidationError, LogRecord, LogStore, StorageFullError, origin_of_url
from .profiles import (
    FingerprintProfile,
    ProfileError,
    SessionStore,
    SessionStorageFullError,
    generate_profile,
)
from .prng import mix64

logger = logging.getLogger("fpguard.proxy")

RESERVED_PREFIX = "/__fpguard/"
MAX_HTML_BUFFER = 8 * 1024 * 1024
_STREAM_CHUNK = 64 * 1024

# RFC 7230 hop-by-hop headers, never forwarded in either direction
_HOP_BY_HOP = {
    "connection", "keep-alive", "proxy-authenticate", "proxy-authorization",
    "proxy-connection", "te", "trailer", "transfer-encoding", "upgrade",
}

_MIME_BY_SUFFIX = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


@dataclass(frozen=True)
class SessionBinding:
    """One proxy client's browsing-session identity."""

    session_id: str
    client_hint: str
    issued_at: int  # unix-ms


class SessionRegistry:
    """Maps client addresses to session tokens with idle expiry.

    The proxy has no tab concept, so a browsing session is one client
    address seen without an idle gap; expiring a binding clears its
    stored config, mirroring session storage vanishing on browser close.
    """

    def __init__(self, idle_timeout_s: float = 1800.0, on_expire=None):
        self.idle_timeout_s = idle_timeout_s
        self._on_expire = on_expire
        self._lock = threading.Lock()
        self._bindings: dict[str, SessionBinding] = {}
        self._last_seen: dict[str, float] = {}

    def bind(self, client_hint: str, now: float | None = None) -> tuple[SessionBinding, bool]:
        """Active binding for a client plus whether it was just minted.

        A new binding is created when the client is unseen or its
        previous binding idled out; the expired session's config is
        cleared via the on_expire hook."""
        now = time.monotonic() if now is None else now
        expired_id = None
        with self._lock:
            binding = self._bindings.get(client_hint)
            if binding is not None and now - self._last_seen[client_hint] > self.idle_timeout_s:
                expired_id = binding.session_id
                binding = None
            is_new = binding is None
            if binding is None:
                binding = SessionBinding(
                    session_id=secrets.token_hex(16),
                    client_hint=client_hint,
                    issued_at=int(time.time() * 1000),
                )
                self._bindings[client_hint] = binding
            self._last_seen[client_hint] = now
        if expired_id and self._on_expire:
            self._on_expire(expired_id)
        return binding, is_new


@dataclass
class TlsInterceptConfig:
    """Optional man-in-the-middle mode; requires a generated root CA."""

    authority: object  # ca.CertificateAuthority
    upstream_verify: bool = True
    upstream_ca_file: str | None = None


class GatewayProxy:
    """The assembled gateway: servers are created via make_server()."""

    def __init__(
        self,
        session_store: SessionStore,
        log_store: LogStore,
        registry: SessionRegistry,
        assets_dir: str | Path | None = None,
        master_seed: int | None = None,
        serve_ui: bool = True,
        tls_intercept: TlsInterceptConfig | None = None,
    ):
        self.session_store = session_store
        self.log_store = log_store
        self.registry = registry
        self.assets_dir = Path(assets_dir) if assets_dir else _packaged_assets_dir()
        self.master_seed = master_seed
        self.serve_ui = serve_ui
        self.tls_intercept = tls_intercept
        self._auto_counter = 0
        self._auto_lock = threading.Lock()

    # -- session wiring ----------------------------------------------------

    def session_for(self, client_hint: str) -> SessionBinding:
        binding, is_new = self.registry.bind(client_hint)
        if is_new and self.master_seed is not None:
            with self._auto_lock:
                index = self._auto_counter
                self._auto_counter += 1
            profile = generate_profile(mix64(self.master_seed + index))
            try:
                self.session_store.set(binding.session_id, profile)
            except SessionStorageFullError:
                logger.warning("session store full; %s starts unconfigured", client_hint)
        return binding

    def profile_for(self, binding: SessionBinding) -> FingerprintProfile | None:
        return self.session_store.get(binding.session_id)

    def bootstrap_for(self, binding: SessionBinding) -> str | None:
        """Base64 config bootstrap for injection, or None when the session
        has no enabled profile."""
        profile = self.profile_for(binding)
        if profile is None or not profile.enabled:
            return None
        return encode_bootstrap(payload_config(profile, binding.session_id))

    def make_server(self, host: str, port: int) -> ThreadingHTTPServer:
        proxy = self

        class BoundHandler(_GatewayHandler):
            gateway = proxy

        server = ThreadingHTTPServer((host, port), BoundHandler)
        server.daemon_threads = True
        return server


def payload_config(profile: FingerprintProfile, session_id: str) -> dict:
    """The in-page subset of a profile, as shipped to the payload."""
    return {
        "session_id": session_id,
        "user_agent": profile.user_agent,
        "languages": list(profile.accept_language),
        "os_family": profile.os_family,
        "do_not_track": profile.do_not_track,
        "screen_width": profile.screen_width,
        "screen_height": profile.screen_height,
        "color_depth": profile.color_depth,
        "cpu_cores": profile.cpu_cores,
        "device_memory_gb": profile.device_memory_gb,
        "timezone": profile.timezone,
        "spoof_canvas": profile.spoof_canvas,
        "spoof_webgl": profile.spoof_webgl,
        "spoof_audio": profile.spoof_audio,
        "canvas_noise_seed": str(profile.canvas_noise_seed),
        "webgl_noise_seed": str(profile.webgl_noise_seed),
        "audio_noise_seed": str(profile.audio_noise_seed),
        "noise_amplitude": profile.noise_amplitude,
        "disable_webrtc": profile.disable_webrtc,
    }


def _packaged_assets_dir() -> Path:
    return Path(__file__).parent / "assets"


class _GatewayHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    gateway: GatewayProxy  # bound by make_server

    # tunnel state when serving a TLS-intercepted CONNECT
    _tunnel_host: str | None = None
    _tunnel_port: int | None = None

    server_version = "fpguard"
    sys_version = ""

    def log_message(self, fmt, *args):  # route to module logger, not stderr
        logger.debug("%s %s", self.address_string(), fmt % args)

    # -- plumbing ------------------------------------------------------------

    def _client_hint(self) -> str:
        return self.client_address[0]

    def _read_request_body(self) -> bytes:
        te = (self.headers.get("Transfer-Encoding") or "").lower()
        if "chunked" in te:
            chunks = []
            while True:
                size_line = self.rfile.readline(65536).strip()
                size = int(size_line.split(b";")[0], 16)
                if size == 0:
                    while self.rfile.readline(65536) not in (b"\r\n", b"\n", b""):
                        pass  # discard trailers
                    break
                chunks.append(self.rfile.read(size))
                self.rfile.readline(65536)  # trailing CRLF
            return b"".join(chunks)
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length else b""

    def _begin_response(self, status: int) -> None:
        # send_response_only: no implicit Server/Date headers, so relayed
        # upstream responses stay byte-comparable
        self.send_response_only(status)

    def _send_json(self, status: int, obj: dict) -> None:
        body = json.dumps(obj).encode("utf-8")
        self._begin_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", "no-store")
        self.end_headers()
        self.wfile.write(body)

    def _send_bytes(self, status: int, body: bytes, content_type: str) -> None:
        self._begin_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    # -- entry points ----------------------------------------------------------

    def _dispatch(self) -> None:
        try:
            target = self._resolve_target()
            if target is None:
                return  # already answered
            self._forward(*target)
        except ConnectionError:
            raise
        except Exception:
            logger.exception("request handling failed")
            try:
                self._send_json(502, {"error": "gateway failure"})
            except Exception:
                pass

    do_GET = do_POST = do_PUT = do_DELETE = do_HEAD = do_OPTIONS = do_PATCH = _dispatch

    def _resolve_target(self) -> tuple[str, str, int, str] | None:
        """Work out where this request goes.

        Returns (scheme, host, port, path_with_query) for upstream
        forwarding, or None when the request was reserved/invalid and a
        response has been written.
        """
        if self._tunnel_host is not None:
            path = self.path
            if path.startswith(RESERVED_PREFIX):
                self._route_reserved(path)
                return None
            return ("https", self._tunnel_host, self._tunnel_port or 443, path)
        if self.path.startswith("http://") or self.path.startswith("https://"):
            parts = urlsplit(self.path)
            path = parts.path or "/"
            if parts.query:
                path += "?" + parts.query
            if path.startswith(RESERVED_PREFIX):
                self._route_reserved(path)
                return None
            port = parts.port or (443 if parts.scheme == "https" else 80)
            return (parts.scheme, parts.hostname or "", port, path)
        # origin-form: the gateway addressed directly
        if self.path.startswith(RESERVED_PREFIX):
            self._route_reserved(self.path)
            return None
        if self.path == "/" or self.path == "":
            self._begin_response(302)
            self.send_header("Location", RESERVED_PREFIX + "ui/")
            self.send_header("Content-Length", "0")
            self.end_headers()
            return None
        self._send_json(400, {"error": "not a proxy request; see /__fpguard/ui/"})
        return None

    # -- forwarding ------------------------------------------------------------

    def _forward(self, scheme: str, host: str, port: int, path: str) -> None:
        binding = self.gateway.session_for(self._client_hint())
        profile = self.gateway.profile_for(binding)

        # content-length is re-sent explicitly below, transfer-encoding is
        # hop-by-hop: drop both from the forwarded set
        headers = HeaderMap(
            (name, value)
            for name, value in self.headers.items()
            if name.lower() not in _HOP_BY_HOP and name.lower() != "content-length"
        )
        target_url = f"{scheme}://{host}:{port}{path}"
        if profile is not None and profile.enabled:
            headers = apply_rules(headers, compile_rules(profile, target_url))

        body = self._read_request_body()

        try:
            upstream = self._open_upstream(scheme, host, port)
            upstream.putrequest(self.command, path, skip_host=True, skip_accept_encoding=True)
            sent_host = False
            for name, value in headers:
                upstream.putheader(name, value)
                if name.lower() == "host":
                    sent_host = True
            if not sent_host:
                upstream.putheader("Host", host if port in (80, 443) else f"{host}:{port}")
            if body or self.command in ("POST", "PUT", "PATCH"):
                upstream.putheader("Content-Length", str(len(body)))
            upstream.endheaders()
            if body:
                upstream.send(body)
            response = upstream.getresponse()
        except (OSError, ssl.SSLError) as exc:
            self._send_json(502, {"error": f"upstream unreachable: {exc}"})
            return

        try:
            self._relay_response(response, binding)
        finally:
            upstream.close()

    def _open_upstream(self, scheme: str, host: str, port: int):
        if scheme == "https":
            intercept = self.gateway.tls_intercept
            if intercept is not None and not intercept.upstream_verify:
                context = ssl._create_unverified_context()
            else:
                context = ssl.create_default_context()
                if intercept is not None and intercept.upstream_ca_file:
                    context.load_verify_locations(intercept.upstream_ca_file)
            return HTTPSConnection(host, port, timeout=60, context=context)
        return HTTPConnection(host, port, timeout=60)

    def _relay_response(self, response, binding: SessionBinding) -> None:
        content_type = response.getheader("Content-Type")
        bootstrap = self.gateway.bootstrap_for(binding)
        is_html = content_type is not None and content_type.split(";")[0].strip().lower() in (
            "text/html", "application/xhtml+xml",
        )
        head_only = self.command == "HEAD"

        if head_only or not is_html:
            self._stream_through(response)
            return

        body = response.read(MAX_HTML_BUFFER + 1)
        if len(body) > MAX_HTML_BUFFER:
            logger.warning("HTML body exceeds %d bytes; passing through uninjected",
                           MAX_HTML_BUFFER)
            self._stream_through(response, prefix=body)
            return

        encoding = (response.getheader("Content-Encoding") or "").lower().strip()
        decoded, decodable = _decode_body(body, encoding)
        if not decodable:
            outcome = InjectionOutcome(False, "not_html")
            rewritten = body
        else:
            rewritten, outcome = inject_payload(decoded, content_type, bootstrap)

        if outcome.injected:
            out_body = rewritten
            drop_encoding = encoding not in ("", "identity")
        else:
            out_body = body
            drop_encoding = False

        self._begin_response(response.status)
        for name, value in response.getheaders():
            lname = name.lower()
            if lname in _HOP_BY_HOP or lname == "content-length":
                continue
            if drop_encoding and lname == "content-encoding":
                continue
            self.send_header(name, value)
        self.send_header("Content-Length", str(len(out_body)))
        self.end_headers()
        self.wfile.write(out_body)

    def _stream_through(self, response, prefix: bytes = b"") -> None:
        """Relay a response byte-identically (modulo hop-by-hop headers)."""
        known_length = response.getheader("Content-Length")
        chunks = [prefix] if prefix else []
        while True:
            chunk = response.read(_STREAM_CHUNK)
            if not chunk:
                break
            chunks.append(chunk)
        body = b"".join(chunks)
        self._begin_response(response.status)
        sent_length = False
        for name, value in response.getheaders():
            lname = name.lower()
            if lname in _HOP_BY_HOP:
                continue
            if lname == "content-length":
                sent_length = True
            self.send_header(name, value)
        if not sent_length:
            self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        if self.command != "HEAD":
            self.wfile.write(body)

    # -- reserved endpoints ------------------------------------------------------

    def _route_reserved(self, path_with_query: str) -> None:
        parts = urlsplit(path_with_query)
        path = parts.path
        query = parse_qs(parts.query)
        binding = self.gateway.session_for(self._client_hint())

        if path == RESERVED_PREFIX + "health":
            self._send_json(200, {"status": "ok"})
        elif path == RESERVED_PREFIX + "config" and self.command == "GET":
            profile = self.gateway.profile_for(binding)
            if profile is None:
                self._send_json(200, {"present": False, "session_id": binding.session_id,
                                      "profile": None})
            else:
                self._send_json(200, {"present": True, "session_id": binding.session_id,
                                      "profile": profile.to_dict()})
        elif path == RESERVED_PREFIX + "config" and self.command == "POST":
            self._save_config(binding)
        elif path == RESERVED_PREFIX + "config" and self.command == "DELETE":
            self.gateway.session_store.clear(binding.session_id)
            self._send_json(200, {"ok": True})
        elif path == RESERVED_PREFIX + "logs" and self.command == "POST":
            self._ingest_logs()
        elif path == RESERVED_PREFIX + "api/stats" and self.command == "GET":
            self._send_stats(query)
        elif path == RESERVED_PREFIX + "api/urls" and self.command == "GET":
            urls = self.gateway.log_store.query_url_list()
            self._send_json(200, {"urls": [
                {"page_url": u.page_url, "total_count": u.total_count, "last_ts": u.last_ts}
                for u in urls
            ]})
        elif path.startswith(RESERVED_PREFIX + "ui/"):
            self._serve_asset(path[len(RESERVED_PREFIX + "ui/"):])
        else:
            self._send_json(404, {"error": f"unknown gateway path {path}"})

    def _save_config(self, binding: SessionBinding) -> None:
        try:
            raw = json.loads(self._read_request_body().decode("utf-8"))
            profile = FingerprintProfile.from_dict(raw)
        except (ValueError, ProfileError) as exc:
            self._send_json(400, {"error": f"invalid profile: {exc}"})
            return
        try:
            self.gateway.session_store.set(binding.session_id, profile)
        except SessionStorageFullError as exc:
            self._send_json(507, {"error": str(exc)})
            return
        self._send_json(200, {"ok": True, "session_id": binding.session_id})

    def _ingest_logs(self) -> None:
        try:
            raw = json.loads(self._read_request_body().decode("utf-8"))
            if not isinstance(raw, list):
                raise BatchValidationError("batch must be a JSON array")
            records = []
            for entry in raw:
                if not isinstance(entry, dict):
                    raise BatchValidationError("batch entries must be objects")
                url = entry.get("url")
                if not isinstance(url, str) or not url:
                    raise BatchValidationError("url must be a non-empty string")
                attribute = entry.get("attribute")
                if not isinstance(attribute, str):
                    raise BatchValidationError("attribute must be a string")
                records.append(LogRecord(
                    origin=origin_of_url(url),
                    page_url=url,
                    attribute=attribute,
                    count=entry.get("count"),
                    ts=entry.get("ts"),
                ))
        except (ValueError, BatchValidationError) as exc:
            self._send_json(400, {"error": f"invalid batch: {exc}"})
            return
        try:
            stored = self.gateway.log_store.ingest_batch(records)
        except StorageFullError as exc:
            self._send_json(507, {"error": str(exc)})
            return
        self._send_json(200, {"ok": True, "stored": stored})

    def _send_stats(self, query: dict) -> None:
        origin = query.get("origin", [None])[0]
        time_range = None
        if "from" in query and "to" in query:
            time_range = (int(query["from"][0]), int(query["to"][0]))
        stats = self.gateway.log_store.query_attribute_counts(origin, time_range)
        self._send_json(200, {"attributes": [
            {"attribute": s.attribute, "total_count": s.total_count,
             "distinct_origins": s.distinct_origins}
            for s in stats
        ]})

    def _serve_asset(self, rel: str) -> None:
        if not self.gateway.serve_ui:
            self._send_json(404, {"error": "ui disabled"})
            return
        rel = rel or "index.html"
        if rel == "payload":
            rel = "payload.js"
        base = self.gateway.assets_dir.resolve()
        target = (base / rel).resolve()
        if not str(target).startswith(str(base) + os.sep) or not target.is_file():
            self._send_json(404, {"error": f"no asset {rel!r}"})
            return
        mime = _MIME_BY_SUFFIX.get(target.suffix, "application/octet-stream")
        self._send_bytes(200, target.read_bytes(), mime)

    # -- CONNECT -------------------------------------------------------------

    def do_CONNECT(self) -> None:
        host, _, port_text = self.path.partition(":")
        port = int(port_text or 443)
        intercept = self.gateway.tls_intercept
        if intercept is None:
            self._tunnel_passthrough(host, port)
            return
        self.send_response_only(200, "Connection Established")
        self.end_headers()
        context = intercept.authority.server_context(host)
        try:
            tls_conn = context.wrap_socket(self.connection, server_side=True)
        except ssl.SSLError as exc:
            logger.warning("TLS handshake with client failed for %s: %s", host, exc)
            return
        self.connection = tls_conn
        self.rfile = tls_conn.makefile("rb", -1)
        self.wfile = tls_conn.makefile("wb", 0)
        self._tunnel_host = host
        self._tunnel_port = port
        self.close_connection = False
        while not self.close_connection:
            self.handle_one_request()

    def _tunnel_passthrough(self, host: str, port: int) -> None:
        try:
            upstream = socket.create_connection((host, port), timeout=60)
        except OSError as exc:
            self._send_json(502, {"error": f"upstream unreachable: {exc}"})
            return
        self.send_response_only(200, "Connection Established")
        self.end_headers()
        client = self.connection
        sockets = [client, upstream]
        try:
            while True:
                readable, _, _ = select.select(sockets, [], [], 60)
                if not readable:
                    break
                done = False
                for side in readable:
                    data = side.recv(_STREAM_CHUNK)
                    if not data:
                        done = True
                        break
                    (upstream if side is client else client).sendall(data)
                if done:
                    break
        finally:
            upstream.close()
        self.close_connection = True


def _decode_body(body: bytes, encoding: str) -> tuple[bytes, bool]:
    """Undo a response content encoding for rewriting. Unknown encodings
    report not-decodable so the body passes through untouched."""
    if encoding in ("", "identity"):
        return body, True
    try:
        if encoding == "gzip":
            return gzip.decompress(body), True
        if encoding == "deflate":
            try:
                return zlib.decompress(body), True
            except zlib.error:
                return zlib.decompress(body, -zlib.MAX_WBITS), True
    except (OSError, zlib.error):
        return body, False
    return body, False
