"""Gateway lifecycle: validated configuration, startup, shutdown, reporting."""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .logstore import DEFAULT_CAPACITY, LogStore
from .profiles import DEFAULT_SESSION_CAPACITY, OptionCatalog, SessionStore
from .proxy import GatewayProxy, SessionRegistry, TlsInterceptConfig

logger = logging.getLogger("fpguard.service")

MIN_CAPACITY = 1 * 1024 * 1024


class ConfigError(ValueError):
    """Invalid gateway configuration (maps to exit code 1)."""


class RuntimeStartError(RuntimeError):
    """Startup failed at runtime, e.g. the listen port is busy (exit code 2)."""


@dataclass
class GatewayConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8888
    store_dir: str = "fpguard-store"
    capacity_bytes: int = DEFAULT_CAPACITY
    session_capacity_bytes: int = DEFAULT_SESSION_CAPACITY
    options_path: str | None = None
    master_seed: int | None = None
    idle_timeout_s: float = 1800.0
    serve_ui: bool = True
    ui_assets_dir: str | None = None
    tls_intercept: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.capacity_bytes < MIN_CAPACITY:
            raise ConfigError(
                f"log capacity must be at least {MIN_CAPACITY} bytes, got {self.capacity_bytes}"
            )
        if self.options_path is not None and not Path(self.options_path).is_file():
            raise ConfigError(f"options file not readable: {self.options_path}")
        if self.ui_assets_dir is not None and not Path(self.ui_assets_dir).is_dir():
            raise ConfigError(f"ui assets directory not readable: {self.ui_assets_dir}")
        if self.idle_timeout_s <= 0:
            raise ConfigError("idle timeout must be positive")
        if not 0 <= self.listen_port < 65536:  # 0 = OS-assigned
            raise ConfigError(f"listen port out of range: {self.listen_port}")


class Gateway:
    """A running gateway; stop() shuts the listener down and flushes logs."""

    def __init__(self, config: GatewayConfig):
        config.validate()
        self.config = config
        if config.options_path:
            self.catalog = OptionCatalog.load(config.options_path)
        else:
            self.catalog = OptionCatalog.load_default()
        self.session_store = SessionStore(config.session_capacity_bytes)
        self.log_store = LogStore(config.store_dir, config.capacity_bytes)
        self.registry = SessionRegistry(
            idle_timeout_s=config.idle_timeout_s,
            on_expire=self.session_store.clear,
        )
        tls = None
        if config.tls_intercept:
            from .ca import CertificateAuthority

            authority = CertificateAuthority.ensure(Path(config.store_dir) / "ca")
            tls = TlsInterceptConfig(authority=authority)
        self.proxy = GatewayProxy(
            session_store=self.session_store,
            log_store=self.log_store,
            registry=self.registry,
            assets_dir=config.ui_assets_dir,
            master_seed=config.master_seed,
            serve_ui=config.serve_ui,
            tls_intercept=tls,
        )
        try:
            self._server = self.proxy.make_server(config.listen_host, config.listen_port)
        except OSError as exc:
            self.log_store.close()
            raise RuntimeStartError(
                f"cannot listen on {config.listen_host}:{config.listen_port}: {exc}"
            ) from exc
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def start(self) -> "Gateway":
        self._thread = threading.Thread(
            target=lambda: self._server.serve_forever(poll_interval=0.1),
            name="fpguard-proxy",
            daemon=True,
        )
        self._thread.start()
        logger.info("gateway listening on %s:%d", *self.address)
        return self

    def serve_forever(self) -> None:
        logger.info("gateway listening on %s:%d", *self.address)
        try:
            self._server.serve_forever()
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=10)
            self._thread = None
        self.log_store.close()
        logger.info("gateway stopped; log store flushed")


def run(config: GatewayConfig) -> Gateway:
    """Build and start a gateway in a background thread."""
    return Gateway(config).start()


def report(store_dir: str | Path, fmt: str = "text", capacity_bytes: int = DEFAULT_CAPACITY) -> str:
    """Offline aggregates over a store directory: pure function of its contents."""
    if fmt not in ("text", "json"):
        raise ConfigError(f"unknown report format {fmt!r}")
    store = LogStore(store_dir, capacity_bytes)
    try:
        attributes = store.query_attribute_counts()
        urls = store.query_url_list()
    finally:
        store.close()
    if fmt == "json":
        return json.dumps(
            {
                "attributes": [
                    {
                        "attribute": s.attribute,
                        "total_count": s.total_count,
                        "distinct_origins": s.distinct_origins,
                    }
                    for s in attributes
                ],
                "urls": [
                    {"page_url": u.page_url, "total_count": u.total_count, "last_ts": u.last_ts}
                    for u in urls
                ],
            },
            indent=2,
        )
    lines = ["fingerprint access report", ""]
    if not attributes:
        lines.append("(store is empty)")
        return "\n".join(lines)
    lines.append(f"{'attribute':<20} {'total':>8} {'origins':>8}")
    for s in attributes:
        lines.append(f"{s.attribute:<20} {s.total_count:>8} {s.distinct_origins:>8}")
    lines.append("")
    lines.append(f"{'page url':<60} {'total':>8} {'last seen (unix-ms)':>20}")
    for u in urls:
        lines.append(f"{u.page_url:<60} {u.total_count:>8} {u.last_ts:>20}")
    return "\n".join(lines)
