"""Command line entry point.

Every flag has an FPGUARD_-prefixed environment variable override
(flag wins). Exit codes: 0 ok, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .logstore import COMPAT_CAPACITY, CorruptSegmentError, DEFAULT_CAPACITY
from .profiles import COMPAT_SESSION_CAPACITY, DEFAULT_SESSION_CAPACITY
from .service import ConfigError, Gateway, GatewayConfig, RuntimeStartError, report

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

_SIZE_SUFFIXES = {"k": 1024, "m": 1024**2, "g": 1024**3}


def parse_size(text: str) -> int:
    """Byte count, accepting 1048576 / 1M / 10MB style values."""
    cleaned = text.strip().lower().removesuffix("b")
    if cleaned and cleaned[-1] in _SIZE_SUFFIXES:
        return int(float(cleaned[:-1]) * _SIZE_SUFFIXES[cleaned[-1]])
    return int(cleaned)


def _env(name: str, default=None):
    return os.environ.get(f"FPGUARD_{name}", default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpguard",
        description="Anti-fingerprinting gateway: run a spoofing proxy or report on logged "
        "fingerprint access attempts.",
    )
    parser.add_argument("--listen", default=_env("LISTEN", "127.0.0.1:8888"),
                        help="host:port for the proxy listener (default %(default)s)")
    parser.add_argument("--store", default=_env("STORE", "fpguard-store"),
                        help="log store directory (default %(default)s)")
    parser.add_argument("--capacity", default=_env("CAPACITY"), metavar="BYTES",
                        help=f"log store capacity (default {DEFAULT_CAPACITY}; accepts 10M style)")
    parser.add_argument("--options", default=_env("OPTIONS"), metavar="PATH",
                        help="option-list JSON file (default: packaged lists)")
    parser.add_argument("--seed", default=_env("SEED"), metavar="N",
                        help="master seed: new sessions get an auto-generated profile")
    parser.add_argument("--idle-timeout", default=_env("IDLE_TIMEOUT", "1800"), metavar="SECONDS",
                        help="session idle expiry (default %(default)s)")
    parser.add_argument("--no-ui", action="store_true",
                        default=_env("NO_UI", "") not in ("", "0", "false"),
                        help="do not serve the control UI assets")
    parser.add_argument("--ui-assets", default=_env("UI_ASSETS"), metavar="DIR",
                        help="directory with built UI assets (default: packaged stub)")
    parser.add_argument("--report", choices=["text", "json"], default=None,
                        help="print aggregates for --store and exit instead of serving")
    parser.add_argument("--legacy-session-quota", action="store_true",
                        help=f"cap the session store at {COMPAT_SESSION_CAPACITY} bytes")
    parser.add_argument("--legacy-store-quota", action="store_true",
                        help=f"cap the log store at {COMPAT_CAPACITY} bytes")
    parser.add_argument("--tls-intercept", action="store_true",
                        default=_env("TLS_INTERCEPT", "") not in ("", "0", "false"),
                        help="MITM https traffic with a locally generated root CA")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def _config_from_args(args: argparse.Namespace) -> GatewayConfig:
    host, _, port_text = args.listen.rpartition(":")
    if not host or not port_text.isdigit():
        raise ConfigError(f"--listen must be host:port, got {args.listen!r}")
    if args.legacy_store_quota and args.capacity:
        raise ConfigError("--capacity and --legacy-store-quota are mutually exclusive")
    if args.legacy_store_quota:
        capacity = COMPAT_CAPACITY
    elif args.capacity:
        try:
            capacity = parse_size(args.capacity)
        except ValueError:
            raise ConfigError(f"cannot parse --capacity value {args.capacity!r}") from None
    else:
        capacity = DEFAULT_CAPACITY
    try:
        seed = int(args.seed) if args.seed is not None else None
    except ValueError:
        raise ConfigError(f"--seed must be an integer, got {args.seed!r}") from None
    try:
        idle = float(args.idle_timeout)
    except ValueError:
        raise ConfigError(f"--idle-timeout must be numeric, got {args.idle_timeout!r}") from None
    return GatewayConfig(
        listen_host=host,
        listen_port=int(port_text),
        store_dir=args.store,
        capacity_bytes=capacity,
        session_capacity_bytes=(
            COMPAT_SESSION_CAPACITY if args.legacy_session_quota else DEFAULT_SESSION_CAPACITY
        ),
        options_path=args.options,
        master_seed=seed,
        idle_timeout_s=idle,
        serve_ui=not args.no_ui,
        ui_assets_dir=args.ui_assets,
        tls_intercept=args.tls_intercept,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    if args.report is not None:
        try:
            print(report(args.store, args.report))
        except ConfigError as exc:
            print(f"fpguard: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except (CorruptSegmentError, OSError) as exc:
            print(f"fpguard: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        return EXIT_OK
    try:
        config = _config_from_args(args)
        gateway = Gateway(config)
    except ConfigError as exc:
        print(f"fpguard: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeStartError as exc:
        print(f"fpguard: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        gateway.serve_forever()
    except Exception as exc:  # serve loop died unexpectedly
        print(f"fpguard: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
