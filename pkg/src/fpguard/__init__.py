"""fpguard: a local anti-fingerprinting gateway.

A forward proxy that presents a forged, per-session browser identity:
request headers are rewritten from a seeded profile, HTML responses get
an in-page payload injected at document-start, and every fingerprint
access a page attempts is batched into a persistent log behind a
dashboard API.
"""

from .fingerprint import (
    PixelBuffer,
    SpectrumFrame,
    audio_fingerprint,
    canvas_fingerprint,
    inject_audio_noise,
    inject_canvas_noise,
    triangle_wave,
    webgl_fingerprint,
)
from .headers import HeaderMap, RewriteRule, apply_rules, compile_rules
from .htmlinject import InjectionOutcome, inject_payload
from .logstore import EvictionReport, LogRecord, LogStore
from .md5 import md5_hex
from .profiles import (
    FingerprintProfile,
    GenerationPrefs,
    OptionCatalog,
    SessionConfig,
    SessionStore,
    generate_profile,
)
from .service import Gateway, GatewayConfig, report, run

__version__ = "0.1.0"

__all__ = [
    "PixelBuffer",
    "SpectrumFrame",
    "audio_fingerprint",
    "canvas_fingerprint",
    "inject_audio_noise",
    "inject_canvas_noise",
    "triangle_wave",
    "webgl_fingerprint",
    "HeaderMap",
    "RewriteRule",
    "apply_rules",
    "compile_rules",
    "InjectionOutcome",
    "inject_payload",
    "EvictionReport",
    "LogRecord",
    "LogStore",
    "md5_hex",
    "FingerprintProfile",
    "GenerationPrefs",
    "OptionCatalog",
    "SessionConfig",
    "SessionStore",
    "generate_profile",
    "Gateway",
    "GatewayConfig",
    "report",
    "run",
    "__version__",
]
