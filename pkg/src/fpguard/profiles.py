"""Forged-identity model: profile type, seeded generation, session store.

A FingerprintProfile is the complete disguise a browsing session
presents: user-agent and header settings, hardware characteristics,
timezone, and the per-surface noise seeds. Profiles are generated
deterministically from a 64-bit seed by drawing every list-backed field
from the shipped option catalog, so the same (seed, prefs) always
yields the same identity within a session.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .prng import SplitMix64, derive_noise_seeds

OS_FAMILIES = ("Windows", "Linux", "macOS", "Android", "iOS")
REFERER_MODES = ("keep", "strip", "origin_only")
COLOR_DEPTHS = (24, 30, 32)
DEVICE_MEMORY_CHOICES = (0.25, 0.5, 1, 2, 4, 8)
MAX_NOISE_AMPLITUDE = 8

DEFAULT_SESSION_CAPACITY = 10 * 1024 * 1024
COMPAT_SESSION_CAPACITY = 1 * 1024 * 1024  # older-Chrome session quota

# plausible draw pools for fields the option file doesn't carry
_SCREENS = {
    "Windows": [(1920, 1080), (2560, 1440), (1366, 768), (1536, 864), (1440, 900)],
    "Linux": [(1920, 1080), (2560, 1440), (1680, 1050), (1366, 768), (3840, 2160)],
    "macOS": [(1440, 900), (1680, 1050), (2560, 1600), (1512, 982), (1728, 1117)],
    "Android": [(412, 915), (393, 873), (360, 800), (412, 892), (384, 854)],
    "iOS": [(390, 844), (393, 852), (414, 896), (430, 932), (375, 812)],
}
_CPU_CORES = (2, 4, 4, 6, 8, 8, 12, 16)
_MEMORY_GB = (2, 4, 4, 8, 8)
_TIMEZONES = (
    "America/New_York", "America/Chicago", "America/Los_Angeles",
    "America/Vancouver", "America/Sao_Paulo", "Europe/London",
    "Europe/Berlin", "Europe/Paris", "Europe/Madrid", "Europe/Amsterdam",
    "Asia/Tokyo", "Asia/Seoul", "Asia/Shanghai", "Australia/Sydney",
)


class ProfileError(ValueError):
    """A profile or prefs value violates its invariants."""


class SessionStorageFullError(RuntimeError):
    """Session store quota would be exceeded by this write."""


@dataclass(frozen=True)
class UserAgentOption:
    user_agent: str
    browser_version: str


class OptionCatalog:
    """Shipped option lists: user agents per OS family, accept-language sets.

    File schema (docs/option-lists.md): a JSON object with "user_agents"
    keyed by OS family, each an array of {user_agent, browser_version},
    plus an "accept_languages" array of BCP-47 tag lists.
    """

    def __init__(self, user_agents: dict[str, list[UserAgentOption]],
                 accept_languages: list[list[str]]):
        for family in OS_FAMILIES:
            if len(user_agents.get(family, [])) < 5:
                raise ProfileError(f"option catalog needs >= 5 user agents for {family}")
        if len(accept_languages) < 8:
            raise ProfileError("option catalog needs >= 8 accept-language entries")
        self.user_agents = user_agents
        self.accept_languages = accept_languages

    @classmethod
    def from_dict(cls, raw: dict) -> "OptionCatalog":
        uas = {
            family: [UserAgentOption(e["user_agent"], e["browser_version"]) for e in entries]
            for family, entries in raw["user_agents"].items()
        }
        return cls(uas, [list(tags) for tags in raw["accept_languages"]])

    @classmethod
    def load(cls, path: str | Path) -> "OptionCatalog":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def load_default(cls) -> "OptionCatalog":
        raw = json.loads(
            resources.files("fpguard.data").joinpath("option_lists.json").read_text("utf-8")
        )
        return cls.from_dict(raw)

    def all_user_agents(self) -> set[str]:
        return {o.user_agent for options in self.user_agents.values() for o in options}


@dataclass(frozen=True)
class FingerprintProfile:
    """The full forged identity presented by one browsing session."""

    enabled: bool
    os_family: str
    user_agent: str
    accept_language: tuple[str, ...]
    do_not_track: bool
    prevent_etag: bool
    referer_mode: str
    x_forwarded_for: str | None
    screen_width: int
    screen_height: int
    color_depth: int
    cpu_cores: int
    device_memory_gb: float
    timezone: str
    spoof_canvas: bool
    spoof_webgl: bool
    spoof_audio: bool
    canvas_noise_seed: int
    webgl_noise_seed: int
    audio_noise_seed: int
    noise_amplitude: int
    disable_webrtc: bool

    def __post_init__(self):
        if self.os_family not in OS_FAMILIES:
            raise ProfileError(f"unknown os_family {self.os_family!r}")
        if self.referer_mode not in REFERER_MODES:
            raise ProfileError(f"unknown referer_mode {self.referer_mode!r}")
        if self.screen_width <= 0 or self.screen_height <= 0:
            raise ProfileError("screen dimensions must be positive")
        if self.color_depth not in COLOR_DEPTHS:
            raise ProfileError(f"color_depth must be one of {COLOR_DEPTHS}")
        if self.cpu_cores < 1:
            raise ProfileError("cpu_cores must be >= 1")
        if self.device_memory_gb not in DEVICE_MEMORY_CHOICES:
            raise ProfileError(f"device_memory_gb must be one of {DEVICE_MEMORY_CHOICES}")
        if not 0 <= self.noise_amplitude <= MAX_NOISE_AMPLITUDE:
            raise ProfileError(f"noise_amplitude must be in [0, {MAX_NOISE_AMPLITUDE}]")
        if self.x_forwarded_for is not None:
            _validate_ipv4(self.x_forwarded_for)
        for seed in (self.canvas_noise_seed, self.webgl_noise_seed, self.audio_noise_seed):
            if not 0 <= seed < (1 << 64):
                raise ProfileError("noise seeds must be 64-bit unsigned integers")

    def to_dict(self) -> dict:
        return {
            "enabled": self.enabled,
            "os_family": self.os_family,
            "user_agent": self.user_agent,
            "accept_language": list(self.accept_language),
            "do_not_track": self.do_not_track,
            "prevent_etag": self.prevent_etag,
            "referer_mode": self.referer_mode,
            "x_forwarded_for": self.x_forwarded_for,
            "screen_width": self.screen_width,
            "screen_height": self.screen_height,
            "color_depth": self.color_depth,
            "cpu_cores": self.cpu_cores,
            "device_memory_gb": self.device_memory_gb,
            "timezone": self.timezone,
            "spoof_canvas": self.spoof_canvas,
            "spoof_webgl": self.spoof_webgl,
            "spoof_audio": self.spoof_audio,
            "canvas_noise_seed": self.canvas_noise_seed,
            "webgl_noise_seed": self.webgl_noise_seed,
            "audio_noise_seed": self.audio_noise_seed,
            "noise_amplitude": self.noise_amplitude,
            "disable_webrtc": self.disable_webrtc,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "FingerprintProfile":
        try:
            return cls(
                enabled=bool(raw["enabled"]),
                os_family=raw["os_family"],
                user_agent=raw["user_agent"],
                accept_language=tuple(raw["accept_language"]),
                do_not_track=bool(raw["do_not_track"]),
                prevent_etag=bool(raw["prevent_etag"]),
                referer_mode=raw["referer_mode"],
                x_forwarded_for=raw.get("x_forwarded_for"),
                screen_width=int(raw["screen_width"]),
                screen_height=int(raw["screen_height"]),
                color_depth=int(raw["color_depth"]),
                cpu_cores=int(raw["cpu_cores"]),
                device_memory_gb=float(raw["device_memory_gb"]),
                timezone=raw["timezone"],
                spoof_canvas=bool(raw["spoof_canvas"]),
                spoof_webgl=bool(raw["spoof_webgl"]),
                spoof_audio=bool(raw["spoof_audio"]),
                canvas_noise_seed=int(raw["canvas_noise_seed"]),
                webgl_noise_seed=int(raw["webgl_noise_seed"]),
                audio_noise_seed=int(raw["audio_noise_seed"]),
                noise_amplitude=int(raw["noise_amplitude"]),
                disable_webrtc=bool(raw["disable_webrtc"]),
            )
        except KeyError as exc:
            raise ProfileError(f"profile missing field {exc.args[0]!r}") from exc

    def to_json(self) -> str:
        """Canonical serialization: sorted keys, compact separators."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "FingerprintProfile":
        return cls.from_dict(json.loads(text))


def _validate_ipv4(addr: str) -> None:
    parts = addr.split(".")
    if len(parts) != 4 or not all(p.isdigit() and 0 <= int(p) <= 255 for p in parts):
        raise ProfileError(f"x_forwarded_for must be dotted-quad IPv4, got {addr!r}")


@dataclass(frozen=True)
class GenerationPrefs:
    """User constraints on one-click random generation."""

    allowed_os_families: tuple[str, ...] = OS_FAMILIES
    spoof_canvas: bool = True
    spoof_webgl: bool = True
    spoof_audio: bool = True
    header_dnt: bool = True
    header_etag: bool = True
    header_referer: bool = True
    header_language: bool = True
    header_x_forwarded: bool = True

    def __post_init__(self):
        if not self.allowed_os_families:
            raise ProfileError("allowed_os_families must be non-empty")
        for family in self.allowed_os_families:
            if family not in OS_FAMILIES:
                raise ProfileError(f"unknown os_family {family!r} in prefs")


def generate_profile(
    seed: int,
    prefs: GenerationPrefs = GenerationPrefs(),
    catalog: OptionCatalog | None = None,
) -> FingerprintProfile:
    """Deterministic random profile: every list-backed field drawn from the
    shipped catalog, noise seeds derived from the master seed by three
    sequential mixer outputs.

    Draw order is fixed (noise seeds, OS, UA, language, screen, depth,
    cores, memory, timezone, amplitude, webrtc, forged client IP) and is
    part of the determinism contract.
    """
    if catalog is None:
        catalog = _default_catalog()
    canvas_seed, webgl_seed, audio_seed = derive_noise_seeds(seed)
    stream = SplitMix64(seed)
    for _ in range(3):  # skip past the noise-seed outputs
        stream.next_u64()

    allowed = [f for f in OS_FAMILIES if f in prefs.allowed_os_families]
    os_family = allowed[stream.next_below(len(allowed))]
    ua_options = catalog.user_agents[os_family]
    user_agent = ua_options[stream.next_below(len(ua_options))].user_agent

    if prefs.header_language:
        accept_language = tuple(
            catalog.accept_languages[stream.next_below(len(catalog.accept_languages))]
        )
    else:
        accept_language = ()

    screens = _SCREENS[os_family]
    width, height = screens[stream.next_below(len(screens))]
    color_depth = COLOR_DEPTHS[stream.next_below(len(COLOR_DEPTHS))]
    cpu_cores = _CPU_CORES[stream.next_below(len(_CPU_CORES))]
    memory_gb = float(_MEMORY_GB[stream.next_below(len(_MEMORY_GB))])
    timezone = _TIMEZONES[stream.next_below(len(_TIMEZONES))]
    amplitude = 1 + stream.next_below(4)
    disable_webrtc = bool(stream.next_u64() & 1)

    if prefs.header_x_forwarded:
        x_forwarded = ".".join(
            str(octet)
            for octet in (
                1 + stream.next_below(223),
                stream.next_below(256),
                stream.next_below(256),
                1 + stream.next_below(254),
            )
        )
    else:
        x_forwarded = None

    return FingerprintProfile(
        enabled=True,
        os_family=os_family,
        user_agent=user_agent,
        accept_language=accept_language,
        do_not_track=prefs.header_dnt,
        prevent_etag=prefs.header_etag,
        referer_mode="strip" if prefs.header_referer else "keep",
        x_forwarded_for=x_forwarded,
        screen_width=width,
        screen_height=height,
        color_depth=color_depth,
        cpu_cores=cpu_cores,
        device_memory_gb=memory_gb,
        timezone=timezone,
        spoof_canvas=prefs.spoof_canvas,
        spoof_webgl=prefs.spoof_webgl,
        spoof_audio=prefs.spoof_audio,
        canvas_noise_seed=canvas_seed,
        webgl_noise_seed=webgl_seed,
        audio_noise_seed=audio_seed,
        noise_amplitude=amplitude,
        disable_webrtc=disable_webrtc,
    )


_CATALOG_CACHE: OptionCatalog | None = None


def _default_catalog() -> OptionCatalog:
    global _CATALOG_CACHE
    if _CATALOG_CACHE is None:
        _CATALOG_CACHE = OptionCatalog.load_default()
    return _CATALOG_CACHE


def new_session_id() -> str:
    """Opaque session token, 128 bits of entropy."""
    return secrets.token_hex(16)


@dataclass(frozen=True)
class SessionConfig:
    session_id: str
    profile: FingerprintProfile
    created_at: int  # unix-ms


class SessionStore:
    """Session-scoped profile storage with a byte quota.

    Lives only in memory: a gateway restart is the analogue of closing
    the browser, so all session configs vanish with the process. All
    mutations take the store lock; reads are safe concurrently.
    """

    def __init__(self, capacity_bytes: int = DEFAULT_SESSION_CAPACITY):
        if capacity_bytes < 1:
            raise ValueError("capacity must be positive")
        self.capacity_bytes = capacity_bytes
        self._lock = threading.RLock()
        self._configs: dict[str, SessionConfig] = {}
        self._sizes: dict[str, int] = {}
        self._used = 0

    @property
    def used_bytes(self) -> int:
        with self._lock:
            return self._used

    def set(self, session_id: str, profile: FingerprintProfile) -> SessionConfig:
        entry_size = len(session_id.encode()) + len(profile.to_json().encode())
        with self._lock:
            projected = self._used - self._sizes.get(session_id, 0) + entry_size
            if projected > self.capacity_bytes:
                raise SessionStorageFullError(
                    f"session store full: {projected} > {self.capacity_bytes} bytes"
                )
            config = SessionConfig(session_id, profile, int(time.time() * 1000))
            self._configs[session_id] = config
            self._sizes[session_id] = entry_size
            self._used = projected
            return config

    def get(self, session_id: str) -> FingerprintProfile | None:
        with self._lock:
            config = self._configs.get(session_id)
            return config.profile if config else None

    def clear(self, session_id: str) -> None:
        with self._lock:
            if session_id in self._configs:
                del self._configs[session_id]
                self._used -= self._sizes.pop(session_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._configs)
