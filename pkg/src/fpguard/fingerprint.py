"""Browser-free fingerprint digests and seeded noise injection.

These are the reference algorithms for the canvas / WebGL / audio
surfaces: the in-page payload must produce bit-identical results for
the same inputs, and the details page's expected digests come from
here. Canvas hashes base64 of the raw RGBA bytes (no image codec, so
the digest is reproducible on any platform); audio bins are fixed to
six decimals before hashing; WebGL joins its context strings with "|".
"""

from __future__ import annotations

import base64
import math
from dataclasses import dataclass

from .md5 import md5_hex
from .prng import SplitMix64

MAX_NOISE_AMPLITUDE = 8

WEBGL_FIELD_SEPARATOR = "|"
AUDIO_BIN_DECIMALS = 6


@dataclass(frozen=True)
class PixelBuffer:
    """Raw RGBA pixel data as read back from a rendering context."""

    width: int
    height: int
    rgba: bytes

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("pixel buffer dimensions must be positive")
        expected = 4 * self.width * self.height
        if len(self.rgba) != expected:
            raise ValueError(
                f"rgba length {len(self.rgba)} != 4*{self.width}*{self.height} = {expected}"
            )


@dataclass(frozen=True)
class SpectrumFrame:
    """One frequency-domain capture from an analyser node."""

    bins: tuple[float, ...]
    sample_rate: float
    fft_size: int

    def __post_init__(self):
        if self.fft_size <= 0 or self.fft_size & (self.fft_size - 1):
            raise ValueError("fft_size must be a power of two")
        if len(self.bins) != self.fft_size // 2:
            raise ValueError(
                f"expected {self.fft_size // 2} bins for fft_size {self.fft_size}, "
                f"got {len(self.bins)}"
            )
        if not all(math.isfinite(b) for b in self.bins):
            raise ValueError("spectrum bins must all be finite")


def canvas_fingerprint(buf: PixelBuffer) -> str:
    """MD5 over the standard-alphabet base64 of the raw RGBA bytes."""
    return md5_hex(base64.b64encode(buf.rgba))


def webgl_fingerprint(
    vendor: str,
    renderer: str,
    unmasked_vendor: str | None,
    unmasked_renderer: str | None,
    buf: PixelBuffer,
) -> str:
    """Digest over GL context strings plus the rendered-scene pixels.

    Absent unmasked strings encode as empty fields; the separators are
    always present so field boundaries never collide.
    """
    preimage = WEBGL_FIELD_SEPARATOR.join(
        (
            vendor,
            renderer,
            unmasked_vendor or "",
            unmasked_renderer or "",
            base64.b64encode(buf.rgba).decode("ascii"),
        )
    )
    return md5_hex(preimage)


def triangle_wave(freq: float, sample_rate: float, n: int) -> list[float]:
    """n samples of a unit triangle wave: 2*|2*frac(freq*k/sr) - 1| - 1."""
    if not 0 < freq < sample_rate / 2:
        raise ValueError(f"freq must lie in (0, sample_rate/2), got {freq}")
    if n <= 0:
        raise ValueError("sample count must be positive")
    out = []
    for k in range(n):
        phase = math.fmod(freq * k / sample_rate, 1.0)
        out.append(2.0 * abs(2.0 * phase - 1.0) - 1.0)
    return out


def audio_fingerprint(frame: SpectrumFrame) -> str:
    """MD5 over the bins formatted to six decimals, comma-joined."""
    preimage = ",".join(f"{b:.{AUDIO_BIN_DECIMALS}f}" for b in frame.bins)
    return md5_hex(preimage)


def inject_canvas_noise(buf: PixelBuffer, seed: int, amplitude: int) -> PixelBuffer:
    """Per-byte clamp(b + delta, 0, 255) with |delta| <= amplitude.

    Deltas come from one splitmix output per byte: delta = u64 mod
    (2*amplitude + 1) - amplitude, so equal (buf, seed, amplitude)
    always produce identical output. Amplitude 0 is the identity.
    """
    if not 0 <= amplitude <= MAX_NOISE_AMPLITUDE:
        raise ValueError(f"amplitude must be in [0, {MAX_NOISE_AMPLITUDE}]")
    if amplitude == 0:
        return buf
    stream = SplitMix64(seed)
    span = 2 * amplitude + 1
    noisy = bytes(
        min(255, max(0, b + stream.next_u64() % span - amplitude)) for b in buf.rgba
    )
    return PixelBuffer(buf.width, buf.height, noisy)


def inject_audio_noise(frame: SpectrumFrame, seed: int, epsilon: float) -> SpectrumFrame:
    """Per-bin delta in [-epsilon, epsilon]; epsilon 0 is the identity."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    if epsilon == 0.0:
        return frame
    stream = SplitMix64(seed)
    noisy = tuple(b + (stream.next_unit() * 2.0 - 1.0) * epsilon for b in frame.bins)
    return SpectrumFrame(noisy, frame.sample_rate, frame.fft_size)
