#!/usr/bin/env python3
"""Regenerate tests/data/parity_vectors.json from the reference noise and
digest implementations. The frontend test suite replays these vectors to
prove bit-exact cross-language agreement; commit the regenerated file
together with any (versioned) contract change."""

from __future__ import annotations

import json
import random
from pathlib import Path

from fpguard.fingerprint import (
    PixelBuffer,
    SpectrumFrame,
    audio_fingerprint,
    canvas_fingerprint,
    inject_audio_noise,
    inject_canvas_noise,
    webgl_fingerprint,
)
from fpguard.md5 import md5_hex
from fpguard.prng import SplitMix64, derive_noise_seeds

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "parity_vectors.json"


def stream_vectors():
    out = []
    for seed in (0, 1, 1234567, 2**64 - 1, 0x1A2B3C4D5E6F7788):
        stream = SplitMix64(seed)
        out.append({
            "seed": str(seed),
            "outputs": [str(stream.next_u64()) for _ in range(8)],
            "units": [SplitMix64(seed + 1).next_unit() for _ in range(1)],
            "noise_seeds": [str(s) for s in derive_noise_seeds(seed)],
        })
    return out


def md5_vectors():
    messages = ["", "a", "abc", "message digest", "The quick brown fox", "éè"]
    return [{"message": m, "digest": md5_hex(m)} for m in messages]


def canvas_vectors():
    rng = random.Random(2468)
    out = []
    for width, height, seed, amplitude in [(1, 1, 7, 1), (4, 4, 42, 1), (8, 8, 99, 3),
                                           (8, 8, 99, 0), (16, 16, 123456789, 8)]:
        rgba = bytes(rng.randrange(256) for _ in range(4 * width * height))
        buf = PixelBuffer(width, height, rgba)
        noisy = inject_canvas_noise(buf, seed, amplitude)
        out.append({
            "width": width,
            "height": height,
            "rgba": list(rgba),
            "seed": str(seed),
            "amplitude": amplitude,
            "noisy_rgba": list(noisy.rgba),
            "digest": canvas_fingerprint(buf),
            "noisy_digest": canvas_fingerprint(noisy),
        })
    return out


def webgl_vectors():
    buf = PixelBuffer(2, 1, bytes([0, 255, 0, 255, 10, 20, 30, 40]))
    cases = [
        ("WebKit", "WebKit WebGL", "Google Inc. (NVIDIA)",
         "ANGLE (NVIDIA GeForce GTX 1080)", buf),
        ("Mozilla", "Mozilla", None, None, buf),
    ]
    return [
        {
            "vendor": vendor, "renderer": renderer,
            "unmasked_vendor": uv, "unmasked_renderer": ur,
            "rgba": list(b.rgba), "width": b.width, "height": b.height,
            "digest": webgl_fingerprint(vendor, renderer, uv, ur, b),
        }
        for vendor, renderer, uv, ur, b in cases
    ]


def audio_vectors():
    rng = random.Random(1357)
    out = []
    for bins_count, seed, epsilon in [(2, 5, 0.0), (16, 11, 1e-4), (64, 77, 1e-3)]:
        bins = tuple(round(rng.uniform(-1, 1), 9) for _ in range(bins_count))
        frame = SpectrumFrame(bins, 44100.0, bins_count * 2)
        noisy = inject_audio_noise(frame, seed, epsilon)
        out.append({
            "bins": list(bins),
            "fft_size": bins_count * 2,
            "seed": str(seed),
            "epsilon": epsilon,
            "noisy_bins": list(noisy.bins),
            "digest": audio_fingerprint(frame),
            "noisy_digest": audio_fingerprint(noisy),
        })
    return out


def main() -> None:
    vectors = {
        "stream": stream_vectors(),
        "md5": md5_vectors(),
        "canvas": canvas_vectors(),
        "webgl": webgl_vectors(),
        "audio": audio_vectors(),
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(vectors, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
