#!/usr/bin/env python3
"""Fingerprint digests and bounded noise: tiny seeded perturbations flip
the digest while the content stays visually/aurally intact."""

import random

from fpguard import (
    PixelBuffer,
    SpectrumFrame,
    audio_fingerprint,
    canvas_fingerprint,
    inject_audio_noise,
    inject_canvas_noise,
    triangle_wave,
    webgl_fingerprint,
)

rng = random.Random(7)

print("== canvas ==")
buf = PixelBuffer(32, 32, rng.randbytes(4 * 32 * 32))
clean = canvas_fingerprint(buf)
noisy = inject_canvas_noise(buf, seed=2024, amplitude=1)
deltas = [abs(a - b) for a, b in zip(noisy.rgba, buf.rgba)]
print(f"  clean digest:  {clean}")
print(f"  noisy digest:  {canvas_fingerprint(noisy)}")
print(f"  max |delta|:   {max(deltas)} LSB   mean: {sum(deltas)/len(deltas):.3f}")
print(f"  reproducible:  {inject_canvas_noise(buf, 2024, 1).rgba == noisy.rgba}")
print(f"  amp 0 = identity: {inject_canvas_noise(buf, 2024, 0).rgba == buf.rgba}")

print("\n== webgl ==")
scene = PixelBuffer(2, 2, bytes([0, 200, 0, 255] * 4))  # the fixed green scene
print("  " + webgl_fingerprint("WebKit", "WebKit WebGL",
                               "Google Inc. (Intel)", "ANGLE (Intel Iris Xe)", scene))
print("  unmasked strings change it: "
      + webgl_fingerprint("WebKit", "WebKit WebGL",
                          "Google Inc. (AMD)", "ANGLE (AMD Radeon)", scene))

print("\n== audio ==")
wave = triangle_wave(freq=1000, sample_rate=44100, n=1024)
print(f"  triangle wave: first samples {[round(v, 3) for v in wave[:5]]}")
# stand-in spectrum: magnitudes derived from the wave (a browser would
# capture these from its analyser node)
bins = tuple(abs(v) for v in wave[:512])
frame = SpectrumFrame(bins, 44100, 1024)
clean_audio = audio_fingerprint(frame)
noisy_audio = inject_audio_noise(frame, seed=99, epsilon=1e-4)
print(f"  clean digest:  {clean_audio}")
print(f"  noisy digest:  {audio_fingerprint(noisy_audio)}")
print(f"  max |delta|:   {max(abs(a-b) for a, b in zip(noisy_audio.bins, frame.bins)):.2e}")

print("\n== digest-change rate, amplitude 1, 100 seeds ==")
changed = sum(
    canvas_fingerprint(inject_canvas_noise(buf, seed, 1)) != clean
    for seed in range(100)
)
print(f"  {changed}/100 seeds flip the canvas digest")
