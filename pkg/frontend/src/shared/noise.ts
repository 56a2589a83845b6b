/**
 * Seeded bounded noise, bit-identical to the gateway reference
 * (docs/noise-prng.md): one stream draw per byte/bin, deltas clamped to
 * the amplitude, zero amplitude short-circuits to the identity.
 */

import { SplitMix64 } from "./splitmix";

export const MAX_NOISE_AMPLITUDE = 8;

type ByteArray = Uint8Array | Uint8ClampedArray | number[];

export function injectCanvasNoise(
  rgba: ByteArray,
  seed: bigint,
  amplitude: number,
): Uint8ClampedArray {
  if (amplitude < 0 || amplitude > MAX_NOISE_AMPLITUDE || !Number.isInteger(amplitude)) {
    throw new RangeError(`amplitude must be an integer in [0, ${MAX_NOISE_AMPLITUDE}]`);
  }
  const out = new Uint8ClampedArray(rgba.length);
  if (amplitude === 0) {
    out.set(rgba as Uint8Array);
    return out;
  }
  const stream = new SplitMix64(seed);
  const span = BigInt(2 * amplitude + 1);
  for (let i = 0; i < rgba.length; i++) {
    const delta = Number(stream.nextU64() % span) - amplitude;
    const value = (rgba as Uint8Array)[i] + delta;
    out[i] = value < 0 ? 0 : value > 255 ? 255 : value;
  }
  return out;
}

/** In-place variant for hooked getImageData, avoiding a copy. */
export function injectCanvasNoiseInPlace(
  rgba: Uint8ClampedArray,
  seed: bigint,
  amplitude: number,
): void {
  if (amplitude === 0) return;
  const noisy = injectCanvasNoise(rgba, seed, amplitude);
  rgba.set(noisy);
}

export function injectAudioNoise(
  bins: Float32Array | number[],
  seed: bigint,
  epsilon: number,
): Float64Array {
  if (epsilon < 0) throw new RangeError("epsilon must be non-negative");
  const out = new Float64Array(bins.length);
  if (epsilon === 0) {
    for (let i = 0; i < bins.length; i++) out[i] = (bins as number[])[i];
    return out;
  }
  const stream = new SplitMix64(seed);
  for (let i = 0; i < bins.length; i++) {
    out[i] = (bins as number[])[i] + (stream.nextUnit() * 2 - 1) * epsilon;
  }
  return out;
}
