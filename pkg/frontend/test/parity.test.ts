/**
 * Bit-exact parity with the gateway reference: the committed vectors in
 * tests/data/parity_vectors.json were produced by the Python oracle and
 * must be reproduced here exactly.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { audioFingerprint, canvasFingerprint, triangleWave, webglFingerprint } from "../src/shared/digest";
import { md5Hex } from "../src/shared/md5";
import { injectAudioNoise, injectCanvasNoise } from "../src/shared/noise";
import { SplitMix64, deriveNoiseSeeds } from "../src/shared/splitmix";

interface Vectors {
  stream: { seed: string; outputs: string[]; noise_seeds: string[] }[];
  md5: { message: string; digest: string }[];
  canvas: {
    width: number; height: number; rgba: number[]; seed: string; amplitude: number;
    noisy_rgba: number[]; digest: string; noisy_digest: string;
  }[];
  webgl: {
    vendor: string; renderer: string; unmasked_vendor: string | null;
    unmasked_renderer: string | null; rgba: number[]; digest: string;
  }[];
  audio: {
    bins: number[]; seed: string; epsilon: number;
    noisy_bins: number[]; digest: string; noisy_digest: string;
  }[];
}

const vectors: Vectors = JSON.parse(
  readFileSync(join(__dirname, "../../tests/data/parity_vectors.json"), "utf-8"),
);

describe("splitmix stream", () => {
  it("reproduces every reference stream", () => {
    for (const vector of vectors.stream) {
      const stream = new SplitMix64(BigInt(vector.seed));
      const outputs = vector.outputs.map(() => stream.nextU64().toString());
      expect(outputs).toEqual(vector.outputs);
      const seeds = deriveNoiseSeeds(BigInt(vector.seed)).map((s) => s.toString());
      expect(seeds).toEqual(vector.noise_seeds);
    }
  });
});

describe("md5", () => {
  it("matches the reference digests (utf-8 inputs)", () => {
    for (const vector of vectors.md5) {
      expect(md5Hex(vector.message)).toBe(vector.digest);
    }
  });

  it("handles block-boundary lengths", () => {
    // canonical digest test suite values
    expect(md5Hex("")).toBe("d41d8cd98f00b204e9800998ecf8427e");
    expect(md5Hex("abc")).toBe("900150983cd24fb0d6963f7d28e17f72");
    expect(md5Hex("a".repeat(55))).toHaveLength(32);
    expect(md5Hex("a".repeat(64))).toHaveLength(32);
    expect(md5Hex("1234567890".repeat(8))).toBe("57edf4a22be3c955ac49da2e2107b67a");
  });
});

describe("canvas noise + digest", () => {
  it("is byte-identical to the oracle for shared (seed, amplitude)", () => {
    for (const vector of vectors.canvas) {
      const rgba = Uint8Array.from(vector.rgba);
      expect(canvasFingerprint(rgba)).toBe(vector.digest);
      const noisy = injectCanvasNoise(rgba, BigInt(vector.seed), vector.amplitude);
      expect(Array.from(noisy)).toEqual(vector.noisy_rgba);
      expect(canvasFingerprint(noisy)).toBe(vector.noisy_digest);
    }
  });

  it("amplitude 0 is the identity", () => {
    const rgba = Uint8Array.from({ length: 64 }, (_, i) => (i * 37) & 0xff);
    expect(Array.from(injectCanvasNoise(rgba, 99n, 0))).toEqual(Array.from(rgba));
  });
});

describe("webgl digest", () => {
  it("matches the oracle preimage construction", () => {
    for (const vector of vectors.webgl) {
      const digest = webglFingerprint(
        vector.vendor, vector.renderer,
        vector.unmasked_vendor, vector.unmasked_renderer,
        Uint8Array.from(vector.rgba),
      );
      expect(digest).toBe(vector.digest);
    }
  });
});

describe("audio noise + digest", () => {
  it("reproduces perturbed bins and digests exactly", () => {
    for (const vector of vectors.audio) {
      expect(audioFingerprint(vector.bins)).toBe(vector.digest);
      const noisy = injectAudioNoise(vector.bins, BigInt(vector.seed), vector.epsilon);
      for (let i = 0; i < noisy.length; i++) {
        // same doubles on both sides, so exact equality is required
        expect(noisy[i]).toBe(vector.noisy_bins[i]);
      }
      expect(audioFingerprint(noisy)).toBe(vector.noisy_digest);
    }
  });
});

describe("triangle wave", () => {
  it("matches the closed form", () => {
    const wave = triangleWave(1000, 44100, 4);
    expect(wave[0]).toBe(1);
    for (const value of wave) {
      expect(value).toBeGreaterThanOrEqual(-1);
      expect(value).toBeLessThanOrEqual(1);
    }
    expect(() => triangleWave(30000, 44100, 4)).toThrow();
  });
});
