/**
 * Fingerprint digest pipelines mirroring the gateway reference: canvas
 * hashes base64 of raw RGBA bytes, WebGL joins context strings with "|"
 * before the pixels, audio fixes bins to six decimals and comma-joins.
 */

import { md5Hex } from "./md5";

type ByteArray = Uint8Array | Uint8ClampedArray | number[];

const B64_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

/** Standard-alphabet base64 over raw bytes (btoa needs a string detour). */
export function base64OfBytes(bytes: ByteArray): string {
  let out = "";
  for (let i = 0; i < bytes.length; i += 3) {
    const b0 = (bytes as Uint8Array)[i];
    const b1 = i + 1 < bytes.length ? (bytes as Uint8Array)[i + 1] : 0;
    const b2 = i + 2 < bytes.length ? (bytes as Uint8Array)[i + 2] : 0;
    out += B64_ALPHABET[b0 >> 2];
    out += B64_ALPHABET[((b0 & 3) << 4) | (b1 >> 4)];
    out += i + 1 < bytes.length ? B64_ALPHABET[((b1 & 15) << 2) | (b2 >> 6)] : "=";
    out += i + 2 < bytes.length ? B64_ALPHABET[b2 & 63] : "=";
  }
  return out;
}

export function canvasFingerprint(rgba: ByteArray): string {
  return md5Hex(base64OfBytes(rgba));
}

export function webglFingerprint(
  vendor: string,
  renderer: string,
  unmaskedVendor: string | null,
  unmaskedRenderer: string | null,
  rgba: ByteArray,
): string {
  const preimage = [
    vendor,
    renderer,
    unmaskedVendor ?? "",
    unmaskedRenderer ?? "",
    base64OfBytes(rgba),
  ].join("|");
  return md5Hex(preimage);
}

/** Fixed 6-decimal formatting; toFixed matches Python's %.6f for finite values. */
export function audioFingerprint(bins: Float32Array | Float64Array | number[]): string {
  const parts = new Array<string>(bins.length);
  for (let i = 0; i < bins.length; i++) parts[i] = (bins as number[])[i].toFixed(6);
  return md5Hex(parts.join(","));
}

export function triangleWave(freq: number, sampleRate: number, n: number): Float64Array {
  if (!(freq > 0 && freq < sampleRate / 2)) {
    throw new RangeError(`freq must lie in (0, sampleRate/2), got ${freq}`);
  }
  const out = new Float64Array(n);
  for (let k = 0; k < n; k++) {
    const phase = ((freq * k) / sampleRate) % 1;
    out[k] = 2 * Math.abs(2 * phase - 1) - 1;
  }
  return out;
}
