/**
 * Rendering-surface hooks: canvas pixel extraction gets seeded bounded
 * noise (bit-identical to the gateway oracle for the same seed and
 * amplitude), WebGL identity parameters return forged strings, and
 * analyser output is perturbed within epsilon. Each extraction logs its
 * surface attribute. Surfaces whose APIs are absent are skipped.
 */

import { injectAudioNoise, injectCanvasNoiseInPlace } from "../shared/noise";
import { SplitMix64 } from "../shared/splitmix";
import type { PayloadConfig } from "../shared/types";
import type { LogFn } from "./overrides";

/** Audio perturbation scale per amplitude step; amplitude 0 stays identity. */
export const AUDIO_EPSILON_PER_STEP = 1e-4;

// GL parameter names (numeric enums from the WebGL spec)
const GL_VENDOR = 0x1f01;
const GL_RENDERER = 0x1f02;
const GL_UNMASKED_VENDOR = 0x9245;
const GL_UNMASKED_RENDERER = 0x9246;

interface GpuIdentity {
  vendor: string;
  renderer: string;
  unmaskedVendor: string;
  unmaskedRenderer: string;
}

const GPU_POOL: Record<string, GpuIdentity[]> = {
  Windows: [
    { vendor: "Google Inc. (NVIDIA)", renderer: "ANGLE (NVIDIA, NVIDIA GeForce RTX 3060 Direct3D11 vs_5_0 ps_5_0, D3D11)", unmaskedVendor: "Google Inc. (NVIDIA)", unmaskedRenderer: "ANGLE (NVIDIA, NVIDIA GeForce RTX 3060 Direct3D11 vs_5_0 ps_5_0, D3D11)" },
    { vendor: "Google Inc. (Intel)", renderer: "ANGLE (Intel, Intel(R) UHD Graphics 770 Direct3D11 vs_5_0 ps_5_0, D3D11)", unmaskedVendor: "Google Inc. (Intel)", unmaskedRenderer: "ANGLE (Intel, Intel(R) UHD Graphics 770 Direct3D11 vs_5_0 ps_5_0, D3D11)" },
    { vendor: "Google Inc. (AMD)", renderer: "ANGLE (AMD, AMD Radeon RX 6700 XT Direct3D11 vs_5_0 ps_5_0, D3D11)", unmaskedVendor: "Google Inc. (AMD)", unmaskedRenderer: "ANGLE (AMD, AMD Radeon RX 6700 XT Direct3D11 vs_5_0 ps_5_0, D3D11)" },
  ],
  Linux: [
    { vendor: "Google Inc. (Intel)", renderer: "ANGLE (Intel, Mesa Intel(R) UHD Graphics 630 (CFL GT2), OpenGL 4.6)", unmaskedVendor: "Intel", unmaskedRenderer: "Mesa Intel(R) UHD Graphics 630 (CFL GT2)" },
    { vendor: "Google Inc. (NVIDIA Corporation)", renderer: "ANGLE (NVIDIA Corporation, NVIDIA GeForce GTX 1660/PCIe/SSE2, OpenGL 4.5.0)", unmaskedVendor: "NVIDIA Corporation", unmaskedRenderer: "NVIDIA GeForce GTX 1660/PCIe/SSE2" },
    { vendor: "Google Inc. (AMD)", renderer: "ANGLE (AMD, AMD Radeon Graphics (radeonsi renoir LLVM 15.0.7), OpenGL 4.6)", unmaskedVendor: "AMD", unmaskedRenderer: "AMD Radeon Graphics (radeonsi renoir LLVM 15.0.7)" },
  ],
  macOS: [
    { vendor: "Google Inc. (Apple)", renderer: "ANGLE (Apple, Apple M2, OpenGL 4.1 Metal - 83.1)", unmaskedVendor: "Apple Inc.", unmaskedRenderer: "Apple M2" },
    { vendor: "Google Inc. (Apple)", renderer: "ANGLE (Apple, Apple M1 Pro, OpenGL 4.1 Metal - 88)", unmaskedVendor: "Apple Inc.", unmaskedRenderer: "Apple M1 Pro" },
    { vendor: "Apple Inc.", renderer: "Apple GPU", unmaskedVendor: "Apple Inc.", unmaskedRenderer: "Apple GPU" },
  ],
  Android: [
    { vendor: "Qualcomm", renderer: "Adreno (TM) 740", unmaskedVendor: "Qualcomm", unmaskedRenderer: "Adreno (TM) 740" },
    { vendor: "ARM", renderer: "Mali-G715-Immortalis MC11", unmaskedVendor: "ARM", unmaskedRenderer: "Mali-G715-Immortalis MC11" },
    { vendor: "Qualcomm", renderer: "Adreno (TM) 650", unmaskedVendor: "Qualcomm", unmaskedRenderer: "Adreno (TM) 650" },
  ],
  iOS: [
    { vendor: "Apple Inc.", renderer: "Apple GPU", unmaskedVendor: "Apple Inc.", unmaskedRenderer: "Apple GPU" },
  ],
};

/** Deterministic GPU identity: picked from the per-OS pool by the WebGL
 * noise seed, so it stays stable within a session. */
export function forgedGpuIdentity(config: PayloadConfig): GpuIdentity {
  const pool = GPU_POOL[config.os_family] ?? GPU_POOL.Windows;
  const stream = new SplitMix64(BigInt(config.webgl_noise_seed));
  return pool[stream.nextBelow(pool.length)];
}

export function audioEpsilon(config: PayloadConfig): number {
  return config.noise_amplitude * AUDIO_EPSILON_PER_STEP;
}

export function installSurfaceHooks(
  win: Window & typeof globalThis,
  config: PayloadConfig,
  log: LogFn,
): void {
  if (config.spoof_canvas) hookCanvas(win, config, log);
  if (config.spoof_webgl) hookWebgl(win, config, log);
  if (config.spoof_audio) hookAudio(win, config, log);
}

function hookCanvas(
  win: Window & typeof globalThis,
  config: PayloadConfig,
  log: LogFn,
): void {
  const seed = BigInt(config.canvas_noise_seed);
  const amplitude = config.noise_amplitude;
  // bitmaps already perturbed for the encoder path; one noise layer per
  // canvas per page load keeps repeated extractions stable
  const noisedBitmaps = new WeakSet<object>();
  const contextProto = (win as any).CanvasRenderingContext2D?.prototype;
  let rawGetImageData: ((...args: unknown[]) => any) | null = null;
  if (contextProto?.getImageData) {
    const original = contextProto.getImageData;
    rawGetImageData = original;
    contextProto.getImageData = function getImageData(...args: unknown[]) {
      log("canvas");
      const image = original.apply(this, args);
      injectCanvasNoiseInPlace(image.data, seed, amplitude);
      return image;
    };
  }
  const noiseBitmapOnce = (canvas: any): void => {
    if (amplitude === 0 || noisedBitmaps.has(canvas) || !rawGetImageData) return;
    try {
      const context = canvas.getContext("2d");
      if (!context) return;
      const image = rawGetImageData.call(context, 0, 0, canvas.width, canvas.height);
      injectCanvasNoiseInPlace(image.data, seed, amplitude);
      context.putImageData(image, 0, 0);
      noisedBitmaps.add(canvas);
    } catch {
      // encoder path stays native when pixels are unreadable (tainted canvas)
    }
  };
  const canvasProto = (win as any).HTMLCanvasElement?.prototype;
  if (canvasProto?.toDataURL) {
    const originalToDataURL = canvasProto.toDataURL;
    canvasProto.toDataURL = function toDataURL(...args: unknown[]) {
      log("canvas");
      noiseBitmapOnce(this);
      return originalToDataURL.apply(this, args);
    };
  }
  if (canvasProto?.toBlob) {
    const originalToBlob = canvasProto.toBlob;
    canvasProto.toBlob = function toBlob(...args: unknown[]) {
      log("canvas");
      noiseBitmapOnce(this);
      return originalToBlob.apply(this, args);
    };
  }
}

function hookWebgl(
  win: Window & typeof globalThis,
  config: PayloadConfig,
  log: LogFn,
): void {
  const identity = forgedGpuIdentity(config);
  for (const ctor of ["WebGLRenderingContext", "WebGL2RenderingContext"]) {
    const proto = (win as any)[ctor]?.prototype;
    if (!proto?.getParameter) continue;
    const original = proto.getParameter;
    proto.getParameter = function getParameter(parameter: number) {
      switch (parameter) {
        case GL_VENDOR:
          log("webgl");
          return identity.vendor;
        case GL_RENDERER:
          log("webgl");
          return identity.renderer;
        case GL_UNMASKED_VENDOR:
          log("webgl");
          return identity.unmaskedVendor;
        case GL_UNMASKED_RENDERER:
          log("webgl");
          return identity.unmaskedRenderer;
        default:
          return original.call(this, parameter);
      }
    };
  }
}

function hookAudio(
  win: Window & typeof globalThis,
  config: PayloadConfig,
  log: LogFn,
): void {
  const seed = BigInt(config.audio_noise_seed);
  const epsilon = audioEpsilon(config);
  const proto = (win as any).AnalyserNode?.prototype;
  if (!proto) return;
  if (proto.getFloatFrequencyData) {
    const original = proto.getFloatFrequencyData;
    proto.getFloatFrequencyData = function getFloatFrequencyData(array: Float32Array) {
      log("audio");
      original.call(this, array);
      const noisy = injectAudioNoise(array, seed, epsilon);
      for (let i = 0; i < array.length; i++) array[i] = noisy[i];
    };
  }
  if (proto.getByteFrequencyData) {
    const original = proto.getByteFrequencyData;
    proto.getByteFrequencyData = function getByteFrequencyData(array: Uint8Array) {
      log("audio");
      original.call(this, array);
      if (epsilon > 0) {
        injectCanvasNoiseInPlace(
          array as unknown as Uint8ClampedArray, seed, config.noise_amplitude,
        );
      }
    };
  }
}
