/**
 * Surface hooks against stub rendering contexts (jsdom has no real
 * canvas/GL/audio): extraction results must match the shared noise code
 * bit for bit, stay stable within a session, and differ across seeds.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { installSurfaceHooks, forgedGpuIdentity, audioEpsilon } from "../src/payload/surfaces";
import { canvasFingerprint } from "../src/shared/digest";
import { injectAudioNoise, injectCanvasNoise } from "../src/shared/noise";
import { sampleConfig } from "./overrides.test";

/** Minimal window with deterministic canvas/GL/analyser implementations. */
function makeStubWindow(pixelFill = (i: number) => (i * 31) & 0xff) {
  const calls: string[] = [];

  class StubImageData {
    data: Uint8ClampedArray;
    constructor(public width: number, public height: number) {
      this.data = new Uint8ClampedArray(4 * width * height);
      for (let i = 0; i < this.data.length; i++) this.data[i] = pixelFill(i);
    }
  }

  class CanvasRenderingContext2D {
    canvas: StubCanvas | null = null;
    getImageData(_x: number, _y: number, w: number, h: number) {
      calls.push("getImageData");
      return new StubImageData(w, h);
    }
    putImageData(image: StubImageData) {
      calls.push("putImageData");
      (this.canvas as any).bitmap = image;
    }
  }

  class StubCanvas {
    width = 8;
    height = 4;
    bitmap: StubImageData | null = null;
    private context = new CanvasRenderingContext2D();
    getContext(kind: string) {
      if (kind !== "2d") return null;
      this.context.canvas = this;
      return this.context;
    }
    toDataURL() {
      calls.push("toDataURL");
      return "data:image/png;base64,stub";
    }
  }

  class WebGLRenderingContext {
    getParameter(parameter: number) {
      calls.push(`getParameter:${parameter}`);
      if (parameter === 0x1f01) return "Native Vendor";
      if (parameter === 0x1f02) return "Native Renderer";
      return parameter;
    }
  }

  class AnalyserNode {
    getFloatFrequencyData(array: Float32Array) {
      calls.push("getFloatFrequencyData");
      for (let i = 0; i < array.length; i++) array[i] = -30 - i * 0.5;
    }
  }

  const win = {
    CanvasRenderingContext2D,
    HTMLCanvasElement: StubCanvas,
    WebGLRenderingContext,
    AnalyserNode,
    calls,
    StubCanvas,
  };
  return win as unknown as (Window & typeof globalThis) & {
    calls: string[];
    StubCanvas: typeof StubCanvas;
  };
}

describe("canvas hook", () => {
  let logs: string[];

  beforeEach(() => {
    logs = [];
  });

  function hookedImage(win: ReturnType<typeof makeStubWindow>) {
    const canvas = new win.StubCanvas();
    const context = canvas.getContext("2d")!;
    return (context as any).getImageData(0, 0, 8, 4).data as Uint8ClampedArray;
  }

  it("extraction matches the shared noise pipeline bit for bit", () => {
    const win = makeStubWindow();
    const config = sampleConfig({ canvas_noise_seed: "42", noise_amplitude: 1 });
    const clean = new (win as any).CanvasRenderingContext2D()
      .getImageData(0, 0, 8, 4).data as Uint8ClampedArray;
    installSurfaceHooks(win, config, (a) => logs.push(a));
    const hooked = hookedImage(win);
    const oracle = injectCanvasNoise(clean, 42n, 1);
    expect(Array.from(hooked)).toEqual(Array.from(oracle));
    expect(logs).toContain("canvas");
  });

  it("stable within a session, different across session seeds", () => {
    const winA = makeStubWindow();
    installSurfaceHooks(winA, sampleConfig({ canvas_noise_seed: "1001" }), () => undefined);
    const first = canvasFingerprint(hookedImage(winA));
    const second = canvasFingerprint(hookedImage(winA));
    expect(second).toBe(first);

    const winB = makeStubWindow();
    installSurfaceHooks(winB, sampleConfig({ canvas_noise_seed: "2002" }), () => undefined);
    const other = canvasFingerprint(hookedImage(winB));
    expect(other).not.toBe(first);
  });

  it("amplitude 0 leaves extraction identical to the native path", () => {
    const win = makeStubWindow();
    const clean = new (win as any).CanvasRenderingContext2D()
      .getImageData(0, 0, 8, 4).data as Uint8ClampedArray;
    installSurfaceHooks(win, sampleConfig({ noise_amplitude: 0 }), (a) => logs.push(a));
    const hooked = hookedImage(win);
    expect(Array.from(hooked)).toEqual(Array.from(clean));
    expect(logs).toContain("canvas"); // access still logged
  });

  it("toDataURL perturbs the bitmap exactly once across repeated calls", () => {
    const win = makeStubWindow();
    installSurfaceHooks(win, sampleConfig(), () => undefined);
    const canvas = new win.StubCanvas();
    canvas.toDataURL();
    const afterFirst = (canvas as any).bitmap?.data.slice();
    canvas.toDataURL();
    const afterSecond = (canvas as any).bitmap?.data ?? afterFirst;
    expect(afterFirst).toBeDefined();
    expect(Array.from(afterSecond)).toEqual(Array.from(afterFirst!));
  });

  it("spoof_canvas off leaves the prototypes untouched", () => {
    const win = makeStubWindow();
    const native = (win as any).CanvasRenderingContext2D.prototype.getImageData;
    installSurfaceHooks(win, sampleConfig({ spoof_canvas: false }), () => undefined);
    expect((win as any).CanvasRenderingContext2D.prototype.getImageData).toBe(native);
  });
});

describe("webgl hook", () => {
  it("returns forged identity strings and logs the surface", () => {
    const logs: string[] = [];
    const win = makeStubWindow();
    const config = sampleConfig({ os_family: "Linux", webgl_noise_seed: "7" });
    installSurfaceHooks(win, config, (a) => logs.push(a));
    const gl = new (win as any).WebGLRenderingContext();
    const identity = forgedGpuIdentity(config);
    expect(gl.getParameter(0x1f01)).toBe(identity.vendor);
    expect(gl.getParameter(0x1f02)).toBe(identity.renderer);
    expect(gl.getParameter(0x9245)).toBe(identity.unmaskedVendor);
    expect(gl.getParameter(0x9246)).toBe(identity.unmaskedRenderer);
    expect(logs.filter((a) => a === "webgl")).toHaveLength(4);
    // non-identity parameters fall through to the native implementation
    expect(gl.getParameter(0x0d33)).toBe(0x0d33);
  });

  it("identity is stable per seed and plausible for the OS family", () => {
    const config = sampleConfig({ os_family: "macOS", webgl_noise_seed: "5555" });
    expect(forgedGpuIdentity(config)).toEqual(forgedGpuIdentity(config));
    expect(forgedGpuIdentity(config).unmaskedVendor).toContain("Apple");
  });
});

describe("audio hook", () => {
  it("analyser output is perturbed within epsilon, matching shared noise", () => {
    const logs: string[] = [];
    const win = makeStubWindow();
    const config = sampleConfig({ audio_noise_seed: "31", noise_amplitude: 2 });
    installSurfaceHooks(win, config, (a) => logs.push(a));
    const analyser = new (win as any).AnalyserNode();
    const bins = new Float32Array(64);
    analyser.getFloatFrequencyData(bins);

    const nativeBins = new Float32Array(64);
    for (let i = 0; i < nativeBins.length; i++) nativeBins[i] = -30 - i * 0.5;
    const epsilon = audioEpsilon(config);
    expect(epsilon).toBe(2e-4);
    const oracle = injectAudioNoise(nativeBins, 31n, epsilon);
    const float32Ulp = 4e-6; // storing back into Float32Array rounds the double
    for (let i = 0; i < bins.length; i++) {
      expect(bins[i]).toBe(Math.fround(oracle[i]));
      expect(Math.abs(bins[i] - nativeBins[i])).toBeLessThanOrEqual(epsilon + float32Ulp);
    }
    expect(logs).toContain("audio");
  });

  it("missing platform APIs are skipped silently", () => {
    const bare = {} as Window & typeof globalThis;
    expect(() => installSurfaceHooks(bare, sampleConfig(), () => undefined)).not.toThrow();
  });
});
