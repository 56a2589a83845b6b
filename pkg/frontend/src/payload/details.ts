/**
 * Details-page data: current (post-spoof) identity, hardware, digests
 * over fixed documented scenes, detected fonts, hook status. Runs
 * against the hooked window, so everything it reports reflects the
 * active disguise. The location/timezone section is omitted entirely
 * when WebRTC is disabled.
 */

import { audioFingerprint, canvasFingerprint, triangleWave, webglFingerprint } from "../shared/digest";
import { injectAudioNoise } from "../shared/noise";
import type { PayloadConfig } from "../shared/types";
import { audioEpsilon } from "./surfaces";

export interface DetailsPayload {
  browser: Record<string, string>;
  device: Record<string, string>;
  operating_system: Record<string, string>;
  location: Record<string, string> | null;
  hardware: Record<string, string>;
  software: Record<string, string>;
  extensions: Record<string, string>;
  digests: { canvas: string; webgl: string; audio: string };
  fonts: string[];
}

/** The documented canvas scene: UTF-8 pangram at two sizes + filled rect. */
export const CANVAS_SCENE_TEXT = "Grumpy wizards éèñ make toxic brew ☺";

const FONT_CANDIDATES = [
  "Arial", "Verdana", "Times New Roman", "Courier New", "Georgia",
  "Trebuchet MS", "Comic Sans MS", "Impact", "Helvetica", "Tahoma",
  "Calibri", "Cambria", "Segoe UI", "Roboto", "Ubuntu", "Noto Sans",
];

/** Browser name/version out of a user-agent string (details display only). */
export function parseBrowser(userAgent: string): { name: string; version: string } {
  const rules: [string, RegExp][] = [
    ["Edge", /Edge?\/([\d.]+)/],
    ["Edge", /EdgA\/([\d.]+)/],
    ["Opera", /OPR\/([\d.]+)/],
    ["Vivaldi", /Vivaldi\/([\d.]+)/],
    ["Firefox", /(?:Firefox|FxiOS)\/([\d.]+)/],
    ["Chrome", /(?:Chrome|CriOS)\/([\d.]+)/],
    ["Safari", /Version\/([\d.]+).*Safari/],
  ];
  for (const [name, pattern] of rules) {
    const match = userAgent.match(pattern);
    if (match) return { name, version: match[1] };
  }
  return { name: "Unknown", version: "" };
}

export function computeDetails(
  win: Window & typeof globalThis,
  config: PayloadConfig,
  hookFailures: string[] = [],
): DetailsPayload {
  const nav = win.navigator;
  const browser = parseBrowser(nav.userAgent);

  const location = config.disable_webrtc
    ? null
    : {
        timezone: safeTimezone(win),
        locale: nav.language ?? "",
      };

  return {
    browser: {
      user_agent: nav.userAgent,
      name: browser.name,
      version: browser.version,
    },
    device: {
      platform: nav.platform ?? "",
      touch_points: String((nav as any).maxTouchPoints ?? 0),
    },
    operating_system: {
      family: config.os_family,
    },
    location,
    hardware: {
      screen: `${win.screen.width}x${win.screen.height}`,
      color_depth: `${win.screen.colorDepth}-bit`,
      cpu_cores: String(nav.hardwareConcurrency ?? ""),
      device_memory_gb: String((nav as any).deviceMemory ?? ""),
    },
    software: {
      languages: [...(nav.languages ?? [])].join(", "),
      do_not_track: (nav as any).doNotTrack === "1" ? "enabled" : "off",
      cookies_enabled: String(nav.cookieEnabled ?? ""),
    },
    extensions: {
      spoofing: "active",
      surfaces: ["canvas", "webgl", "audio"]
        .filter((s) => (config as any)[`spoof_${s}`])
        .join(", ") || "none",
      hook_failures: hookFailures.length ? hookFailures.join(", ") : "none",
    },
    digests: {
      canvas: canvasDigest(win),
      webgl: webglDigest(win),
      audio: audioDigest(config),
    },
    fonts: detectFonts(win),
  };
}

function safeTimezone(win: Window & typeof globalThis): string {
  try {
    return win.Intl.DateTimeFormat().resolvedOptions().timeZone ?? "";
  } catch {
    return "";
  }
}

/** Draw the documented scene and hash the (hooked, noise-injected)
 * extraction — same pipeline as the gateway oracle. */
function canvasDigest(win: Window & typeof globalThis): string {
  try {
    const canvas = win.document.createElement("canvas");
    canvas.width = 240;
    canvas.height = 80;
    const context = canvas.getContext("2d");
    if (!context) return "unavailable";
    context.fillStyle = "#f60";
    context.fillRect(120, 4, 100, 28);
    context.fillStyle = "#069";
    context.font = "12px sans-serif";
    context.fillText(CANVAS_SCENE_TEXT, 2, 20);
    context.font = "18px serif";
    context.fillText(CANVAS_SCENE_TEXT, 2, 50);
    const image = context.getImageData(0, 0, canvas.width, canvas.height);
    return canvasFingerprint(image.data);
  } catch {
    return "unavailable";
  }
}

/** Fixed scene: a green rectangle via scissored clear, then read back. */
function webglDigest(win: Window & typeof globalThis): string {
  try {
    const canvas = win.document.createElement("canvas");
    canvas.width = 64;
    canvas.height = 32;
    const gl =
      (canvas.getContext("webgl") as WebGLRenderingContext | null) ??
      (canvas.getContext("experimental-webgl") as WebGLRenderingContext | null);
    if (!gl) return "unavailable";
    gl.clearColor(0, 0, 0, 1);
    gl.clear(gl.COLOR_BUFFER_BIT);
    gl.enable(gl.SCISSOR_TEST);
    gl.scissor(8, 8, 32, 16);
    gl.clearColor(0, 0.8, 0, 1);
    gl.clear(gl.COLOR_BUFFER_BIT);
    const pixels = new Uint8Array(4 * canvas.width * canvas.height);
    gl.readPixels(0, 0, canvas.width, canvas.height, gl.RGBA, gl.UNSIGNED_BYTE, pixels);
    const vendor = String(gl.getParameter(gl.VENDOR) ?? "");
    const renderer = String(gl.getParameter(gl.RENDERER) ?? "");
    const debugExt = gl.getExtension("WEBGL_debug_renderer_info");
    const unmaskedVendor = debugExt
      ? String(gl.getParameter(debugExt.UNMASKED_VENDOR_WEBGL) ?? "")
      : null;
    const unmaskedRenderer = debugExt
      ? String(gl.getParameter(debugExt.UNMASKED_RENDERER_WEBGL) ?? "")
      : null;
    return webglFingerprint(vendor, renderer, unmaskedVendor, unmaskedRenderer, pixels);
  } catch {
    return "unavailable";
  }
}

/** Synthesize the fixed triangle-wave spectrum and hash its perturbed
 * bins. Computed directly (no live AudioContext) so the digest is
 * deterministic per seed and works offline. */
function audioDigest(config: PayloadConfig): string {
  try {
    const wave = triangleWave(1000, 44100, 2048);
    const bins = new Float32Array(1024);
    for (let i = 0; i < bins.length; i++) bins[i] = Math.abs(wave[i * 2]);
    const noisy = config.spoof_audio
      ? injectAudioNoise(bins, BigInt(config.audio_noise_seed), audioEpsilon(config))
      : injectAudioNoise(bins, 0n, 0);
    return audioFingerprint(noisy);
  } catch {
    return "unavailable";
  }
}

/** Width/height text measurement against generic-family baselines. */
function detectFonts(win: Window & typeof globalThis): string[] {
  try {
    const canvas = win.document.createElement("canvas");
    const context = canvas.getContext("2d");
    if (!context) return [];
    const probe = "mmmmmmmmmmlli";
    const baselines = new Map<string, number>();
    for (const generic of ["monospace", "sans-serif", "serif"]) {
      context.font = `24px ${generic}`;
      baselines.set(generic, context.measureText(probe).width);
    }
    const detected: string[] = [];
    for (const font of FONT_CANDIDATES) {
      for (const generic of ["monospace", "sans-serif", "serif"]) {
        context.font = `24px "${font}", ${generic}`;
        if (context.measureText(probe).width !== baselines.get(generic)) {
          detected.push(font);
          break;
        }
      }
    }
    return detected;
  } catch {
    return [];
  }
}
