/**
 * Static property overrides: navigator/screen/timezone reads return the
 * forged values and every read logs its attribute synchronously before
 * returning. Installed before any document script runs (the gateway
 * injects the payload at document-start position).
 */

import type { PayloadConfig } from "../shared/types";

export type LogFn = (attribute: string) => void;

const PLATFORM_BY_FAMILY: Record<string, string> = {
  Windows: "Win32",
  Linux: "Linux x86_64",
  macOS: "MacIntel",
  Android: "Linux armv81",
  iOS: "iPhone",
};

/** Define a logging getter; non-configurable targets are skipped and
 * reported once under the "hook-failed" attribute. */
function defineGetter(
  target: object,
  property: string,
  value: () => unknown,
  log: LogFn,
  attribute: string,
  failures: string[],
): void {
  try {
    Object.defineProperty(target, property, {
      get() {
        log(attribute);
        return value();
      },
      configurable: true,
    });
  } catch {
    failures.push(property);
  }
}

export function installStaticOverrides(
  win: Window & typeof globalThis,
  config: PayloadConfig,
  log: LogFn,
): string[] {
  const failures: string[] = [];
  const nav = win.navigator;
  const languages = Object.freeze([...config.languages]);

  defineGetter(nav, "userAgent", () => config.user_agent, log, "userAgent", failures);
  defineGetter(nav, "appVersion",
    () => config.user_agent.replace(/^Mozilla\//, ""), log, "userAgent", failures);
  defineGetter(nav, "platform",
    () => PLATFORM_BY_FAMILY[config.os_family] ?? "Win32", log, "platform", failures);
  if (config.languages.length > 0) {
    defineGetter(nav, "languages", () => languages, log, "language", failures);
    defineGetter(nav, "language", () => languages[0], log, "language", failures);
  }
  defineGetter(nav, "hardwareConcurrency",
    () => config.cpu_cores, log, "hardwareConcurrency", failures);
  defineGetter(nav, "deviceMemory",
    () => config.device_memory_gb, log, "deviceMemory", failures);
  defineGetter(nav, "doNotTrack",
    () => (config.do_not_track ? "1" : null), log, "doNotTrack", failures);

  const scr = win.screen;
  defineGetter(scr, "width", () => config.screen_width, log, "screen", failures);
  defineGetter(scr, "height", () => config.screen_height, log, "screen", failures);
  defineGetter(scr, "availWidth", () => config.screen_width, log, "screen", failures);
  defineGetter(scr, "availHeight", () => config.screen_height, log, "screen", failures);
  defineGetter(scr, "colorDepth", () => config.color_depth, log, "screen", failures);
  defineGetter(scr, "pixelDepth", () => config.color_depth, log, "screen", failures);

  installTimezoneOverride(win, config, log, failures);
  if (config.disable_webrtc) installWebRtcBlock(win, log, failures);

  if (failures.length > 0) log("hook-failed");
  return failures;
}

function installTimezoneOverride(
  win: Window & typeof globalThis,
  config: PayloadConfig,
  log: LogFn,
  failures: string[],
): void {
  const intl = win.Intl;
  if (!intl?.DateTimeFormat) return;
  try {
    const original = intl.DateTimeFormat.prototype.resolvedOptions;
    intl.DateTimeFormat.prototype.resolvedOptions = function resolvedOptions() {
      log("timezone");
      const options = original.call(this);
      options.timeZone = config.timezone;
      return options;
    };
  } catch {
    failures.push("Intl.DateTimeFormat.resolvedOptions");
  }
}

function installWebRtcBlock(
  win: Window & typeof globalThis,
  log: LogFn,
  failures: string[],
): void {
  for (const name of ["RTCPeerConnection", "webkitRTCPeerConnection", "RTCDataChannel"]) {
    if (!(name in win)) continue;
    try {
      Object.defineProperty(win, name, {
        get() {
          log("webrtc");
          return undefined;
        },
        configurable: true,
      });
    } catch {
      failures.push(name);
    }
  }
}
