/**
 * Client-side one-click profile generation for the settings switch. The
 * option lists are bundled from the gateway's shipped catalog, so every
 * generated value stays on the same lists the engine draws from.
 */

import optionLists from "../../../src/fpguard/data/option_lists.json";
import { SplitMix64, deriveNoiseSeeds } from "../shared/splitmix";
import type { FingerprintProfile } from "../shared/types";

export const OS_FAMILIES = ["Windows", "Linux", "macOS", "Android", "iOS"] as const;

export const USER_AGENTS = optionLists.user_agents as Record<
  string,
  { user_agent: string; browser_version: string }[]
>;
export const ACCEPT_LANGUAGES = optionLists.accept_languages as string[][];

const SCREENS: Record<string, [number, number][]> = {
  Windows: [[1920, 1080], [2560, 1440], [1366, 768], [1536, 864], [1440, 900]],
  Linux: [[1920, 1080], [2560, 1440], [1680, 1050], [1366, 768], [3840, 2160]],
  macOS: [[1440, 900], [1680, 1050], [2560, 1600], [1512, 982], [1728, 1117]],
  Android: [[412, 915], [393, 873], [360, 800], [412, 892], [384, 854]],
  iOS: [[390, 844], [393, 852], [414, 896], [430, 932], [375, 812]],
};
const COLOR_DEPTHS = [24, 30, 32];
const CPU_CORES = [2, 4, 4, 6, 8, 8, 12, 16];
const MEMORY_GB = [2, 4, 4, 8, 8];
const TIMEZONES = [
  "America/New_York", "America/Chicago", "America/Los_Angeles",
  "America/Vancouver", "America/Sao_Paulo", "Europe/London",
  "Europe/Berlin", "Europe/Paris", "Europe/Madrid", "Europe/Amsterdam",
  "Asia/Tokyo", "Asia/Seoul", "Asia/Shanghai", "Australia/Sydney",
];

export function randomSeed(): bigint {
  const words = new Uint32Array(2);
  crypto.getRandomValues(words);
  return (BigInt(words[0]) << 32n) | BigInt(words[1]);
}

export function generateProfile(seed: bigint): FingerprintProfile {
  const [canvasSeed, webglSeed, audioSeed] = deriveNoiseSeeds(seed);
  const stream = new SplitMix64(seed);
  for (let i = 0; i < 3; i++) stream.nextU64(); // past the noise-seed draws

  const family = OS_FAMILIES[stream.nextBelow(OS_FAMILIES.length)];
  const uas = USER_AGENTS[family];
  const userAgent = uas[stream.nextBelow(uas.length)].user_agent;
  const languages = ACCEPT_LANGUAGES[stream.nextBelow(ACCEPT_LANGUAGES.length)];
  const screens = SCREENS[family];
  const [width, height] = screens[stream.nextBelow(screens.length)];

  return {
    enabled: true,
    os_family: family,
    user_agent: userAgent,
    accept_language: [...languages],
    do_not_track: true,
    prevent_etag: true,
    referer_mode: "strip",
    x_forwarded_for: [
      1 + stream.nextBelow(223),
      stream.nextBelow(256),
      stream.nextBelow(256),
      1 + stream.nextBelow(254),
    ].join("."),
    screen_width: width,
    screen_height: height,
    color_depth: COLOR_DEPTHS[stream.nextBelow(COLOR_DEPTHS.length)],
    cpu_cores: CPU_CORES[stream.nextBelow(CPU_CORES.length)],
    device_memory_gb: MEMORY_GB[stream.nextBelow(MEMORY_GB.length)],
    timezone: TIMEZONES[stream.nextBelow(TIMEZONES.length)],
    spoof_canvas: true,
    spoof_webgl: true,
    spoof_audio: true,
    // profile JSON carries seeds as numbers: keep them under 2^53 so the
    // round trip through IEEE doubles stays exact
    canvas_noise_seed: Number(canvasSeed % 9007199254740991n),
    webgl_noise_seed: Number(webglSeed % 9007199254740991n),
    audio_noise_seed: Number(audioSeed % 9007199254740991n),
    noise_amplitude: 1 + stream.nextBelow(4),
    disable_webrtc: stream.nextBelow(2) === 1,
  };
}
