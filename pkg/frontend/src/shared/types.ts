/** Wire shapes shared by the payload and the control UI. */

/** In-page profile subset delivered via the injected bootstrap attribute
 * and GET /__fpguard/config (noise seeds ride as decimal strings: they
 * exceed 2^53). */
export interface PayloadConfig {
  session_id: string;
  user_agent: string;
  languages: string[];
  os_family: string;
  do_not_track: boolean;
  screen_width: number;
  screen_height: number;
  color_depth: number;
  cpu_cores: number;
  device_memory_gb: number;
  timezone: string;
  spoof_canvas: boolean;
  spoof_webgl: boolean;
  spoof_audio: boolean;
  canvas_noise_seed: string;
  webgl_noise_seed: string;
  audio_noise_seed: string;
  noise_amplitude: number;
  disable_webrtc: boolean;
}

/** Full profile as stored by the gateway (settings UI round-trips this). */
export interface FingerprintProfile {
  enabled: boolean;
  os_family: string;
  user_agent: string;
  accept_language: string[];
  do_not_track: boolean;
  prevent_etag: boolean;
  referer_mode: "keep" | "strip" | "origin_only";
  x_forwarded_for: string | null;
  screen_width: number;
  screen_height: number;
  color_depth: number;
  cpu_cores: number;
  device_memory_gb: number;
  timezone: string;
  spoof_canvas: boolean;
  spoof_webgl: boolean;
  spoof_audio: boolean;
  canvas_noise_seed: number;
  webgl_noise_seed: number;
  audio_noise_seed: number;
  noise_amplitude: number;
  disable_webrtc: boolean;
}

export interface ConfigEnvelope {
  present: boolean;
  session_id: string;
  profile: FingerprintProfile | null;
}

export interface LogEntry {
  attribute: string;
  count: number;
  url: string;
  ts: number;
}

export interface AttributeStat {
  attribute: string;
  total_count: number;
  distinct_origins: number;
}

export interface UrlStat {
  page_url: string;
  total_count: number;
  last_ts: number;
}

export function parsePayloadConfig(json: string): PayloadConfig {
  const raw = JSON.parse(json) as Record<string, unknown>;
  for (const key of ["session_id", "user_agent", "canvas_noise_seed"]) {
    if (!(key in raw)) throw new Error(`bootstrap config missing ${key}`);
  }
  return raw as unknown as PayloadConfig;
}
