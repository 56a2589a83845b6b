/** Profile-to-payload-config projection, mirroring the gateway's own
 * bootstrap serialization. */

import type { FingerprintProfile, PayloadConfig } from "../shared/types";

export function payloadConfigFromProfile(
  profile: FingerprintProfile,
  sessionId: string,
): PayloadConfig {
  return {
    session_id: sessionId,
    user_agent: profile.user_agent,
    languages: [...profile.accept_language],
    os_family: profile.os_family,
    do_not_track: profile.do_not_track,
    screen_width: profile.screen_width,
    screen_height: profile.screen_height,
    color_depth: profile.color_depth,
    cpu_cores: profile.cpu_cores,
    device_memory_gb: profile.device_memory_gb,
    timezone: profile.timezone,
    spoof_canvas: profile.spoof_canvas,
    spoof_webgl: profile.spoof_webgl,
    spoof_audio: profile.spoof_audio,
    canvas_noise_seed: String(profile.canvas_noise_seed),
    webgl_noise_seed: String(profile.webgl_noise_seed),
    audio_noise_seed: String(profile.audio_noise_seed),
    noise_amplitude: profile.noise_amplitude,
    disable_webrtc: profile.disable_webrtc,
  };
}
