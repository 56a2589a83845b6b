/** Thin fetch wrappers over the gateway's reserved endpoints. */

import type { AttributeStat, ConfigEnvelope, FingerprintProfile, UrlStat } from "../shared/types";

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      detail = ((await response.json()) as { error?: string }).error ?? detail;
    } catch {
      /* keep the status text */
    }
    throw new Error(detail);
  }
  return (await response.json()) as T;
}

export function getConfig(): Promise<ConfigEnvelope> {
  return fetch("/__fpguard/config").then((r) => asJson<ConfigEnvelope>(r));
}

export function saveConfig(profile: FingerprintProfile): Promise<{ ok: boolean }> {
  return fetch("/__fpguard/config", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(profile),
  }).then((r) => asJson<{ ok: boolean }>(r));
}

export function getStats(): Promise<{ attributes: AttributeStat[] }> {
  return fetch("/__fpguard/api/stats").then((r) => asJson<{ attributes: AttributeStat[] }>(r));
}

export function getUrls(): Promise<{ urls: UrlStat[] }> {
  return fetch("/__fpguard/api/urls").then((r) => asJson<{ urls: UrlStat[] }>(r));
}
