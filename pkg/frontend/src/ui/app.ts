/**
 * Control UI entry point: hash routing between settings, details and
 * dashboard, all state flowing through the gateway endpoints.
 */

import { computeDetails } from "../payload/details";
import { installStaticOverrides } from "../payload/overrides";
import { installSurfaceHooks } from "../payload/surfaces";
import { payloadConfigFromProfile } from "./convert";
import { getConfig, getStats, getUrls, saveConfig } from "./api";
import { renderDashboard } from "./dashboard";
import { renderDetails } from "./details-view";
import { renderSettings, stateFromConfig } from "./settings";
import type { SettingsState } from "./settings";

function appRoot(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

function showError(message: string): void {
  const root = appRoot();
  root.textContent = "";
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.setAttribute("role", "alert");
  banner.textContent = message;
  root.appendChild(banner);
}

async function routeSettings(): Promise<void> {
  let state: SettingsState;
  try {
    state = stateFromConfig(await getConfig());
  } catch (error) {
    showError(`Cannot reach the gateway config endpoint: ${(error as Error).message}`);
    return;
  }
  renderSettings(appRoot(), state, {
    async save(profile) {
      await saveConfig(profile);
    },
    async reload() {
      await routeSettings();
    },
  });
}

async function routeDetails(): Promise<void> {
  try {
    const envelope = await getConfig();
    if (!envelope.present || !envelope.profile) {
      showError("No active disguise for this session; enable spoofing first.");
      return;
    }
    // apply the disguise to this page, then report what pages now see;
    // a silent log fn keeps UI reads out of the tracking statistics
    const config = payloadConfigFromProfile(envelope.profile, envelope.session_id);
    const silent = () => undefined;
    installStaticOverrides(window, config, silent);
    installSurfaceHooks(window, config, silent);
    renderDetails(appRoot(), computeDetails(window, config));
  } catch (error) {
    showError(`Details unavailable: ${(error as Error).message}`);
  }
}

async function routeDashboard(): Promise<void> {
  try {
    const [stats, urls] = await Promise.all([getStats(), getUrls()]);
    renderDashboard(appRoot(), stats.attributes, urls.urls);
  } catch (error) {
    showError(`Cannot reach the gateway stats endpoints: ${(error as Error).message}`);
  }
}

export function route(): void {
  const hash = location.hash || "#/settings";
  if (hash.startsWith("#/dashboard")) void routeDashboard();
  else if (hash.startsWith("#/details")) void routeDetails();
  else void routeSettings();
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", route);
