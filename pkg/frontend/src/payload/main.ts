/**
 * Payload entry point. The gateway injects this script as the first
 * script element of every HTML document with the session config riding
 * in a data attribute, so hooks install synchronously before any page
 * script can read a fingerprint surface. Without a config attribute the
 * payload stays completely inert.
 */

import { parsePayloadConfig } from "../shared/types";
import { LogCollector } from "./collector";
import { computeDetails } from "./details";
import { installStaticOverrides, type LogFn } from "./overrides";
import { installSurfaceHooks } from "./surfaces";

(function bootstrap() {
  const script = document.currentScript as HTMLScriptElement | null;
  const raw = script?.getAttribute("data-fpguard-config");
  if (!raw) return;

  let config;
  try {
    config = parsePayloadConfig(atob(raw));
  } catch {
    return; // unreadable bootstrap: do not touch the page
  }

  const collector = new LogCollector();
  const log: LogFn = (attribute) => collector.send(attribute);

  const failures = installStaticOverrides(window, config, log);
  installSurfaceHooks(window, config, log);
  window.addEventListener("pagehide", () => collector.flush());

  // details page and diagnostics entry point
  (window as any).__fpguard = {
    sessionId: config.session_id,
    computeDetails: () => {
      log("fonts"); // font probing below is itself a fingerprint read
      return computeDetails(window, config, failures);
    },
  };
})();
