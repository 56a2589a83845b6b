/**
 * Settings panel: front page with the one-click switch, user-agent
 * options behind five OS tabs, request-header settings, and the
 * hardware/surface settings. All state flows through the config
 * endpoints; saving pushes the complete profile.
 */

import type { ConfigEnvelope, FingerprintProfile } from "../shared/types";
import { ACCEPT_LANGUAGES, OS_FAMILIES, USER_AGENTS, generateProfile, randomSeed } from "./generate";

export type SettingsTab = "front" | "useragent" | "headers" | "other";

export interface SettingsState {
  tab: SettingsTab;
  draft: FingerprintProfile | null;
  sessionId: string;
  dirty: boolean;
}

export interface SettingsActions {
  save(profile: FingerprintProfile): Promise<void>;
  reload(): Promise<void>;
}

export function stateFromConfig(envelope: ConfigEnvelope): SettingsState {
  return {
    tab: "front",
    draft: envelope.profile,
    sessionId: envelope.session_id,
    dirty: false,
  };
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderSettings(
  root: HTMLElement,
  state: SettingsState,
  actions: SettingsActions,
): void {
  const doc = root.ownerDocument;
  root.textContent = "";

  const nav = el(doc, "nav", { class: "tabs" });
  const tabs: [SettingsTab, string][] = [
    ["front", "Home"], ["useragent", "User agent"],
    ["headers", "Request headers"], ["other", "Other settings"],
  ];
  for (const [tab, label] of tabs) {
    const button = el(doc, "button", {
      class: state.tab === tab ? "tab active" : "tab",
      "data-tab": tab,
    }, label);
    button.addEventListener("click", () => {
      state.tab = tab;
      renderSettings(root, state, actions);
    });
    nav.appendChild(button);
  }
  root.appendChild(nav);

  const body = el(doc, "section", { class: "tab-body" });
  root.appendChild(body);
  switch (state.tab) {
    case "front": renderFront(body, state, actions, root); break;
    case "useragent": renderUserAgent(body, state, actions, root); break;
    case "headers": renderHeaders(body, state, actions, root); break;
    case "other": renderOther(body, state, actions, root); break;
  }

  if (state.tab !== "front") {
    const saveButton = el(doc, "button", { class: "save", id: "save-settings" },
      state.dirty ? "Save changes" : "Saved");
    (saveButton as HTMLButtonElement).disabled = !state.dirty || !state.draft;
    saveButton.addEventListener("click", () => {
      if (state.draft) void persist(root, state, actions, state.draft);
    });
    root.appendChild(saveButton);
  }
}

async function persist(
  root: HTMLElement,
  state: SettingsState,
  actions: SettingsActions,
  profile: FingerprintProfile,
): Promise<void> {
  try {
    await actions.save(profile);
    state.draft = profile;
    state.dirty = false;
    renderSettings(root, state, actions);
  } catch (error) {
    showBanner(root, `Save failed: ${(error as Error).message}`);
  }
}

function showBanner(root: HTMLElement, message: string): void {
  const doc = root.ownerDocument;
  let banner = root.querySelector(".error-banner") as HTMLElement | null;
  if (!banner) {
    banner = el(doc, "div", { class: "error-banner", role: "alert" });
    root.prepend(banner);
  }
  banner.textContent = message;
}

function mutate(root: HTMLElement, state: SettingsState, actions: SettingsActions,
                change: (draft: FingerprintProfile) => void): void {
  if (!state.draft) return;
  change(state.draft);
  state.dirty = true;
  renderSettings(root, state, actions);
}

function renderFront(
  body: HTMLElement, state: SettingsState, actions: SettingsActions, root: HTMLElement,
): void {
  const doc = body.ownerDocument;
  const enabled = state.draft?.enabled ?? false;

  const row = el(doc, "div", { class: "switch-row" });
  const toggle = el(doc, "input", { type: "checkbox", id: "master-switch" });
  (toggle as HTMLInputElement).checked = enabled;
  toggle.addEventListener("change", () => {
    const on = (toggle as HTMLInputElement).checked;
    // one-click: a fresh random disguise on enable, disable keeps values
    const profile = on
      ? generateProfile(randomSeed())
      : state.draft && { ...state.draft, enabled: false };
    if (profile) void persist(root, state, actions, profile);
  });
  row.appendChild(toggle);
  row.appendChild(el(doc, "label", { for: "master-switch" },
    "Anti-fingerprint spoofing"));
  body.appendChild(row);

  const summary = el(doc, "p", { class: "summary", id: "front-summary" },
    enabled && state.draft
      ? `Active disguise: ${state.draft.os_family} / ${state.draft.user_agent.slice(0, 64)}`
      : "Spoofing is off for this session.");
  body.appendChild(summary);

  const links = el(doc, "p", { class: "links" });
  links.appendChild(el(doc, "a", { href: "#/details" }, "Fingerprint details"));
  links.appendChild(doc.createTextNode(" · "));
  links.appendChild(el(doc, "a", { href: "#/dashboard" }, "Tracking dashboard"));
  body.appendChild(links);
}

function renderUserAgent(
  body: HTMLElement, state: SettingsState, actions: SettingsActions, root: HTMLElement,
): void {
  const doc = body.ownerDocument;
  if (!state.draft) {
    body.appendChild(el(doc, "p", {}, "Enable spoofing first (Home tab)."));
    return;
  }
  const current = state.draft;

  const familyNav = el(doc, "div", { class: "os-tabs" });
  for (const family of OS_FAMILIES) {
    const button = el(doc, "button", {
      class: current.os_family === family ? "os-tab active" : "os-tab",
      "data-family": family,
    }, family);
    button.addEventListener("click", () =>
      mutate(root, state, actions, (draft) => {
        draft.os_family = family;
        draft.user_agent = USER_AGENTS[family][0].user_agent;
      }));
    familyNav.appendChild(button);
  }
  body.appendChild(familyNav);

  const list = el(doc, "ul", { class: "ua-options" });
  for (const option of USER_AGENTS[current.os_family] ?? []) {
    const item = el(doc, "li", {});
    const radio = el(doc, "input", {
      type: "radio", name: "ua", value: option.user_agent,
    }) as HTMLInputElement;
    radio.checked = current.user_agent === option.user_agent;
    radio.addEventListener("change", () =>
      mutate(root, state, actions, (draft) => {
        draft.user_agent = option.user_agent;
      }));
    item.appendChild(radio);
    item.appendChild(el(doc, "label", {}, option.browser_version));
    item.appendChild(el(doc, "code", { class: "ua-string" }, option.user_agent));
    list.appendChild(item);
  }
  body.appendChild(list);
}

function renderHeaders(
  body: HTMLElement, state: SettingsState, actions: SettingsActions, root: HTMLElement,
): void {
  const doc = body.ownerDocument;
  if (!state.draft) {
    body.appendChild(el(doc, "p", {}, "Enable spoofing first (Home tab)."));
    return;
  }
  const current = state.draft;

  const checkbox = (id: string, label: string, checked: boolean,
                    change: (on: boolean, draft: FingerprintProfile) => void) => {
    const row = el(doc, "div", { class: "setting-row" });
    const input = el(doc, "input", { type: "checkbox", id }) as HTMLInputElement;
    input.checked = checked;
    input.addEventListener("change", () =>
      mutate(root, state, actions, (draft) => change(input.checked, draft)));
    row.appendChild(input);
    row.appendChild(el(doc, "label", { for: id }, label));
    body.appendChild(row);
  };

  checkbox("set-dnt", "Send 'Do Not Track' flag", current.do_not_track,
    (on, draft) => { draft.do_not_track = on; });
  checkbox("prevent-etag", "Prevent eTag tracking", current.prevent_etag,
    (on, draft) => { draft.prevent_etag = on; });
  checkbox("strip-referer", "Strip Referer", current.referer_mode !== "keep",
    (on, draft) => { draft.referer_mode = on ? "strip" : "keep"; });
  checkbox("spoof-language", "Spoof Accept-Language", current.accept_language.length > 0,
    (on, draft) => { draft.accept_language = on ? [...ACCEPT_LANGUAGES[0]] : []; });
  checkbox("set-xff", "Send decoy X-Forwarded-For", current.x_forwarded_for !== null,
    (on, draft) => { draft.x_forwarded_for = on ? "203.0.113.7" : null; });

  if (current.accept_language.length > 0) {
    const select = el(doc, "select", { id: "language-select" }) as HTMLSelectElement;
    for (const tags of ACCEPT_LANGUAGES) {
      const option = el(doc, "option", { value: tags.join(",") }, tags.join(", "));
      (option as HTMLOptionElement).selected =
        tags.join(",") === current.accept_language.join(",");
      select.appendChild(option);
    }
    select.addEventListener("change", () =>
      mutate(root, state, actions, (draft) => {
        draft.accept_language = select.value.split(",");
      }));
    body.appendChild(select);
  }
}

function renderOther(
  body: HTMLElement, state: SettingsState, actions: SettingsActions, root: HTMLElement,
): void {
  const doc = body.ownerDocument;
  if (!state.draft) {
    body.appendChild(el(doc, "p", {}, "Enable spoofing first (Home tab)."));
    return;
  }
  const current = state.draft;

  const numberField = (id: string, label: string, value: number,
                       change: (n: number, draft: FingerprintProfile) => void) => {
    const row = el(doc, "div", { class: "setting-row" });
    row.appendChild(el(doc, "label", { for: id }, label));
    const input = el(doc, "input", { type: "number", id, value: String(value) });
    input.addEventListener("change", () =>
      mutate(root, state, actions, (draft) =>
        change(Number((input as HTMLInputElement).value), draft)));
    row.appendChild(input);
    body.appendChild(row);
  };

  numberField("screen-width", "Screen width", current.screen_width,
    (n, draft) => { draft.screen_width = n; });
  numberField("screen-height", "Screen height", current.screen_height,
    (n, draft) => { draft.screen_height = n; });
  numberField("cpu-cores", "CPU cores", current.cpu_cores,
    (n, draft) => { draft.cpu_cores = n; });

  const memoryRow = el(doc, "div", { class: "setting-row" });
  memoryRow.appendChild(el(doc, "label", { for: "device-memory" }, "Device memory (GB)"));
  const memory = el(doc, "select", { id: "device-memory" }) as HTMLSelectElement;
  for (const gb of [0.25, 0.5, 1, 2, 4, 8]) {
    const option = el(doc, "option", { value: String(gb) }, String(gb));
    (option as HTMLOptionElement).selected = current.device_memory_gb === gb;
    memory.appendChild(option);
  }
  memory.addEventListener("change", () =>
    mutate(root, state, actions, (draft) => {
      draft.device_memory_gb = Number(memory.value);
    }));
  memoryRow.appendChild(memory);
  body.appendChild(memoryRow);

  const surfaceToggle = (id: string, label: string, checked: boolean,
                         change: (on: boolean, draft: FingerprintProfile) => void) => {
    const row = el(doc, "div", { class: "setting-row" });
    const input = el(doc, "input", { type: "checkbox", id }) as HTMLInputElement;
    input.checked = checked;
    input.addEventListener("change", () =>
      mutate(root, state, actions, (draft) => change(input.checked, draft)));
    row.appendChild(input);
    row.appendChild(el(doc, "label", { for: id }, label));
    body.appendChild(row);
  };

  surfaceToggle("spoof-canvas", "Canvas noise", current.spoof_canvas,
    (on, draft) => { draft.spoof_canvas = on; });
  surfaceToggle("spoof-webgl", "WebGL spoofing", current.spoof_webgl,
    (on, draft) => { draft.spoof_webgl = on; });
  surfaceToggle("spoof-audio", "Audio noise", current.spoof_audio,
    (on, draft) => { draft.spoof_audio = on; });
  surfaceToggle("disable-webrtc", "Disable WebRTC", current.disable_webrtc,
    (on, draft) => { draft.disable_webrtc = on; });

  const timezoneRow = el(doc, "div", { class: "setting-row" });
  timezoneRow.appendChild(el(doc, "label", { for: "timezone" }, "Timezone"));
  const timezone = el(doc, "input", {
    type: "text", id: "timezone", value: current.timezone,
  }) as HTMLInputElement;
  timezone.addEventListener("change", () =>
    mutate(root, state, actions, (draft) => { draft.timezone = timezone.value; }));
  timezoneRow.appendChild(timezone);
  body.appendChild(timezoneRow);
}
