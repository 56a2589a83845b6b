/**
 * Fingerprint details page: seven sections (browser, device, operating
 * system, location, hardware, software, extensions) plus the surface
 * digests and detected fonts. Values come from computeDetails run under
 * the active disguise; the location section disappears entirely when
 * WebRTC is disabled. Sections with no data show an explicit
 * "unavailable".
 */

import type { DetailsPayload } from "../payload/details";

const SECTION_ORDER: [keyof DetailsPayload, string][] = [
  ["browser", "Browser"],
  ["device", "Device"],
  ["operating_system", "Operating system"],
  ["location", "Location"],
  ["hardware", "Hardware"],
  ["software", "Software"],
  ["extensions", "Extensions"],
];

export function renderDetails(root: HTMLElement, details: DetailsPayload): void {
  const doc = root.ownerDocument;
  root.textContent = "";

  for (const [key, title] of SECTION_ORDER) {
    const value = details[key];
    if (key === "location" && value === null) continue; // hidden with WebRTC off
    const section = doc.createElement("section");
    section.className = "details-section";
    section.setAttribute("data-section", key);
    const h = doc.createElement("h2");
    h.textContent = title;
    section.appendChild(h);

    const entries = value && typeof value === "object"
      ? Object.entries(value as Record<string, string>) : [];
    if (entries.length === 0) {
      const missing = doc.createElement("p");
      missing.className = "unavailable";
      missing.textContent = "unavailable";
      section.appendChild(missing);
    } else {
      const list = doc.createElement("dl");
      for (const [field, fieldValue] of entries) {
        const dt = doc.createElement("dt");
        dt.textContent = field.split("_").join(" ");
        const dd = doc.createElement("dd");
        dd.textContent = String(fieldValue) || "unavailable";
        list.append(dt, dd);
      }
      section.appendChild(list);
    }
    root.appendChild(section);
  }

  const digests = doc.createElement("section");
  digests.className = "details-section";
  digests.setAttribute("data-section", "digests");
  const h = doc.createElement("h2");
  h.textContent = "Surface digests";
  digests.appendChild(h);
  const list = doc.createElement("dl");
  for (const [surface, digest] of Object.entries(details.digests)) {
    const dt = doc.createElement("dt");
    dt.textContent = surface;
    const dd = doc.createElement("dd");
    dd.className = "digest";
    dd.textContent = digest;
    list.append(dt, dd);
  }
  digests.appendChild(list);
  root.appendChild(digests);

  const fonts = doc.createElement("section");
  fonts.className = "details-section";
  fonts.setAttribute("data-section", "fonts");
  const fh = doc.createElement("h2");
  fh.textContent = "Detected fonts";
  fonts.appendChild(fh);
  const p = doc.createElement("p");
  p.textContent = details.fonts.length ? details.fonts.join(", ") : "unavailable";
  fonts.appendChild(p);
  root.appendChild(fonts);
}
