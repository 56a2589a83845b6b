/**
 * Tracking dashboard: horizontal bar chart of per-attribute access
 * totals (bar length proportional to the count) and the URL list with
 * per-page totals.
 */

import type { AttributeStat, UrlStat } from "../shared/types";

export function renderDashboard(
  root: HTMLElement,
  stats: AttributeStat[],
  urls: UrlStat[],
): void {
  const doc = root.ownerDocument;
  root.textContent = "";
  root.appendChild(heading(doc, "Fingerprint access attempts"));

  if (stats.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "Nothing logged yet. Browse through the gateway and come back.";
    root.appendChild(empty);
    return;
  }

  const maxTotal = Math.max(...stats.map((s) => s.total_count));
  const chart = doc.createElement("div");
  chart.className = "bar-chart";
  for (const stat of stats) {
    const row = doc.createElement("div");
    row.className = "bar-row";
    row.setAttribute("data-attribute", stat.attribute);

    const label = doc.createElement("span");
    label.className = "bar-label";
    label.textContent = stat.attribute;
    row.appendChild(label);

    const track = doc.createElement("div");
    track.className = "bar-track";
    const bar = doc.createElement("div");
    bar.className = "bar";
    // proportional length: percentage of the widest bar
    bar.style.width = `${((stat.total_count / maxTotal) * 100).toFixed(3)}%`;
    bar.setAttribute("data-total", String(stat.total_count));
    track.appendChild(bar);
    row.appendChild(track);

    const value = doc.createElement("span");
    value.className = "bar-value";
    value.textContent = `${stat.total_count} (${stat.distinct_origins} origin${
      stat.distinct_origins === 1 ? "" : "s"})`;
    row.appendChild(value);

    chart.appendChild(row);
  }
  root.appendChild(chart);

  root.appendChild(heading(doc, "Pages"));
  const table = doc.createElement("table");
  table.className = "url-list";
  const head = doc.createElement("tr");
  for (const column of ["Page", "Accesses", "Last seen"]) {
    const th = doc.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const row of urls) {
    const tr = doc.createElement("tr");
    const page = doc.createElement("td");
    page.textContent = row.page_url;
    const total = doc.createElement("td");
    total.textContent = String(row.total_count);
    const last = doc.createElement("td");
    last.textContent = new Date(row.last_ts).toISOString();
    tr.append(page, total, last);
    table.appendChild(tr);
  }
  root.appendChild(table);
}

function heading(doc: Document, text: string): HTMLElement {
  const h = doc.createElement("h2");
  h.textContent = text;
  return h;
}
