/** Dashboard rendering: proportional bar geometry and the URL list. */

import { describe, expect, it } from "vitest";

import { renderDashboard } from "../src/ui/dashboard";
import type { AttributeStat, UrlStat } from "../src/shared/types";

function barWidth(root: HTMLElement, attribute: string): number {
  const bar = root.querySelector(
    `[data-attribute="${attribute}"] .bar`,
  ) as HTMLElement | null;
  if (!bar) throw new Error(`no bar for ${attribute}`);
  return parseFloat(bar.style.width);
}

describe("renderDashboard", () => {
  it("renders bars proportional to totals: 5 vs 2 is 2.5x within 2%", () => {
    const stats: AttributeStat[] = [
      { attribute: "canvas", total_count: 5, distinct_origins: 2 },
      { attribute: "userAgent", total_count: 2, distinct_origins: 1 },
    ];
    const root = document.createElement("div");
    renderDashboard(root, stats, []);
    const ratio = barWidth(root, "canvas") / barWidth(root, "userAgent");
    expect(Math.abs(ratio - 2.5)).toBeLessThanOrEqual(2.5 * 0.02);
  });

  it("widest bar spans the full track", () => {
    const stats: AttributeStat[] = [
      { attribute: "audio", total_count: 7, distinct_origins: 1 },
      { attribute: "screen", total_count: 3, distinct_origins: 1 },
    ];
    const root = document.createElement("div");
    renderDashboard(root, stats, []);
    expect(barWidth(root, "audio")).toBeCloseTo(100, 5);
  });

  it("url list has one row per distinct page", () => {
    const urls: UrlStat[] = [
      { page_url: "https://a.example/1", total_count: 4, last_ts: 1700000000000 },
      { page_url: "https://b.example/2", total_count: 3, last_ts: 1700000000500 },
    ];
    const root = document.createElement("div");
    renderDashboard(root, [
      { attribute: "canvas", total_count: 7, distinct_origins: 2 },
    ], urls);
    const rows = root.querySelectorAll(".url-list tr");
    expect(rows).toHaveLength(1 + urls.length); // header + one per url
    expect(root.textContent).toContain("https://a.example/1");
    expect(root.textContent).toContain("https://b.example/2");
  });

  it("empty store renders the explicit empty state", () => {
    const root = document.createElement("div");
    renderDashboard(root, [], []);
    expect(root.querySelector(".empty-state")).not.toBeNull();
    expect(root.querySelector(".bar")).toBeNull();
  });

  it("same payload renders the same DOM", () => {
    const stats: AttributeStat[] = [
      { attribute: "webgl", total_count: 9, distinct_origins: 3 },
    ];
    const a = document.createElement("div");
    const b = document.createElement("div");
    renderDashboard(a, stats, []);
    renderDashboard(b, stats, []);
    expect(a.innerHTML).toBe(b.innerHTML);
  });
});
