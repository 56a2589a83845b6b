/**
 * Batches fingerprint-access events and ships them to the gateway's
 * same-origin beacon endpoint. A flush fires when 20 entries are
 * buffered or 1000 ms after the first pending entry, whichever comes
 * first; duplicate attributes merge by summing counts. Getters calling
 * send() never wait on the network.
 */

import type { LogEntry } from "../shared/types";

export const FLUSH_LIMIT = 20;
export const FLUSH_TIMEOUT_MS = 1000;
export const LOGS_ENDPOINT = "/__fpguard/logs";

export type PostBatch = (batch: LogEntry[]) => Promise<boolean>;

interface CollectorOptions {
  post?: PostBatch;
  pageUrl?: () => string;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
  warn?: (message: string) => void;
}

export function defaultPost(batch: LogEntry[]): Promise<boolean> {
  return fetch(LOGS_ENDPOINT, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(batch),
    keepalive: true,
  }).then(
    (response) => response.ok,
    () => false,
  );
}

export class LogCollector {
  private buffer: { attribute: string; count: number }[] = [];
  private timer: unknown = null;
  private readonly post: PostBatch;
  private readonly pageUrl: () => string;
  private readonly now: () => number;
  private readonly setTimer: (fn: () => void, ms: number) => unknown;
  private readonly clearTimer: (handle: unknown) => void;
  private readonly warn: (message: string) => void;

  constructor(options: CollectorOptions = {}) {
    this.post = options.post ?? defaultPost;
    this.pageUrl = options.pageUrl ?? (() => location.href);
    this.now = options.now ?? (() => Date.now());
    this.setTimer = options.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = options.clearTimer ?? ((handle) => clearTimeout(handle as number));
    this.warn = options.warn ?? ((message) => console.warn(message));
  }

  get pending(): number {
    return this.buffer.length;
  }

  /** Record one access; synchronous, called from inside getters. */
  send(attribute: string): void {
    this.buffer.push({ attribute, count: 1 });
    if (this.buffer.length >= FLUSH_LIMIT) {
      this.flush();
      return;
    }
    if (this.timer === null) {
      this.timer = this.setTimer(() => {
        this.timer = null;
        this.flush();
      }, FLUSH_TIMEOUT_MS);
    }
  }

  /** Merge the buffer into one wire batch and dispatch fire-and-forget. */
  flush(): void {
    if (this.timer !== null) {
      this.clearTimer(this.timer);
      this.timer = null;
    }
    if (this.buffer.length === 0) return;
    const merged = new Map<string, number>();
    for (const entry of this.buffer) {
      merged.set(entry.attribute, (merged.get(entry.attribute) ?? 0) + entry.count);
    }
    this.buffer = [];
    const ts = this.now();
    const url = this.pageUrl();
    const batch: LogEntry[] = Array.from(merged, ([attribute, count]) => ({
      attribute, count, url, ts,
    }));
    void this.dispatch(batch);
  }

  private async dispatch(batch: LogEntry[]): Promise<void> {
    if (await this.post(batch)) return;
    if (await this.post(batch)) return; // single retry
    this.warn(`fpguard: dropping batch of ${batch.length} log entries after retry`);
  }
}
