#!/usr/bin/env python3
"""The access log: batched ingestion, dashboard aggregation, and the
90%/20% quota rule evicting oldest records first."""

import random
import tempfile
from pathlib import Path

from fpguard import LogStore
from fpguard.logstore import LogRecord, frame_size, origin_of_url

workdir = Path(tempfile.mkdtemp(prefix="fpguard-demo-"))
print(f"store directory: {workdir}\n")

rng = random.Random(3)
store = LogStore(workdir, capacity_bytes=64 * 1024)

print("== ingest ==")
pages = [f"https://site{i}.example/article" for i in range(4)]
for ts in range(300):
    store.ingest_batch([
        LogRecord(
            origin=origin_of_url(page := rng.choice(pages)),
            page_url=page,
            attribute=rng.choice(["userAgent", "canvas", "webgl", "audio", "screen"]),
            count=rng.randint(1, 4),
            ts=ts,
        )
    ])
print(f"  records: {store.record_count}   used: {store.used_bytes} "
      f"of {store.capacity_bytes} bytes")

print("\n== dashboard aggregates ==")
for stat in store.query_attribute_counts():
    print(f"  {stat.attribute:<10} total={stat.total_count:<4} "
          f"origins={stat.distinct_origins}")
print("  urls:")
for row in store.query_url_list():
    print(f"    {row.page_url:<35} total={row.total_count:<4} last_ts={row.last_ts}")

print("\n== quota rule ==")
# push usage over the 90% trigger with raw appends of future records
big = LogRecord(origin="https://bulk.example", page_url="https://bulk.example/x",
                attribute="canvas", count=1, ts=10_000)
while store.used_bytes + frame_size(big) <= 0.95 * store.capacity_bytes:
    store.ingest_batch([big])
    if store.used_bytes > 0.90 * store.capacity_bytes:
        break
print(f"  used before: {store.used_bytes / store.capacity_bytes:.0%}")
report = store.ensure_capacity()
print(f"  evicted {report.evicted_records} records / {report.evicted_bytes} bytes")
print(f"  used after:  {store.used_bytes / store.capacity_bytes:.0%}")
oldest_survivor = min(r.ts for r in store.records())
print(f"  oldest surviving ts: {oldest_survivor} (oldest were dropped first)")

store.close()

print("\n== durability ==")
reopened = LogStore(workdir, capacity_bytes=64 * 1024)
print(f"  records after reopen: {reopened.record_count}")
reopened.close()
