"""Persistent fingerprint-access log with quota-driven eviction.

Records live in one append-only segment file of length-prefixed JSON
frames (see docs/storage.md for the bit-exact layout). When usage
crosses 90% of capacity, the oldest fifth of the quota is dropped,
oldest-first by timestamp, by compacting survivors into a fresh
segment. Byte accounting uses the on-disk frame size, so the quota
thresholds mean what the storage quota means.
"""

from __future__ import annotations

import json
import os
import struct
import threading
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import urlsplit

DEFAULT_CAPACITY = 10 * 1024 * 1024
COMPAT_CAPACITY = 5 * 1024 * 1024  # older-Chrome local quota

EVICT_TRIGGER_FRACTION = 0.90  # evict when used exceeds this share of capacity
EVICT_TARGET_FRACTION = 0.20  # and drop at least this share of capacity

_FRAME_HEADER = struct.Struct(">I")
_SEGMENT_PREFIX = "segment-"
_SEGMENT_SUFFIX = ".log"


class BatchValidationError(ValueError):
    """At least one record in the batch is malformed; nothing was stored."""


class StorageFullError(RuntimeError):
    """Batch cannot fit in the store even after eviction."""


class CorruptSegmentError(RuntimeError):
    """Unreadable frame inside a segment file."""

    def __init__(self, path: Path, offset: int, detail: str):
        super().__init__(f"{path}: corrupt frame at byte offset {offset}: {detail}")
        self.path = path
        self.offset = offset


@dataclass(frozen=True)
class LogRecord:
    """One batched count of accesses to a fingerprint attribute by a page."""

    origin: str
    page_url: str
    attribute: str
    count: int
    ts: int  # unix-ms

    def __post_init__(self):
        if not self.attribute:
            raise BatchValidationError("attribute must be non-empty")
        if not isinstance(self.count, int) or isinstance(self.count, bool) or self.count < 1:
            raise BatchValidationError(f"count must be an integer >= 1, got {self.count!r}")
        if not isinstance(self.ts, int) or isinstance(self.ts, bool):
            raise BatchValidationError(f"ts must be an integer, got {self.ts!r}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "attribute": self.attribute,
                "count": self.count,
                "origin": self.origin,
                "page_url": self.page_url,
                "ts": self.ts,
            },
            sort_keys=True,
            separators=(",", ":"),
        )

    @classmethod
    def from_dict(cls, raw: dict) -> "LogRecord":
        try:
            return cls(
                origin=raw["origin"],
                page_url=raw["page_url"],
                attribute=raw["attribute"],
                count=raw["count"],
                ts=raw["ts"],
            )
        except KeyError as exc:
            raise BatchValidationError(f"record missing field {exc.args[0]!r}") from exc


def origin_of_url(url: str) -> str:
    parts = urlsplit(url)
    if parts.scheme and parts.netloc:
        return f"{parts.scheme}://{parts.netloc}"
    return url


def frame_size(record: LogRecord) -> int:
    return _FRAME_HEADER.size + len(record.to_json().encode("utf-8"))


@dataclass(frozen=True)
class EvictionReport:
    evicted_bytes: int
    evicted_records: int


@dataclass(frozen=True)
class AttributeStat:
    attribute: str
    total_count: int
    distinct_origins: int


@dataclass(frozen=True)
class UrlStat:
    page_url: str
    total_count: int
    last_ts: int


class LogStore:
    """Single-writer, multi-reader store over one segment directory.

    Ingest and eviction serialize on the store lock; acknowledged
    batches are flushed and fsynced before ingest returns, so they
    survive a process restart.
    """

    def __init__(self, directory: str | Path, capacity_bytes: int = DEFAULT_CAPACITY):
        if capacity_bytes < 1:
            raise ValueError("capacity must be positive")
        self.directory = Path(directory)
        self.capacity_bytes = capacity_bytes
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._records: list[tuple[int, LogRecord, int]] = []  # (seq, record, frame bytes)
        self._next_seq = 0
        self._used = 0
        self._segment_index = 0
        self._fh = None
        self._load()

    # -- lifecycle ---------------------------------------------------------

    def _segment_path(self, index: int) -> Path:
        return self.directory / f"{_SEGMENT_PREFIX}{index:06d}{_SEGMENT_SUFFIX}"

    def _load(self) -> None:
        segments = sorted(self.directory.glob(f"{_SEGMENT_PREFIX}*{_SEGMENT_SUFFIX}"))
        for path in segments:
            self._segment_index = max(
                self._segment_index,
                int(path.stem[len(_SEGMENT_PREFIX):]),
            )
            self._scan_segment(path)
        if not segments:
            self._segment_path(self._segment_index).touch()
        self._fh = open(self._segment_path(self._segment_index), "ab")

    def _scan_segment(self, path: Path) -> None:
        data = path.read_bytes()
        offset = 0
        while offset < len(data):
            if offset + _FRAME_HEADER.size > len(data):
                self._truncate_tail(path, offset)
                break
            (length,) = _FRAME_HEADER.unpack_from(data, offset)
            body = data[offset + _FRAME_HEADER.size : offset + _FRAME_HEADER.size + length]
            if len(body) < length:
                self._truncate_tail(path, offset)
                break
            try:
                record = LogRecord.from_dict(json.loads(body.decode("utf-8")))
            except (ValueError, UnicodeDecodeError) as exc:
                raise CorruptSegmentError(path, offset, str(exc)) from exc
            size = _FRAME_HEADER.size + length
            self._records.append((self._next_seq, record, size))
            self._next_seq += 1
            self._used += size
            offset += size

    @staticmethod
    def _truncate_tail(path: Path, offset: int) -> None:
        # torn final frame from an interrupted write: drop it
        with open(path, "r+b") as fh:
            fh.truncate(offset)

    def close(self) -> None:
        with self._lock:
            if self._fh:
                self._fh.flush()
                os.fsync(self._fh.fileno())
                self._fh.close()
                self._fh = None

    def __enter__(self) -> "LogStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- state -------------------------------------------------------------

    @property
    def used_bytes(self) -> int:
        with self._lock:
            return self._used

    @property
    def record_count(self) -> int:
        with self._lock:
            return len(self._records)

    def records(self) -> list[LogRecord]:
        """Snapshot of raw records in arrival order (for oracles/tests)."""
        with self._lock:
            return [record for _, record, _ in self._records]

    # -- writes ------------------------------------------------------------

    def ingest_batch(self, records: list[LogRecord]) -> int:
        """Durably append a batch; returns the number of records stored.

        The whole batch is validated before anything is written: one bad
        record rejects the batch and leaves the store untouched.
        """
        for record in records:
            if not isinstance(record, LogRecord):
                raise BatchValidationError(f"not a LogRecord: {record!r}")
        if not records:
            return 0
        batch_bytes = sum(frame_size(r) for r in records)
        if batch_bytes > self.capacity_bytes:
            raise StorageFullError(
                f"batch of {batch_bytes} bytes exceeds capacity {self.capacity_bytes}"
            )
        with self._lock:
            self.ensure_capacity()
            if self._used + batch_bytes > self.capacity_bytes:
                # quota would still overflow: keep evicting oldest-first
                self._evict(self._used + batch_bytes - self.capacity_bytes)
            for record in records:
                payload = record.to_json().encode("utf-8")
                frame = _FRAME_HEADER.pack(len(payload)) + payload
                self._fh.write(frame)
                self._records.append((self._next_seq, record, len(frame)))
                self._next_seq += 1
                self._used += len(frame)
            self._fh.flush()
            os.fsync(self._fh.fileno())
        return len(records)

    def ensure_capacity(self) -> EvictionReport:
        """Apply the quota rule: when used bytes exceed 90% of capacity,
        drop the oldest records totalling at least 20% of capacity.

        At exactly 90% nothing happens (the trigger is strict), and the
        postcondition used <= 80% of capacity follows from the quota
        invariant used <= capacity.
        """
        with self._lock:
            if self._used <= EVICT_TRIGGER_FRACTION * self.capacity_bytes:
                return EvictionReport(0, 0)
            return self._evict(int(EVICT_TARGET_FRACTION * self.capacity_bytes))

    def _evict(self, min_bytes: int) -> EvictionReport:
        by_age = sorted(self._records, key=lambda item: (item[1].ts, item[0]))
        evicted_bytes = 0
        victims: set[int] = set()
        for seq, _, size in by_age:
            if evicted_bytes >= min_bytes:
                break
            victims.add(seq)
            evicted_bytes += size
        if not victims:
            return EvictionReport(0, 0)
        self._records = [item for item in self._records if item[0] not in victims]
        self._used -= evicted_bytes
        self._compact()
        return EvictionReport(evicted_bytes, len(victims))

    def _compact(self) -> None:
        """Rewrite survivors into a fresh segment and retire the old one."""
        old_path = self._segment_path(self._segment_index)
        self._segment_index += 1
        new_path = self._segment_path(self._segment_index)
        with open(new_path, "wb") as fh:
            for _, record, _ in self._records:
                payload = record.to_json().encode("utf-8")
                fh.write(_FRAME_HEADER.pack(len(payload)) + payload)
            fh.flush()
            os.fsync(fh.fileno())
        self._fh.close()
        self._fh = open(new_path, "ab")
        old_path.unlink(missing_ok=True)

    # -- queries -----------------------------------------------------------

    def query_attribute_counts(
        self,
        origin: str | None = None,
        time_range: tuple[int, int] | None = None,
    ) -> list[AttributeStat]:
        """Per-attribute totals, descending by total then attribute name."""
        with self._lock:
            totals: dict[str, int] = {}
            origins: dict[str, set[str]] = {}
            for _, record, _ in self._records:
                if origin is not None and record.origin != origin:
                    continue
                if time_range is not None and not time_range[0] <= record.ts <= time_range[1]:
                    continue
                totals[record.attribute] = totals.get(record.attribute, 0) + record.count
                origins.setdefault(record.attribute, set()).add(record.origin)
        return [
            AttributeStat(attr, totals[attr], len(origins[attr]))
            for attr in sorted(totals, key=lambda a: (-totals[a], a))
        ]

    def query_url_list(self) -> list[UrlStat]:
        """One row per distinct page URL, descending by total then URL."""
        with self._lock:
            totals: dict[str, int] = {}
            last_ts: dict[str, int] = {}
            for _, record, _ in self._records:
                totals[record.page_url] = totals.get(record.page_url, 0) + record.count
                last_ts[record.page_url] = max(last_ts.get(record.page_url, record.ts), record.ts)
        return [
            UrlStat(url, totals[url], last_ts[url])
            for url in sorted(totals, key=lambda u: (-totals[u], u))
        ]
