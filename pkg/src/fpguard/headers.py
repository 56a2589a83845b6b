"""Request-header rewrite rules compiled from a fingerprint profile.

compile_rules turns profile settings into a declarative rule list (at
most one rule per header name); apply_rules executes a rule list
against an ordered header map. Both are pure, so the proxy can compile
per request (the Referer origin rewrite needs the request target).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator
from urllib.parse import urlsplit

from .profiles import FingerprintProfile

SET = "set"
REMOVE = "remove"


@dataclass(frozen=True)
class RewriteRule:
    """One request-header mutation."""

    header_name: str
    action: str  # SET or REMOVE
    value: str | None = None

    def __post_init__(self):
        if not self.header_name or not self.header_name.isascii():
            raise ValueError("header_name must be a non-empty ASCII token")
        if self.action not in (SET, REMOVE):
            raise ValueError(f"unknown action {self.action!r}")
        if self.action == SET and self.value is None:
            raise ValueError("set rule requires a value")
        if self.action == REMOVE and self.value is not None:
            raise ValueError("remove rule takes no value")


class HeaderMap:
    """Ordered multimap of request headers; names compare case-insensitively."""

    def __init__(self, items: Iterable[tuple[str, str]] = ()):
        self._items: list[tuple[str, str]] = [(n, v) for n, v in items]

    def items(self) -> list[tuple[str, str]]:
        return list(self._items)

    def get_all(self, name: str) -> list[str]:
        key = name.lower()
        return [v for n, v in self._items if n.lower() == key]

    def get(self, name: str) -> str | None:
        values = self.get_all(name)
        return values[0] if values else None

    def set(self, name: str, value: str) -> None:
        """Replace every value of name with exactly one; keeps the first
        occurrence's position, appends when the name is new."""
        key = name.lower()
        for i, (n, _) in enumerate(self._items):
            if n.lower() == key:
                self._items[i] = (name, value)
                self._items = [
                    item for j, item in enumerate(self._items)
                    if j <= i or item[0].lower() != key
                ]
                return
        self._items.append((name, value))

    def remove(self, name: str) -> None:
        key = name.lower()
        self._items = [(n, v) for n, v in self._items if n.lower() != key]

    def copy(self) -> "HeaderMap":
        return HeaderMap(self._items)

    def __contains__(self, name: str) -> bool:
        return bool(self.get_all(name))

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeaderMap):
            return NotImplemented
        return self._items == other._items

    def __repr__(self) -> str:
        return f"HeaderMap({self._items!r})"


def format_accept_language(tags: Iterable[str]) -> str:
    """Header value in the browsers' shape: first tag bare, the rest with
    descending q-weights (0.9, 0.8, ..., floor 0.1)."""
    parts = []
    for i, tag in enumerate(tags):
        if i == 0:
            parts.append(tag)
        else:
            q = max(1.0 - 0.1 * i, 0.1)
            parts.append(f"{tag};q={q:.1f}")
    return ",".join(parts)


def origin_of(url: str) -> str:
    """scheme://host[:port]/ of a request target."""
    parts = urlsplit(url)
    if not parts.scheme or not parts.netloc:
        raise ValueError(f"cannot derive origin from {url!r}")
    return f"{parts.scheme}://{parts.netloc}/"


def compile_rules(
    profile: FingerprintProfile, target_url: str | None = None
) -> list[RewriteRule]:
    """Rule list for one outbound request.

    Disabled profiles compile to nothing. Order is canonical:
    User-Agent, Accept-Language, DNT, eTag conditionals, Referer,
    X-Forwarded-For. referer_mode=origin_only needs the request target;
    without one it degrades to a strip.
    """
    if not profile.enabled:
        return []
    rules = [RewriteRule("User-Agent", SET, profile.user_agent)]
    if profile.accept_language:
        rules.append(
            RewriteRule("Accept-Language", SET, format_accept_language(profile.accept_language))
        )
    if profile.do_not_track:
        rules.append(RewriteRule("DNT", SET, "1"))
    if profile.prevent_etag:
        rules.append(RewriteRule("If-None-Match", REMOVE))
        rules.append(RewriteRule("If-Modified-Since", REMOVE))
    if profile.referer_mode == "strip":
        rules.append(RewriteRule("Referer", REMOVE))
    elif profile.referer_mode == "origin_only":
        if target_url is not None:
            rules.append(RewriteRule("Referer", SET, origin_of(target_url)))
        else:
            rules.append(RewriteRule("Referer", REMOVE))
    if profile.x_forwarded_for is not None:
        rules.append(RewriteRule("X-Forwarded-For", SET, profile.x_forwarded_for))
    return rules


def apply_rules(headers: HeaderMap, rules: list[RewriteRule]) -> HeaderMap:
    """Apply a rule list, returning a new map; unnamed headers keep their
    bytes and order."""
    seen: set[str] = set()
    for rule in rules:
        key = rule.header_name.lower()
        if key in seen:
            raise ValueError(f"rule set names header {rule.header_name!r} twice")
        seen.add(key)
    out = headers.copy()
    for rule in rules:
        if rule.action == SET:
            out.set(rule.header_name, rule.value)  # type: ignore[arg-type]
        else:
            out.remove(rule.header_name)
    return out
