"""Document-start script injection for HTML responses.

The gateway inserts exactly one script element per document, positioned
so it executes before any page script: immediately after the opening
<head> tag, or at document start when the page has no head. The element
carries the serialized session config in a data attribute (base64 JSON)
so the payload can bootstrap synchronously from document.currentScript
without a network round trip, and it doubles as the already-injected
marker.
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass

PAYLOAD_SRC = "/__fpguard/ui/payload.js"
MARKER_ATTR = "data-fpguard"
CONFIG_ATTR = "data-fpguard-config"

REASON_OK = "ok"
REASON_NOT_HTML = "not_html"
REASON_NO_CONFIG = "no_config"
REASON_ALREADY = "already_injected"

_HTML_TYPES = ("text/html", "application/xhtml+xml")


@dataclass(frozen=True)
class InjectionOutcome:
    injected: bool
    reason: str

    def __post_init__(self):
        if self.injected != (self.reason == REASON_OK):
            raise ValueError("injected flag must match reason == ok")


def encode_bootstrap(config: dict) -> str:
    """Base64 of compact canonical JSON; attribute-safe in any document."""
    text = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return base64.b64encode(text.encode("utf-8")).decode("ascii")


def decode_bootstrap(value: str) -> dict:
    return json.loads(base64.b64decode(value).decode("utf-8"))


def build_script_tag(bootstrap_b64: str, payload_src: str = PAYLOAD_SRC) -> str:
    return (
        f'<script src="{payload_src}" {MARKER_ATTR}="1" '
        f'{CONFIG_ATTR}="{bootstrap_b64}"></script>'
    )


def is_html_content_type(content_type: str | None) -> bool:
    if not content_type:
        return False
    mime = content_type.split(";", 1)[0].strip().lower()
    return mime in _HTML_TYPES


def _charset_of(content_type: str | None) -> str:
    if content_type:
        for part in content_type.split(";")[1:]:
            k, _, v = part.strip().partition("=")
            if k.lower() == "charset" and v:
                return v.strip().strip('"').strip("'")
    return "utf-8"


def _scan_insertion_point(html: str) -> int:
    """Index at which the script belongs.

    Linear scan over the markup: skip the prolog (doctype, comments,
    processing instructions, whitespace); the first <head> start tag
    wins, any other start tag means the document has no head and the
    script goes right before it (document start). Raises ValueError on
    markup the scanner cannot make sense of.
    """
    i = 0
    n = len(html)
    prolog_end = 0
    html_open_end: int | None = None
    while i < n:
        lt = html.find("<", i)
        if lt == -1:
            break
        if html.startswith("<!--", lt):
            end = html.find("-->", lt + 4)
            if end == -1:
                raise ValueError("unterminated comment")
            i = end + 3
            prolog_end = i
            continue
        if html.startswith("<!", lt) or html.startswith("<?", lt):
            end = html.find(">", lt)
            if end == -1:
                raise ValueError("unterminated declaration")
            i = end + 1
            prolog_end = i
            continue
        if html.startswith("</", lt):
            return lt  # stray close tag: treat as content start
        name_end = lt + 1
        while name_end < n and (html[name_end].isalnum() or html[name_end] in "-_"):
            name_end += 1
        name = html[lt + 1 : name_end].lower()
        if not name:
            i = lt + 1  # bare '<' in text
            continue
        tag_end = _find_tag_end(html, name_end)
        if tag_end == -1:
            raise ValueError(f"unterminated <{name}> tag")
        if name == "head":
            return tag_end + 1
        if name == "html":
            html_open_end = tag_end + 1
            i = tag_end + 1
            continue
        return lt  # first non-head element: no head in this document
    if html_open_end is not None:
        return html_open_end
    return prolog_end


def _find_tag_end(html: str, start: int) -> int:
    """Position of the '>' closing a start tag, respecting quoted attrs."""
    i = start
    n = len(html)
    quote: str | None = None
    while i < n:
        c = html[i]
        if quote:
            if c == quote:
                quote = None
        elif c in "\"'":
            quote = c
        elif c == ">":
            return i
        i += 1
    return -1


def inject_payload(
    body: bytes,
    content_type: str | None,
    bootstrap_b64: str | None,
    payload_src: str = PAYLOAD_SRC,
) -> tuple[bytes, InjectionOutcome]:
    """Rewrite an HTML body to carry the payload script.

    Non-HTML content types and undecodable or unparseable bodies pass
    through byte-identical. Re-running on rewritten output is a no-op.
    """
    if not is_html_content_type(content_type):
        return body, InjectionOutcome(False, REASON_NOT_HTML)
    if bootstrap_b64 is None:
        return body, InjectionOutcome(False, REASON_NO_CONFIG)
    charset = _charset_of(content_type)
    try:
        text = body.decode(charset)
    except (UnicodeDecodeError, LookupError):
        return body, InjectionOutcome(False, REASON_NOT_HTML)
    if MARKER_ATTR + "=" in text:
        return body, InjectionOutcome(False, REASON_ALREADY)
    try:
        pos = _scan_insertion_point(text)
    except ValueError:
        return body, InjectionOutcome(False, REASON_NOT_HTML)
    tag = build_script_tag(bootstrap_b64, payload_src)
    rewritten = text[:pos] + tag + text[pos:]
    return rewritten.encode(charset), InjectionOutcome(True, REASON_OK)
