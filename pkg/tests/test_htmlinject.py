"""Injection position is asserted with the stdlib HTML parser, a code
path fully independent of the injector's own scanner."""

from html.parser import HTMLParser

import pytest

from fpguard.htmlinject import (
    CONFIG_ATTR,
    PAYLOAD_SRC,
    REASON_ALREADY,
    REASON_NO_CONFIG,
    REASON_NOT_HTML,
    REASON_OK,
    InjectionOutcome,
    decode_bootstrap,
    encode_bootstrap,
    inject_payload,
    is_html_content_type,
)

BOOTSTRAP = encode_bootstrap({"session_id": "k", "user_agent": "UA-X"})


class _ScriptInventory(HTMLParser):
    """Independent oracle: document-order list of scripts and head events."""

    def __init__(self):
        super().__init__()
        self.scripts = []  # (src or None, attrs) in document order
        self.events = []  # tag-open order

    def handle_starttag(self, tag, attrs):
        self.events.append(tag)
        if tag == "script":
            attr_map = dict(attrs)
            self.scripts.append((attr_map.get("src"), attr_map))


def parse(body: bytes, charset="utf-8") -> _ScriptInventory:
    inventory = _ScriptInventory()
    inventory.feed(body.decode(charset))
    return inventory


def inject_html(html: str, bootstrap=BOOTSTRAP):
    return inject_payload(html.encode(), "text/html; charset=utf-8", bootstrap)


# -- gates ---------------------------------------------------------------------

def test_non_html_content_type_passes_through():
    body = b"\x89PNG\r\n\x1a\n....."
    out, outcome = inject_payload(body, "image/png", BOOTSTRAP)
    assert out == body
    assert outcome == InjectionOutcome(False, REASON_NOT_HTML)


def test_missing_content_type_passes_through():
    out, outcome = inject_payload(b"<html></html>", None, BOOTSTRAP)
    assert outcome.reason == REASON_NOT_HTML


def test_no_config_passes_through():
    body = b"<html><head></head></html>"
    out, outcome = inject_payload(body, "text/html", None)
    assert out == body
    assert outcome == InjectionOutcome(False, REASON_NO_CONFIG)


def test_undecodable_body_is_not_html():
    body = b"\xff\xfe\x00invalid"
    out, outcome = inject_payload(body, "text/html; charset=utf-8", BOOTSTRAP)
    assert out == body
    assert outcome.reason == REASON_NOT_HTML


def test_unterminated_comment_is_not_html():
    out, outcome = inject_html("<!-- never closed <html>")
    assert outcome.reason == REASON_NOT_HTML


def test_is_html_content_type():
    assert is_html_content_type("text/html")
    assert is_html_content_type("TEXT/HTML; charset=ISO-8859-1")
    assert is_html_content_type("application/xhtml+xml")
    assert not is_html_content_type("text/plain")
    assert not is_html_content_type(None)


# -- position -------------------------------------------------------------------

def test_script_is_first_in_minimal_document():
    out, outcome = inject_html("<html><head></head><body></body></html>")
    assert outcome.reason == REASON_OK
    inventory = parse(out)
    assert inventory.scripts[0][0] == PAYLOAD_SRC
    # injected right after head opens: head then script
    head_index = inventory.events.index("head")
    assert inventory.events[head_index + 1] == "script"


def test_script_precedes_existing_scripts():
    html = (
        "<!DOCTYPE html><html><head>"
        '<meta charset="utf-8"><script>var page=1;</script></head>'
        '<body><script src="/app.js"></script></body></html>'
    )
    out, outcome = inject_html(html)
    assert outcome.reason == REASON_OK
    scripts = parse(out).scripts
    assert len(scripts) == 3
    assert scripts[0][0] == PAYLOAD_SRC


def test_double_pass_injects_once():
    out, first = inject_html("<html><head></head><body></body></html>")
    assert first.injected
    again, second = inject_payload(out, "text/html; charset=utf-8", BOOTSTRAP)
    assert again == out
    assert second == InjectionOutcome(False, REASON_ALREADY)
    assert len(parse(out).scripts) == 1


def test_no_head_injects_at_document_start():
    out, outcome = inject_html("<body><p>hi</p><script>1</script></body>")
    assert outcome.reason == REASON_OK
    inventory = parse(out)
    assert inventory.scripts[0][0] == PAYLOAD_SRC
    assert inventory.events[0] == "script"  # before body


def test_bare_text_document():
    out, outcome = inject_html("hello world, no markup at all")
    assert outcome.reason == REASON_OK
    assert parse(out).scripts[0][0] == PAYLOAD_SRC


def test_doctype_and_comments_stay_in_prolog():
    html = "<!DOCTYPE html>\n<!-- banner -->\n<html><head><title>t</title></head></html>"
    out, outcome = inject_html(html)
    assert outcome.reason == REASON_OK
    text = out.decode()
    assert text.index("<!DOCTYPE") < text.index(PAYLOAD_SRC)
    assert text.index("banner") < text.index(PAYLOAD_SRC)
    head_index = parse(out).events.index("head")
    assert parse(out).events[head_index + 1] == "script"


def test_html_without_head_injects_after_html_open():
    out, outcome = inject_html("<html>")
    assert outcome.reason == REASON_OK
    assert out.decode().startswith("<html><script")


def test_head_with_attributes_and_quoted_brackets():
    html = '<html><head data-x="a > b"><script>p()</script></head></html>'
    out, outcome = inject_html(html)
    assert outcome.reason == REASON_OK
    scripts = parse(out).scripts
    assert scripts[0][0] == PAYLOAD_SRC and len(scripts) == 2


def test_uppercase_tags():
    out, outcome = inject_html("<HTML><HEAD></HEAD><BODY></BODY></HTML>")
    assert outcome.reason == REASON_OK
    assert parse(out).scripts[0][0] == PAYLOAD_SRC


def test_non_utf8_charset_roundtrip():
    html = "<html><head></head><body>café</body></html>"
    body = html.encode("iso-8859-1")
    out, outcome = inject_payload(body, "text/html; charset=iso-8859-1", BOOTSTRAP)
    assert outcome.reason == REASON_OK
    text = out.decode("iso-8859-1")
    assert "café" in text
    assert parse(out, "iso-8859-1").scripts[0][0] == PAYLOAD_SRC


# -- bootstrap --------------------------------------------------------------------

def test_bootstrap_roundtrip():
    config = {"session_id": "abc", "noise_amplitude": 3, "languages": ["en-US", "en"]}
    assert decode_bootstrap(encode_bootstrap(config)) == config


def test_injected_attributes_carry_bootstrap():
    out, _ = inject_html("<html><head></head></html>")
    attrs = parse(out).scripts[0][1]
    assert attrs[CONFIG_ATTR] == BOOTSTRAP
    assert decode_bootstrap(attrs[CONFIG_ATTR])["user_agent"] == "UA-X"


def test_outcome_invariant_enforced():
    with pytest.raises(ValueError):
        InjectionOutcome(True, REASON_NOT_HTML)
    with pytest.raises(ValueError):
        InjectionOutcome(False, REASON_OK)
