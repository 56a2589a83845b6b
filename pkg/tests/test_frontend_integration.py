"""Built frontend served through the gateway: asset wiring, injected
references resolving, and the settings round trip over the real
endpoints. Skipped until `npm run build` has produced frontend/dist."""

import dataclasses
from html.parser import HTMLParser
from pathlib import Path

import pytest

from conftest import GatewayFixture

from fpguard.profiles import generate_profile

DIST = Path(__file__).resolve().parents[1] / "frontend" / "dist"

pytestmark = pytest.mark.skipif(
    not (DIST / "payload.js").exists(),
    reason="frontend not built (run npm run build in frontend/)",
)


@pytest.fixture
def ui_gateway(tmp_path):
    fixture = GatewayFixture(tmp_path, master_seed=909, assets_dir=DIST)
    yield fixture
    fixture.close()


class _FirstScript(HTMLParser):
    def __init__(self):
        super().__init__()
        self.src = None

    def handle_starttag(self, tag, attrs):
        if tag == "script" and self.src is None:
            self.src = dict(attrs).get("src")


def test_payload_asset_served_from_dist(ui_gateway):
    status, headers, body = ui_gateway.request("GET", "/__fpguard/ui/payload.js")
    assert status == 200
    assert body == (DIST / "payload.js").read_bytes()
    assert len(body) < 100 * 1024  # asset budget also holds for the real payload
    assert b"currentScript" in body


def test_ui_shell_and_bundle_served(ui_gateway):
    status, _, body = ui_gateway.request("GET", "/__fpguard/ui/")
    assert status == 200
    assert body == (DIST / "index.html").read_bytes()
    status, _, bundle = ui_gateway.request("GET", "/__fpguard/ui/ui.js")
    assert status == 200
    assert bundle == (DIST / "ui.js").read_bytes()


def test_injected_reference_resolves_through_proxy(ui_gateway, upstream):
    upstream.on("/", body=b"<html><head></head><body></body></html>",
                headers=[("Content-Type", "text/html")])
    _, _, page = ui_gateway.request("GET", upstream.url("/"))
    parser = _FirstScript()
    parser.feed(page.decode())
    assert parser.src == "/__fpguard/ui/payload.js"
    # the reference the page will fetch (same origin, through the proxy)
    status, _, body = ui_gateway.request("GET", upstream.url(parser.src))
    assert status == 200
    assert body == (DIST / "payload.js").read_bytes()
    assert upstream.requests[-1].path == "/"  # asset fetch never hit upstream


def test_settings_roundtrip_changes_config_endpoint(ui_gateway):
    _, before = ui_gateway.get_json("/__fpguard/config")
    assert before["present"]
    edited = dataclasses.replace(generate_profile(31337), do_not_track=False)
    status, ack = ui_gateway.post_json("/__fpguard/config", edited.to_dict())
    assert status == 200 and ack["ok"]
    _, after = ui_gateway.get_json("/__fpguard/config")
    assert after["profile"] == edited.to_dict()
    assert after["profile"] != before["profile"]


def test_bundle_has_no_external_requests(ui_gateway):
    """The payload must only talk to the reserved endpoints."""
    body = (DIST / "payload.js").read_text()
    assert "/__fpguard/logs" in body
    assert "http://" not in body and "https://" not in body
