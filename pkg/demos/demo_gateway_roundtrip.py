#!/usr/bin/env python3
"""Full round trip: a stub origin server, the gateway in front of it,
and a client whose headers get spoofed and whose HTML gets the payload
script injected."""

import json
import tempfile
import threading
from http.client import HTTPConnection
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from fpguard import Gateway, GatewayConfig

PAGE = b"""<!DOCTYPE html>
<html><head><title>demo page</title><script>console.log('page script')</script></head>
<body><h1>hello</h1></body></html>"""


class Origin(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    seen_headers = {}

    def log_message(self, *args):
        pass

    def do_GET(self):
        Origin.seen_headers = dict(self.headers.items())
        self.send_response_only(200)
        self.send_header("Content-Type", "text/html; charset=utf-8")
        self.send_header("Content-Length", str(len(PAGE)))
        self.end_headers()
        self.wfile.write(PAGE)


origin = ThreadingHTTPServer(("127.0.0.1", 0), Origin)
threading.Thread(target=origin.serve_forever, daemon=True).start()
origin_url = f"http://127.0.0.1:{origin.server_address[1]}/article"
print(f"origin:  {origin_url}")

gateway = Gateway(GatewayConfig(
    listen_port=0,
    store_dir=tempfile.mkdtemp(prefix="fpguard-demo-"),
    master_seed=20_000,  # every new session gets an auto-generated disguise
)).start()
host, port = gateway.address
print(f"gateway: http://{host}:{port}  (use as HTTP proxy)\n")


def via_proxy(method, url, headers=None, body=None):
    conn = HTTPConnection(host, port, timeout=10)
    conn.request(method, url, body=body, headers=headers or {})
    response = conn.getresponse()
    data = response.read()
    conn.close()
    return response.status, data


print("== request through the gateway ==")
status, body = via_proxy("GET", origin_url, headers={"User-Agent": "my-real-browser/1.0"})
print(f"  status {status}, {len(body)} bytes")
print(f"  origin saw User-Agent: {Origin.seen_headers.get('User-Agent')}")
print(f"  origin saw DNT:        {Origin.seen_headers.get('DNT')}")
print(f"  payload injected:      {b'/__fpguard/ui/payload.js' in body}")
print(f"  before page script:    "
      f"{body.index(b'payload.js') < body.index(b'page script')}")

print("\n== session config over the reserved endpoint ==")
status, config_body = via_proxy("GET", "/__fpguard/config")
config = json.loads(config_body)
print(f"  present: {config['present']}  session: {config['session_id'][:16]}...")
print(f"  spoofed ua: {config['profile']['user_agent'][:60]}")

print("\n== the page's payload posts access logs ==")
batch = [
    {"attribute": "userAgent", "count": 5, "url": origin_url, "ts": 1_700_000_000_000},
    {"attribute": "canvas", "count": 2, "url": origin_url, "ts": 1_700_000_000_500},
]
status, ack = via_proxy("POST", "/__fpguard/logs", body=json.dumps(batch).encode(),
                        headers={"Content-Type": "application/json"})
print(f"  ingest ack: {json.loads(ack)}")

status, stats = via_proxy("GET", "/__fpguard/api/stats")
print("  dashboard aggregates:")
for row in json.loads(stats)["attributes"]:
    print(f"    {row['attribute']:<10} total={row['total_count']}")

gateway.stop()
origin.shutdown()
print("\ndone")
