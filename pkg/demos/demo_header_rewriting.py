#!/usr/bin/env python3
"""Header rewriting: a profile compiles to declarative rules which are
then applied to an outbound request's header map."""

import dataclasses

from fpguard import HeaderMap, apply_rules, compile_rules, generate_profile

profile = generate_profile(42)
print("== compiled rules for seed-42 profile ==")
for rule in compile_rules(profile, target_url="https://news.example/today"):
    value = f" = {rule.value!r}" if rule.value is not None else ""
    print(f"  {rule.action:<6} {rule.header_name}{value}")

headers = HeaderMap([
    ("Host", "news.example"),
    ("User-Agent", "Mozilla/5.0 (X11; Linux x86_64) my-real-browser/1.0"),
    ("Accept", "text/html"),
    ("Accept-Language", "tlh-KL"),
    ("If-None-Match", '"cached-etag-123"'),
    ("Referer", "https://very-private.example/search?q=secret"),
])

print("\n== before ==")
for name, value in headers:
    print(f"  {name}: {value}")

rewritten = apply_rules(headers, compile_rules(profile, "https://news.example/today"))
print("\n== after ==")
for name, value in rewritten:
    print(f"  {name}: {value}")

print("\n== properties ==")
twice = apply_rules(rewritten, compile_rules(profile, "https://news.example/today"))
print(f"  idempotent:        {twice == rewritten}")
print(f"  Accept untouched:  {rewritten.get('Accept') == 'text/html'}")

origin_mode = dataclasses.replace(profile, referer_mode="origin_only")
with_origin = apply_rules(headers, compile_rules(origin_mode, "https://news.example/today"))
print(f"  origin-only referer: {with_origin.get('Referer')}")
