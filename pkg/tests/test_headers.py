"""Header rule compilation against a hand-enumerated oracle, and the
apply semantics (idempotence, non-interference, commutativity)."""

import dataclasses
import random

import pytest
from hypothesis import given, settings, strategies as st

from fpguard.headers import (
    REMOVE,
    SET,
    HeaderMap,
    RewriteRule,
    apply_rules,
    compile_rules,
    format_accept_language,
    origin_of,
)
from fpguard.profiles import generate_profile

BASE_PROFILE = generate_profile(1)


def profile_with(**overrides):
    return dataclasses.replace(BASE_PROFILE, **overrides)


def oracle_rule_table(dnt, etag, referer_strip, language, xff):
    """Brute-force expectation, written independently of compile_rules:
    one (name, action, value) tuple per enabled setting."""
    expected = [("user-agent", SET, BASE_PROFILE.user_agent)]
    if language:
        expected.append(
            ("accept-language", SET, format_accept_language(BASE_PROFILE.accept_language))
        )
    if dnt:
        expected.append(("dnt", SET, "1"))
    if etag:
        expected.append(("if-none-match", REMOVE, None))
        expected.append(("if-modified-since", REMOVE, None))
    if referer_strip:
        expected.append(("referer", REMOVE, None))
    if xff:
        expected.append(("x-forwarded-for", SET, BASE_PROFILE.x_forwarded_for))
    return sorted(expected)


def normalize(rules):
    return sorted((r.header_name.lower(), r.action, r.value) for r in rules)


# -- compile_rules golden suite ------------------------------------------------

@pytest.mark.parametrize("combo", range(32))
def test_all_32_toggle_combinations_match_oracle(combo):
    dnt = bool(combo & 1)
    etag = bool(combo & 2)
    referer_strip = bool(combo & 4)
    language = bool(combo & 8)
    xff = bool(combo & 16)
    profile = profile_with(
        do_not_track=dnt,
        prevent_etag=etag,
        referer_mode="strip" if referer_strip else "keep",
        accept_language=BASE_PROFILE.accept_language if language else (),
        x_forwarded_for=BASE_PROFILE.x_forwarded_for if xff else None,
    )
    assert normalize(compile_rules(profile)) == oracle_rule_table(
        dnt, etag, referer_strip, language, xff
    )


def test_all_toggles_on_rule_count():
    all_on = profile_with(
        do_not_track=True, prevent_etag=True, referer_mode="strip",
        x_forwarded_for="203.0.113.9",
    )
    assert len(compile_rules(all_on)) == 7
    keep_referer = dataclasses.replace(all_on, referer_mode="keep")
    assert len(compile_rules(keep_referer)) == 6


def test_disabled_profile_compiles_to_nothing():
    assert compile_rules(profile_with(enabled=False)) == []


def test_etag_prevention_rules():
    rules = compile_rules(profile_with(prevent_etag=True))
    names = {r.header_name.lower() for r in rules if r.action == REMOVE}
    assert {"if-none-match", "if-modified-since"} <= names


def test_origin_only_referer_uses_target():
    profile = profile_with(referer_mode="origin_only")
    rules = compile_rules(profile, target_url="https://site.example:8443/a/b?q=1")
    referer = [r for r in rules if r.header_name.lower() == "referer"]
    assert referer == [RewriteRule("Referer", SET, "https://site.example:8443/")]
    # without a target the mode degrades to a strip
    fallback = compile_rules(profile)
    assert [r for r in fallback if r.header_name.lower() == "referer"] == [
        RewriteRule("Referer", REMOVE)
    ]


def test_at_most_one_rule_per_header():
    for combo in range(32):
        profile = profile_with(
            do_not_track=bool(combo & 1),
            prevent_etag=bool(combo & 2),
            referer_mode="strip" if combo & 4 else "keep",
            accept_language=BASE_PROFILE.accept_language if combo & 8 else (),
            x_forwarded_for="198.51.100.7" if combo & 16 else None,
        )
        names = [r.header_name.lower() for r in compile_rules(profile)]
        assert len(names) == len(set(names))


def test_accept_language_formatting():
    assert format_accept_language(["en-US"]) == "en-US"
    assert format_accept_language(["en-US", "en"]) == "en-US,en;q=0.9"
    assert format_accept_language(["de-DE", "de", "en"]) == "de-DE,de;q=0.9,en;q=0.8"
    many = format_accept_language([f"t{i}" for i in range(12)])
    assert many.endswith("t11;q=0.1")  # weight floor


def test_origin_of():
    assert origin_of("http://a.example/path") == "http://a.example/"
    assert origin_of("https://a.example:444/x?y=1") == "https://a.example:444/"
    with pytest.raises(ValueError):
        origin_of("not-a-url")


# -- HeaderMap / apply_rules -----------------------------------------------------

def test_apply_empty_rules_is_identity():
    headers = HeaderMap([("Accept", "*/*"), ("User-Agent", "UA")])
    assert apply_rules(headers, []) == headers


def test_set_replaces_value():
    headers = HeaderMap([("User-Agent", "X")])
    out = apply_rules(headers, [RewriteRule("User-Agent", SET, "Y")])
    assert out.items() == [("User-Agent", "Y")]


def test_set_collapses_multi_values_at_first_position():
    headers = HeaderMap([("A", "1"), ("X-Dup", "a"), ("B", "2"), ("x-dup", "b")])
    out = apply_rules(headers, [RewriteRule("X-Dup", SET, "z")])
    assert out.items() == [("A", "1"), ("X-Dup", "z"), ("B", "2")]


def test_remove_deletes_all_values():
    headers = HeaderMap([("If-None-Match", '"abc"'), ("Accept", "*/*"),
                         ("if-none-match", '"def"')])
    out = apply_rules(headers, [RewriteRule("If-None-Match", REMOVE)])
    assert out.items() == [("Accept", "*/*")]


def test_unnamed_headers_untouched_in_order():
    headers = HeaderMap([("One", "1"), ("Two", "2"), ("Three", "3")])
    out = apply_rules(headers, [RewriteRule("Two", SET, "two")])
    assert [n for n, _ in out.items()] == ["One", "Two", "Three"]
    assert out.get_all("One") == ["1"] and out.get_all("Three") == ["3"]


def test_case_insensitive_matching():
    headers = HeaderMap([("USER-AGENT", "X")])
    out = apply_rules(headers, [RewriteRule("user-agent", SET, "Y")])
    assert out.get("User-Agent") == "Y"
    assert len(out) == 1


def test_duplicate_rule_names_rejected():
    with pytest.raises(ValueError):
        apply_rules(HeaderMap(), [RewriteRule("A", SET, "1"), RewriteRule("a", REMOVE)])


def test_rule_invariants():
    with pytest.raises(ValueError):
        RewriteRule("", SET, "x")
    with pytest.raises(ValueError):
        RewriteRule("A", SET, None)
    with pytest.raises(ValueError):
        RewriteRule("A", REMOVE, "x")
    with pytest.raises(ValueError):
        RewriteRule("A", "toggle", "x")


_NAMES = st.sampled_from(
    ["User-Agent", "Accept", "Accept-Language", "DNT", "Referer",
     "If-None-Match", "X-Forwarded-For", "X-Custom", "Cookie"]
)
_HEADER_LISTS = st.lists(st.tuples(_NAMES, st.text(
    alphabet=st.characters(min_codepoint=33, max_codepoint=126), max_size=12)), max_size=12)
_RULES = st.lists(
    st.tuples(_NAMES, st.booleans(), st.text(
        alphabet=st.characters(min_codepoint=33, max_codepoint=126), max_size=8)),
    max_size=6,
    unique_by=lambda t: t[0].lower(),
).map(lambda items: [
    RewriteRule(n, SET, v) if is_set else RewriteRule(n, REMOVE)
    for n, is_set, v in items
])


@given(_HEADER_LISTS, _RULES)
def test_apply_is_idempotent(items, rules):
    headers = HeaderMap(items)
    once = apply_rules(headers, rules)
    assert apply_rules(once, rules) == once


@given(_HEADER_LISTS, _RULES)
def test_non_interference(items, rules):
    headers = HeaderMap(items)
    out = apply_rules(headers, rules)
    ruled = {r.header_name.lower() for r in rules}
    untouched_in = [(n, v) for n, v in items if n.lower() not in ruled]
    untouched_out = [(n, v) for n, v in out.items() if n.lower() not in ruled]
    assert untouched_in == untouched_out


@settings(max_examples=60)
@given(_HEADER_LISTS, _RULES, st.randoms(use_true_random=False))
def test_commutativity_across_distinct_names(items, rules, rng):
    headers = HeaderMap(items)
    shuffled = list(rules)
    rng.shuffle(shuffled)
    a = apply_rules(headers, rules)
    b = apply_rules(headers, shuffled)
    assert sorted(a.items()) == sorted(b.items())
    assert {n.lower(): a.get_all(n) for n, _ in a.items()} == {
        n.lower(): b.get_all(n) for n, _ in b.items()
    }


def test_idempotence_over_1000_random_maps():
    rng = random.Random(321)
    names = ["User-Agent", "Accept", "DNT", "Referer", "If-None-Match", "X-A", "X-B"]
    profile = profile_with(do_not_track=True, prevent_etag=True, referer_mode="strip")
    rules = compile_rules(profile)
    for _ in range(1000):
        items = [
            (rng.choice(names), str(rng.randrange(100)))
            for _ in range(rng.randrange(8))
        ]
        headers = HeaderMap(items)
        once = apply_rules(headers, rules)
        assert apply_rules(once, rules) == once
