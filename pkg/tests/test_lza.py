import random

import pytest
from hypothesis import given, settings

from fsazip import lza
from fsazip.automaton import (
    Automaton,
    bfs_ordering,
    is_isomorphic,
    relabel,
)
from fsazip.bitio import BitStream
from fsazip.generators import gen_a1, gen_g1, gen_g2
from fsazip.lza import (
    CompressedAutomaton,
    CorruptInput,
    PhraseDictionary,
    commit_phrases,
    decode,
    encode,
    lemma2_bound,
    parse_state,
)

from conftest import random_automaton
from test_automaton import automata


def test_parse_state_examples():
    d = PhraseDictionary()
    pairs = [(1, 2), (1, 3), (2, 3)]
    first = parse_state(pairs, d)
    assert first == [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
    commit_phrases(first, d)
    assert len(d) == 3
    second = parse_state(pairs, d)
    assert second == [(d.children[(0, 1, 2)], 1, 3), (0, 2, 3)]
    commit_phrases(second, d)
    assert len(d) == 4  # [(2,3)] was already present
    assert d.sequence(4) == [(1, 2), (1, 3)]
    assert parse_state([], d) == []


def test_parse_state_is_frozen():
    d = PhraseDictionary()
    # without freezing, the repeated (1, 5) would match the entry created earlier in the same state
    phrases = parse_state([(1, 5), (2, 5), (1, 6)], d)
    assert all(idx == 0 for idx, _, _ in phrases)


def test_empty_automaton_encoding():
    a = Automaton(1, 1, frozenset())
    c = encode(a)
    assert c.stats.payload_bits == 1
    assert decode(c.to_bytes()) == a
    assert c.to_bytes()[:6] == b"LZA1\x01\x00"


def test_turnstile_roundtrip(turnstile):
    assert decode(encode(turnstile).to_bytes()) == turnstile
    s = decode(encode(turnstile, lza.STRUCTURE).to_bytes())
    assert is_isomorphic(s, turnstile)


def test_header_flags(turnstile):
    a = Automaton(turnstile.n, turnstile.m, turnstile.transitions, 1, frozenset({0}))
    blob = encode(a, lza.STRUCTURE).to_bytes()
    assert blob[5] == lza.FLAG_STRUCTURE | lza.FLAG_FINALS


@settings(max_examples=300)
@given(automata(max_n=15, max_m=5))
def test_full_roundtrip_property(a):
    assert decode(encode(a).to_bytes()) == a


@settings(max_examples=300)
@given(automata(max_n=10, max_m=3))
def test_structure_roundtrip_property(a):
    blob = encode(a, lza.STRUCTURE).to_bytes()
    b = decode(blob)
    assert is_isomorphic(a, b)
    assert b.initial == 0
    assert encode(b, lza.STRUCTURE).to_bytes() == blob


def test_structure_output_is_bfs_numbered():
    a = gen_g2(300, 4)
    b = decode(encode(a, lza.STRUCTURE).to_bytes())
    assert bfs_ordering(b).order == tuple(range(b.n))
    assert b == relabel(a, bfs_ordering(a))


def test_dictionary_replay_equivalence():
    rng = random.Random(11)
    for mode in (lza.FULL, lza.STRUCTURE):
        for _ in range(30):
            a = random_automaton(rng, max_n=80, max_m=4, density=0.1)
            c = encode(a, mode, trace=True)
            digests = []
            decode(c.to_bytes(), trace=digests)
            assert digests == c.stats.state_digests


def test_stop_rule_accounting():
    a = gen_a1(200, 0.05, 4, 2)
    d = PhraseDictionary()
    for q in bfs_ordering(a).order:
        pairs = [(t.label, t.dst) for t in a.out_edges[q]]
        phrases = parse_state(pairs, d)
        assert sum(d.length[i] + 1 for i, _, _ in phrases) == len(pairs)
        commit_phrases(phrases, d)


def test_encode_deterministic():
    a = gen_a1(150, 0.05, 5, 9)
    assert encode(a).to_bytes() == encode(a).to_bytes()
    assert encode(a, lza.STRUCTURE).to_bytes() == encode(a, lza.STRUCTURE).to_bytes()


def test_dq_width():
    assert lza.count_width(1, 1) == 1
    assert lza.count_width(4, 2) == 4  # 8 needs 4 bits
    assert lza.count_width(1000, 1) == 10


def test_lemma2_bound_values():
    assert lemma2_bound(1, 1, 1) == pytest.approx(8.0)
    n, m = 50, 3
    vals = [lemma2_bound(D, n, m) for D in range(1, n * n + 1)]
    assert all(x < y for x, y in zip(vals, vals[1:]))


def test_lemma2_bound_on_g1_sample():
    a = gen_g1(1000, 0.01, 17)
    c = encode(a)
    assert c.stats.payload_bits <= lemma2_bound(c.stats.dict_size, a.n, a.m)


def test_lemma2_bound_on_random_samples():
    for seed in range(100):
        a = gen_g1(120, 0.05, seed) if seed % 2 else gen_a1(120, 0.05, 10, seed)
        c = encode(a)
        assert c.stats.payload_bits <= lemma2_bound(c.stats.dict_size, a.n, a.m)


def test_structure_smaller_on_g2():
    a = gen_g2(1000, 3)
    assert len(encode(a, lza.STRUCTURE).to_bytes()) < len(encode(a).to_bytes())


# --- corrupt input ----------------------------------------------------------


@pytest.fixture
def blob():
    return encode(gen_a1(60, 0.1, 3, 1)).to_bytes()


def test_bad_magic(blob):
    with pytest.raises(CorruptInput, match="magic"):
        decode(b"LZB1" + blob[4:])


def test_bad_version(blob):
    with pytest.raises(CorruptInput, match="version"):
        decode(blob[:4] + b"\x02" + blob[5:])


def test_reserved_flags(blob):
    with pytest.raises(CorruptInput, match="reserved"):
        decode(blob[:5] + bytes([blob[5] | 0x80]) + blob[6:])


def test_truncated(blob):
    for cut in (3, 7, len(blob) // 2, len(blob) - 1):
        with pytest.raises(CorruptInput):
            decode(blob[:cut])


def test_trailing_garbage(blob):
    with pytest.raises(CorruptInput):
        decode(blob + b"\x00\x00")


def test_random_bit_flips_never_crash(blob):
    rng = random.Random(0)
    for _ in range(300):
        pos = rng.randrange(6 * 8, 8 * len(blob))
        bad = bytearray(blob)
        bad[pos // 8] ^= 0x80 >> (pos % 8)
        try:
            decode(bytes(bad))
        except CorruptInput:
            pass


def test_compressed_container_parse(blob):
    c = CompressedAutomaton.from_bytes(blob)
    assert (c.mode, c.n, c.m) == (lza.FULL, 60, 3)
    assert isinstance(c.body, BitStream)
