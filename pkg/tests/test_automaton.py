import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsazip.automaton import (
    Automaton,
    ParseError,
    StateOrdering,
    TooLarge,
    Transition,
    bfs_ordering,
    fingerprint,
    is_isomorphic,
    parse_text,
    relabel,
    serialize_text,
    sorted_transitions,
)

from conftest import random_automaton

TURNSTILE_TEXT = "#! n=2 m=2 initial=0\n0 0 1\n0 1 2\n1 0 1\n1 1 2\n"


@st.composite
def automata(draw, max_n=12, max_m=4):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    ts = draw(
        st.frozensets(
            st.builds(Transition, st.integers(0, n - 1), st.integers(1, m), st.integers(0, n - 1)),
            max_size=3 * n,
        )
    )
    initial = draw(st.integers(0, n - 1))
    finals = draw(st.frozensets(st.integers(0, n - 1), max_size=n))
    return Automaton(n, m, ts, initial, finals)


def test_parse_minimal_graph():
    a = parse_text("0 1 1\n1")
    assert (a.n, a.m, len(a.transitions), a.initial, a.finals) == (2, 1, 1, 0, {1})


def test_parse_turnstile(turnstile):
    text = "0 0 1\n0 1 2\n1 1 2\n1 0 1\n"
    a = parse_text(text)
    assert a == turnstile
    assert len(a.transitions) == 4


def test_turnstile_golden(turnstile):
    assert serialize_text(turnstile) == TURNSTILE_TEXT
    assert parse_text(TURNSTILE_TEXT) == turnstile


def test_strip_weights():
    with pytest.raises(ParseError):
        parse_text("0 1 1 0.5\n")
    a = parse_text("0 1 1 0.5\n1 0.25\n", strip_weights=True)
    assert a.transitions == {Transition(0, 1, 1)} and a.finals == {1}


def test_pair_table_fuses_labels():
    a = parse_text("0 1 3 4\n1 2 3 5 0.1\n", pair_table={(3, 4): 1, (3, 5): 2}, strip_weights=True)
    assert a.transitions == {Transition(0, 1, 1), Transition(1, 2, 2)}


@pytest.mark.parametrize(
    "text",
    ["", "# only a comment\n", "0 1 0\n", "0 1 -2\n", "0 x 1\n", "0 1 1 2 3 4\n", "0 1 1\n0 1 1\n"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_text(text)


def test_parse_error_has_line_number():
    with pytest.raises(ParseError) as e:
        parse_text("0 1 1\n\n0 1 zz\n")
    assert e.value.lineno == 3


def test_dedupe():
    assert len(parse_text("0 1 1\n0 1 1\n", dedupe=True).transitions) == 1


def test_empty_automaton_serialization():
    a = Automaton(1, 1, frozenset())
    assert serialize_text(a) == "#! n=1 m=1 initial=0\n"
    assert parse_text(serialize_text(a)) == a


def test_invalid_automaton():
    with pytest.raises(ValueError):
        Automaton.from_arcs(2, 1, [(0, 2, 1)])
    with pytest.raises(ValueError):
        Automaton.from_arcs(2, 1, [(0, 1, 2)])


@given(automata())
def test_serialize_roundtrip(a):
    text = serialize_text(a)
    assert parse_text(text) == a
    assert serialize_text(parse_text(text)) == text


def test_sorted_transitions():
    a = Automaton.from_arcs(4, 2, [(0, 2, 3), (0, 1, 2), (0, 1, 3)])
    assert sorted_transitions(a, 0) == [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
    assert sorted_transitions(a, 1) == []
    b = Automaton.from_arcs(4, 2, sorted_transitions(a, 0))
    assert sorted_transitions(b, 0) == sorted_transitions(a, 0)


def test_bfs_examples():
    chain = Automaton.from_arcs(3, 1, [(0, 1, 1), (1, 1, 2)])
    assert bfs_ordering(chain).order == (0, 1, 2)
    tie = Automaton.from_arcs(6, 1, [(0, 1, 5), (0, 1, 2)])
    assert bfs_ordering(tie).order[:3] == (0, 2, 5)
    unreachable = Automaton.from_arcs(4, 1, [(0, 1, 1), (1, 1, 2)])
    assert bfs_ordering(unreachable).order == (0, 1, 2, 3)


def test_bfs_label_before_dst():
    a = Automaton.from_arcs(3, 2, [(0, 2, 1), (0, 1, 2)])
    assert bfs_ordering(a).order == (0, 2, 1)


def test_bfs_secondary_roots_by_id():
    a = Automaton.from_arcs(5, 1, [(2, 1, 0), (4, 1, 1)], initial=3)
    assert bfs_ordering(a).order == (3, 0, 1, 2, 4)


def test_relabel_identity_and_figure4():
    a = Automaton.from_arcs(3, 2, [(0, 1, 1), (1, 2, 2), (0, 2, 2), (2, 1, 1)], finals={1})
    ident = StateOrdering.from_order(range(3))
    assert relabel(a, ident) == a
    # 0->0, 1->2, 2->1
    perm = StateOrdering.from_order([0, 2, 1])
    b = relabel(a, perm)
    assert b != a
    assert b.transitions == {(0, 1, 2), (2, 2, 1), (0, 2, 1), (1, 1, 2)}
    assert is_isomorphic(a, b)


@given(automata(), st.randoms(use_true_random=False))
def test_relabel_inverse_and_fingerprint(a, rnd):
    order = list(range(a.n))
    rnd.shuffle(order)
    ordering = StateOrdering.from_order(order)
    b = relabel(a, ordering)
    assert relabel(b, ordering.inverse()) == a
    assert fingerprint(b) == fingerprint(a)
    assert is_isomorphic(a, b)


def test_fingerprint_chain():
    chain = Automaton.from_arcs(3, 1, [(0, 1, 1), (1, 1, 2)])
    fp = fingerprint(chain)
    assert fp[3] == (0, 1, 1)
    assert fp[-1] == (1, 1, 1)


def test_fingerprint_relabel_many():
    rng = random.Random(5)
    a = random_automaton(rng, max_n=60, density=0.05)
    fp = fingerprint(a)
    for _ in range(1000):
        order = list(range(a.n))
        rng.shuffle(order)
        assert fingerprint(relabel(a, StateOrdering.from_order(order))) == fp


def test_non_isomorphic():
    a = Automaton.from_arcs(3, 1, [(0, 1, 1), (0, 1, 2)])
    b = Automaton.from_arcs(3, 1, [(0, 1, 1), (1, 1, 2)])
    assert not is_isomorphic(a, b)
    # same degree sequences, different finals
    c = Automaton.from_arcs(2, 1, [(0, 1, 1)], finals={0})
    d = Automaton.from_arcs(2, 1, [(0, 1, 1)], finals={1})
    assert not is_isomorphic(c, d)


def test_isomorphism_needs_search():
    # two 3-cycles vs a 6-cycle: identical local signatures everywhere
    six = Automaton.from_arcs(6, 1, [(i, 1, (i + 1) % 6) for i in range(6)])
    two = Automaton.from_arcs(6, 1, [(0, 1, 1), (1, 1, 2), (2, 1, 0), (3, 1, 4), (4, 1, 5), (5, 1, 3)])
    assert not is_isomorphic(six, two)


def test_isomorphism_limit():
    a = Automaton(20, 1, frozenset())
    with pytest.raises(TooLarge):
        is_isomorphic(a, a, limit=12)


@settings(max_examples=200)
@given(automata(max_n=7, max_m=2), automata(max_n=7, max_m=2))
def test_isomorphism_against_brute_force(a, b):
    import itertools

    def brute(a, b):
        if (a.n, a.m) != (b.n, b.m):
            return False
        for perm in itertools.permutations(range(a.n)):
            if relabel(a, StateOrdering(tuple(perm.index(i) for i in range(a.n)), perm)) == b:
                return True
        return False

    assert is_isomorphic(a, b) == brute(a, b)
