import random

import pytest

from fsazip.automaton import Automaton, Transition

ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.append((criterion, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {crit}: {detail}")


def random_automaton(rng: random.Random, max_n=200, max_m=16, density=None) -> Automaton:
    """Random automaton with uneven density; may have unreachable states and finals."""
    n = rng.randint(1, max_n)
    m = rng.randint(1, max_m)
    if density is None:
        density = rng.choice([0.0, 0.002, 0.01, 0.03, 0.08])
    target = min(int(density * n * n * rng.uniform(0.5, 1.5)), n * n * m, 4000)
    ts = set()
    for _ in range(target):
        ts.add(Transition(rng.randrange(n), rng.randint(1, m), rng.randrange(n)))
    finals = {rng.randrange(n) for _ in range(rng.randint(0, min(n, 5)))}
    return Automaton(n, m, frozenset(ts), rng.randrange(n), frozenset(finals))


@pytest.fixture
def turnstile():
    # locked=0, unlocked=1; push=1, coin=2
    return Automaton.from_arcs(2, 2, [(0, 1, 0), (0, 2, 1), (1, 2, 1), (1, 1, 0)], initial=0)
