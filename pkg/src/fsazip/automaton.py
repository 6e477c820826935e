"""Unweighted automaton model, text format I/O, BFS ordering and isomorphism checks.

States are ``0..n-1``; labels are ``1..m`` (0 is reserved). A directed graph
is the ``m == 1`` case.

Text format, one item per line::

    #! n=3 m=2 initial=0      optional header (see :func:`serialize_text`)
    # anything                comment
    src dst label             arc
    src dst ilabel olabel     arc of a transducer, fused via ``pair_table``
    src dst label weight      weighted arc (needs ``strip_weights``)
    state [weight]            final state
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple


class ParseError(ValueError):
    def __init__(self, msg: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


class TooLarge(ValueError):
    """Exact isomorphism search refused; compare fingerprints instead."""


class Transition(NamedTuple):
    src: int
    label: int
    dst: int


@dataclass(frozen=True, eq=False)
class Automaton:
    n: int
    m: int
    transitions: frozenset[Transition]
    initial: int = 0
    finals: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("an automaton needs at least one state")
        if self.m < 1:
            raise ValueError("alphabet size must be >= 1")
        if not isinstance(self.transitions, frozenset):
            object.__setattr__(
                self, "transitions", frozenset(Transition(*t) for t in self.transitions)
            )
        if not isinstance(self.finals, frozenset):
            object.__setattr__(self, "finals", frozenset(self.finals))
        n, m = self.n, self.m
        for src, label, dst in self.transitions:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"transition ({src}, {label}, {dst}) leaves state range [0, {n})")
            if not 1 <= label <= m:
                raise ValueError(f"label {label} outside [1, {m}]")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for f in self.finals:
            if not 0 <= f < n:
                raise ValueError(f"final state {f} out of range")

    @classmethod
    def from_arcs(
        cls,
        n: int,
        m: int,
        arcs: Iterable[tuple[int, int, int]],
        initial: int = 0,
        finals: Iterable[int] = (),
    ) -> Automaton:
        """Build from ``(src, label, dst)`` triples."""
        return cls(n, m, frozenset(Transition(*t) for t in arcs), initial, frozenset(finals))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automaton):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and self.initial == other.initial
            and self.finals == other.finals
            and self.transitions == other.transitions
        )

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.initial, self.finals, self.transitions))

    def __repr__(self) -> str:
        return (
            f"Automaton(n={self.n}, m={self.m}, |E|={len(self.transitions)}, "
            f"initial={self.initial}, |F|={len(self.finals)})"
        )

    @cached_property
    def out_edges(self) -> list[list[Transition]]:
        """E[q] for every q, sorted by (dst, label)."""
        out: list[list[Transition]] = [[] for _ in range(self.n)]
        for t in self.transitions:
            out[t.src].append(t)
        for ts in out:
            ts.sort(key=_dst_label)
        return out

    def out_degree(self, q: int) -> int:
        return len(self.out_edges[q])


def _dst_label(t: Transition) -> tuple[int, int]:
    return (t.dst, t.label)


def _label_dst(t: Transition) -> tuple[int, int]:
    return (t.label, t.dst)


def sorted_transitions(a: Automaton, q: int) -> list[Transition]:
    """E[q] ordered by destination, then label."""
    return list(a.out_edges[q])


# --- text format -----------------------------------------------------------

HEADER_PREFIX = "#!"


def _parse_header(body: str, lineno: int) -> dict[str, int]:
    out = {}
    for tok in body.split():
        if "=" not in tok:
            continue
        key, _, val = tok.partition("=")
        if key in ("n", "m", "initial"):
            try:
                out[key] = int(val)
            except ValueError:
                raise ParseError(f"bad header value {tok!r}", lineno) from None
    return out


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_text(
    text: str,
    strip_weights: bool = False,
    dedupe: bool = False,
    pair_table: Mapping[tuple[int, int], int] | None = None,
) -> Automaton:
    """Parse the line format described in the module docstring.

    Without a ``#!`` header, ``n`` is one more than the largest state id seen,
    ``m`` the largest label, and the initial state is the source of the first
    arc (0 when there are no arcs).
    """
    header: dict[str, int] = {}
    arcs: list[Transition] = []
    seen: set[Transition] = set()
    finals: set[int] = set()
    max_state = -1
    max_label = 0
    saw_content = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(HEADER_PREFIX):
            header.update(_parse_header(line[len(HEADER_PREFIX):], lineno))
            saw_content = True
            continue
        if line.startswith("#"):
            continue
        saw_content = True
        toks = line.split()
        if len(toks) <= 2:
            q = _int(toks[0], lineno)
            if len(toks) == 2:
                if not _is_number(toks[1]):
                    raise ParseError(f"bad final weight {toks[1]!r}", lineno)
                if not strip_weights:
                    raise ParseError("weighted final state (use strip_weights)", lineno)
            if q < 0:
                raise ParseError("negative state id", lineno)
            finals.add(q)
            max_state = max(max_state, q)
            continue
        if len(toks) > 5:
            raise ParseError(f"too many fields ({len(toks)})", lineno)
        src, dst = _int(toks[0], lineno), _int(toks[1], lineno)
        rest = toks[2:]
        if pair_table is not None and len(rest) >= 2:
            key = (_int(rest[0], lineno), _int(rest[1], lineno))
            if key not in pair_table:
                raise ParseError(f"label pair {key} missing from pair table", lineno)
            label = pair_table[key]
            rest = rest[2:]
        else:
            label = _int(rest[0], lineno)
            rest = rest[1:]
        if rest:
            if len(rest) > 1 or not _is_number(rest[0]):
                raise ParseError(f"unexpected trailing fields {rest!r}", lineno)
            if not strip_weights:
                raise ParseError("weighted arc (use strip_weights)", lineno)
        if src < 0 or dst < 0:
            raise ParseError("negative state id", lineno)
        if label <= 0:
            raise ParseError(f"label {label} must be >= 1 (0 is reserved)", lineno)
        t = Transition(src, label, dst)
        if t in seen:
            if dedupe:
                continue
            raise ParseError(f"duplicate transition {src} {dst} {label}", lineno)
        seen.add(t)
        arcs.append(t)
        max_state = max(max_state, src, dst)
        max_label = max(max_label, label)

    if not saw_content:
        raise ParseError("empty input")
    n = header.get("n", max_state + 1)
    m = header.get("m", max(max_label, 1))
    initial = header.get("initial", arcs[0].src if arcs else 0)
    n = max(n, initial + 1) if "n" not in header else n
    if n <= max_state:
        raise ParseError(f"header n={n} but state {max_state} is used")
    if m < max_label:
        raise ParseError(f"header m={m} but label {max_label} is used")
    try:
        return Automaton(n, m, frozenset(arcs), initial, frozenset(finals))
    except ValueError as e:
        raise ParseError(str(e)) from None


def serialize_text(a: Automaton) -> str:
    """Canonical text: header, arcs sorted by (src, dst, label), sorted finals."""
    lines = [f"{HEADER_PREFIX} n={a.n} m={a.m} initial={a.initial}"]
    for q in range(a.n):
        for t in a.out_edges[q]:
            lines.append(f"{t.src} {t.dst} {t.label}")
    lines.extend(str(f) for f in sorted(a.finals))
    return "\n".join(lines) + "\n"


# --- orderings ---------------------------------------------------------------


@dataclass(frozen=True)
class StateOrdering:
    order: tuple[int, ...]  # order[i] = state visited i-th
    rank: tuple[int, ...]  # rank[q] = position of q in order

    @classmethod
    def from_order(cls, order: Iterable[int]) -> StateOrdering:
        order = tuple(order)
        rank = [-1] * len(order)
        for i, q in enumerate(order):
            if rank[q] != -1:
                raise ValueError(f"state {q} appears twice in ordering")
            rank[q] = i
        return cls(order, tuple(rank))

    def inverse(self) -> StateOrdering:
        return StateOrdering(self.rank, self.order)


def bfs_ordering(a: Automaton) -> StateOrdering:
    """BFS from the initial state; neighbours enqueued by (label, dst).

    When the frontier empties, the smallest undiscovered state id becomes the
    next root, so every state is covered.
    """
    n = a.n
    seen = [False] * n
    order = []
    queue = deque([a.initial])
    seen[a.initial] = True
    next_root = 0
    out = a.out_edges
    while len(order) < n:
        if not queue:
            while seen[next_root]:
                next_root += 1
            seen[next_root] = True
            queue.append(next_root)
        q = queue.popleft()
        order.append(q)
        for t in sorted(out[q], key=_label_dst):
            if not seen[t.dst]:
                seen[t.dst] = True
                queue.append(t.dst)
    return StateOrdering.from_order(order)


def relabel(a: Automaton, ordering: StateOrdering) -> Automaton:
    """Rename every state q to ``ordering.rank[q]``."""
    rank = ordering.rank
    if len(rank) != a.n:
        raise ValueError("ordering size does not match automaton")
    return Automaton(
        a.n,
        a.m,
        frozenset(Transition(rank[s], l, rank[d]) for s, l, d in a.transitions),
        rank[a.initial],
        frozenset(rank[f] for f in a.finals),
    )


# --- isomorphism -------------------------------------------------------------


def bfs_layers(a: Automaton) -> list[int]:
    """Sizes of BFS layers reachable from the initial state."""
    dist = {a.initial: 0}
    frontier = [a.initial]
    layers = []
    while frontier:
        layers.append(len(frontier))
        nxt = []
        for q in frontier:
            for t in a.out_edges[q]:
                if t.dst not in dist:
                    dist[t.dst] = len(layers)
                    nxt.append(t.dst)
        frontier = nxt
    return layers


def fingerprint(a: Automaton) -> tuple:
    """Isomorphism-invariant summary; equal fingerprints are necessary, not sufficient."""
    indeg = [0] * a.n
    labels = Counter()
    for t in a.transitions:
        indeg[t.dst] += 1
        labels[t.label] += 1
    return (
        a.n,
        a.m,
        len(a.transitions),
        tuple(sorted(len(ts) for ts in a.out_edges)),
        tuple(sorted(indeg)),
        tuple(labels[l] for l in range(1, a.m + 1)),
        len(a.finals),
        tuple(bfs_layers(a)),
    )


def _state_signatures(a: Automaton) -> list[tuple]:
    outc = [Counter() for _ in range(a.n)]
    inc = [Counter() for _ in range(a.n)]
    loops = [0] * a.n
    for s, l, d in a.transitions:
        outc[s][l] += 1
        inc[d][l] += 1
        if s == d:
            loops[s] += 1
    return [
        (
            q == a.initial,
            q in a.finals,
            loops[q],
            tuple(sorted(outc[q].items())),
            tuple(sorted(inc[q].items())),
        )
        for q in range(a.n)
    ]


def is_isomorphic(a: Automaton, b: Automaton, limit: int = 16) -> bool:
    """Exact check by backtracking over state bijections.

    Raises :class:`TooLarge` when ``n`` exceeds ``limit``.
    """
    if a.n != b.n or a.m != b.m or len(a.transitions) != len(b.transitions):
        return False
    if len(a.finals) != len(b.finals):
        return False
    if a.n > limit:
        raise TooLarge(f"n={a.n} exceeds exact isomorphism limit {limit}")
    if fingerprint(a) != fingerprint(b):
        return False
    sig_a, sig_b = _state_signatures(a), _state_signatures(b)
    if sorted(sig_a) != sorted(sig_b):
        return False

    n = a.n
    out_a = [set() for _ in range(n)]
    in_a = [set() for _ in range(n)]
    for s, l, d in a.transitions:
        out_a[s].add((l, d))
        in_a[d].add((l, s))
    out_b = [set() for _ in range(n)]
    for s, l, d in b.transitions:
        out_b[s].add((l, d))

    candidates = [[y for y in range(n) if sig_b[y] == sig_a[x]] for x in range(n)]
    # assign in BFS order so each new state is adjacent to assigned ones
    order = list(bfs_ordering(a).order)
    f = [-1] * n
    used = [False] * n

    def consistent(x: int, y: int) -> bool:
        for l, d in out_a[x]:
            fd = y if d == x else f[d]
            if fd != -1 and (l, fd) not in out_b[y]:
                return False
        for l, s in in_a[x]:
            if s != x and f[s] != -1 and (l, y) not in out_b[f[s]]:
                return False
        return True

    def search(i: int) -> bool:
        if i == n:
            return True
        x = order[i]
        for y in candidates[x]:
            if used[y] or not consistent(x, y):
                continue
            f[x] = y
            used[y] = True
            if search(i + 1):
                return True
            f[x] = -1
            used[y] = False
        return False

    # every edge of a maps onto an edge of b and |E_a| == |E_b|, so success is a bijection
    return search(0)
