"""Dictionary compression of automata.

Two modes share one container:

``full``
    Exact, including state numbering. States are visited in BFS order and
    each state's outgoing transitions, sorted by (dst, label), are parsed
    greedily against a dictionary of transition sequences. Per state we
    write the transition count, the sorted set of matched dictionary
    indices, the sorted set of explicit destinations, and the explicit
    labels in destination order.

``structure``
    Exact up to state renaming. States are renumbered in BFS order first;
    transitions that discover a state carry only their label (LZ78 coded),
    the rest are coded as in full mode.

Two rules keep the decoder's job well defined. A state's parse only sees
dictionary entries that existed before that state began (insertions are
applied after the whole state is parsed), and a match may never swallow the
state's last remaining transition, so every phrase ends in an explicit
transition. The decoder reads matched indices until their lengths account
for the state's transition count, rebuilds the transition set, and replays
the parse to reproduce the dictionary.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

from fsazip.automaton import Automaton, Transition, bfs_ordering, relabel
from fsazip.bitio import BitStream, TruncatedStream
from fsazip.intcodec import (
    decode_nonneg,
    difference_encode,
    elias_delta_decode,
    elias_delta_encode,
    encode_nonneg,
    difference_decode,
)
from fsazip.lz78 import LZ78Error, SymbolDictionary, lz78_decode, lz78_encode

MAGIC = b"LZA1"
VERSION = 1
FLAG_STRUCTURE = 0x01
FLAG_FINALS = 0x02
_RESERVED = 0xFC

FULL = "full"
STRUCTURE = "structure"

Pair = tuple[int, int]  # (label, dst)


class CorruptInput(ValueError):
    pass


class PhraseDictionary:
    """Trie over (label, dst) pairs; entry 0 is the empty sequence."""

    def __init__(self):
        self.parent = [0]
        self.pair: list[Pair] = [(0, -1)]
        self.length = [0]
        self.children: dict[tuple[int, int, int], int] = {}
        self._digest = 0

    def __len__(self) -> int:
        """Number of nonempty entries, |D|."""
        return len(self.parent) - 1

    def insert(self, parent: int, pair: Pair) -> int:
        key = (parent, pair[0], pair[1])
        idx = self.children.get(key)
        if idx is not None:
            return idx
        idx = len(self.parent)
        self.children[key] = idx
        self.parent.append(parent)
        self.pair.append(pair)
        self.length.append(self.length[parent] + 1)
        self._digest = hash((self._digest, parent, pair))
        return idx

    def sequence(self, idx: int) -> list[Pair]:
        out = []
        while idx:
            out.append(self.pair[idx])
            idx = self.parent[idx]
        out.reverse()
        return out

    def digest(self) -> int:
        return self._digest


def parse_state(pairs: Sequence[Pair], d: PhraseDictionary) -> list[tuple[int, int, int]]:
    """Greedy phrases ``(dict index, label, dst)`` for one state's sorted pairs.

    ``d`` is only read; call :func:`commit_phrases` afterwards.
    """
    children = d.children
    phrases = []
    last = len(pairs) - 1
    i = 0
    while i <= last:
        node = 0
        while i < last:
            label, dst = pairs[i]
            nxt = children.get((node, label, dst))
            if nxt is None:
                break
            node = nxt
            i += 1
        label, dst = pairs[i]
        phrases.append((node, label, dst))
        i += 1
    return phrases


def commit_phrases(phrases: Sequence[tuple[int, int, int]], d: PhraseDictionary) -> None:
    for idx, label, dst in phrases:
        d.insert(idx, (label, dst))


@dataclass
class EncodeStats:
    dict_size: int = 0
    phrases: int = 0
    payload_bits: int = 0
    header_bits: int = 0
    new_transitions: int = 0
    state_digests: list[int] = field(default_factory=list)


@dataclass
class CompressedAutomaton:
    mode: str
    n: int
    m: int
    initial: int
    finals: tuple[int, ...]
    body: BitStream  # header fields + state blocks
    stats: EncodeStats | None = None

    def to_bytes(self) -> bytes:
        flags = FLAG_STRUCTURE if self.mode == STRUCTURE else 0
        if self.finals:
            flags |= FLAG_FINALS
        return MAGIC + bytes([VERSION, flags]) + self.body.to_bytes()

    def __len__(self) -> int:
        return 6 + (self.body.bit_len + 7) // 8

    @classmethod
    def from_bytes(cls, blob: bytes) -> CompressedAutomaton:
        if len(blob) < 6 or blob[:4] != MAGIC:
            raise CorruptInput("bad magic")
        if blob[4] != VERSION:
            raise CorruptInput(f"unsupported version {blob[4]}")
        flags = blob[5]
        if flags & _RESERVED:
            raise CorruptInput("reserved flag bits set")
        body = BitStream(blob[6:])
        try:
            n = elias_delta_decode(body)
            m = elias_delta_decode(body)
            initial = decode_nonneg(body)
            nf = decode_nonneg(body)
            if nf > n:
                raise CorruptInput("more finals than states")
            finals = tuple(difference_decode(body, nf))
        except (TruncatedStream, ValueError) as e:
            if isinstance(e, CorruptInput):
                raise
            raise CorruptInput(f"truncated header: {e}") from None
        if bool(flags & FLAG_FINALS) != bool(finals):
            raise CorruptInput("finals flag disagrees with header")
        if initial >= n or any(f >= n for f in finals):
            raise CorruptInput("header state id out of range")
        mode = STRUCTURE if flags & FLAG_STRUCTURE else FULL
        return cls(mode, n, m, initial, finals, body)


def count_width(n: int, m: int) -> int:
    """Fixed width of the per-state transition count: ceil(log2(n*m + 1))."""
    return (n * m).bit_length()


def label_width(m: int) -> int:
    return (m - 1).bit_length()


def _write_group(
    pairs: list[Pair], d: PhraseDictionary, lw: int, s: BitStream
) -> list[tuple[int, int, int]]:
    phrases = parse_state(pairs, d)
    difference_encode(sorted(p[0] for p in phrases), s)
    explicit = sorted((dst, label) for _, label, dst in phrases)
    difference_encode([dst for dst, _ in explicit], s)
    for _, label in explicit:
        s.write_bits(label - 1, lw)
    commit_phrases(phrases, d)
    return phrases


def _read_group(
    total: int, n_dst: int, m: int, d: PhraseDictionary, lw: int, s: BitStream
) -> list[Pair]:
    """Inverse of :func:`_write_group`; returns the group's pairs sorted by (dst, label)."""
    if total == 0:
        return []
    length = d.length
    size = len(length)
    indices = []
    acc = covered = 0
    while covered < total:
        acc += decode_nonneg(s)
        if acc >= size:
            raise CorruptInput(f"dictionary index {acc} out of range")
        covered += length[acc] + 1
        indices.append(acc)
    if covered != total:
        raise CorruptInput("dictionary indices overshoot the transition count")
    k = len(indices)
    dsts = difference_decode(s, k)
    if dsts and dsts[-1] >= n_dst:
        raise CorruptInput(f"destination {dsts[-1]} out of range")
    pairs = []
    for dst in dsts:
        label = s.read_bits(lw) + 1
        if label > m:
            raise CorruptInput(f"label {label} out of range")
        pairs.append((label, dst))
    for idx in indices:
        pairs.extend(d.sequence(idx))
    pairs.sort(key=lambda p: (p[1], p[0]))
    for a, b in zip(pairs, pairs[1:]):
        if a == b:
            raise CorruptInput("duplicate transition in decoded state")
    phrases = parse_state(pairs, d)
    if sorted(p[0] for p in phrases) != indices:
        raise CorruptInput("dictionary replay mismatch")
    commit_phrases(phrases, d)
    return pairs


def _write_header(a: Automaton, finals: Sequence[int], s: BitStream) -> None:
    elias_delta_encode(a.n, s)
    elias_delta_encode(a.m, s)
    encode_nonneg(a.initial, s)
    encode_nonneg(len(finals), s)
    difference_encode(sorted(finals), s)


def encode(a: Automaton, mode: str = FULL, trace: bool = False) -> CompressedAutomaton:
    """Compress ``a``. ``trace`` records the dictionary digest after every state."""
    if mode not in (FULL, STRUCTURE):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == STRUCTURE:
        a = relabel(a, bfs_ordering(a))
        order = range(a.n)
    else:
        order = bfs_ordering(a).order

    s = BitStream()
    _write_header(a, sorted(a.finals), s)
    stats = EncodeStats(header_bits=s.bit_len)
    cw = count_width(a.n, a.m)
    lw = label_width(a.m)
    d = PhraseDictionary()
    labels_dict = SymbolDictionary()
    out = a.out_edges
    next_id = 0

    for q in order:
        edges = out[q]
        s.write_bits(len(edges), cw)
        if mode == STRUCTURE:
            if q == next_id:
                next_id += 1  # a new BFS root
            new_labels = []
            old = []
            for t in sorted(edges, key=lambda t: (t.label, t.dst)):
                if t.dst >= next_id:
                    # BFS numbering guarantees discoveries arrive in id order
                    assert t.dst == next_id, "automaton is not BFS-numbered"
                    next_id += 1
                    new_labels.append(t.label)
                else:
                    old.append(t)
            # n_new <= d_q, so ceil(log2(d_q + 1)) bits suffice
            s.write_bits(len(new_labels), len(edges).bit_length())
            lz78_encode(new_labels, a.m, labels_dict, s)
            stats.new_transitions += len(new_labels)
            old.sort(key=lambda t: (t.dst, t.label))
            pairs = [(t.label, t.dst) for t in old]
        else:
            pairs = [(t.label, t.dst) for t in edges]
        stats.phrases += len(_write_group(pairs, d, lw, s))
        if trace:
            stats.state_digests.append(d.digest())

    stats.dict_size = len(d)
    stats.payload_bits = s.bit_len - stats.header_bits
    return CompressedAutomaton(mode, a.n, a.m, a.initial, tuple(sorted(a.finals)), s, stats)


def encode_bytes(a: Automaton, mode: str = FULL) -> bytes:
    return encode(a, mode).to_bytes()


def decode(c: CompressedAutomaton | bytes, trace: list | None = None) -> Automaton:
    """Invert :func:`encode`. ``trace`` collects per-state dictionary digests."""
    if isinstance(c, (bytes, bytearray, memoryview)):
        c = CompressedAutomaton.from_bytes(bytes(c))
    else:
        c = CompressedAutomaton.from_bytes(c.to_bytes())
    try:
        return _decode_body(c, trace)
    except (TruncatedStream, LZ78Error) as e:
        raise CorruptInput(str(e)) from None
    except ValueError as e:
        if isinstance(e, CorruptInput):
            raise
        raise CorruptInput(str(e)) from None


def _decode_body(c: CompressedAutomaton, trace: list | None) -> Automaton:
    n, m, s = c.n, c.m, c.body
    if n * m > (1 << 40):
        raise CorruptInput("implausible automaton size")
    cw = count_width(n, m)
    lw = label_width(m)
    d = PhraseDictionary()
    labels_dict = SymbolDictionary()
    transitions: list[Transition] = []

    if c.mode == STRUCTURE:
        next_id = 0
        for q in range(n):
            if q == next_id:
                next_id += 1
            elif q > next_id:
                raise CorruptInput("state visited before discovery")
            dq = s.read_bits(cw)
            n_new = s.read_bits(dq.bit_length())
            if n_new > dq or next_id + n_new > n:
                raise CorruptInput("bad new-transition count")
            prev = 0
            for label in lz78_decode(s, n_new, m, labels_dict):
                if label < prev:
                    raise CorruptInput("new-transition labels out of order")
                prev = label
                transitions.append(Transition(q, label, next_id))
                next_id += 1
            for label, dst in _read_group(dq - n_new, next_id, m, d, lw, s):
                transitions.append(Transition(q, label, dst))
            if trace is not None:
                trace.append(d.digest())
    else:
        seen = [False] * n
        seen[c.initial] = True
        queue = deque([c.initial])
        next_root = 0
        for _ in range(n):
            if not queue:
                while seen[next_root]:
                    next_root += 1
                seen[next_root] = True
                queue.append(next_root)
            q = queue.popleft()
            dq = s.read_bits(cw)
            pairs = _read_group(dq, n, m, d, lw, s)
            for label, dst in sorted(pairs):
                transitions.append(Transition(q, label, dst))
                if not seen[dst]:
                    seen[dst] = True
                    queue.append(dst)
            if trace is not None:
                trace.append(d.digest())

    if s.remaining() >= 8:
        raise CorruptInput("trailing data after last state")
    if s.read_bits(s.remaining()):
        raise CorruptInput("nonzero padding bits")
    return Automaton(n, m, frozenset(transitions), c.initial, frozenset(c.finals))


def decode_bytes(blob: bytes) -> Automaton:
    return decode(blob)


def lemma2_bound(dict_size: int, n: int, m: int) -> float:
    """Upper bound on the payload bits of a full-mode encoding with ``dict_size`` entries."""
    D = dict_size
    nu = n * n / D
    lg_n = math.log2(n + 1)
    lg_nu = math.log2(nu + 1)
    first = D * (lg_n + lg_nu + 2 * math.log2(lg_n + 1))
    second = D * (2 * math.log2(lg_nu + 1) + 2 + label_width(m))
    return first + second + n * (n * m - 1).bit_length()
