"""LZ78 over an integer alphabet ``1..m``.

Every token carries one explicit symbol: a match is never allowed to consume
the last remaining input symbol. That makes ``sum(len(entry) + 1)`` over the
tokens equal to the input length, so a decoder told the symbol count knows
exactly when to stop.
"""

from __future__ import annotations

from collections.abc import Sequence

from fsazip.bitio import BitStream
from fsazip.intcodec import decode_nonneg, encode_nonneg

_HASH_MOD = (1 << 61) - 1


class LZ78Error(ValueError):
    pass


class SymbolDictionary:
    """Trie of symbol sequences. Entry 0 is the empty sequence."""

    def __init__(self):
        self.parent = [0]
        self.symbol = [0]
        self.length = [0]
        self.children: dict[tuple[int, int], int] = {}
        self._digest = 0

    def __len__(self) -> int:
        return len(self.parent)

    def insert(self, parent: int, symbol: int) -> int:
        key = (parent, symbol)
        idx = self.children.get(key)
        if idx is not None:
            return idx
        idx = len(self.parent)
        self.children[key] = idx
        self.parent.append(parent)
        self.symbol.append(symbol)
        self.length.append(self.length[parent] + 1)
        self._digest = (self._digest * 1_000_003 + parent * 65_537 + symbol + 1) % _HASH_MOD
        return idx

    def sequence(self, idx: int) -> list[int]:
        out = []
        while idx:
            out.append(self.symbol[idx])
            idx = self.parent[idx]
        out.reverse()
        return out

    def digest(self) -> int:
        """Order-sensitive hash of the entry list, for replay checks."""
        return self._digest


def lz78_parse(
    symbols: Sequence[int],
    d: SymbolDictionary,
    m: int | None = None,
    trace: list | None = None,
) -> list[tuple[int, int]]:
    """Greedy parse into ``(dict index, explicit symbol)`` tokens, updating ``d``.

    ``trace`` receives the dictionary digest after each token.
    """
    if m is not None:
        for s in symbols:
            if not 1 <= s <= m:
                raise LZ78Error(f"symbol {s} outside [1, {m}]")
    tokens = []
    children = d.children
    last = len(symbols) - 1
    i = 0
    while i <= last:
        node = 0
        while i < last:
            nxt = children.get((node, symbols[i]))
            if nxt is None:
                break
            node = nxt
            i += 1
        sym = symbols[i]
        i += 1
        tokens.append((node, sym))
        d.insert(node, sym)
        if trace is not None:
            trace.append(d.digest())
    return tokens


def symbol_width(m: int) -> int:
    """Fixed width for a symbol in ``1..m``: ceil(log2 m)."""
    return (m - 1).bit_length()


def lz78_encode_tokens(tokens: Sequence[tuple[int, int]], m: int, s: BitStream) -> BitStream:
    w = symbol_width(m)
    for idx, sym in tokens:
        encode_nonneg(idx, s)
        s.write_bits(sym - 1, w)
    return s


def lz78_encode(symbols: Sequence[int], m: int, d: SymbolDictionary, s: BitStream) -> BitStream:
    return lz78_encode_tokens(lz78_parse(symbols, d, m), m, s)


def lz78_decode(
    s: BitStream,
    total_symbols: int,
    m: int,
    d: SymbolDictionary,
    trace: list | None = None,
) -> list[int]:
    """Read tokens until ``total_symbols`` symbols are recovered."""
    w = symbol_width(m)
    out: list[int] = []
    while len(out) < total_symbols:
        idx = decode_nonneg(s)
        sym = s.read_bits(w) + 1
        if idx >= len(d):
            raise LZ78Error(f"dictionary index {idx} out of range ({len(d)} entries)")
        if sym > m:
            raise LZ78Error(f"symbol {sym} outside [1, {m}]")
        if len(out) + d.length[idx] + 1 > total_symbols:
            raise LZ78Error("token overshoots the symbol count")
        out.extend(d.sequence(idx))
        out.append(sym)
        d.insert(idx, sym)
        if trace is not None:
            trace.append(d.digest())
    return out


def compress_bytes(data: bytes) -> bytes:
    """Standalone LZ78 container for a byte string (length prefix + tokens)."""
    s = BitStream()
    encode_nonneg(len(data), s)
    lz78_encode([b + 1 for b in data], 256, SymbolDictionary(), s)
    return s.to_bytes()


def decompress_bytes(blob: bytes) -> bytes:
    s = BitStream(blob)
    n = decode_nonneg(s)
    return bytes(x - 1 for x in lz78_decode(s, n, 256, SymbolDictionary()))
