"""Lossless compression of finite automata and directed graphs.

The main entry points are :func:`fsazip.lza.encode` / :func:`fsazip.lza.decode`
for the dictionary compressor, and :mod:`fsazip.generators` for the synthetic
graph and automaton families used by the benchmark harness.
"""

from fsazip.automaton import Automaton, Transition, parse_text, serialize_text
from fsazip.bitio import BitStream, TruncatedStream
from fsazip.lza import CorruptInput, decode, encode

__all__ = [
    "Automaton",
    "Transition",
    "BitStream",
    "TruncatedStream",
    "CorruptInput",
    "parse_text",
    "serialize_text",
    "encode",
    "decode",
]

__version__ = "0.1.0"
