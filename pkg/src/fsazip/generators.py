"""Seeded synthetic graphs and automata.

``G1``  directed Erdos-Renyi graph, every ordered pair (self-loops included)
        connected with probability ``p``.
``A1``  G1 structure with a uniform label in ``1..m`` per transition.
``G2``  every state gets a class ``c`` uniform in ``1..n``; the pair (s, d)
        is connected with probability ``1 / (c_s + c_d)``.
``A2``  G2 structure, label ``(d mod m) + 1`` determined by the destination.

All randomness comes from numpy's PCG64 bit generator seeded with the given
integer, so a (class, parameters, seed) triple names one automaton on every
platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fsazip.automaton import Automaton, Transition

CLASSES = ("G1", "A1", "G2", "A2")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    p: float = 0.01
    m: int = 10
    seed: int = 0

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in CLASSES:
            raise ValueError(f"unknown generator class {self.kind!r}; expected one of {CLASSES}")
        object.__setattr__(self, "kind", kind)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.m < 1:
            raise ValueError("m must be >= 1")

    def build(self) -> Automaton:
        if self.kind == "G1":
            return gen_g1(self.n, self.p, self.seed)
        if self.kind == "A1":
            return gen_a1(self.n, self.p, self.m, self.seed)
        if self.kind == "G2":
            return gen_g2(self.n, self.seed)
        return gen_a2(self.n, self.m, self.seed)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _pairs(mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    src, dst = np.nonzero(mask)
    return src, dst


def _build(n: int, m: int, src, labels, dst) -> Automaton:
    ts = frozenset(
        Transition(s, l, d) for s, l, d in zip(src.tolist(), labels.tolist(), dst.tolist())
    )
    return Automaton(n, m, ts, 0, frozenset())


def gen_g1(n: int, p: float, seed: int) -> Automaton:
    rng = _rng(seed)
    src, dst = _pairs(rng.random((n, n)) < p)
    return _build(n, 1, src, np.ones_like(src), dst)


def gen_a1(n: int, p: float, m: int, seed: int) -> Automaton:
    rng = _rng(seed)
    src, dst = _pairs(rng.random((n, n)) < p)
    labels = rng.integers(1, m + 1, size=len(src))
    return _build(n, m, src, labels, dst)


def g2_classes(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(1, n + 1, size=n)


def g2_probabilities(classes: np.ndarray) -> np.ndarray:
    c = np.asarray(classes, dtype=float)
    return 1.0 / (c[:, None] + c[None, :])


def _g2_structure(n: int, seed: int, classes=None):
    rng = _rng(seed)
    drawn = g2_classes(n, rng)
    if classes is None:
        classes = drawn
    return _pairs(rng.random((n, n)) < g2_probabilities(classes))


def gen_g2(n: int, seed: int, classes=None) -> Automaton:
    """``classes`` overrides the random class draw (length ``n``)."""
    src, dst = _g2_structure(n, seed, classes)
    return _build(n, 1, src, np.ones_like(src), dst)


def gen_a2(n: int, m: int, seed: int, classes=None) -> Automaton:
    src, dst = _g2_structure(n, seed, classes)
    return _build(n, m, src, dst % m + 1, dst)
