"""Seedable random diagram generation for test suites and verification."""

from __future__ import annotations

import random

from .diagrams import CLOSED, LINK, LONG, STRING, GaussDiagram, Underlying

__all__ = ["random_diagram", "random_underlying"]


def random_underlying(rng: random.Random, kinds=(CLOSED, LONG, LINK, STRING)) -> Underlying:
    kind = rng.choice(list(kinds))
    if kind in (LINK, STRING):
        return Underlying(kind, rng.randint(2, 3))
    return Underlying(kind)


def random_diagram(
    rng: random.Random,
    underlying: Underlying | None = None,
    max_arrows: int = 6,
    max_chords: int = 0,
    min_arrows: int = 0,
) -> GaussDiagram:
    """Uniform-ish random diagram: place arrow/chord ends on random slots."""
    if underlying is None:
        underlying = random_underlying(rng)
    n_arrows = rng.randint(min_arrows, max_arrows)
    n_chords = rng.randint(0, max_chords)
    ends = []
    for i in range(n_arrows):
        sign = rng.choice((1, -1))
        ends.append(("O", ("A", i), sign))
        ends.append(("U", ("A", i), sign))
    for i in range(n_chords):
        sign = rng.choice((1, -1))
        ends.append(("Da", ("C", i), sign))
        ends.append(("Db", ("C", i), sign))
    rng.shuffle(ends)
    comps = [[] for _ in range(underlying.count)]
    for tok in ends:
        comps[rng.randrange(underlying.count)].append(tok)
    return GaussDiagram.from_tokens(underlying, comps)
