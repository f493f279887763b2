import random

import pytest

from virtknot.diagrams import GaussDiagram, Underlying, parse_gauss_code
from virtknot.randgen import random_diagram
from virtknot.realizability import (
    interlacement_parity_ok,
    is_realizable,
    realizable_by_embedding_search,
)

TREFOIL = "closed: O1+ U2+ O3+ U1+ O2+ U3+"
TREFOIL_NEG = "closed: O1- U2- O3- U1- O2- U3-"
FIGURE8 = "closed: O1+ U2+ O3- U4- O2+ U1+ O4- U3-"
VIRTUAL_TREFOIL = "closed: O1+ O2+ U1+ U2+"


def all_closed_diagrams(max_arrows):
    """Every canonical closed chord-free diagram with <= max_arrows arrows."""
    from itertools import permutations, product

    seen = {}
    for n in range(max_arrows + 1):
        slots = list(range(2 * n))
        # pairings of 2n slots
        def pairings(rest):
            if not rest:
                yield []
                return
            a = rest[0]
            for i in range(1, len(rest)):
                b = rest[i]
                for rem in pairings(rest[1:i] + rest[i + 1:]):
                    yield [(a, b)] + rem

        for pairing in pairings(slots):
            for dirs in product((0, 1), repeat=n):
                for signs in product((1, -1), repeat=n):
                    comps = [[None] * (2 * n)]
                    for k, ((a, b), dr, sg) in enumerate(zip(pairing, dirs, signs)):
                        t, h = (a, b) if dr == 0 else (b, a)
                        comps[0][t] = ("O", k, sg)
                        comps[0][h] = ("U", k, sg)
                    d = GaussDiagram.from_tokens(Underlying("closed"), comps)
                    seen.setdefault(d.canonical_code(), d)
    return list(seen.values())


class TestRealizable:
    def test_empty(self):
        assert is_realizable(parse_gauss_code("closed:"))
        assert is_realizable(parse_gauss_code("long:"))

    def test_kinks(self):
        assert is_realizable(parse_gauss_code("closed: O1+ U1+"))
        assert is_realizable(parse_gauss_code("closed: O1- U1-"))
        assert is_realizable(parse_gauss_code("long: O1+ U1+"))

    def test_classical_knots(self):
        assert is_realizable(parse_gauss_code(TREFOIL))
        assert is_realizable(parse_gauss_code(TREFOIL_NEG))
        assert is_realizable(parse_gauss_code(FIGURE8))

    def test_virtual_trefoil(self):
        assert not is_realizable(parse_gauss_code(VIRTUAL_TREFOIL))
        assert not interlacement_parity_ok(parse_gauss_code(VIRTUAL_TREFOIL))

    def test_errors(self):
        with pytest.raises(ValueError):
            is_realizable(parse_gauss_code("link 2: O1+ / U1+"))
        with pytest.raises(ValueError):
            is_realizable(parse_gauss_code("closed: Da1+ Db1+"))

    def test_parity_necessary(self):
        rng = random.Random(5)
        for _ in range(100):
            d = random_diagram(rng, Underlying("closed"), max_arrows=5)
            if is_realizable(d):
                assert interlacement_parity_ok(d)


class TestOracleAgreement:
    def test_exhaustive_small(self):
        diagrams = all_closed_diagrams(3)
        assert len(diagrams) > 100
        for d in diagrams:
            assert is_realizable(d) == realizable_by_embedding_search(d), d.serialize()

    def test_exhaustive_four_arrows_sample(self):
        # full 4-arrow agreement runs in the acceptance suite; spot-check here
        rng = random.Random(17)
        for _ in range(150):
            d = random_diagram(rng, Underlying("closed"), max_arrows=4)
            assert is_realizable(d) == realizable_by_embedding_search(d), d.serialize()

    def test_some_realizable_exist(self):
        diagrams = all_closed_diagrams(3)
        real = [d for d in diagrams if is_realizable(d)]
        assert len(real) >= 5
