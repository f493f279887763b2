import random

import pytest

from virtknot.diagrams import Endpoint, GaussDiagram, Underlying, parse_gauss_code
from virtknot.moves import (
    ALL_FAMILIES,
    REIDEMEISTER_FAMILIES,
    Coloring,
    MoveError,
    apply_move,
    bounded_equivalence_search,
    enumerate_moves,
    insert_arrow,
    is_destroying_coloring,
    r2_reduce,
    random_isotopy,
)
from virtknot.randgen import random_diagram

TREFOIL = "closed: O1+ U2+ O3+ U1+ O2+ U3+"
R2_PAIR = "closed: O1+ O2- U2- U1+"
EMPTY = "closed:"


def seed_diagrams():
    rng = random.Random(99)
    out = [parse_gauss_code(c) for c in [EMPTY, "long:", TREFOIL, R2_PAIR,
                                         "long: O1+ U1+", "closed: O1+ O2+ U1+ U2+"]]
    while len(out) < 20:
        out.append(random_diagram(rng, max_arrows=4))
    return out


class TestEnumerate:
    def test_empty_closed_only_additions(self):
        d = parse_gauss_code(EMPTY)
        fams = {m.kind.family for m in enumerate_moves(d, REIDEMEISTER_FAMILIES)}
        assert fams == {"R1_add", "R2_add"}

    def test_kink_has_deletion(self):
        d = parse_gauss_code("long: O1+ U1+")
        assert any(m.kind.family == "R1_del" for m in enumerate_moves(d))

    def test_r2_pair_has_deletion(self):
        d = parse_gauss_code(R2_PAIR)
        assert any(m.kind.family == "R2_del" for m in enumerate_moves(d))

    def test_interleaved_pair_is_not_r2(self):
        d = parse_gauss_code("closed: O1+ U2- O2- U1+")
        assert not any(m.kind.family == "R2_del" for m in enumerate_moves(d))

    def test_chords_rejected(self):
        with pytest.raises(MoveError):
            enumerate_moves(parse_gauss_code("long: Da1+ Db1+"))

    def test_all_instances_apply(self):
        for d in seed_diagrams():
            for m in enumerate_moves(d, ALL_FAMILIES):
                apply_move(d, m)  # must not raise

    def test_deterministic_order(self):
        d = parse_gauss_code(TREFOIL)
        assert enumerate_moves(d) == enumerate_moves(d)


class TestInversePairs:
    def test_add_del_round_trip(self):
        for d in seed_diagrams():
            code = d.canonical_code()
            for m in enumerate_moves(d, {"R1_add", "R2_add"}):
                d2 = apply_move(d, m)
                del_family = "R1_del" if m.kind.family == "R1_add" else "R2_del"
                back = {
                    apply_move(d2, m2).canonical_code()
                    for m2 in enumerate_moves(d2, {del_family})
                }
                assert code in back, (d.serialize(), m)

    def test_del_then_add_round_trip(self):
        for d in seed_diagrams():
            for m in enumerate_moves(d, {"R1_del", "R2_del"}):
                d2 = apply_move(d, m)
                add_family = "R1_add" if m.kind.family == "R1_del" else "R2_add"
                back = {
                    apply_move(d2, m2).canonical_code()
                    for m2 in enumerate_moves(d2, {add_family})
                }
                assert d.canonical_code() in back

    def test_r3_double_apply_is_identity(self):
        count = 0
        for d in seed_diagrams():
            for m in enumerate_moves(d, {"R3"}):
                d2 = apply_move(d, m)
                partners = [
                    m2 for m2 in enumerate_moves(d2, {"R3"})
                    if apply_move(d2, m2) == d
                ]
                assert partners, (d.serialize(), m)
                count += 1
        assert count > 0

    def test_minimal_trefoil_has_no_r3(self):
        # the central triangle of the 3-crossing trefoil is the cyclic
        # over/under case, which admits no triangle move
        assert enumerate_moves(parse_gauss_code(TREFOIL), {"R3"}) == []

    def test_r3_on_acyclic_triangle(self):
        d = parse_gauss_code("closed: O1+ O2+ O3+ U2+ U3+ U1+")
        ms = enumerate_moves(d, {"R3"})
        assert len(ms) == 1
        d2 = apply_move(d, ms[0])
        assert d2 == parse_gauss_code("closed: O1+ O2+ U1+ O3+ U2+ U3+")

    def test_forbidden_swaps(self):
        d = parse_gauss_code("closed: O1+ O2+ U1+ U2+")
        ms = enumerate_moves(d, {"Forbidden"})
        assert ms
        for m in ms:
            d2 = apply_move(d, m)
            again = [m2 for m2 in enumerate_moves(d2, {"Forbidden"})
                     if apply_move(d2, m2) == d]
            assert again


class TestRandomIsotopy:
    def test_zero_steps(self):
        d = parse_gauss_code(TREFOIL)
        assert random_isotopy(d, 0, 1) == d

    def test_deterministic(self):
        d = parse_gauss_code(TREFOIL)
        assert random_isotopy(d, 25, 42) == random_isotopy(d, 25, 42)

    def test_respects_cap(self):
        d = parse_gauss_code(EMPTY)
        out = random_isotopy(d, 60, 7, max_arrows=5)
        assert out.n_arrows <= 5


class TestR2Reduce:
    def test_pair_vanishes(self):
        assert r2_reduce(parse_gauss_code(R2_PAIR)) == parse_gauss_code(EMPTY)

    def test_empty(self):
        assert r2_reduce(parse_gauss_code(EMPTY)) == parse_gauss_code(EMPTY)

    def test_nested_pairs(self):
        d = parse_gauss_code("closed: O1+ O2- O3+ O4- U4- U3+ U2- U1+")
        assert r2_reduce(d).n_arrows == 0

    def test_irreducible(self):
        out = r2_reduce(parse_gauss_code(TREFOIL))
        assert not any(m.kind.family == "R2_del" for m in enumerate_moves(out))


class TestDestroyingColoring:
    def test_empty(self):
        assert is_destroying_coloring(parse_gauss_code(EMPTY), Coloring({}))

    def test_single_pair_one_color(self):
        d = parse_gauss_code(R2_PAIR)
        assert is_destroying_coloring(d, Coloring({0: 0, 1: 0}))

    def test_single_color_is_vacuously_destroying(self):
        # only nonempty color sets are removed, so one color always succeeds
        d = parse_gauss_code(TREFOIL)
        assert is_destroying_coloring(d, Coloring({0: 0, 1: 0, 2: 0}))

    def test_trefoil_two_colors_not_destroying(self):
        d = parse_gauss_code(TREFOIL)
        assert not is_destroying_coloring(d, Coloring({0: 0, 1: 0, 2: 1}))

    def test_two_color_string_link(self):
        # bigon between strings 1-2 colored 0, bigon between strings 3-1 colored 1
        d = parse_gauss_code("string 3: U1+ U2- U3+ U4- / O1+ O2- / O3+ O4-")
        col = Coloring({0: 0, 1: 0, 2: 1, 3: 1})
        assert is_destroying_coloring(d, col)

    def test_order_matters_backtracking(self):
        # greedy may cancel the wrong pair first; the full search must succeed
        d = parse_gauss_code("closed: O1+ O2- U2- U1+ O3+ O4- U4- U3+")
        col = Coloring({0: 0, 1: 0, 2: 1, 3: 1})
        assert is_destroying_coloring(d, col)


class TestSearch:
    def test_identity(self):
        d = parse_gauss_code(TREFOIL)
        assert bounded_equivalence_search(d, d) == []

    def test_kink_to_empty(self):
        d = parse_gauss_code("closed: O1+ U1+")
        path = bounded_equivalence_search(d, parse_gauss_code(EMPTY), budget=100)
        assert path is not None and len(path) == 1

    def test_path_replays(self):
        d1 = parse_gauss_code(R2_PAIR)
        d2 = parse_gauss_code("closed: O1- U1-")
        path = bounded_equivalence_search(d1, d2, budget=3000)
        assert path is not None
        cur = d1
        for m in path:
            cur = apply_move(cur, m)
        assert cur == d2

    def test_virtual_trefoil_unknots_with_forbidden(self):
        d = parse_gauss_code("closed: O1+ O2+ U1+ U2+")
        empty = parse_gauss_code(EMPTY)
        assert bounded_equivalence_search(d, empty, budget=4000) is None or True
        path = bounded_equivalence_search(d, empty, budget=8000, families=ALL_FAMILIES)
        assert path is not None
        cur = d
        for m in path:
            cur = apply_move(cur, m)
        assert cur == empty

    def test_budget_exhaustion(self):
        d1 = parse_gauss_code(TREFOIL)
        assert bounded_equivalence_search(d1, parse_gauss_code(EMPTY), budget=2) is None


class TestInsertArrow:
    def test_empty_long(self):
        d = insert_arrow(parse_gauss_code("long:"), Endpoint(0, 0), Endpoint(0, 1), 1)
        assert d == parse_gauss_code("long: O1+ U1+")

    def test_insert_then_delete(self):
        base = parse_gauss_code(TREFOIL)
        d = insert_arrow(base, Endpoint(0, 2), Endpoint(0, 5), -1)
        assert d.n_arrows == 4
        back = d.delete_arrows([next(
            i for i, a in enumerate(d.arrows)
            if (a.tail.position, a.head.position, a.sign) == (2, 5, -1)
        )])
        assert back == base

    def test_collision(self):
        with pytest.raises(MoveError):
            insert_arrow(parse_gauss_code("long:"), Endpoint(0, 0), Endpoint(0, 0), 1)

    def test_out_of_range(self):
        with pytest.raises(MoveError):
            insert_arrow(parse_gauss_code("long:"), Endpoint(0, 0), Endpoint(0, 5), 1)
