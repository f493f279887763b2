"""Move pattern tables, derived and stored as auditable data.

The triangle-move (R3) rows are generated from an explicit geometric model:
three oriented lines in the plane with a strict height order.  Every legal
oriented R3 arises this way, the two cyclic over/under triangles never do.
Kink (R1) and bigon (R2) rows are short enough to state directly; the two
forbidden moves exchange adjacent tails or adjacent heads.

The generated table ships as ``data/move_tables.json``; a regression test
regenerates it and compares, so the file is the audit point.
"""

from __future__ import annotations

import json
from importlib import resources
from itertools import permutations, product

from .diagrams import STRING, GaussDiagram, Underlying

__all__ = [
    "derive_r3_rows",
    "r1_rows",
    "r2_rows",
    "forbidden_rows",
    "build_move_tables",
    "load_move_tables",
    "unlabeled_code",
    "fragment_code",
]


def unlabeled_code(diagram: GaussDiagram) -> str:
    """Canonical code minimized over component relabelings."""
    comps = diagram.to_tokens()
    best = None
    for perm in permutations(range(len(comps))):
        d = GaussDiagram.from_tokens(diagram.underlying, [comps[i] for i in perm])
        code = d.canonical_code()
        if best is None or code < best:
            best = code
    return best.decode()


def fragment_code(pairs) -> str:
    """Unlabeled code of a local fragment given as component token lists."""
    d = GaussDiagram.from_tokens(Underlying(STRING, len(pairs)), [list(p) for p in pairs])
    return unlabeled_code(d)


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def derive_r3_rows():
    """All oriented triangle moves from the geometric model.

    Strand A runs along y=0, B along x=0, C along x+y=1.  Crossing order
    along each strand follows its orientation; the over strand at each
    crossing is the higher one; writhe = det(direction_over, direction_under).
    The move swaps the two adjacent ends on all three strands at once.
    """
    rows = {}
    strands = ("A", "B", "C")
    crossings = {"AB": ("A", "B"), "AC": ("A", "C"), "BC": ("B", "C")}
    base_order = {  # crossing order along each strand for orientation +1
        "A": ("AB", "AC"),
        "B": ("AB", "BC"),
        "C": ("BC", "AC"),
    }
    for oa, ob, oc in product((1, -1), repeat=3):
        orient = {"A": oa, "B": ob, "C": oc}
        w = {"A": (oa, 0), "B": (0, ob), "C": (oc, -oc)}
        for heights in permutations((0, 1, 2)):
            h = dict(zip(strands, heights))
            sign = {}
            over = {}
            for c, (x, y) in crossings.items():
                over[c] = x if h[x] > h[y] else y
                under = y if over[c] == x else x
                sign[c] = _det(w[over[c]], w[under])
            before, after = [], []
            for s in strands:
                order = base_order[s] if orient[s] > 0 else tuple(reversed(base_order[s]))
                arc = tuple(
                    ("O" if over[c] == s else "U", c, sign[c]) for c in order
                )
                before.append(arc)
                after.append(tuple(reversed(arc)))
            b_code, a_code = fragment_code(before), fragment_code(after)
            rows.setdefault(b_code, {"before": b_code, "after": a_code})
    out = sorted(rows.values(), key=lambda r: r["before"])
    # 8 moves, each stored in both directions
    if len(out) != 16:
        raise RuntimeError(f"expected 16 triangle rows (8 inverse pairs), derived {len(out)}")
    partner = {r["before"]: r["after"] for r in out}
    if set(partner.values()) != set(partner) or any(
        partner[partner[b]] != b or partner[b] == b for b in partner
    ):
        raise RuntimeError("triangle rows do not pair into 8 mutually inverse moves")
    return out


def r1_rows():
    """Kink patterns: adjacent ends of one arrow, both token orders, both signs."""
    return [
        {"order": list(order), "sign": sign}
        for order in (("O", "U"), ("U", "O"))
        for sign in (1, -1)
    ]


def r2_rows():
    """Bigon patterns: adjacent tails (a, b) on one arc, adjacent heads on
    another, opposite signs.  head_order 'same' is the parallel bigon
    (heads in order a, b), 'reversed' the antiparallel one."""
    return [
        {"head_order": ho, "first_sign": sign}
        for ho in ("same", "reversed")
        for sign in (1, -1)
    ]


def forbidden_rows():
    return [{"roles": "tails"}, {"roles": "heads"}]


def build_move_tables() -> dict:
    return {
        "version": 1,
        "r1": r1_rows(),
        "r2": r2_rows(),
        "r3": derive_r3_rows(),
        "forbidden": forbidden_rows(),
    }


def load_move_tables() -> dict:
    with resources.files("virtknot.data").joinpath("move_tables.json").open() as f:
        return json.load(f)


def _regenerate(path: str) -> None:
    with open(path, "w") as f:
        json.dump(build_move_tables(), f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":  # pragma: no cover
    import sys

    _regenerate(sys.argv[1] if len(sys.argv) > 1 else "src/virtknot/data/move_tables.json")
