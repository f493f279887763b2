"""The rewriting system on Gauss diagrams.

Kink moves (R1), bigon moves (R2), triangle moves (R3) and the two
forbidden moves, all as slot surgery on token lists.  Instances are
enumerated deterministically; applying a stale instance raises MoveError.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .diagrams import Endpoint, GaussDiagram
from .tables import fragment_code, load_move_tables

__all__ = [
    "MoveKind",
    "MoveInstance",
    "MoveError",
    "Coloring",
    "REIDEMEISTER_FAMILIES",
    "ALL_FAMILIES",
    "enumerate_moves",
    "apply_move",
    "random_isotopy",
    "r2_reduce",
    "is_destroying_coloring",
    "bounded_equivalence_search",
    "insert_arrow",
]

R1_ADD, R1_DEL = "R1_add", "R1_del"
R2_ADD, R2_DEL = "R2_add", "R2_del"
R3 = "R3"
FORBIDDEN = "Forbidden"

REIDEMEISTER_FAMILIES = frozenset({R1_ADD, R1_DEL, R2_ADD, R2_DEL, R3})
ALL_FAMILIES = REIDEMEISTER_FAMILIES | {FORBIDDEN}

_TABLES = None


def _tables():
    global _TABLES
    if _TABLES is None:
        _TABLES = load_move_tables()
    return _TABLES


def set_move_tables(tables: dict | None) -> None:
    """Override the move tables (verification uses this as a negative control)."""
    global _TABLES
    _TABLES = tables


class MoveError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class MoveKind:
    family: str
    variant: int = 0


@dataclass(frozen=True, order=True)
class MoveInstance:
    kind: MoveKind
    site: tuple[Endpoint, ...]
    params: tuple = ()


@dataclass(frozen=True)
class Coloring:
    color: dict[int, int] = field(default_factory=dict)

    def classes(self) -> set[int]:
        return set(self.color.values())


# -- adjacency helpers ---------------------------------------------------


def _adjacent_pairs(diagram: GaussDiagram):
    """(component, slot_i, slot_j, token_i, token_j) for consecutive slots,
    including the wraparound pair on circular components."""
    comps = diagram.to_tokens()
    circular = diagram.underlying.circular
    out = []
    for comp, tokens in enumerate(comps):
        m = len(tokens)
        for i in range(m - 1):
            out.append((comp, i, i + 1, tokens[i], tokens[i + 1]))
        if circular and m >= 2:
            out.append((comp, m - 1, 0, tokens[m - 1], tokens[0]))
    return out


def _gaps(diagram: GaussDiagram):
    sizes = diagram.component_sizes()
    out = []
    for comp, m in enumerate(sizes):
        limit = max(m, 1) if diagram.underlying.circular else m + 1
        out.extend(Endpoint(comp, g) for g in range(limit))
    return out


def _require_chord_free(diagram: GaussDiagram):
    if diagram.n_chords:
        raise MoveError("moves operate on chord-free diagrams")


# -- enumeration ----------------------------------------------------------


def enumerate_moves(diagram: GaussDiagram, families=REIDEMEISTER_FAMILIES) -> list[MoveInstance]:
    """Every applicable instance of the requested families, sorted."""
    _require_chord_free(diagram)
    bad = set(families) - ALL_FAMILIES
    if bad:
        raise MoveError(f"unknown move families {sorted(bad)}")
    tables = _tables()
    out: list[MoveInstance] = []
    pairs = _adjacent_pairs(diagram)

    if R1_DEL in families:
        for comp, i, j, (r1, k1, s1), (r2, k2, _s2) in pairs:
            if k1 == k2:
                for v, row in enumerate(tables["r1"]):
                    if row["order"] == [r1, r2] and row["sign"] == s1:
                        out.append(MoveInstance(MoveKind(R1_DEL, v),
                                                (Endpoint(comp, i), Endpoint(comp, j))))

    if R1_ADD in families:
        for gap in _gaps(diagram):
            for v in range(len(tables["r1"])):
                out.append(MoveInstance(MoveKind(R1_ADD, v), (gap,)))

    if R2_DEL in families:
        tail_pairs = [
            (comp, i, j, k1, k2, s1)
            for comp, i, j, (r1, k1, s1), (r2, k2, _s2) in pairs
            if r1 == "O" and r2 == "O"
        ]
        head_pairs = [
            (comp, i, j, k1, k2)
            for comp, i, j, (r1, k1, _s1), (r2, k2, _s2) in pairs
            if r1 == "U" and r2 == "U"
        ]
        for tcomp, ti, tj, ka, kb, sa in tail_pairs:
            for hcomp, hi, hj, ha, hb in head_pairs:
                if {ka, kb} != {ha, hb}:
                    continue
                slots = {(tcomp, ti), (tcomp, tj), (hcomp, hi), (hcomp, hj)}
                if len(slots) != 4:
                    continue
                order = "same" if (ha, hb) == (ka, kb) else "reversed"
                sb = diagram.arrows[kb[1]].sign
                if sb != -sa:
                    continue
                for v, row in enumerate(tables["r2"]):
                    if row["head_order"] == order and row["first_sign"] == sa:
                        out.append(MoveInstance(
                            MoveKind(R2_DEL, v),
                            (Endpoint(tcomp, ti), Endpoint(tcomp, tj),
                             Endpoint(hcomp, hi), Endpoint(hcomp, hj))))

    if R2_ADD in families:
        gaps = _gaps(diagram)
        for g1 in gaps:
            for g2 in gaps:
                for v in range(len(tables["r2"])):
                    out.append(MoveInstance(MoveKind(R2_ADD, v), (g1, g2), ("TH",)))
                    if g1 == g2:
                        out.append(MoveInstance(MoveKind(R2_ADD, v), (g1, g2), ("HT",)))

    if R3 in families:
        out.extend(_enumerate_r3(diagram, pairs, tables))

    if FORBIDDEN in families:
        for comp, i, j, (r1, _k1, _s1), (r2, _k2, _s2) in pairs:
            if r1 == "O" and r2 == "O":
                out.append(MoveInstance(MoveKind(FORBIDDEN, 0),
                                        (Endpoint(comp, i), Endpoint(comp, j))))
            elif r1 == "U" and r2 == "U":
                out.append(MoveInstance(MoveKind(FORBIDDEN, 1),
                                        (Endpoint(comp, i), Endpoint(comp, j))))

    return sorted(out)


def _enumerate_r3(diagram, pairs, tables):
    by_arrows: dict[frozenset, list] = {}
    for comp, i, j, (r1, k1, s1), (r2, k2, s2) in pairs:
        if k1 != k2 and k1[0] == "A" and k2[0] == "A":
            by_arrows.setdefault(frozenset((k1, k2)), []).append(
                (comp, i, j, (r1, k1, s1), (r2, k2, s2)))
    before_codes = {row["before"]: v for v, row in enumerate(tables["r3"])}
    out = []
    arrow_sets = sorted(by_arrows, key=sorted)
    for idx1 in range(len(arrow_sets)):
        for idx2 in range(idx1 + 1, len(arrow_sets)):
            third = arrow_sets[idx1] ^ arrow_sets[idx2]
            if len(third) != 2 or third not in by_arrows:
                continue
            key3 = sorted([arrow_sets[idx1], arrow_sets[idx2], third], key=sorted)
            if key3[2] != third:
                continue  # visit each triple once, with `third` largest
            for p1 in by_arrows[key3[0]]:
                for p2 in by_arrows[key3[1]]:
                    for p3 in by_arrows[key3[2]]:
                        trio = (p1, p2, p3)
                        slots = {(p[0], p[1]) for p in trio} | {(p[0], p[2]) for p in trio}
                        if len(slots) != 6:
                            continue
                        frag = fragment_code([(p[3], p[4]) for p in trio])
                        v = before_codes.get(frag)
                        if v is None:
                            continue
                        site = []
                        for p in sorted(trio, key=lambda p: (p[0], p[1])):
                            site += [Endpoint(p[0], p[1]), Endpoint(p[0], p[2])]
                        out.append(MoveInstance(MoveKind(R3, v), tuple(site)))
    return out


# -- application ----------------------------------------------------------


def _token_at(comps, e: Endpoint):
    try:
        return comps[e.component][e.position]
    except IndexError:
        raise MoveError(f"stale site: no slot {e}") from None


def _fresh_key(comps):
    n = 0
    for tokens in comps:
        for _r, key, _s in tokens:
            if key[0] == "N":
                n = max(n, key[1] + 1)
    return ("N", n)


def apply_move(diagram: GaussDiagram, move: MoveInstance) -> GaussDiagram:
    """Rewrite the diagram by one move instance; validates the site first."""
    _require_chord_free(diagram)
    tables = _tables()
    comps = diagram.to_tokens()
    family, variant, site = move.kind.family, move.kind.variant, move.site

    if family == R1_DEL:
        e1, e2 = site
        t1, t2 = _token_at(comps, e1), _token_at(comps, e2)
        row = tables["r1"][variant]
        if t1[1] != t2[1] or [t1[0], t2[0]] != row["order"] or t1[2] != row["sign"]:
            raise MoveError("stale site for kink deletion")
        _delete_slots(comps, [e1, e2])

    elif family == R1_ADD:
        (gap,) = site
        row = tables["r1"][variant]
        key = _fresh_key(comps)
        block = [(row["order"][0], key, row["sign"]), (row["order"][1], key, row["sign"])]
        _insert_blocks(comps, diagram, [(gap, block)])

    elif family == R2_DEL:
        e1, e2, e3, e4 = site
        toks = [_token_at(comps, e) for e in site]
        row = tables["r2"][variant]
        ka, kb = toks[0][1], toks[1][1]
        heads = (toks[2][1], toks[3][1])
        expect = (ka, kb) if row["head_order"] == "same" else (kb, ka)
        if (
            [t[0] for t in toks] != ["O", "O", "U", "U"]
            or heads != expect
            or toks[0][2] != row["first_sign"]
            or toks[1][2] != -row["first_sign"]
        ):
            raise MoveError("stale site for bigon deletion")
        _delete_slots(comps, list(site))

    elif family == R2_ADD:
        g1, g2 = site
        row = tables["r2"][variant]
        ka, kb = _fresh_key(comps), None
        kb = (ka[0], ka[1] + 1)
        s = row["first_sign"]
        tail_block = [("O", ka, s), ("O", kb, -s)]
        if row["head_order"] == "same":
            head_block = [("U", ka, s), ("U", kb, -s)]
        else:
            head_block = [("U", kb, -s), ("U", ka, s)]
        order = move.params[0] if move.params else "TH"
        if order == "TH":
            _insert_blocks(comps, diagram, [(g1, tail_block), (g2, head_block)])
        else:
            _insert_blocks(comps, diagram, [(g1, head_block), (g2, tail_block)])

    elif family == R3:
        pairs = [(site[0], site[1]), (site[2], site[3]), (site[4], site[5])]
        frag = fragment_code(
            [(_token_at(comps, a), _token_at(comps, b)) for a, b in pairs]
        )
        if tables["r3"][variant]["before"] != frag:
            raise MoveError("stale site for triangle move")
        for a, b in pairs:
            comps[a.component][a.position], comps[b.component][b.position] = (
                comps[b.component][b.position],
                comps[a.component][a.position],
            )

    elif family == FORBIDDEN:
        e1, e2 = site
        t1, t2 = _token_at(comps, e1), _token_at(comps, e2)
        want = "O" if variant == 0 else "U"
        if t1[0] != want or t2[0] != want or t1[1] == t2[1]:
            raise MoveError("stale site for forbidden move")
        comps[e1.component][e1.position], comps[e2.component][e2.position] = t2, t1

    else:
        raise MoveError(f"unknown move family {family!r}")

    return GaussDiagram.from_tokens(diagram.underlying, comps)


def _delete_slots(comps, endpoints):
    for comp, group in _group_by_component(endpoints).items():
        for pos in sorted(group, reverse=True):
            del comps[comp][pos]


def _insert_blocks(comps, diagram, placements):
    """Insert token blocks at gaps; gaps index the original token lists.
    Blocks placed at the same gap keep their order in `placements`."""
    sizes = diagram.component_sizes()
    merged: dict[Endpoint, list] = {}
    for gap, block in placements:
        limit = max(sizes[gap.component], 1) if diagram.underlying.circular else sizes[gap.component] + 1
        if not (0 <= gap.position < limit):
            raise MoveError(f"gap {gap} out of range")
        merged.setdefault(gap, []).extend(block)
    # insert later gaps first so earlier indices stay valid
    for gap in sorted(merged, reverse=True):
        comps[gap.component][gap.position:gap.position] = merged[gap]
    return comps


def _group_by_component(endpoints):
    groups: dict[int, list[int]] = {}
    for e in endpoints:
        groups.setdefault(e.component, []).append(e.position)
    return groups


# -- derived operations ----------------------------------------------------


def insert_arrow(diagram: GaussDiagram, tail: Endpoint, head: Endpoint, sign: int) -> GaussDiagram:
    """Insert one arrow whose ends land at the given final positions."""
    if sign not in (1, -1):
        raise MoveError("sign must be +1 or -1")
    if tail == head:
        raise MoveError("slot collision: tail and head coincide")
    comps = diagram.to_tokens()
    key = _fresh_key(comps)
    new_ends = {tail: ("O", key, sign), head: ("U", key, sign)}
    sizes = diagram.component_sizes()
    out = []
    for comp, tokens in enumerate(comps):
        here = {e.position: tok for e, tok in new_ends.items() if e.component == comp}
        n = sizes[comp] + len(here)
        if any(not 0 <= p < n for p in here):
            raise MoveError("insertion position out of range")
        row, old = [], iter(tokens)
        for p in range(n):
            row.append(here[p] if p in here else next(old))
        out.append(row)
    if tail.component >= len(comps) or head.component >= len(comps):
        raise MoveError("no such component")
    return GaussDiagram.from_tokens(diagram.underlying, out)


def random_isotopy(diagram: GaussDiagram, steps: int, seed: int,
                   families=REIDEMEISTER_FAMILIES, max_arrows: int | None = None) -> GaussDiagram:
    """Apply `steps` uniformly chosen applicable moves; reproducible per seed."""
    if steps < 0:
        raise MoveError("steps must be >= 0")
    rng = random.Random(seed)
    if max_arrows is None:
        max_arrows = diagram.n_arrows + 4
    d = diagram
    adds = {R1_ADD, R2_ADD}
    for _ in range(steps):
        fams = set(families)
        if d.n_arrows + 2 > max_arrows:
            fams -= adds
        instances = enumerate_moves(d, fams)
        if not instances:
            break
        d = apply_move(d, rng.choice(instances))
    return d


def r2_reduce(diagram: GaussDiagram) -> GaussDiagram:
    """Greedily delete bigons until none applies."""
    d = diagram
    while True:
        instances = enumerate_moves(d, {R2_DEL})
        if not instances:
            return d
        d = apply_move(d, instances[0])


def _r2_removable(diagram: GaussDiagram, memo: dict) -> bool:
    """Backtracking check that all arrows cancel by bigon deletions alone."""
    if diagram.n_arrows == 0:
        return True
    key = diagram.canonical_code()
    if key in memo:
        return memo[key]
    memo[key] = False  # cycle guard; bigon deletion shrinks, so no real cycles
    result = False
    for m in enumerate_moves(diagram, {R2_DEL}):
        if _r2_removable(apply_move(diagram, m), memo):
            result = True
            break
    memo[key] = result
    return result


def is_destroying_coloring(diagram: GaussDiagram, coloring: Coloring) -> bool:
    """A coloring is destroying when deleting the arrows of every nonempty
    set of colors leaves a diagram whose arrows all cancel by bigon moves."""
    _require_chord_free(diagram)
    if set(coloring.color) != set(range(diagram.n_arrows)):
        raise MoveError("coloring must assign a color to every arrow")
    classes = sorted(coloring.classes())
    memo: dict = {}
    for mask in range(1, 1 << len(classes)):
        drop = {classes[i] for i in range(len(classes)) if (mask >> i) & 1}
        sub = diagram.delete_arrows(
            i for i in range(diagram.n_arrows) if coloring.color[i] in drop
        )
        fast = r2_reduce(sub)
        if fast.n_arrows and not _r2_removable(sub, memo):
            return False
    return True


# -- bounded equivalence search --------------------------------------------

_INVERSE_FAMILY = {
    R1_ADD: R1_DEL, R1_DEL: R1_ADD,
    R2_ADD: R2_DEL, R2_DEL: R2_ADD,
    R3: R3, FORBIDDEN: FORBIDDEN,
}


def _invert_instance(before: GaussDiagram, move: MoveInstance, after: GaussDiagram) -> MoveInstance:
    target = before.canonical_code()
    fam = _INVERSE_FAMILY[move.kind.family]
    for m in enumerate_moves(after, {fam}):
        if apply_move(after, m).canonical_code() == target:
            return m
    raise MoveError("could not invert move instance")


def bounded_equivalence_search(
    d1: GaussDiagram,
    d2: GaussDiagram,
    budget: int = 10000,
    families=REIDEMEISTER_FAMILIES,
    max_arrows: int | None = None,
) -> list[MoveInstance] | None:
    """Bidirectional breadth-first search for a move path d1 -> d2.

    Returns the instance list (replayable from d1) or None once `budget`
    node expansions are exhausted.  Absence is not an inequivalence proof.
    """
    if d1.underlying != d2.underlying:
        raise MoveError("diagrams must share the underlying kind")
    if max_arrows is None:
        max_arrows = max(d1.n_arrows, d2.n_arrows) + 2
    c1, c2 = d1.canonical_code(), d2.canonical_code()
    if c1 == c2:
        return []

    sides = [
        {"frontier": deque([d1]), "seen": {c1: None}},
        {"frontier": deque([d2]), "seen": {c2: None}},
    ]
    expansions = 0

    def expand(side_idx):
        nonlocal expansions
        side, other = sides[side_idx], sides[1 - side_idx]
        if not side["frontier"]:
            return None
        d = side["frontier"].popleft()
        expansions += 1
        fams = set(families)
        if d.n_arrows + 2 > max_arrows:
            fams -= {R1_ADD, R2_ADD}
        for m in enumerate_moves(d, fams):
            nd = apply_move(d, m)
            code = nd.canonical_code()
            if code in side["seen"]:
                continue
            side["seen"][code] = (d, m, nd)
            if code in other["seen"]:
                return code
            side["frontier"].append(nd)
        return None

    meet = None
    while expansions < budget and (sides[0]["frontier"] or sides[1]["frontier"]):
        for idx in (0, 1):
            meet = expand(idx)
            if meet is not None:
                break
        if meet is not None:
            break
    if meet is None:
        return None

    forward = []
    node = sides[0]["seen"][meet]
    while node is not None:
        parent, m, nd = node
        forward.append(m)
        node = sides[0]["seen"][parent.canonical_code()]
    forward.reverse()

    backward = []
    node = sides[1]["seen"][meet]
    while node is not None:
        parent, m, nd = node
        backward.append(_invert_instance(parent, m, nd))
        node = sides[1]["seen"][parent.canonical_code()]

    return forward + backward
