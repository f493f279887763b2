"""Concrete invariant evaluators.

Linking numbers, the two degree-2 long invariants and the degree-3 closed
invariant (pattern pairings), upper/lower Wirtinger-style groups with
longitudes and quandles, finite group/quandle homomorphism counting, and
the semi-virtual finite-type defect.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .algebra import element_from_terms, pairing
from .diagrams import CLOSED, LONG, FormalSum, GaussDiagram, reverse_arrows
from .patterns import load_patterns

__all__ = [
    "GroupPresentation",
    "QuandlePresentation",
    "FiniteGroup",
    "lk_over",
    "v21",
    "v22",
    "v3_closed",
    "v21_element",
    "v22_element",
    "v3_element",
    "upper_group",
    "lower_group",
    "longitude",
    "quandle",
    "count_homs",
    "count_quandle_homs",
    "abelianization_rank",
    "symmetric_group",
    "cyclic_group",
    "dihedral_quandle",
    "finite_type_defect",
    "casson_oracle",
]

_PATTERNS: dict[str, FormalSum] = {}


def _pattern(name: str) -> FormalSum:
    if name not in _PATTERNS:
        data = load_patterns()
        for key in ("v21", "v22", "v3_closed"):
            _PATTERNS[key] = element_from_terms(data[key])
    return _PATTERNS[name]


def v21_element() -> FormalSum:
    return _pattern("v21")


def v22_element() -> FormalSum:
    return _pattern("v22")


def v3_element() -> FormalSum:
    return _pattern("v3_closed")


# -- linking numbers ----------------------------------------------------------


def lk_over(diagram: GaussDiagram, i: int, j: int) -> int:
    """Sum of signs of arrows whose over branch lies on component i and
    under branch on component j (components are 1-based)."""
    k = diagram.underlying.count
    if not (1 <= i <= k and 1 <= j <= k) or i == j:
        raise ValueError(f"bad component indices ({i}, {j}) for {k} components")
    if diagram.underlying.kind not in ("link", "string"):
        raise ValueError("linking numbers need a link or string link")
    return sum(
        a.sign
        for a in diagram.arrows
        if a.tail.component == i - 1 and a.head.component == j - 1
    )


# -- degree 2 and 3 pattern invariants ----------------------------------------


def _require(diagram: GaussDiagram, kind: str, op: str):
    if diagram.underlying.kind != kind:
        raise ValueError(f"{op} is defined for {kind} diagrams")
    if diagram.n_chords:
        raise ValueError(f"{op} is defined for chord-free diagrams")


def v21(diagram: GaussDiagram) -> int:
    _require(diagram, LONG, "v21")
    return pairing(_pattern("v21"), diagram)


def v22(diagram: GaussDiagram) -> int:
    _require(diagram, LONG, "v22")
    return pairing(_pattern("v22"), diagram)


def v3_closed(diagram: GaussDiagram) -> int:
    _require(diagram, CLOSED, "v3_closed")
    return pairing(_pattern("v3_closed"), diagram)


# -- groups, longitudes, quandles ---------------------------------------------


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[tuple[int, int], ...], ...]  # words of (gen, exp)


@dataclass(frozen=True)
class QuandlePresentation:
    generators: tuple[str, ...]
    relations: tuple[tuple[int, int, int, int], ...]  # (c, a, eps, b): c = a >^eps b


def _arcs(diagram: GaussDiagram):
    """Cut every component at the arrowheads.  Returns (names, arc_of_slot,
    arc_end_before_head, arc_start_after_head) with arcs indexed globally."""
    comps = diagram.to_tokens()
    names: list[str] = []
    arc_of_slot: dict = {}
    before_head: dict = {}
    after_head: dict = {}
    for comp, tokens in enumerate(comps):
        heads = [p for p, (role, _k, _s) in enumerate(tokens) if role == "U"]
        circular = diagram.underlying.circular
        if not heads:
            idx = len(names)
            names.append(f"g{comp}c0")
            for p in range(len(tokens)):
                arc_of_slot[(comp, p)] = idx
            continue
        if circular:
            # arc k runs from just after heads[k-1] to heads[k]
            base = len(names)
            for k in range(len(heads)):
                names.append(f"g{comp}c{k}")
            for k, h in enumerate(heads):
                before_head[(comp, h)] = base + k
                after_head[(comp, h)] = base + (k + 1) % len(heads)
            for p in range(len(tokens)):
                k = 0
                for idx_h, h in enumerate(heads):
                    if p <= h:
                        k = idx_h
                        break
                else:
                    k = 0  # wraps to the first arc
                arc_of_slot[(comp, p)] = base + k
        else:
            # line: one more arc than heads
            base = len(names)
            for k in range(len(heads) + 1):
                names.append(f"g{comp}c{k}")
            for k, h in enumerate(heads):
                before_head[(comp, h)] = base + k
                after_head[(comp, h)] = base + k + 1
            for p in range(len(tokens)):
                k = sum(1 for h in heads if h < p)
                arc_of_slot[(comp, p)] = base + k
    return names, arc_of_slot, before_head, after_head


def upper_group(diagram: GaussDiagram) -> GroupPresentation:
    """One generator per arc between consecutive arrowheads, one relation
    c = a^-e b a^e per arrow (a carries the tail, b ends and c starts at
    the head)."""
    if diagram.n_chords:
        raise ValueError("group presentations need chord-free diagrams")
    names, arc_of, before, after = _arcs(diagram)
    relators = []
    for arrow in diagram.arrows:
        a = arc_of[(arrow.tail.component, arrow.tail.position)]
        h = (arrow.head.component, arrow.head.position)
        b, c = before[h], after[h]
        e = arrow.sign
        relators.append(((c, -1), (a, -e), (b, 1), (a, e)))
    return GroupPresentation(tuple(names), tuple(relators))


def lower_group(diagram: GaussDiagram) -> GroupPresentation:
    return upper_group(reverse_arrows(diagram))


def longitude(diagram: GaussDiagram, base_arc: int = 0):
    """Walk the component containing the base arc and collect a^sign at
    every arrowhead passed, a being the arc carrying that arrow's tail."""
    if diagram.n_chords:
        raise ValueError("longitudes need chord-free diagrams")
    names, arc_of, before, after = _arcs(diagram)
    if not (0 <= base_arc < len(names)):
        raise ValueError(f"no arc {base_arc}")
    comp = None
    starts = 0
    comps = diagram.to_tokens()
    for c in range(len(comps)):
        for p in range(len(comps[c])):
            if arc_of[(c, p)] == base_arc:
                comp = c
                starts = p
                break
        if comp is not None:
            break
    if comp is None:  # arc carries no slots: nothing is passed
        return ()
    tokens = comps[comp]
    m = len(tokens)
    order = (
        [(starts + k) % m for k in range(m)]
        if diagram.underlying.circular
        else list(range(starts, m))
    )
    word = []
    heads_by_slot = {
        (a.head.component, a.head.position): a for a in diagram.arrows
    }
    for p in order:
        arrow = heads_by_slot.get((comp, p))
        if arrow is not None:
            a = arc_of[(arrow.tail.component, arrow.tail.position)]
            word.append((names[a], arrow.sign))
    return tuple(word)


def quandle(diagram: GaussDiagram) -> QuandlePresentation:
    if diagram.n_chords:
        raise ValueError("quandle presentations need chord-free diagrams")
    names, arc_of, before, after = _arcs(diagram)
    relations = []
    for arrow in diagram.arrows:
        a = arc_of[(arrow.tail.component, arrow.tail.position)]
        h = (arrow.head.component, arrow.head.position)
        relations.append((after[h], a, arrow.sign, before[h]))
    return QuandlePresentation(tuple(names), tuple(relations))


# -- homomorphism counting ------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroup:
    """Multiplication table group: elements 0..n-1, identity 0."""

    name: str
    table: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        row = self.table[a]
        return row.index(0)


def symmetric_group(n: int) -> FiniteGroup:
    elems = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(elems)}
    table = tuple(
        tuple(index[tuple(p[q[i]] for i in range(n))] for q in elems) for p in elems
    )
    return FiniteGroup(f"S{n}", table)


def cyclic_group(n: int) -> FiniteGroup:
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(f"Z{n}", table)


def count_homs(presentation: GroupPresentation, group: FiniteGroup,
               max_order: int = 24) -> int:
    """Exact number of assignments generators -> group satisfying all
    relators, by backtracking over the generators."""
    if group.order > max_order:
        raise ValueError(f"target order {group.order} exceeds cap {max_order}")
    gens = len(presentation.generators)
    by_last: dict[int, list] = {}
    for rel in presentation.relators:
        last = max(g for g, _e in rel)
        by_last.setdefault(last, []).append(rel)

    assign = [0] * gens
    count = 0

    def word_value(word):
        v = 0
        for g, e in word:
            x = assign[g] if e > 0 else group.inv(assign[g])
            v = group.mul(v, x)
        return v

    def rec(k):
        nonlocal count
        if k == gens:
            count += 1
            return
        for x in range(group.order):
            assign[k] = x
            if all(word_value(r) == 0 for r in by_last.get(k, ())):
                rec(k + 1)

    rec(0)
    return count


def dihedral_quandle(n: int):
    """Reflections of the n-gon: a >^e b = 2a - b (an involution)."""
    op = tuple(tuple((2 * a - b) % n for b in range(n)) for a in range(n))
    return op


def count_quandle_homs(presentation: QuandlePresentation, op, max_order: int = 24) -> int:
    n = len(op)
    if n > max_order:
        raise ValueError("target quandle too large")
    gens = len(presentation.generators)
    by_last: dict[int, list] = {}
    for rel in presentation.relations:
        c, a, e, b = rel
        by_last.setdefault(max(c, a, b), []).append(rel)
    assign = [0] * gens
    count = 0

    def rec(k):
        nonlocal count
        if k == gens:
            count += 1
            return
        for x in range(n):
            assign[k] = x
            ok = True
            for c, a, e, b in by_last.get(k, ()):
                # dihedral operation is involutory, so e collapses
                if assign[c] != op[assign[a]][assign[b]]:
                    ok = False
                    break
            if ok:
                rec(k + 1)

    rec(0)
    return count


def abelianization_rank(presentation: GroupPresentation) -> int:
    """Free rank of the abelianized presentation (integer row reduction)."""
    from .linalg import rref

    rows = []
    for rel in presentation.relators:
        row: dict[int, int] = {}
        for g, e in rel:
            row[g] = row.get(g, 0) + e
        rows.append(row)
    pivots, _reduced = rref(rows, len(presentation.generators))
    return len(presentation.generators) - len(pivots)


# -- finite type ---------------------------------------------------------------


def finite_type_defect(nu, diagram: GaussDiagram, marked) -> int:
    """Alternating sum of nu over deletions of subsets of the marked arrows;
    vanishes when more arrows are marked than the degree of nu."""
    marked = sorted(set(marked))
    total = 0
    for mask in range(1 << len(marked)):
        chosen = [marked[i] for i in range(len(marked)) if (mask >> i) & 1]
        total += (-1) ** len(chosen) * nu(diagram.delete_arrows(chosen))
    return total


# -- independent degree-2 oracle ------------------------------------------------


def casson_oracle(diagram: GaussDiagram) -> int:
    """Degree-2 invariant of realizable long diagrams via crossing-change
    recursion: descending long diagrams are trivial, and a crossing change
    jumps by the linking number of the two loops at the smoothed crossing."""
    _require(diagram, LONG, "casson_oracle")
    arrows = list(diagram.arrows)
    total = 0
    comps = diagram.to_tokens()
    tokens = list(comps[0])

    def interleave_sum(tokens, key):
        span = [p for p, (r, k, s) in enumerate(tokens) if k == key]
        lo, hi = min(span), max(span)
        seen = {}
        inside = set()
        total = 0
        for p, (r, k, s) in enumerate(tokens):
            if k == key:
                continue
            if lo < p < hi:
                inside.add(k)
        for p, (r, k, s) in enumerate(tokens):
            if k != key and k not in seen:
                seen[k] = s
        val = 0
        for k, s in seen.items():
            ends = [p for p, (r, kk, ss) in enumerate(tokens) if kk == k]
            if sum(1 for p in ends if lo < p < hi) == 1:
                val += s
        return val

    # make the diagram descending from the left by crossing changes
    work = [list(t) for t in [tokens]][0]
    while True:
        first_bad = None
        firsts = {}
        for p, (r, k, s) in enumerate(work):
            if k not in firsts:
                firsts[k] = (p, r)
        for p, (r, k, s) in enumerate(work):
            fp, fr = firsts[k]
            if fp == p and fr == "U":
                first_bad = (p, k, s)
                break
        if first_bad is None:
            break
        p, k, s = first_bad
        half = interleave_sum(work, k)
        if half % 2:
            raise ValueError("odd interleave sum; diagram is not realizable")
        lk = half // 2
        # crossing change: D(+) - D(-) jumps by lk of the smoothing
        total += (lk if s > 0 else -lk)
        work = [
            (("U" if r == "O" else "O") if kk == k else r, kk, -ss if kk == k else ss)
            for (r, kk, ss) in work
        ]
    return total
