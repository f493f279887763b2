"""Planar realizability of chord-free Gauss diagrams.

A closed diagram is realizable iff it is the Gauss diagram of a classical
knot diagram on the oriented sphere.  The directions and writhe signs pin
down the counterclockwise order of the four edge-ends at every crossing,
so realizability reduces to one Euler-characteristic check of the forced
rotation system.  A long diagram is realizable iff its closure is.

``realizable_by_embedding_search`` is the independent reference path used
by the verification suites: it enumerates all transversal rotation systems,
keeps the genus-zero ones, and checks the input states against each
embedded curve.
"""

from __future__ import annotations

from itertools import product

from .diagrams import CLOSED, LONG, GaussDiagram, close_long

__all__ = [
    "is_realizable",
    "interlacement_parity_ok",
    "realizable_by_embedding_search",
]


def _closed_chord_free(diagram: GaussDiagram) -> GaussDiagram:
    if diagram.n_chords:
        raise ValueError("realizability is defined for chord-free diagrams")
    kind = diagram.underlying.kind
    if kind == LONG:
        return close_long(diagram)
    if kind == CLOSED:
        return diagram
    raise ValueError(f"realizability unsupported for underlying kind {kind!r}")


def _interlaces(s1: tuple[int, int], s2: tuple[int, int], n: int) -> bool:
    a, b = s1
    inside = 0
    for x in s2:
        if (x - a) % n < (b - a) % n and x != a:
            inside += 1
    return inside == 1


def interlacement_parity_ok(diagram: GaussDiagram) -> bool:
    """Necessary condition: every arrow of a realizable closed diagram
    interlaces an even number of arrows."""
    d = _closed_chord_free(diagram)
    n = 2 * d.n_arrows
    spans = [(a.tail.position, a.head.position) for a in d.arrows]
    for i, s1 in enumerate(spans):
        count = sum(
            1 for j, s2 in enumerate(spans) if j != i and _interlaces(s1, s2, n)
        )
        if count % 2:
            return False
    return True


def _count_faces(rotations: dict) -> int:
    """Faces of the oriented map whose ccw rotation at each vertex is given
    as a dart cycle; darts are ("s"|"e", arc_index)."""
    succ = {}
    for cycle in rotations.values():
        k = len(cycle)
        for i, d in enumerate(cycle):
            succ[d] = cycle[(i + 1) % k]

    def alpha(d):
        side, i = d
        return ("e" if side == "s" else "s", i)

    faces = 0
    seen = set()
    for start in succ:
        if start in seen:
            continue
        faces += 1
        d = start
        while d not in seen:
            seen.add(d)
            d = succ[alpha(d)]
    return faces


def _vertex_darts(d: GaussDiagram):
    """Per arrow: the four darts (o_in, o_out, u_in, u_out)."""
    n = 2 * d.n_arrows
    out = []
    for a in d.arrows:
        t, h = a.tail.position, a.head.position
        out.append(
            (
                ("e", (t - 1) % n),
                ("s", t),
                ("e", (h - 1) % n),
                ("s", h),
            )
        )
    return out


def is_realizable(diagram: GaussDiagram) -> bool:
    """True iff the diagram is the Gauss diagram of a classical knot diagram."""
    d = _closed_chord_free(diagram)
    if d.n_arrows == 0:
        return True
    if not d.is_signed():
        raise ValueError("realizability needs fully signed arrows")
    if not interlacement_parity_ok(d):
        return False
    rotations = {}
    for i, (o_in, o_out, u_in, u_out) in enumerate(_vertex_darts(d)):
        if d.arrows[i].sign > 0:
            rotations[i] = (o_out, u_out, o_in, u_in)
        else:
            rotations[i] = (o_out, u_in, o_in, u_out)
    # V - E + F = 2 with V = n, E = 2n.
    return _count_faces(rotations) == d.n_arrows + 2


def realizable_by_embedding_search(diagram: GaussDiagram) -> bool:
    """Reference implementation: brute-force over all transversal rotation
    systems of the underlying curve, keep spherical ones, compare states."""
    d = _closed_chord_free(diagram)
    n_arr = d.n_arrows
    if n_arr == 0:
        return True
    if not d.is_signed():
        raise ValueError("realizability needs fully signed arrows")
    n = 2 * n_arr
    passages = []  # per arrow: (first_slot, second_slot, tail_is_first)
    for a in d.arrows:
        t, h = a.tail.position, a.head.position
        first, second = (t, h) if t < h else (h, t)
        passages.append((first, second, t < h))

    for chirality in product((1, -1), repeat=n_arr):
        rotations = {}
        for i, (first, second, _) in enumerate(passages):
            p_in = ("e", (first - 1) % n)
            p_out = ("s", first)
            q_in = ("e", (second - 1) % n)
            q_out = ("s", second)
            if chirality[i] > 0:  # det[w_first, w_second] = +1
                rotations[i] = (p_out, q_out, p_in, q_in)
            else:
                rotations[i] = (p_out, q_in, p_in, q_out)
        if _count_faces(rotations) != n_arr + 2:
            continue
        ok = True
        for i, (first, second, tail_first) in enumerate(passages):
            intrinsic = chirality[i]
            want = intrinsic if tail_first else -intrinsic
            if d.arrows[i].sign != want:
                ok = False
                break
        if ok:
            return True
    return False
