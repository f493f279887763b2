"""Derivation of the shipped invariant patterns.

The two degree-2 long invariants are the interleaved two-arrow sign-free
patterns that annihilate the degree-2 relation space; the degree-3 closed
invariant is the primitive generator of the degree-3 functional space
normalized to vanish on the empty diagram.  Derived once, frozen into
``data/patterns.json``, regenerated and compared by a regression test.
"""

from __future__ import annotations

import json
from importlib import resources
from math import gcd

from .algebra import compute_quotient, element_to_terms, expand_signfree
from .diagrams import Arrow, Endpoint, GaussDiagram, Underlying

__all__ = ["build_patterns", "load_patterns", "interleaved_pattern"]


def interleaved_pattern(dir_first: int, dir_second: int) -> GaussDiagram:
    """Two sign-free arrows on a line, ends alternating; directions tell
    whether each arrow points forward (tail first) or backward."""
    u = Underlying("long")
    a = (
        Arrow(Endpoint(0, 0), Endpoint(0, 2), 0)
        if dir_first > 0
        else Arrow(Endpoint(0, 2), Endpoint(0, 0), 0)
    )
    b = (
        Arrow(Endpoint(0, 1), Endpoint(0, 3), 0)
        if dir_second > 0
        else Arrow(Endpoint(0, 3), Endpoint(0, 1), 0)
    )
    return GaussDiagram(u, (a, b))


def _annihilates(element, q) -> bool:
    idx = {code: i for i, code in enumerate(q.basis)}
    vec = {idx[d.canonical_code().decode()]: c for d, c in element.items()}
    return all(
        sum(r.get(i, 0) * v for i, v in vec.items()) == 0 for r in q.relations
    )


def derive_v2_patterns():
    """v21 counts [tail, head', head, tail'] i.e. forward/backward arrows;
    v22 the reversed pair.  Both must annihilate the degree-2 relations."""
    q = compute_quotient(2, Underlying("long"), torsion=False)
    v21 = expand_signfree(interleaved_pattern(1, -1))
    v22 = expand_signfree(interleaved_pattern(-1, 1))
    for name, el in (("v21", v21), ("v22", v22)):
        if not _annihilates(el, q):
            raise RuntimeError(f"{name} pattern fails the relation check")
    return v21, v22


def derive_v3_pattern():
    """Primitive degree-3 closed functional with zero empty-diagram term."""
    q = compute_quotient(3, Underlying("closed"), torsion=False)
    if q.dim_invariants != 2:
        raise RuntimeError("unexpected degree-3 invariant dimension")
    empty_idx = q.basis.index("closed:")
    f1, f2 = q.invariant_basis
    a1, a2 = f1.get(empty_idx, 0), f2.get(empty_idx, 0)
    if a1 == 0:
        vec = dict(f1)
    elif a2 == 0:
        vec = dict(f2)
    else:
        vec = {}
        for i in set(f1) | set(f2):
            c = a2 * f1.get(i, 0) - a1 * f2.get(i, 0)
            if c:
                vec[i] = c
    g = 0
    for c in vec.values():
        g = gcd(g, abs(c))
    vec = {i: c // g for i, c in vec.items()}
    if vec[min(vec)] < 0:
        vec = {i: -c for i, c in vec.items()}
    return sorted((q.basis[i], c) for i, c in vec.items())


def build_patterns() -> dict:
    v21, v22 = derive_v2_patterns()
    return {
        "version": 1,
        "basepoint": "long diagrams are read from the leftmost point of the line",
        "v21": element_to_terms(v21),
        "v22": element_to_terms(v22),
        "v3_closed": derive_v3_pattern(),
    }


def load_patterns() -> dict:
    with resources.files("virtknot.data").joinpath("patterns.json").open() as f:
        return json.load(f)


if __name__ == "__main__":  # pragma: no cover
    import sys

    path = sys.argv[1] if len(sys.argv) > 1 else "src/virtknot/data/patterns.json"
    with open(path, "w") as f:
        json.dump(build_patterns(), f, indent=1, sort_keys=True)
        f.write("\n")
