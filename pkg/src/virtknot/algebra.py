"""The free algebra of arrow diagrams and its truncated quotients.

Arrow diagrams reuse the Gauss diagram combinatorics (the "dashed"
semantics is contextual), so the basis maps i, I, I^-1 act on FormalSums
directly.  Relations of the quotient are generated as differences
I(after) - I(before) over all kink/bigon/triangle move instances on small
host diagrams; truncating to at most n arrows yields the degree-n quotient
whose rational functionals are exactly the invariants of degree <= n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .diagrams import CLOSED, LONG, FormalSum, GaussDiagram, Underlying, parse_gauss_code
from .linalg import nullspace, reduce_vector, rref, smith_invariants
from .moves import R1_ADD, R2_ADD, R3, apply_move, enumerate_moves

__all__ = [
    "CapExceeded",
    "DEFAULT_CAPS",
    "QuotientPresentation",
    "i_map",
    "I_map",
    "I_inverse",
    "pairing",
    "pairing_bruteforce",
    "expand_signfree",
    "truncate",
    "enumerate_arrow_diagrams",
    "generate_relations",
    "compute_quotient",
    "universal_invariant",
    "degree_dimensions",
    "element_from_terms",
    "element_to_terms",
]

DEFAULT_CAPS = {"closed": 4, "long": 3, "link": 3, "string": 3}


class CapExceeded(ValueError):
    pass


def _check_cap(n: int, underlying: Underlying, cap: int | None):
    limit = cap if cap is not None else DEFAULT_CAPS[underlying.kind]
    if n > limit:
        raise CapExceeded(f"degree {n} exceeds cap {limit} for {underlying.kind}")


def _as_sum(x) -> FormalSum:
    return x if isinstance(x, FormalSum) else FormalSum.of(x)


# -- the maps i, I, I^-1 ----------------------------------------------------


def i_map(x) -> FormalSum:
    """Recast solid diagrams as basis arrow diagrams (identity on the data)."""
    return _as_sum(x)


def I_map(x) -> FormalSum:
    """Sum of all subdiagrams of every term; chords persist in each term."""
    out = FormalSum()
    for d, c in _as_sum(x).items():
        n = d.n_arrows
        for mask in range(1 << n):
            out.add(d.delete_arrows(i for i in range(n) if not (mask >> i) & 1), c)
    return out


def I_inverse(x) -> FormalSum:
    """Inverse of I: alternating sum over subdiagrams."""
    out = FormalSum()
    for d, c in _as_sum(x).items():
        n = d.n_arrows
        for mask in range(1 << n):
            dropped = [i for i in range(n) if not (mask >> i) & 1]
            out.add(d.delete_arrows(dropped), c * (-1) ** len(dropped))
    return out


def truncate(x: FormalSum, n: int) -> FormalSum:
    out = FormalSum()
    for d, c in x.items():
        if d.n_arrows <= n:
            out.add(d, c)
    return out


# -- pairing ----------------------------------------------------------------


def pairing(pattern, diagram: GaussDiagram) -> int:
    """<A, D>: weighted count of subdiagrams of D, weight = coefficient of
    the subdiagram in A."""
    A = _as_sum(pattern)
    if not len(A):
        return 0
    max_k = max(t.n_arrows for t in A)
    total = 0
    for k in range(max_k + 1):
        for combo in combinations(range(diagram.n_arrows), k):
            keep = set(combo)
            sub = diagram.delete_arrows(i for i in range(diagram.n_arrows) if i not in keep)
            total += A.coefficient(sub)
    return total


def _structurally_equal(d1: GaussDiagram, d2: GaussDiagram) -> bool:
    """Direct isomorphism test by trying rotations, independent of the
    minimal-code path; used by the brute-force pairing oracle."""
    if d1.underlying != d2.underlying:
        return False
    sizes1, sizes2 = d1.component_sizes(), d2.component_sizes()
    if sizes1 != sizes2:
        return False

    def shape(comps):
        label, out = {}, []
        for tokens in comps:
            row = []
            for role, key, sign in tokens:
                if key not in label:
                    label[key] = (len(label), role)
                base, first_role = label[key]
                if role in ("O", "U"):
                    row.append((role, base, sign))
                else:
                    da = (role == first_role) if first_role in ("Da", "Db") else True
                    row.append(("Da" if role == first_role else "Db", base,
                                sign if first_role == "Da" else -sign))
            out.append(tuple(row))
        return tuple(out)

    target = shape(d2.to_tokens())
    comps1 = d1.to_tokens()
    if d1.underlying.circular:
        from itertools import product as _product

        options = []
        for tokens in comps1:
            n = len(tokens)
            options.append([tokens[k:] + tokens[:k] for k in range(max(n, 1))])
        return any(shape(list(combo)) == target for combo in _product(*options))
    return shape(comps1) == target


def pairing_bruteforce(pattern, diagram: GaussDiagram) -> int:
    """Independent evaluation of <A, D>: enumerate every arrow subset of D
    and compare against each pattern term by explicit isomorphism search."""
    A = _as_sum(pattern)
    total = 0
    n = diagram.n_arrows
    for mask in range(1 << n):
        sub = diagram.delete_arrows(i for i in range(n) if not (mask >> i) & 1)
        for t, c in A.items():
            if t.n_arrows == sub.n_arrows and _structurally_equal(sub, t):
                total += c
    return total


def expand_signfree(pattern: GaussDiagram) -> FormalSum:
    """Resolve wildcard (sign 0) arrows into both signs; a term with k
    negative resolved signs carries coefficient (-1)^k."""
    wild = [i for i, a in enumerate(pattern.arrows) if a.sign == 0]
    out = FormalSum()
    comps = pattern.to_tokens()
    for mask in range(1 << len(wild)):
        signs = {}
        coeff = 1
        for bit, idx in enumerate(wild):
            if (mask >> bit) & 1:
                signs[("A", idx)] = -1
                coeff = -coeff
            else:
                signs[("A", idx)] = 1
        new_comps = [
            [(role, key, signs.get(key, sign)) for role, key, sign in tokens]
            for tokens in comps
        ]
        out.add(GaussDiagram.from_tokens(pattern.underlying, new_comps), coeff)
    return out


# -- enumeration -------------------------------------------------------------


def _pairings(slots):
    if not slots:
        yield []
        return
    a = slots[0]
    for i in range(1, len(slots)):
        b = slots[i]
        for rest in _pairings(slots[1:i] + slots[i + 1:]):
            yield [(a, b)] + rest


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_arrow_diagrams(max_arrows: int, underlying: Underlying,
                             cap: int | None = None) -> list[GaussDiagram]:
    """All canonical chord-free signed diagrams with <= max_arrows arrows."""
    _check_cap(max_arrows, underlying, cap)
    return _enumerate_unchecked(max_arrows, underlying)


def _enumerate_unchecked(max_arrows: int, underlying: Underlying) -> list[GaussDiagram]:
    from itertools import product as _product

    seen: dict[bytes, GaussDiagram] = {}
    k = underlying.count
    for n in range(max(max_arrows, -1) + 1):
        for sizes in _compositions(2 * n, k):
            flat = []
            for comp, m in enumerate(sizes):
                flat.extend((comp, p) for p in range(m))
            for pairing_ in _pairings(list(range(2 * n))):
                for dirs in _product((0, 1), repeat=n):
                    for signs in _product((1, -1), repeat=n):
                        comps = [[None] * m for m in sizes]
                        ok = True
                        for idx, ((x, y), dr, sg) in enumerate(zip(pairing_, dirs, signs)):
                            t, h = (x, y) if dr == 0 else (y, x)
                            tc, tp = flat[t]
                            hc, hp = flat[h]
                            comps[tc][tp] = ("O", ("A", idx), sg)
                            comps[hc][hp] = ("U", ("A", idx), sg)
                        if not ok:
                            continue
                        d = GaussDiagram.from_tokens(underlying, comps)
                        seen.setdefault(d.canonical_code(), d)
    return [seen[c] for c in sorted(seen)]


# -- relations and quotients --------------------------------------------------


def generate_relations(n: int, underlying: Underlying,
                       cap: int | None = None) -> list[FormalSum]:
    """Truncated differences I(after) - I(before) over all kink/bigon
    instances on hosts with < n arrows and all triangle instances on hosts
    with <= n+1 arrows; this spans the full degree-n relation space."""
    _check_cap(n, underlying, cap)
    rels: dict[tuple, FormalSum] = {}

    def record(before: GaussDiagram, move):
        after = apply_move(before, move)
        rel = truncate(I_map(after) - I_map(before), n)
        if not len(rel):
            return
        items = sorted(((d.canonical_code(), c) for d, c in rel.items()))
        if items[0][1] < 0:
            rel = rel.scaled(-1)
            items = [(code, -c) for code, c in items]
        rels.setdefault(tuple(items), rel)

    if n >= 1:
        for host in _enumerate_unchecked(n - 1, underlying):
            for m in enumerate_moves(host, {R1_ADD, R2_ADD}):
                record(host, m)
    for host in _enumerate_unchecked(n + 1, underlying):
        for m in enumerate_moves(host, {R3}):
            record(host, m)
    return [rels[k] for k in sorted(rels)]


@dataclass
class QuotientPresentation:
    """Exact presentation of the degree-n quotient: enumerated basis,
    relation rows, reduced normal-form data and the invariant functionals."""

    degree: int
    underlying: Underlying
    basis: list[str]
    relations: list[dict[int, int]]
    pivots: list[int]
    reduced: list[dict[int, int]]
    invariant_basis: list[dict[int, int]]
    smith_factors: list[int] | None = None
    _index: dict[str, int] = field(default=None, repr=False)

    def __post_init__(self):
        if self._index is None:
            self._index = {code: i for i, code in enumerate(self.basis)}

    @property
    def rank_relations(self) -> int:
        return len(self.pivots)

    @property
    def dim_invariants(self) -> int:
        return len(self.invariant_basis)

    def torsion(self) -> list[int]:
        if self.smith_factors is None:
            return []
        return [f for f in self.smith_factors if f not in (0, 1)]

    def basis_index(self, diagram: GaussDiagram) -> int | None:
        return self._index.get(diagram.canonical_code().decode())

    def functional_element(self, k: int) -> FormalSum:
        """The k-th invariant functional as a pairing pattern."""
        out = FormalSum()
        for idx, coeff in self.invariant_basis[k].items():
            out.add(parse_gauss_code(self.basis[idx]), coeff)
        return out

    def to_json(self) -> str:
        def rows(rs):
            return [sorted((int(k), int(v)) for k, v in r.items()) for r in rs]

        return json.dumps(
            {
                "format": 1,
                "degree": self.degree,
                "underlying": {"kind": self.underlying.kind, "count": self.underlying.count},
                "basis": self.basis,
                "relations": rows(self.relations),
                "pivots": self.pivots,
                "reduced": rows(self.reduced),
                "invariant_basis": rows(self.invariant_basis),
                "smith_factors": self.smith_factors,
            },
            sort_keys=True,
        )

    @staticmethod
    def from_json(text: str) -> "QuotientPresentation":
        data = json.loads(text)
        if data.get("format") != 1:
            raise ValueError("unsupported presentation file format")

        def rows(rs):
            return [dict((int(k), int(v)) for k, v in r) for r in rs]

        return QuotientPresentation(
            degree=data["degree"],
            underlying=Underlying(data["underlying"]["kind"], data["underlying"]["count"]),
            basis=data["basis"],
            relations=rows(data["relations"]),
            pivots=list(data["pivots"]),
            reduced=rows(data["reduced"]),
            invariant_basis=rows(data["invariant_basis"]),
            smith_factors=data["smith_factors"],
        )


def compute_quotient(n: int, underlying: Underlying, cap: int | None = None,
                     torsion: bool = True) -> QuotientPresentation:
    """Assemble the degree-n relation matrix and solve it exactly."""
    _check_cap(n, underlying, cap)
    basis_diagrams = _enumerate_unchecked(n, underlying)
    basis = [d.canonical_code().decode() for d in basis_diagrams]
    index = {code: i for i, code in enumerate(basis)}
    rows = []
    for rel in generate_relations(n, underlying, cap=cap):
        row = {}
        for d, c in rel.items():
            code = d.canonical_code().decode()
            if code not in index:
                raise RuntimeError(f"relation term {code} missing from basis")
            row[index[code]] = c
        rows.append(row)
    rows.sort(key=lambda r: sorted(r.items()))
    pivots, reduced = rref(rows, len(basis))
    inv = nullspace(rows, len(basis))
    if len(inv) + len(pivots) != len(basis):
        raise RuntimeError("rank + nullity mismatch in quotient computation")
    factors = smith_invariants(rows, len(basis)) if torsion else None
    return QuotientPresentation(
        degree=n,
        underlying=underlying,
        basis=basis,
        relations=rows,
        pivots=pivots,
        reduced=reduced,
        invariant_basis=inv,
        smith_factors=factors,
    )


def universal_invariant(diagram: GaussDiagram, q: QuotientPresentation):
    """Coordinates of the truncated subdiagram sum in the quotient's normal
    form: a sorted list of (basis code, Fraction) on the free columns."""
    if diagram.n_chords:
        raise ValueError("universal invariant is defined for chord-free diagrams")
    if diagram.underlying != q.underlying:
        raise ValueError("underlying kind mismatch")
    vec: dict[int, int] = {}
    n = q.degree
    for k in range(min(n, diagram.n_arrows) + 1):
        for combo in combinations(range(diagram.n_arrows), k):
            keep = set(combo)
            sub = diagram.delete_arrows(i for i in range(diagram.n_arrows) if i not in keep)
            idx = q.basis_index(sub)
            if idx is None:
                raise RuntimeError("subdiagram missing from quotient basis")
            vec[idx] = vec.get(idx, 0) + 1
    nf = reduce_vector(vec, q.pivots, q.reduced)
    return sorted((q.basis[i], v) for i, v in nf.items() if v)


def degree_dimensions(max_degree: int, underlying: Underlying,
                      cap: int | None = None, torsion: bool = False) -> dict:
    """Per-degree count of new invariants: dim inv(P_d) - dim inv(P_{d-1}),
    constants cancelling in the difference."""
    quotients = {
        d: compute_quotient(d, underlying, cap=cap, torsion=torsion)
        for d in range(max_degree + 1)
    }
    dims = {d: quotients[d].dim_invariants for d in quotients}
    new = {d: dims[d] - dims[d - 1] for d in range(1, max_degree + 1)}
    return {"invariant_dims": dims, "new_invariant_dims": new, "quotients": quotients}


def element_from_terms(terms) -> FormalSum:
    out = FormalSum()
    for code, coeff in terms:
        out.add(parse_gauss_code(code), coeff)
    return out


def element_to_terms(x: FormalSum):
    return sorted(
        (d.canonical_code().decode(), c) for d, c in x.items()
    )
