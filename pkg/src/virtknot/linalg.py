"""Exact integer linear algebra on sparse rows.

Rows are dicts column -> nonzero int.  Elimination is fraction-free with
gcd normalization; nullspaces come back as primitive integer vectors.
Smith normal form works on a Hermite-reduced lattice basis so the row
lattice (and hence torsion) is preserved.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = ["rref", "nullspace", "smith_invariants", "reduce_vector"]


def _normalize(row: dict) -> dict:
    row = {c: v for c, v in row.items() if v}
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, abs(v))
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _combine(row, pivot_row, col):
    """pivot_val * row - row_val * pivot_row, gcd-normalized."""
    pv, rv = pivot_row[col], row[col]
    out = {c: pv * v for c, v in row.items()}
    for c, v in pivot_row.items():
        out[c] = out.get(c, 0) - rv * v
    return _normalize(out)


def rref(rows: list[dict], ncols: int):
    """Fraction-free reduced row echelon form.

    Returns (pivots, reduced_rows): reduced_rows[i] has pivot column
    pivots[i], and no other reduced row touches that column.
    """
    work = [r for r in (_normalize(dict(r)) for r in rows) if r]
    pivots: list[int] = []
    reduced: list[dict] = []
    for col in range(ncols):
        best = None
        for i, r in enumerate(work):
            if col in r:
                key = (abs(r[col]), len(r))
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            continue
        pivot_row = work.pop(best[1])
        work = [
            _combine(r, pivot_row, col) if col in r else r
            for r in work
        ]
        work = [r for r in work if r]
        reduced = [
            _combine(r, pivot_row, col) if col in r else r
            for r in reduced
        ]
        pivots.append(col)
        reduced.append(pivot_row)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivots[i] for i in order], [reduced[i] for i in order]


def reduce_vector(vec: dict, pivots, reduced_rows) -> dict:
    """Normal form of a rational vector modulo the row span."""
    out = {c: Fraction(v) for c, v in vec.items() if v}
    for p, row in zip(pivots, reduced_rows):
        if p in out and out[p]:
            factor = out[p] / row[p]
            for c, v in row.items():
                nv = out.get(c, Fraction(0)) - factor * v
                if nv:
                    out[c] = nv
                else:
                    out.pop(c, None)
    return out


def _clear_denominators(vec: dict) -> dict:
    if not vec:
        return {}
    denom = 1
    for v in vec.values():
        denom = denom * v.denominator // gcd(denom, v.denominator)
    ints = {c: int(v * denom) for c, v in vec.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, abs(v))
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    lead = ints[min(ints)]
    if lead < 0:
        ints = {c: -v for c, v in ints.items()}
    return ints


def nullspace(rows: list[dict], ncols: int) -> list[dict]:
    """Primitive integer basis of {x : row . x = 0 for all rows}."""
    pivots, reduced = rref(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, row in zip(pivots, reduced):
            if f in row:
                vec[p] = Fraction(-row[f], row[p])
        basis.append(_clear_denominators(vec))
    return basis


def _hermite_rows(rows: list[dict], ncols: int) -> list[dict]:
    """Echelon lattice basis via unimodular row operations only."""
    work = [dict(r) for r in rows if any(r.values())]
    out = []
    for col in range(ncols):
        carriers = [r for r in work if r.get(col)]
        rest = [r for r in work if not r.get(col)]
        if not carriers:
            work = rest
            continue
        while len(carriers) > 1:
            carriers.sort(key=lambda r: abs(r[col]))
            base = carriers[0]
            new_carriers = [base]
            for r in carriers[1:]:
                q = r[col] // base[col]
                for c, v in base.items():
                    nv = r.get(c, 0) - q * v
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
                if r.get(col):
                    new_carriers.append(r)
                elif r:
                    rest.append(r)
            if len(new_carriers) == len(carriers):
                carriers = new_carriers
                break
            carriers = new_carriers
        out.append(carriers[0])
        work = rest
    return out


def smith_invariants(rows: list[dict], ncols: int) -> list[int]:
    """Nonzero invariant factors of the integer row lattice."""
    basis = _hermite_rows(rows, ncols)
    if not basis:
        return []
    cols = sorted({c for r in basis for c in r})
    col_index = {c: i for i, c in enumerate(cols)}
    m = [[0] * len(cols) for _ in basis]
    for i, r in enumerate(basis):
        for c, v in r.items():
            m[i][col_index[c]] = v
    return _smith_dense(m)


def _smith_dense(m: list[list[int]]) -> list[int]:
    rows, cols = len(m), len(m[0]) if m else 0
    factors = []
    t = 0
    while t < rows and t < cols:
        # locate minimal nonzero entry in the remaining block
        pos = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < best):
                    best, pos = abs(m[i][j]), (i, j)
        if pos is None:
            break
        i0, j0 = pos
        m[t], m[i0] = m[i0], m[t]
        for row in m:
            row[t], row[j0] = row[j0], row[t]
        dirty = False
        for i in range(t + 1, rows):
            if m[i][t]:
                q = m[i][t] // m[t][t]
                for j in range(t, cols):
                    m[i][j] -= q * m[t][j]
                if m[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if m[t][j]:
                q = m[t][j] // m[t][t]
                for i in range(t, rows):
                    m[i][j] -= q * m[i][t]
                if m[t][j]:
                    dirty = True
        if dirty:
            continue
        # ensure divisibility of the remaining block
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(t, cols):
                m[t][j] += m[offender][j]
            continue
        factors.append(abs(m[t][t]))
        t += 1
    return factors
