"""Gauss diagrams of virtual knots, links, long knots and string links.

A diagram is one or more oriented circles/lines carrying the endpoints of
signed directed arrows (crossings: tail = overpass, head = underpass) and
signed undirected chords (double points of singular knots).  Everything is
an immutable value; equality is combinatorial equality up to
orientation-preserving homeomorphism of the underlying 1-manifold,
decided through a canonical byte code.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "Underlying",
    "Endpoint",
    "Arrow",
    "Chord",
    "GaussDiagram",
    "FormalSum",
    "ParseError",
    "parse_gauss_code",
    "serialize",
    "canonical_code",
    "subdiagrams",
    "reverse_arrows",
    "close_long",
    "expand_semi_virtual",
    "resolve_chords",
]

CLOSED = "closed"
LONG = "long"
LINK = "link"
STRING = "string"

_CIRCULAR = {CLOSED, LINK}


@dataclass(frozen=True)
class Underlying:
    """The underlying 1-manifold: circles (closed/link) or lines (long/string)."""

    kind: str
    count: int = 1

    def __post_init__(self):
        if self.kind not in (CLOSED, LONG, LINK, STRING):
            raise ValueError(f"unknown underlying kind {self.kind!r}")
        if self.kind in (CLOSED, LONG) and self.count != 1:
            raise ValueError(f"{self.kind} diagrams have exactly one component")
        if self.count < 1:
            raise ValueError("component count must be >= 1")

    @property
    def circular(self) -> bool:
        return self.kind in _CIRCULAR

    def header(self) -> str:
        if self.kind in (CLOSED, LONG):
            return self.kind
        return f"{self.kind} {self.count}"


class Endpoint(NamedTuple):
    component: int
    position: int


@dataclass(frozen=True)
class Arrow:
    """A crossing: directed from the over branch to the under branch.

    ``sign`` is the local writhe.  Sign 0 marks a wildcard arrow and is only
    meaningful inside pattern diagrams fed to ``expand_signfree``.
    """

    tail: Endpoint
    head: Endpoint
    sign: int

    def __post_init__(self):
        if self.tail == self.head:
            raise ValueError("arrow tail and head must be distinct endpoints")
        if self.sign not in (-1, 0, 1):
            raise ValueError("arrow sign must be +1, -1 or 0 (wildcard)")

    def reversed(self) -> "Arrow":
        return Arrow(self.head, self.tail, self.sign)


@dataclass(frozen=True)
class Chord:
    """A double point.  Ends are stored ordered by position; the sign is the
    intersection number of the (first, second) branches in stored order, so
    swapping the ends negates it."""

    a: Endpoint
    b: Endpoint
    sign: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("chord ends must be distinct endpoints")
        if self.sign not in (-1, 1):
            raise ValueError("chord sign must be +1 or -1")
        if self.b < self.a:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)
            object.__setattr__(self, "sign", -self.sign)

    @staticmethod
    def make(a: Endpoint, b: Endpoint, sign: int) -> "Chord":
        return Chord(a, b, sign)


# Internal token form: one entry per slot, ("O"|"U", arrow_idx, sign) or
# ("Da"|"Db", chord_idx, sign).  Token lists are the working representation
# for parsing, serialization and move surgery.

_TOKEN_RE = re.compile(r"(Da|Db|O|U)(\d+)([+-])")
_HEADER_RE = re.compile(r"^\s*(closed|long|link\s+(\d+)|string\s+(\d+))\s*:(.*)$", re.S)


class ParseError(ValueError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


def _tokenize_component(text: str, offset: int):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"bad token near {text[pos:pos + 8]!r}", offset + pos)
        role, label, sign = m.group(1), int(m.group(2)), (1 if m.group(3) == "+" else -1)
        if label < 1:
            raise ParseError("labels must be positive integers", offset + pos)
        tokens.append((role, label, sign, offset + pos))
        pos = m.end()
    return tokens


def parse_gauss_code(text: str) -> "GaussDiagram":
    """Parse one diagram from its Gauss code.

    Grammar: ``header ":" component ("/" component)*`` with header one of
    ``closed``, ``long``, ``link k``, ``string k`` and tokens ``O<n><s>``,
    ``U<n><s>``, ``Da<n><s>``, ``Db<n><s>``.  Every label occurs exactly
    twice (O with U, Da with Db) with the same sign on both occurrences.
    """
    m = _HEADER_RE.match(text)
    if not m:
        raise ParseError("missing or malformed header")
    head = m.group(1)
    if head == CLOSED:
        underlying = Underlying(CLOSED)
    elif head == LONG:
        underlying = Underlying(LONG)
    elif m.group(2):
        underlying = Underlying(LINK, int(m.group(2)))
    else:
        underlying = Underlying(STRING, int(m.group(3)))
    body = m.group(4)
    body_offset = text.index(":") + 1

    comp_texts = body.split("/")
    if len(comp_texts) != underlying.count:
        if not (underlying.count == 1 and len(comp_texts) == 1):
            raise ParseError(
                f"expected {underlying.count} components, found {len(comp_texts)}",
                body_offset,
            )

    offset = body_offset
    per_component = []
    for ct in comp_texts:
        per_component.append(_tokenize_component(ct, offset))
        offset += len(ct) + 1

    seen: dict[int, list] = {}
    for comp, tokens in enumerate(per_component):
        for slot, (role, label, sign, at) in enumerate(tokens):
            seen.setdefault(label, []).append((role, sign, Endpoint(comp, slot), at))

    arrows, chords = [], []
    for label, occs in sorted(seen.items()):
        if len(occs) != 2:
            raise ParseError(f"label {label} used {len(occs)} times, expected 2", occs[0][3])
        (r1, s1, e1, at1), (r2, s2, e2, at2) = occs
        if s1 != s2:
            raise ParseError(f"label {label} has inconsistent signs", at2)
        roles = {r1, r2}
        if roles == {"O", "U"}:
            tail, head_ = (e1, e2) if r1 == "O" else (e2, e1)
            arrows.append(Arrow(tail, head_, s1))
        elif roles == {"Da", "Db"}:
            first = e1 if r1 == "Da" else e2
            second = e2 if r1 == "Da" else e1
            chords.append(Chord.make(first, second, s1))
        else:
            raise ParseError(f"label {label}: O must pair with U, Da with Db", at2)

    return GaussDiagram(underlying, tuple(arrows), tuple(chords))


def _encode_tokens(underlying: Underlying, comps) -> str:
    """Deterministic text form with labels renumbered by first occurrence.

    Chords are presented Da-first; if the stored first end comes second in
    the traversal the emitted sign is flipped, which keeps the encoded sign
    relative to the emitted branch order.
    """
    label_of: dict = {}
    first_role: dict = {}
    parts = []
    for tokens in comps:
        words = []
        for role, key, sign in tokens:
            if key not in label_of:
                label_of[key] = len(label_of) + 1
                first_role[key] = role
            label = label_of[key]
            if role in ("O", "U"):
                out_role, out_sign = role, sign
            else:
                if first_role[key] == "Da":
                    out_role = "Da" if role == "Da" else "Db"
                    out_sign = sign
                else:
                    out_role = "Da" if role == "Db" else "Db"
                    out_sign = -sign
            out_sign_ch = "+" if out_sign > 0 else ("-" if out_sign < 0 else "*")
            words.append(f"{out_role}{label}{out_sign_ch}")
        parts.append(" ".join(words))
    body = " / ".join(parts)
    return f"{underlying.header()}:" + (f" {body}" if body.strip() else ("" if underlying.count == 1 else " " + body))


@dataclass(frozen=True)
class GaussDiagram:
    underlying: Underlying
    arrows: tuple[Arrow, ...] = ()
    chords: tuple[Chord, ...] = ()
    _code: bytes = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        counts = [0] * self.underlying.count
        slots = set()
        for e in self._all_ends():
            if not (0 <= e.component < self.underlying.count):
                raise ValueError(f"endpoint {e} outside components")
            if e in slots:
                raise ValueError(f"slot {e} used twice")
            slots.add(e)
            counts[e.component] += 1
        for comp, n in enumerate(counts):
            for p in range(n):
                if Endpoint(comp, p) not in slots:
                    raise ValueError(f"component {comp} slots are not dense 0..{n - 1}")

    def _all_ends(self) -> Iterator[Endpoint]:
        for a in self.arrows:
            yield a.tail
            yield a.head
        for c in self.chords:
            yield c.a
            yield c.b

    # -- basic queries ---------------------------------------------------

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    @property
    def n_chords(self) -> int:
        return len(self.chords)

    def component_sizes(self) -> list[int]:
        sizes = [0] * self.underlying.count
        for e in self._all_ends():
            sizes[e.component] += 1
        return sizes

    def is_signed(self) -> bool:
        return all(a.sign != 0 for a in self.arrows)

    def writhe(self) -> int:
        return sum(a.sign for a in self.arrows)

    # -- token form -------------------------------------------------------

    def to_tokens(self):
        """Per-component slot lists of ("O"|"U"|"Da"|"Db", entity_index, sign)."""
        comps = [[None] * n for n in self.component_sizes()]
        for i, a in enumerate(self.arrows):
            comps[a.tail.component][a.tail.position] = ("O", ("A", i), a.sign)
            comps[a.head.component][a.head.position] = ("U", ("A", i), a.sign)
        for i, c in enumerate(self.chords):
            comps[c.a.component][c.a.position] = ("Da", ("C", i), c.sign)
            comps[c.b.component][c.b.position] = ("Db", ("C", i), c.sign)
        return comps

    @staticmethod
    def from_tokens(underlying: Underlying, comps) -> "GaussDiagram":
        """Rebuild a diagram from token lists; entity keys may be anything
        hashable, roles fix tail/head and first/second branch."""
        ends: dict = {}
        for comp, tokens in enumerate(comps):
            for slot, (role, key, sign) in enumerate(tokens):
                ends.setdefault(key, []).append((role, sign, Endpoint(comp, slot)))
        arrows, chords = [], []
        for key, occs in ends.items():
            if len(occs) != 2:
                raise ValueError(f"entity {key} has {len(occs)} ends")
            (r1, s1, e1), (r2, s2, e2) = occs
            roles = {r1, r2}
            if roles == {"O", "U"}:
                tail, head_ = (e1, e2) if r1 == "O" else (e2, e1)
                arrows.append(Arrow(tail, head_, s1))
            elif roles == {"Da", "Db"}:
                first = e1 if r1 == "Da" else e2
                second = e2 if r1 == "Da" else e1
                chords.append(Chord.make(first, second, s1))
            else:
                raise ValueError(f"entity {key}: inconsistent roles {roles}")
        arrows.sort(key=lambda a: (a.tail, a.head))
        chords.sort(key=lambda c: (c.a, c.b))
        return GaussDiagram(underlying, tuple(arrows), tuple(chords))

    # -- canonical form ---------------------------------------------------

    def serialize(self) -> str:
        return _encode_tokens(self.underlying, self.to_tokens())

    def canonical_code(self) -> bytes:
        cached = object.__getattribute__(self, "_code")
        if cached is not None:
            return cached
        comps = self.to_tokens()
        if self.underlying.circular:
            choices = []
            for tokens in comps:
                n = len(tokens)
                if n == 0:
                    choices.append([tokens])
                else:
                    choices.append([tokens[k:] + tokens[:k] for k in range(n)])
            best = min(
                _encode_tokens(self.underlying, combo) for combo in product(*choices)
            )
        else:
            best = _encode_tokens(self.underlying, comps)
        code = best.encode()
        object.__setattr__(self, "_code", code)
        return code

    def __eq__(self, other):
        if not isinstance(other, GaussDiagram):
            return NotImplemented
        return self.canonical_code() == other.canonical_code()

    def __hash__(self):
        return hash(self.canonical_code())

    def __repr__(self):
        return f"GaussDiagram({self.serialize()!r})"

    # -- elementary constructions ------------------------------------------

    def rotate(self, component: int, shift: int) -> "GaussDiagram":
        if not self.underlying.circular:
            raise ValueError("only circular components can be rotated")
        comps = self.to_tokens()
        tokens = comps[component]
        if tokens:
            k = shift % len(tokens)
            comps[component] = tokens[k:] + tokens[:k]
        return GaussDiagram.from_tokens(self.underlying, comps)

    def delete_arrows(self, indices: Iterable[int]) -> "GaussDiagram":
        drop = set(indices)
        comps = [
            [t for t in tokens if not (t[1][0] == "A" and t[1][1] in drop)]
            for tokens in self.to_tokens()
        ]
        return GaussDiagram.from_tokens(self.underlying, comps)


def serialize(diagram: GaussDiagram) -> str:
    return diagram.serialize()


def canonical_code(diagram: GaussDiagram) -> bytes:
    return diagram.canonical_code()


def reverse_arrows(diagram: GaussDiagram) -> GaussDiagram:
    """Swap every arrow's head and tail, keeping signs and chords."""
    comps = [
        [({"O": "U", "U": "O"}.get(role, role), key, sign) for role, key, sign in tokens]
        for tokens in diagram.to_tokens()
    ]
    return GaussDiagram.from_tokens(diagram.underlying, comps)


def close_long(diagram: GaussDiagram) -> GaussDiagram:
    """Turn a long diagram into the closed diagram with the same slot order."""
    if diagram.underlying.kind != LONG:
        raise ValueError("close_long expects a long diagram")
    return GaussDiagram.from_tokens(Underlying(CLOSED), diagram.to_tokens())


def subdiagrams(diagram: GaussDiagram) -> Iterator[GaussDiagram]:
    """All 2^n diagrams keeping every chord and a subset of the arrows."""
    n = diagram.n_arrows
    for mask in range(1 << n):
        yield diagram.delete_arrows(i for i in range(n) if not (mask >> i) & 1)


class FormalSum:
    """Finite integer combination of diagrams, keyed by canonical code."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[GaussDiagram, int] | None = None):
        self._terms: dict[GaussDiagram, int] = {}
        if terms:
            for d, c in terms.items():
                self.add(d, c)

    @staticmethod
    def of(diagram: GaussDiagram, coeff: int = 1) -> "FormalSum":
        s = FormalSum()
        s.add(diagram, coeff)
        return s

    def add(self, diagram: GaussDiagram, coeff: int = 1) -> None:
        if coeff == 0:
            return
        new = self._terms.get(diagram, 0) + coeff
        if new == 0:
            self._terms.pop(diagram, None)
        else:
            self._terms[diagram] = new

    def items(self):
        return self._terms.items()

    def coefficient(self, diagram: GaussDiagram) -> int:
        return self._terms.get(diagram, 0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(dict(self._terms))
        for d, c in other.items():
            out.add(d, c)
        return out

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(dict(self._terms))
        for d, c in other.items():
            out.add(d, -c)
        return out

    def __neg__(self) -> "FormalSum":
        return self.scaled(-1)

    def scaled(self, k: int) -> "FormalSum":
        out = FormalSum()
        for d, c in self.items():
            out.add(d, c * k)
        return out

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        raise TypeError("FormalSum is mutable; not hashable")

    def map_diagrams(self, fn) -> "FormalSum":
        """Linear extension of a diagram-level map (which may itself return
        a diagram or a FormalSum)."""
        out = FormalSum()
        for d, c in self.items():
            image = fn(d)
            if isinstance(image, GaussDiagram):
                out.add(image, c)
            else:
                for d2, c2 in image.items():
                    out.add(d2, c * c2)
        return out

    def __repr__(self):
        if not self._terms:
            return "FormalSum(0)"
        bits = [f"{c:+d}*{d.serialize()}" for d, c in sorted(
            self.items(), key=lambda dc: dc[0].canonical_code())]
        return "FormalSum(" + " ".join(bits) + ")"


def expand_semi_virtual(diagram: GaussDiagram, marked: Iterable[int]) -> FormalSum:
    """Alternating sum over deletions of subsets of the marked arrows."""
    marked = sorted(set(marked))
    for i in marked:
        if not (0 <= i < diagram.n_arrows):
            raise ValueError(f"marked arrow {i} out of range")
    out = FormalSum()
    for mask in range(1 << len(marked)):
        chosen = [marked[i] for i in range(len(marked)) if (mask >> i) & 1]
        out.add(diagram.delete_arrows(chosen), (-1) ** len(chosen))
    return out


def resolve_chords(diagram: GaussDiagram) -> FormalSum:
    """Replace every chord by the difference of its two crossing resolutions.

    A chord with stored ends (first, second) and sign s resolves to
    (arrow first->second, sign s) minus (arrow second->first, sign -s).
    The stored branch order is semantic: flipping it negates the result,
    matching the chord normal form where flipping also negates s.
    """
    comps = diagram.to_tokens()
    chord_keys = [("C", i) for i in range(diagram.n_chords)]
    out = FormalSum()
    for mask in range(1 << len(chord_keys)):
        coeff = 1
        replace: dict = {}
        for i, key in enumerate(chord_keys):
            sign = diagram.chords[i].sign
            if (mask >> i) & 1:
                replace[key] = {"Da": ("U", -sign), "Db": ("O", -sign)}
                coeff = -coeff
            else:
                replace[key] = {"Da": ("O", sign), "Db": ("U", sign)}
        new_comps = []
        for tokens in comps:
            row = []
            for role, key, sign in tokens:
                if key in replace:
                    new_role, new_sign = replace[key][role]
                    row.append((new_role, key, new_sign))
                else:
                    row.append((role, key, sign))
            new_comps.append(row)
        out.add(GaussDiagram.from_tokens(diagram.underlying, new_comps), coeff)
    return out
