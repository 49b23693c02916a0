"""Finite simplicial complexes, substitution complexes and bracket sequences.

A complex is stored as its full downward-closed family of simplices, each
simplex being a strictly increasing tuple of positive vertex ids.  The empty
simplex ``()`` and every singleton of the vertex set are always present.

>>> K = boundary_simplex([1, 2, 3])
>>> len(K), K.facets()
(7, ((1, 2), (1, 3), (2, 3)))
>>> w = parse_bracket("[[m1,m2,m3],m4,m5]")
>>> boundary, full = complexes_of_bracket(w)
>>> len(boundary.facets())
7
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence, Union

from .errors import BracketSyntaxError, MalformedInputError, UnsupportedInputError

Simplex = tuple  # strictly increasing tuple of vertex ids


def _all_subsets(simplex):
    for r in range(len(simplex) + 1):
        yield from combinations(simplex, r)


def _check_ids(ids):
    ids = list(ids)
    for v in ids:
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise MalformedInputError(f"vertex ids must be positive integers, got {v!r}")
    if len(set(ids)) != len(ids):
        raise MalformedInputError(f"duplicate vertex ids in {ids}")
    return ids


@dataclass(frozen=True)
class SimplicialComplex:
    vertices: tuple
    simplices: frozenset

    def __post_init__(self):
        if list(self.vertices) != sorted(set(self.vertices)):
            raise MalformedInputError("vertex list must be strictly increasing")
        if () not in self.simplices:
            raise MalformedInputError("a complex must contain the empty simplex")
        vs = set(self.vertices)
        for s in self.simplices:
            if tuple(sorted(set(s))) != s or not set(s) <= vs:
                raise MalformedInputError(f"bad simplex {s!r}")
            for face in combinations(s, len(s) - 1) if s else ():
                if face not in self.simplices:
                    raise MalformedInputError(f"not downward closed: {face} missing below {s}")
        for v in self.vertices:
            if (v,) not in self.simplices:
                raise MalformedInputError(f"vertex {v} is not a simplex")

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]], vertices: Iterable[int] | None = None):
        facets = [tuple(sorted(_check_ids(f))) for f in facets]
        vs = set(v for f in facets for v in f)
        if vertices is not None:
            vertices = _check_ids(vertices)
            if not vs <= set(vertices):
                raise MalformedInputError(f"facet vertices {sorted(vs - set(vertices))} not in vertex list")
            vs |= set(vertices)
        simplices = {()}
        simplices.update((v,) for v in vs)
        for f in facets:
            simplices.update(_all_subsets(f))
        return cls(tuple(sorted(vs)), frozenset(simplices))

    def __contains__(self, simplex):
        return tuple(sorted(simplex)) in self.simplices

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.sorted_simplices())

    def sorted_simplices(self):
        return sorted(self.simplices, key=lambda s: (len(s), s))

    def nonempty_simplices(self):
        return [s for s in self.sorted_simplices() if s]

    def facets(self):
        """Maximal simplices, ordered by (size, lexicographic)."""
        maximal = []
        for s in self.simplices:
            if not any(len(t) > len(s) and set(s) < set(t) for t in self.simplices):
                maximal.append(s)
        return tuple(sorted(maximal, key=lambda s: (len(s), s)))

    @property
    def dimension(self):
        return max(len(s) for s in self.simplices) - 1

    def relabel(self, mapping):
        """Apply a vertex bijection ``mapping`` (dict old -> new)."""
        return SimplicialComplex.from_facets(
            [[mapping[v] for v in f] for f in self.facets()],
            vertices=[mapping[v] for v in self.vertices],
        )

    def to_dict(self):
        return {"vertices": list(self.vertices), "facets": [list(f) for f in self.facets()]}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "facets" not in data:
            raise MalformedInputError('complex JSON must be an object with a "facets" list')
        facets = data["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise MalformedInputError('"facets" must be a list of lists of vertex ids')
        vertices = data.get("vertices")
        if vertices is not None and not isinstance(vertices, list):
            raise MalformedInputError('"vertices" must be a list')
        return cls.from_facets(facets, vertices)

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, f)) + "}" for f in self.facets()) + "}"


def load_complex(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON ({exc})") from exc
    return SimplicialComplex.from_dict(data)


def full_simplex(ids: Sequence[int]) -> SimplicialComplex:
    ids = _check_ids(ids)
    if not ids:
        raise MalformedInputError("full simplex needs at least one vertex")
    return SimplicialComplex.from_facets([ids])


def boundary_simplex(ids: Sequence[int]) -> SimplicialComplex:
    ids = _check_ids(ids)
    if len(ids) < 2:
        raise UnsupportedInputError("the boundary of a simplex needs at least two vertices")
    top = tuple(sorted(ids))
    return SimplicialComplex.from_facets(combinations(top, len(top) - 1), vertices=top)


def point(i: int) -> SimplicialComplex:
    """The one-vertex complex {∅, {i}}."""
    return full_simplex([i])


def substitution(K: SimplicialComplex, parts: Sequence[SimplicialComplex]) -> SimplicialComplex:
    """Substitute ``parts[k]`` for the k-th vertex (in increasing order) of ``K``.

    The result consists of all disjoint unions of simplices of the parts whose
    index set is a simplex of ``K``; vertex labels of the parts are kept.
    """
    if len(parts) != len(K.vertices):
        raise MalformedInputError(f"expected {len(K.vertices)} parts, got {len(parts)}")
    seen = set()
    for part in parts:
        if seen & set(part.vertices):
            raise MalformedInputError(f"part vertex sets overlap on {sorted(seen & set(part.vertices))}")
        seen |= set(part.vertices)
    slot = {v: parts[k] for k, v in enumerate(K.vertices)}
    simplices = set()
    for J in K.simplices:
        for choice in product(*(slot[j].simplices for j in J)):
            simplices.add(tuple(sorted(v for piece in choice for v in piece)))
    result = SimplicialComplex(tuple(sorted(seen)), frozenset(simplices))
    return result


# --- bracket sequences -------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    index: int

    def __str__(self):
        return f"m{self.index}"


@dataclass(frozen=True)
class Node:
    children: tuple

    def __post_init__(self):
        if len(self.children) < 2:
            raise MalformedInputError("a bracket needs at least two entries")

    def __str__(self):
        return "[" + ",".join(str(c) for c in self.children) + "]"

    @property
    def depth(self):
        return 1 + max((c.depth for c in self.children if isinstance(c, Node)), default=0)


BracketExpr = Union[Leaf, Node]


def leaves(w: BracketExpr):
    if isinstance(w, Leaf):
        return [w.index]
    return [i for c in w.children for i in leaves(c)]


def parse_bracket(text: str) -> BracketExpr:
    """Parse ``w ::= 'm'INT | '[' w (',' w)+ ']'``.

    >>> parse_bracket("[[m1,m2,m3],m4,m5]")
    Node(children=(Node(children=(Leaf(index=1), Leaf(index=2), Leaf(index=3))), Leaf(index=4), Leaf(index=5)))
    """
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        off = len(text[:i].encode())
        if ch in "[],":
            tokens.append((ch, None, off))
            i += 1
        elif ch == "m":
            j = i + 1
            while j < len(text) and text[j] in "0123456789":
                j += 1
            if j == i + 1:
                raise BracketSyntaxError("expected digits after 'm'", off + 1)
            tokens.append(("leaf", int(text[i + 1 : j]), off))
            i = j
        else:
            raise BracketSyntaxError(f"unexpected character {ch!r}", off)
    end_offset = len(text.encode())

    def peek(k):
        return tokens[k] if k < len(tokens) else ("eof", None, end_offset)

    def parse(k):
        kind, value, off = peek(k)
        if kind == "leaf":
            if value < 1:
                raise BracketSyntaxError("leaf index must be positive", off)
            return Leaf(value), k + 1
        if kind != "[":
            raise BracketSyntaxError(f"expected 'm<int>' or '[' but found {kind!r}", off)
        children = []
        child, k = parse(k + 1)
        children.append(child)
        while peek(k)[0] == ",":
            child, k = parse(k + 1)
            children.append(child)
        kind, _, off = peek(k)
        if kind != "]":
            raise BracketSyntaxError(f"expected ',' or ']' but found {kind!r}", off)
        if len(children) < 2:
            raise BracketSyntaxError("a bracket needs at least two entries", off)
        return Node(tuple(children)), k + 1

    tree, k = parse(0)
    if k != len(tokens):
        raise BracketSyntaxError("trailing input", peek(k)[2])
    ids = leaves(tree)
    if len(set(ids)) != len(ids):
        repeated = sorted({i for i in ids if ids.count(i) > 1})
        raise MalformedInputError(f"bracket indices must be pairwise distinct; repeated: {repeated}")
    return tree


def complexes_of_bracket(w: BracketExpr):
    """Return ``(∂Δ_w, Δ_w)`` for a bracket sequence ``w``."""
    if isinstance(w, Leaf):
        raise UnsupportedInputError(f"a bare {w} has no bracket complex")
    parts = [complexes_of_bracket(c)[0] if isinstance(c, Node) else point(c.index) for c in w.children]
    slots = list(range(1, len(parts) + 1))
    return substitution(boundary_simplex(slots), parts), substitution(full_simplex(slots), parts)


def contains_subcomplex(K: SimplicialComplex, L: SimplicialComplex) -> bool:
    return L.simplices <= K.simplices


def missing_simplices(K: SimplicialComplex, L: SimplicialComplex):
    """Minimal simplices of ``L`` that are not in ``K``."""
    missing = [s for s in L.simplices if s not in K.simplices]
    return sorted(
        (s for s in missing if not any(set(t) < set(s) for t in missing)),
        key=lambda s: (len(s), s),
    )
