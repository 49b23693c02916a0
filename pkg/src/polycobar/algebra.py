"""Free graded tensor algebras over the integers.

Elements are finite integer combinations of words; a word is a tuple of
:class:`Generator` objects.  Multiplication is concatenation extended
bilinearly.  Words are ordered by ``(degree, length, generator ids)`` so
that printed output and matrix layouts are reproducible.

>>> b1 = Generator("b", (1,), 1).element()
>>> b2 = Generator("b", (2,), 1).element()
>>> print(bracket(b1, b2))
b{1}*b{2} + b{2}*b{1}
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .errors import ForeignGeneratorError, MalformedInputError, MixedDegreeError


@dataclass(frozen=True)
class Generator:
    """A free generator of positive degree.

    ``symbol`` and ``key`` identify it (``b`` + simplex, ``x`` + multiset,
    ``a`` + index).  ``weight`` is the vertex content used to split chain
    complexes into blocks; it is a sorted tuple of vertex ids.
    """

    symbol: str
    key: tuple
    degree: int
    weight: tuple = ()
    braces: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.degree < 1:
            raise MalformedInputError(f"generator degree must be >= 1, got {self.degree}")

    @property
    def label(self):
        inner = ",".join(map(str, self.key))
        return f"{self.symbol}{{{inner}}}" if self.braces else f"{self.symbol}{inner}"

    def sort_key(self):
        return (self.degree, self.symbol, self.key)

    def element(self):
        return GradedElement({(self,): 1})

    def __str__(self):
        return self.label


def word_degree(word):
    return sum(g.degree for g in word)


def word_weight(word):
    return tuple(sorted(v for g in word for v in g.weight))


def word_sort_key(word):
    return (word_degree(word), len(word), tuple((g.symbol, g.key) for g in word))


def render_word(word):
    return "*".join(g.label for g in word) if word else "1"


class GradedElement:
    """Finite integer combination of words; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc = defaultdict(int)
        for word, coeff in items:
            acc[tuple(word)] += coeff
        self._terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def unit(cls):
        return cls._raw({(): 1})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        """Terms in canonical word order."""
        return sorted(self._terms.items(), key=lambda t: word_sort_key(t[0]))

    def words(self):
        return [w for w, _ in self.items()]

    def coefficient(self, word):
        return self._terms.get(tuple(word), 0)

    def generators(self):
        return {g for w in self._terms for g in w}

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        acc = dict(self._terms)
        for w, c in other._terms.items():
            v = acc.get(w, 0) + c
            if v:
                acc[w] = v
            else:
                acc.pop(w, None)
        return GradedElement._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return GradedElement._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return GradedElement.zero()
            return GradedElement._raw({w: c * other for w, c in self._terms.items()})
        if not isinstance(other, GradedElement):
            return NotImplemented
        acc = defaultdict(int)
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                acc[w1 + w2] += c1 * c2
        return GradedElement._raw({w: c for w, c in acc.items() if c})

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        result = GradedElement.unit()
        for _ in range(n):
            result = result * self
        return result

    def degrees(self):
        return {word_degree(w) for w in self._terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        """The common degree of all words; ``None`` for zero."""
        degs = self.degrees()
        if len(degs) > 1:
            raise MixedDegreeError(f"element has mixed degrees {sorted(degs)}")
        return next(iter(degs), None)

    def render(self):
        if not self._terms:
            return "0"
        out = []
        for k, (word, c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = render_word(word)
            if mag != 1:
                body = f"{mag}*{body}" if word else str(mag)
            if k == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    __str__ = render

    def __repr__(self):
        return f"GradedElement({self.render()!r})"

    def to_json(self):
        return [[c, [g.label for g in w]] for w, c in self.items()]


def add(a: GradedElement, b: GradedElement) -> GradedElement:
    return a + b


def multiply(a: GradedElement, b: GradedElement) -> GradedElement:
    return a * b


def bracket(a: GradedElement, b: GradedElement) -> GradedElement:
    """Graded commutator ``ab - (-1)^{|a||b|} ba`` of homogeneous elements."""
    da, db = a.degree(), b.degree()
    if da is None or db is None:
        return GradedElement.zero()
    sign = -1 if (da * db) % 2 == 0 else 1
    return a * b + (b * a) * sign


def koszul_sign(degrees, perm) -> int:
    """Sign of reordering ``x_0,...,x_{n-1}`` into ``x_{perm[0]},...,x_{perm[n-1]}``.

    Each pair placed out of order contributes ``(-1)^{d_i d_j}``.

    >>> koszul_sign([3, 3], (1, 0))
    -1
    >>> koszul_sign([2, 3], (1, 0))
    1
    """
    perm = tuple(perm)
    n = len(degrees)
    if sorted(perm) != list(range(n)):
        raise MalformedInputError(f"{perm} is not a permutation of range({n})")
    odd = 0
    for k in range(n):
        for l in range(k + 1, n):
            if perm[k] > perm[l]:
                odd += degrees[perm[k]] * degrees[perm[l]]
    return -1 if odd % 2 else 1


def shuffles(p: int, q: int, anchor_first: bool = False):
    """All (p, q)-shuffles of ``range(p + q)`` as image tuples.

    A shuffle keeps ``theta[:p]`` and ``theta[p:]`` increasing.  With
    ``anchor_first`` only those with ``theta[0] == 0`` are returned.
    """
    if p < 1 or q < 1:
        raise MalformedInputError("shuffle sizes must be positive")
    n = p + q
    out = []
    for head in combinations(range(n), p):
        if anchor_first and head[0] != 0:
            continue
        rest = tuple(i for i in range(n) if i not in head)
        out.append(head + rest)
    return out


def compose(perm, other):
    """Permutation ``k -> perm[other[k]]`` (apply ``perm`` first, then ``other``)."""
    return tuple(perm[i] for i in other)


def inverse(perm):
    inv = [0] * len(perm)
    for k, i in enumerate(perm):
        inv[i] = k
    return tuple(inv)


def substitute(x: GradedElement, images: Mapping[Generator, GradedElement]) -> GradedElement:
    """Apply the algebra homomorphism determined by ``images`` on generators."""
    acc = GradedElement.zero()
    for word, c in x._terms.items():
        term = GradedElement.unit()
        for g in word:
            try:
                term = term * images[g]
            except KeyError:
                raise ForeignGeneratorError(f"no image given for generator {g.label}") from None
        acc = acc + term * c
    return acc

