"""Cobar constructions and Adams--Hilton models as free dg algebras.

Three concrete families are built here:

* :func:`cobar_spheres` -- the cobar construction of the homology coalgebra of
  a polyhedral product of spheres, generators ``b_J`` for nonempty simplices;
* :func:`cobar_dj` -- the cobar construction of the face coalgebra of ``K``
  (equivalently the Adams--Hilton model of the Davis--Januszkiewicz space),
  generators ``x_σ`` for multisets with support in ``K``;
* :func:`ah_cpn` -- the Adams--Hilton model of complex projective space.

:func:`cobar_of_coalgebra` is the generic functor on a finite coalgebra table
and is used to cross-check the first two.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import comb
from typing import Mapping, Sequence

from .algebra import (
    GradedElement,
    Generator,
    bracket,
    koszul_sign,
    shuffles,
    substitute,
    word_degree,
    word_weight,
)
from .complexes import SimplicialComplex
from .errors import (
    ForeignGeneratorError,
    InvariantViolation,
    MalformedInputError,
    PreconditionError,
    TruncationError,
    UnsupportedInputError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Multiset:
    """A finite multiset of vertex ids, stored as a sorted tuple."""

    elements: tuple

    def __post_init__(self):
        if tuple(sorted(self.elements)) != tuple(self.elements):
            object.__setattr__(self, "elements", tuple(sorted(self.elements)))

    @classmethod
    def from_counts(cls, counts: Mapping[int, int]):
        if any(k < 0 for k in counts.values()):
            raise MalformedInputError("multiplicities must be nonnegative")
        return cls(tuple(v for v in sorted(counts) for _ in range(counts[v])))

    @property
    def multiplicities(self):
        out = {}
        for v in self.elements:
            out[v] = out.get(v, 0) + 1
        return out

    @property
    def support(self):
        return tuple(sorted(set(self.elements)))

    @property
    def size(self):
        return len(self.elements)

    def splits(self):
        """Ordered pairs ``(τ, τ')`` of nonempty submultisets with ``τ ⊔ τ' = σ``."""
        counts = self.multiplicities
        verts = sorted(counts)
        out = []
        for choice in product(*(range(counts[v] + 1) for v in verts)):
            left = dict(zip(verts, choice))
            right = {v: counts[v] - left[v] for v in verts}
            tau, rest = Multiset.from_counts(left), Multiset.from_counts(right)
            if tau.size and rest.size:
                out.append((tau, rest))
        return out


@dataclass(frozen=True, eq=False)
class DgAlgebra:
    """A free graded algebra ``T(V)`` with a differential given on generators.

    ``degree_bound`` records a truncation: only generators of degree at most
    the bound are present, so chain groups are complete up to that degree.
    """

    generators: tuple
    diff: Mapping[Generator, GradedElement]
    degree_bound: int | None = None
    name: str = ""
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        gens = tuple(sorted(self.generators, key=Generator.sort_key))
        object.__setattr__(self, "generators", gens)
        gset = set(gens)
        if len(gset) != len(gens):
            raise MalformedInputError("duplicate generators")
        object.__setattr__(self, "_index", {g: g for g in gens})
        for g in gens:
            if self.degree_bound is not None and g.degree > self.degree_bound:
                raise TruncationError(f"{g.label} exceeds the degree bound {self.degree_bound}")
            dg = self.diff.get(g, GradedElement.zero())
            for w in dg.words():
                if word_degree(w) != g.degree - 1:
                    raise MalformedInputError(f"d({g.label}) has a term of degree {word_degree(w)}")
                for h in w:
                    if h not in gset:
                        raise ForeignGeneratorError(f"d({g.label}) uses foreign generator {h.label}")

    def __contains__(self, g):
        return g in self._index

    def d(self, g: Generator) -> GradedElement:
        return self.diff.get(g, GradedElement.zero())

    def generator(self, symbol, key):
        key = tuple(key)
        for g in self.generators:
            if g.symbol == symbol and g.key == key:
                return g
        raise ForeignGeneratorError(f"{symbol}{{{','.join(map(str, key))}}} is not a generator of {self.name}")

    def gen(self, symbol, *key):
        """Generator as an element, e.g. ``A.gen("x", 1, 2)``."""
        return self.generator(symbol, key).element()

    @cached_property
    def weight_graded(self):
        """True when the differential preserves word weights."""
        for g in self.generators:
            for w in self.d(g).words():
                if word_weight(w) != g.weight:
                    return False
        return True

    def same_differentials(self, other: "DgAlgebra") -> bool:
        if set(self.generators) != set(other.generators):
            return False
        return all(self.d(g) == other.d(g) for g in self.generators)

    def to_dict(self):
        return {
            "name": self.name,
            "degree_bound": self.degree_bound,
            "generators": [
                {
                    "label": g.label,
                    "symbol": g.symbol,
                    "key": list(g.key),
                    "degree": g.degree,
                    "weight": list(g.weight),
                    "braces": g.braces,
                }
                for g in self.generators
            ],
            "differential": [{"generator": g.label, "terms": self.d(g).to_json()} for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data):
        by_label = {}
        for entry in data["generators"]:
            g = Generator(
                entry["symbol"], tuple(entry["key"]), entry["degree"], tuple(entry.get("weight", ())),
                entry.get("braces", True),
            )
            by_label[entry["label"]] = g
        diff = {}
        for entry in data["differential"]:
            diff[by_label[entry["generator"]]] = GradedElement(
                (tuple(by_label[l] for l in labels), c) for c, labels in entry["terms"]
            )
        return cls(tuple(by_label.values()), diff, data.get("degree_bound"), data.get("name", ""))


def apply_diff(A: DgAlgebra, x: GradedElement) -> GradedElement:
    """Extend the generator differential by linearity and the Leibniz rule
    ``d(uv) = d(u) v + (-1)^{|u|} u d(v)``."""
    acc = {}
    for word, c in x._terms.items():
        prefix_deg = 0
        for i, g in enumerate(word):
            if g not in A._index:
                raise ForeignGeneratorError(f"{g.label} is not a generator of {A.name or 'the algebra'}")
            dg = A.diff.get(g)
            if dg:
                sign = -c if prefix_deg % 2 else c
                head, tail = word[:i], word[i + 1 :]
                for w, k in dg._terms.items():
                    nw = head + w + tail
                    v = acc.get(nw, 0) + sign * k
                    if v:
                        acc[nw] = v
                    else:
                        del acc[nw]
            prefix_deg += g.degree
    return GradedElement._raw(acc)


# --- polyhedral products of spheres ---------------------------------------


def _check_dims(K: SimplicialComplex, dims: Mapping[int, int]):
    missing = [v for v in K.vertices if v not in dims]
    if missing:
        raise MalformedInputError(f"no sphere dimension given for vertices {missing}")
    low = {v: dims[v] for v in K.vertices if dims[v] < 2}
    if low:
        raise UnsupportedInputError(f"sphere dimensions must be >= 2 (simply connected factors): {low}")


def sphere_generator(J: Sequence[int], dims: Mapping[int, int], symbol: str = "b") -> Generator:
    J = tuple(sorted(J))
    return Generator(symbol, J, sum(dims[j] for j in J) - 1, J)


def unshuffle_sign(J: Sequence[int], I: Sequence[int], dims: Mapping[int, int]) -> int:
    """Koszul sign ε(I, L) of moving the letters of ``I`` in front of ``L = J \\ I``,
    letters carrying the suspended degrees ``dims[j]``."""
    pos = {j: k for k, j in enumerate(J)}
    L = [j for j in J if j not in set(I)]
    perm = [pos[i] for i in I] + [pos[l] for l in L]
    return koszul_sign([dims[j] for j in J], perm)


def sphere_differential(J: Sequence[int], dims: Mapping[int, int], symbol: str = "b") -> GradedElement:
    """``d b_J`` as the sum over ordered partitions ``J = I ⊔ L``."""
    J = tuple(sorted(J))
    terms = {}
    for p in range(1, len(J)):
        for I in combinations(J, p):
            L = tuple(j for j in J if j not in I)
            sign = unshuffle_sign(J, I, dims)
            if sum(dims[i] for i in I) % 2:
                sign = -sign
            word = (sphere_generator(I, dims, symbol), sphere_generator(L, dims, symbol))
            terms[word] = terms.get(word, 0) + sign
    return GradedElement(terms)


def sphere_differential_brackets(J: Sequence[int], dims: Mapping[int, int], symbol: str = "b") -> GradedElement:
    """``d b_J`` as a sum of graded commutators over anchored shuffles.

    Independent of :func:`sphere_differential`; the two must agree.
    """
    J = tuple(sorted(J))
    s = len(J)
    degs = [dims[j] for j in J]
    total = GradedElement.zero()
    for p in range(1, s):
        for theta in shuffles(p, s - p, anchor_first=True):
            I = [J[k] for k in theta[:p]]
            L = [J[k] for k in theta[p:]]
            bI = sphere_generator(I, dims, symbol)
            coeff = koszul_sign(degs, theta) * (-1 if (bI.degree + 1) % 2 else 1)
            total = total + bracket(bI.element(), sphere_generator(L, dims, symbol).element()) * coeff
    return total


def cobar_spheres(K: SimplicialComplex, dims: Mapping[int, int] | None = None, symbol: str = "b") -> DgAlgebra:
    """Cobar construction of ``H_*`` of the polyhedral product of spheres ``S^{n_i}``.

    >>> from polycobar.complexes import full_simplex
    >>> A = cobar_spheres(full_simplex([1, 2]), {1: 5, 2: 2})
    >>> print(A.d(A.generator("b", (1, 2))))
    -b{1}*b{2} + b{2}*b{1}
    """
    if dims is None:
        dims = {v: 2 for v in K.vertices}
    _check_dims(K, dims)
    gens, diff = [], {}
    for J in K.nonempty_simplices():
        g = sphere_generator(J, dims, symbol)
        gens.append(g)
        diff[g] = sphere_differential(J, dims, symbol)
    dims_text = ",".join(f"{v}={dims[v]}" for v in K.vertices)
    return DgAlgebra(tuple(gens), diff, None, f"Cobar H(S^K) K={K} dims={dims_text}")


# --- Davis--Januszkiewicz spaces --------------------------------------------


def dj_generator(sigma: Multiset | Sequence[int]) -> Generator:
    elems = sigma.elements if isinstance(sigma, Multiset) else tuple(sorted(sigma))
    return Generator("x", elems, 2 * len(elems) - 1, elems)


def dj_differential(sigma: Multiset | Sequence[int]) -> GradedElement:
    if not isinstance(sigma, Multiset):
        sigma = Multiset(tuple(sigma))
    return GradedElement({(dj_generator(t), dj_generator(u)): 1 for t, u in sigma.splits()})


def multisets_on(J: Sequence[int], size: int):
    """Multisets of the given size whose support is exactly ``J``."""
    J = tuple(J)
    k = len(J)
    if size < k:
        return []
    out = []
    # stars and bars: extra copies distributed over J
    for bars in combinations(range(size - 1), k - 1):
        cuts = (-1,) + bars + (size - 1,)
        counts = {J[i]: cuts[i + 1] - cuts[i] for i in range(k)}
        out.append(Multiset.from_counts(counts))
    return out


def dj_generator_count(K: SimplicialComplex, degree_bound: int) -> int:
    """Closed-form generator count: ``C(s-1, |J|-1)`` multisets per simplex and size."""
    smax = (degree_bound + 1) // 2
    return sum(comb(s - 1, len(J) - 1) for J in K.nonempty_simplices() for s in range(len(J), smax + 1))


def cobar_dj(K: SimplicialComplex, degree_bound: int) -> DgAlgebra:
    """Cobar construction of the face coalgebra of ``K``, truncated at ``degree_bound``."""
    if degree_bound is None or degree_bound < 1:
        raise TruncationError("cobar_dj needs a degree bound N >= 1")
    smax = (degree_bound + 1) // 2
    gens, diff = [], {}
    for J in K.nonempty_simplices():
        for s in range(len(J), smax + 1):
            for sigma in multisets_on(J, s):
                g = dj_generator(sigma)
                gens.append(g)
                diff[g] = dj_differential(sigma)
    return DgAlgebra(tuple(gens), diff, degree_bound, f"Cobar Z<K> K={K} N={degree_bound}")


def ah_cpn(n: int | None, degree_bound: int | None = None) -> DgAlgebra:
    """Adams--Hilton model ``T(a_1..a_n)`` of CP^n; ``n=None`` means CP^∞.

    ``d a_i = a_1 a_{i-1} + a_2 a_{i-2} + ... + a_{i-1} a_1``.
    """
    if n is None:
        if degree_bound is None:
            raise TruncationError("CP^infinity needs a degree bound")
        top = (degree_bound + 1) // 2
    else:
        if n < 1:
            raise UnsupportedInputError("n must be >= 1")
        top = n if degree_bound is None else min(n, (degree_bound + 1) // 2)

    def a(i):
        return Generator("a", (i,), 2 * i - 1, (1,) * i, braces=False)

    gens = [a(i) for i in range(1, top + 1)]
    diff = {a(i): GradedElement({(a(k), a(i - k)): 1 for k in range(1, i)}) for i in range(1, top + 1)}
    label = "inf" if n is None else str(n)
    return DgAlgebra(tuple(gens), diff, degree_bound, f"AH(CP^{label})")


# --- generic cobar functor ---------------------------------------------------


DESUSPENSION = {"alpha": "b", "c": "x", "e": "a"}


@dataclass(frozen=True, eq=False)
class CoalgebraPresentation:
    """Finite table of a 1-connected dg coalgebra.

    Basis elements are :class:`Generator` objects (degree >= 2).  ``coproduct``
    lists the reduced coproduct as ``(sign, left, right)`` triples and
    ``internal_diff`` maps a basis element to a combination of basis elements.
    """

    basis: tuple
    coproduct: Mapping[Generator, list]
    internal_diff: Mapping[Generator, GradedElement] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        bset = set(self.basis)
        for c in self.basis:
            for sign, x, y in self.coproduct.get(c, ()):
                if x not in bset or y not in bset:
                    raise MalformedInputError(f"coproduct of {c.label} leaves the basis")
                if x.degree + y.degree != c.degree:
                    raise MalformedInputError(f"coproduct of {c.label} is not degree preserving")

    def reduced_coproduct(self, c):
        return GradedElement({(x, y): s for s, x, y in self.coproduct.get(c, ())})

    def coassociativity_defects(self):
        """Basis elements where ``(Δ⊗1)Δ != (1⊗Δ)Δ`` on the reduced coproduct."""
        bad = []
        for c in self.basis:
            left = GradedElement.zero()
            right = GradedElement.zero()
            for s, x, y in self.coproduct.get(c, ()):
                left = left + self.reduced_coproduct(x) * y.element() * s
                right = right + x.element() * self.reduced_coproduct(y) * s
            if left != right:
                bad.append(c)
        return bad


def cobar_of_coalgebra(C: CoalgebraPresentation, degree_bound: int | None = None) -> DgAlgebra:
    """``d(s⁻¹c) = -s⁻¹ d_C(c) + Σ (-1)^{|x_i|} s⁻¹x_i ⊗ s⁻¹y_i``."""

    def desuspend(c):
        if c.degree <= 1:
            raise UnsupportedInputError(
                f"basis element {c.label} has degree {c.degree}; the cobar functor needs C_0 = Z, C_1 = 0"
            )
        return Generator(DESUSPENSION.get(c.symbol, "s" + c.symbol), c.key, c.degree - 1, c.weight, c.braces)

    gens, diff = [], {}
    for c in C.basis:
        g = desuspend(c)
        if degree_bound is not None and g.degree > degree_bound:
            continue
        terms = {}
        for w, k in C.internal_diff.get(c, GradedElement.zero())._terms.items():
            (e,) = w
            terms[(desuspend(e),)] = terms.get((desuspend(e),), 0) - k
        for s, x, y in C.coproduct.get(c, ()):
            word = (desuspend(x), desuspend(y))
            terms[word] = terms.get(word, 0) + (-s if x.degree % 2 else s)
        gens.append(g)
        diff[g] = GradedElement(terms)
    return DgAlgebra(tuple(gens), diff, degree_bound, f"Cobar({C.name})")


def homology_coalgebra(K: SimplicialComplex, dims: Mapping[int, int] | None = None) -> CoalgebraPresentation:
    """Homology coalgebra of the polyhedral product of spheres, basis ``α_J``."""
    if dims is None:
        dims = {v: 2 for v in K.vertices}
    _check_dims(K, dims)

    def alpha(J):
        return Generator("alpha", tuple(J), sum(dims[j] for j in J), tuple(J))

    basis, coproduct = [], {}
    for J in K.nonempty_simplices():
        basis.append(alpha(J))
        coproduct[alpha(J)] = [
            (unshuffle_sign(J, I, dims), alpha(I), alpha(tuple(j for j in J if j not in I)))
            for p in range(1, len(J))
            for I in combinations(J, p)
        ]
    return CoalgebraPresentation(tuple(basis), coproduct, {}, f"H(S^K) K={K}")


def face_coalgebra(K: SimplicialComplex, max_degree: int) -> CoalgebraPresentation:
    """Face coalgebra ``Z<K>`` with basis ``c_σ``, ``|c_σ| = 2|σ| <= max_degree``."""

    def c(sigma):
        return Generator("c", sigma.elements, 2 * sigma.size, sigma.elements)

    basis, coproduct = [], {}
    for J in K.nonempty_simplices():
        for s in range(len(J), max_degree // 2 + 1):
            for sigma in multisets_on(J, s):
                basis.append(c(sigma))
                coproduct[c(sigma)] = [(1, c(t), c(u)) for t, u in sigma.splits()]
    return CoalgebraPresentation(tuple(basis), coproduct, {}, f"Z<K> K={K} <= {max_degree}")


# --- checks and maps ------------------------------------------------------


@dataclass
class DSquaredReport:
    algebra: str
    checked: int
    failures: dict

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            "algebra": self.algebra,
            "checked": self.checked,
            "passed": self.passed,
            "failures": {g.label: str(v) for g, v in self.failures.items()},
        }


def _dd_chunk(args):
    A, gens = args
    return [(g, apply_diff(A, A.d(g))) for g in gens]


def check_d_squared(A: DgAlgebra, jobs: int = 1) -> DSquaredReport:
    gens = list(A.generators)
    if jobs > 1 and len(gens) > 1:
        chunks = [gens[k::jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [r for part in pool.map(_dd_chunk, [(A, c) for c in chunks]) for r in part]
    else:
        results = _dd_chunk((A, gens))
    failures = {g: v for g, v in sorted(results, key=lambda t: t[0].sort_key()) if v}
    if failures:
        log.warning("d^2 != 0 on %d generators of %s", len(failures), A.name)
    return DSquaredReport(A.name, len(gens), failures)


def subalgebra_membership(A_big: DgAlgebra, A_small: DgAlgebra, x: GradedElement) -> bool:
    """Whether every word of ``x`` only uses generators of ``A_small``."""
    if not set(A_small.generators) <= set(A_big.generators):
        raise PreconditionError(f"{A_small.name} is not a subalgebra of {A_big.name}")
    return all(g in A_small for g in x.generators())


@dataclass(frozen=True, eq=False)
class DgaMap:
    """Algebra homomorphism ``source -> target`` fixed by generator images."""

    source: DgAlgebra
    target: DgAlgebra
    images: Mapping[Generator, GradedElement]

    def __post_init__(self):
        for g in self.source.generators:
            if g not in self.images:
                raise ForeignGeneratorError(f"no image for {g.label}")
            img = self.images[g]
            if img and img.degree() != g.degree:
                raise MalformedInputError(f"image of {g.label} has degree {img.degree()}, expected {g.degree}")
            for h in img.generators():
                if h not in self.target:
                    raise ForeignGeneratorError(f"image of {g.label} uses {h.label}, not in the target")

    def __call__(self, x: GradedElement) -> GradedElement:
        return substitute(x, self.images)

    def chain_map_defects(self):
        """Generators ``v`` with ``d(f v) != f(d v)``, mapped to the difference."""
        out = {}
        for g in self.source.generators:
            delta = apply_diff(self.target, self.images[g]) - self(self.source.d(g))
            if delta:
                out[g] = delta
        return out

    def compose(self, after: "DgaMap") -> "DgaMap":
        """``after ∘ self``."""
        return DgaMap(self.source, after.target, {g: after(self.images[g]) for g in self.source.generators})


def canonical_embedding(K: SimplicialComplex, degree_bound: int | None = None) -> DgaMap:
    """``b_J -> x_J`` from the all-dims-2 sphere cobar into the face-coalgebra cobar."""
    top = max(2 * len(J) - 1 for J in K.nonempty_simplices())
    source = cobar_spheres(K)
    target = cobar_dj(K, degree_bound or top)
    if target.degree_bound < top:
        raise TruncationError(f"degree bound must be at least {top}")
    return DgaMap(source, target, {g: dj_generator(g.key).element() for g in source.generators})


def assert_cycle(A: DgAlgebra, x: GradedElement, what: str = "element"):
    dx = apply_diff(A, x)
    if dx:
        raise InvariantViolation(f"{what} is not a cycle: d = {dx}")
