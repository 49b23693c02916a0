"""Cobar cycles representing Hurewicz images of higher Whitehead products.

Everything is first computed in the algebra of a full simplex, where the
needed generators exist, and then checked to lie in the subalgebra of the
complex ``K`` at hand.

>>> w = first_order_hurewicz_cycle((1, 2), full_simplex([1, 2]))
>>> print(w.chain)
x{1}*x{2} + x{2}*x{1}
>>> hurewicz_class_report(w)["zero_class"]
True
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import GradedElement, bracket, substitute
from .cobar import (
    DgAlgebra,
    DgaMap,
    apply_diff,
    cobar_dj,
    cobar_spheres,
    dj_differential,
    dj_generator,
    sphere_differential_brackets,
    sphere_generator,
    subalgebra_membership,
)
from .complexes import (
    BracketExpr,
    Leaf,
    Node,
    SimplicialComplex,
    boundary_simplex,
    complexes_of_bracket,
    contains_subcomplex,
    full_simplex,
    missing_simplices,
    parse_bracket,
)
from .errors import (
    InvariantViolation,
    MalformedInputError,
    NotDefinedError,
    UnsupportedInputError,
)
from .homology import class_is_zero

EXAMPLE_BRACKET = "[[m1,m2,m3],m4,m5]"


@dataclass(frozen=True, eq=False)
class WhiteheadChain:
    bracket: BracketExpr
    ambient: DgAlgebra
    chain: GradedElement
    degree: int

    def to_dict(self):
        return {
            "bracket": str(self.bracket),
            "ambient": self.ambient.name,
            "degree": self.degree,
            "chain": str(self.chain),
            "terms": self.chain.to_json(),
        }


def attaching_cycle(J: Sequence[int], dims: Mapping[int, int] | None = None, symbol: str = "b") -> GradedElement:
    """Image of the attaching map of the top cell of ``∏_{j∈J} S^{n_j}``.

    This is ``∂b_J`` computed in the full-simplex algebra; all its words
    avoid ``b_J`` and so live over the boundary of the simplex.
    """
    J = tuple(sorted(J))
    if len(J) < 2:
        raise UnsupportedInputError("an attaching cycle needs at least two spheres")
    if dims is None:
        dims = {j: 2 for j in J}
    # validates dims
    cobar_spheres(full_simplex(J), dims, symbol)
    return sphere_differential_brackets(J, dims, symbol)


def _require_inside(K: SimplicialComplex, L: SimplicialComplex, what: str):
    if not contains_subcomplex(K, L):
        missing = missing_simplices(K, L)[0]
        raise NotDefinedError(
            f"{what} is not defined: simplex {{{','.join(map(str, missing))}}} is missing from K", missing
        )


def first_order_hurewicz_cycle(I: Sequence[int], K: SimplicialComplex) -> WhiteheadChain:
    """The cycle ``"∂χ_I"`` in ``Cobar Z<K>`` for the bracket ``[μ_i, i ∈ I]``."""
    I = tuple(sorted(I))
    if len(set(I)) != len(I):
        raise MalformedInputError(f"repeated index in {I}")
    if len(I) < 2:
        raise UnsupportedInputError("a Whitehead product needs at least two entries")
    w = Node(tuple(Leaf(i) for i in I))
    _require_inside(K, boundary_simplex(I), f"the product {w}")
    ambient = cobar_dj(K, 2 * len(I) - 1)
    chain = dj_differential(I)
    if not all(g in ambient for g in chain.generators()):
        raise InvariantViolation(f"chain of {w} leaves the algebra of K")
    return WhiteheadChain(w, ambient, chain, 2 * len(I) - 2)


# --- the iterated example [[m1,m2,m3],m4,m5] -------------------------------------


def _example_labels(w: BracketExpr):
    """``(inner triple, outer pair)`` for a bracket of shape ``[[a,b,c],d,e]``."""
    if (
        isinstance(w, Node)
        and len(w.children) == 3
        and isinstance(w.children[0], Node)
        and len(w.children[0].children) == 3
        and all(isinstance(c, Leaf) for c in w.children[0].children)
        and all(isinstance(c, Leaf) for c in w.children[1:])
    ):
        inner = tuple(c.index for c in w.children[0].children)
        return inner, (w.children[1].index, w.children[2].index)
    raise UnsupportedInputError(f"iterated chains are only built for brackets of shape [[a,b,c],d,e], got {w}")


def ah_map_g_images(labels: Sequence[int] = (1, 2, 3, 4, 5)):
    """Generator images of the model of ``g`` for ``[[a,b,c],d,e]``.

    Source: the sphere cobar of ``∂Δ(1,2,3)`` with dimensions ``(5, 2, 2)``.
    Target: the sphere cobar (symbol ``c``, all dimensions 2) of the
    substitution complex on ``labels``.
    """
    a, b, c, d, e = labels
    src_dims = {1: 5, 2: 2, 3: 2}
    tgt_dims = {v: 2 for v in labels}

    def b_(*J):
        return sphere_generator(J, src_dims, "b")

    def c_(*J):
        return sphere_generator(J, tgt_dims, "c").element()

    def six(x):
        # "∂c_{abcx}" with the top cell c_{abc} removed
        return (
            bracket(c_(a, b, x), c_(c))
            + bracket(c_(a, c, x), c_(b))
            + bracket(c_(a), c_(b, c, x))
            + bracket(c_(a, b), c_(c, x))
            + bracket(c_(a, c), c_(b, x))
            + bracket(c_(a, x), c_(b, c))
        )

    return {
        b_(1): bracket(c_(a), c_(b, c)) + bracket(c_(a, b), c_(c)) + bracket(c_(a, c), c_(b)),
        b_(2): c_(d),
        b_(3): c_(e),
        b_(1, 2): six(d),
        b_(1, 3): six(e),
        b_(2, 3): c_(d, e),
    }


def ah_map_g(labels: Sequence[int] = (1, 2, 3, 4, 5)) -> DgaMap:
    a, b, c, d, e = labels
    K = complexes_of_bracket(Node((Node((Leaf(a), Leaf(b), Leaf(c))), Leaf(d), Leaf(e))))[0]
    source = cobar_spheres(boundary_simplex([1, 2, 3]), {1: 5, 2: 2, 3: 2})
    target = cobar_spheres(K, {v: 2 for v in K.vertices}, "c")
    return DgaMap(source, target, ah_map_g_images(labels))


def _composite_route(labels, ambient):
    """``a_1 -> "∂b_123" -> AH(g) -> c_J ↦ χ_J``."""
    top = attaching_cycle((1, 2, 3), {1: 5, 2: 2, 3: 2})
    g = ah_map_g(labels)
    defects = g.chain_map_defects()
    if defects:
        bad = ", ".join(h.label for h in defects)
        raise InvariantViolation(f"the model of g is not a chain map on {bad}")
    image = g(top)
    incl = {h: dj_generator(h.key).element() for h in g.target.generators}
    out = substitute(image, incl)
    for h in out.generators():
        if h not in ambient:
            raise InvariantViolation(f"{h.label} is not in {ambient.name}")
    return out


def iterated_example_chain(w: BracketExpr | str | None = None, K: SimplicialComplex | None = None) -> WhiteheadChain:
    """The degree-7 cycle ``-∂([χ_abc, χ_de] + [χ_abcd, χ_e] + [χ_abce, χ_d])``.

    ``w`` defaults to ``[[m1,m2,m3],m4,m5]`` and ``K`` to ``∂Δ_w``.  The
    result is checked to be a cycle, to lie in ``Cobar Z<K>`` and to agree
    with the composite of the generator tables.
    """
    if w is None:
        w = EXAMPLE_BRACKET
    if isinstance(w, str):
        w = parse_bracket(w)
    (a, b, c), (d, e) = _example_labels(w)
    boundary, _ = complexes_of_bracket(w)
    if K is None:
        K = boundary
    _require_inside(K, boundary, f"the product {w}")
    labels = (a, b, c, d, e)
    full = cobar_dj(full_simplex(labels), 8)
    ambient = cobar_dj(K, 8)

    def chi(*s):
        return dj_generator(s).element()

    top = bracket(chi(a, b, c), chi(d, e)) + bracket(chi(a, b, c, d), chi(e)) + bracket(chi(a, b, c, e), chi(d))
    chain = -apply_diff(full, top)
    if not subalgebra_membership(full, cobar_dj(boundary, 8), chain):
        raise InvariantViolation(f"chain of {w} does not restrict to ∂Δ_w")
    if apply_diff(ambient, chain):
        raise InvariantViolation(f"chain of {w} is not a cycle")
    if _composite_route(labels, ambient) != chain:
        raise InvariantViolation("direct and composite evaluations of the example chain differ")
    return WhiteheadChain(w, ambient, chain, chain.degree())


def hurewicz_class_report(w: WhiteheadChain):
    """Cycle check and zero-class verdict in the ambient algebra."""
    cycle = not apply_diff(w.ambient, w.chain)
    if not cycle:
        return {"cycle": False, "zero_class": None, "witness": None}
    result = class_is_zero(w.ambient, w.chain)
    return {"cycle": True, "zero_class": result.is_zero, "witness": result.witness}
