"""Degree-truncated integer homology of free dg algebras.

Chain groups are spanned by words of a fixed total degree.  When the
differential preserves word weights (vertex content), every chain group
splits into blocks indexed by weight and each block is reduced separately;
this keeps the Smith normal form computations small.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .algebra import GradedElement, word_sort_key, word_weight
from .cobar import DgAlgebra, apply_diff
from .errors import ForeignGeneratorError, NotACycleError, TruncationError


@dataclass(frozen=True)
class DegreeBasis:
    degree: int
    words: tuple
    weight: tuple | None = None

    def __len__(self):
        return len(self.words)

    def index(self):
        return {w: k for k, w in enumerate(self.words)}


@dataclass
class IntMatrix:
    """Sparse integer matrix stored as ``{(row, col): value}``."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    @classmethod
    def from_dense(cls, dense):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, r in enumerate(dense) for j, v in enumerate(r) if v})

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def is_zero(self):
        return not self.entries

    def __matmul__(self, other):
        acc = defaultdict(int)
        by_row = defaultdict(list)
        for (k, j), v in other.entries.items():
            by_row[k].append((j, v))
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                acc[i, j] += u * v
        return IntMatrix(self.rows, other.cols, {ij: v for ij, v in acc.items() if v})


def _check_bound(A: DgAlgebra, d: int):
    if A.degree_bound is not None and d > A.degree_bound:
        raise TruncationError(f"degree {d} exceeds the truncation bound {A.degree_bound} of {A.name}")


def basis_in_degree(A: DgAlgebra, d: int, weight: tuple | None = None) -> DegreeBasis:
    """All words of total degree ``d`` (optionally of the given weight), in canonical order."""
    if d < 0:
        return DegreeBasis(d, (), weight)
    _check_bound(A, d)
    gens = [g for g in A.generators if g.degree <= d]
    target = Counter(weight) if weight is not None else None
    out = []

    def extend(prefix, remaining, left):
        if remaining == 0:
            if left is None or not +left:
                out.append(prefix)
            return
        for g in gens:
            if g.degree > remaining:
                break
            if left is not None:
                need = Counter(g.weight)
                if any(left[v] < k for v, k in need.items()):
                    continue
                extend(prefix + (g,), remaining - g.degree, left - need)
            else:
                extend(prefix + (g,), remaining - g.degree, None)

    extend((), d, target)
    out.sort(key=word_sort_key)
    return DegreeBasis(d, tuple(out), weight)


def _blocks(A: DgAlgebra, d: int):
    """Basis of degree ``d`` grouped by weight (a single block when not weight graded)."""
    basis = basis_in_degree(A, d)
    if not A.weight_graded:
        return {None: basis}
    groups = defaultdict(list)
    for w in basis.words:
        groups[word_weight(w)].append(w)
    return {k: DegreeBasis(d, tuple(v), k) for k, v in groups.items()}


def _matrix(A: DgAlgebra, source: DegreeBasis, target: DegreeBasis) -> IntMatrix:
    row = target.index()
    entries = {}
    for j, w in enumerate(source.words):
        for v, c in apply_diff(A, GradedElement._raw({w: 1}))._terms.items():
            entries[row[v], j] = c
    return IntMatrix(len(target), len(source), entries)


def boundary_matrix(A: DgAlgebra, d: int, weight: tuple | None = None) -> IntMatrix:
    """Matrix of ``d: C_d -> C_{d-1}``; column j holds the coordinates of ``d(word_j)``."""
    return _matrix(A, basis_in_degree(A, d, weight), basis_in_degree(A, d - 1, weight))


# --- Smith normal form -------------------------------------------------------


@dataclass
class SmithForm:
    factors: list
    U: list | None = None
    V: list | None = None

    @property
    def rank(self):
        return len(self.factors)


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M, with_transforms: bool = False) -> SmithForm:
    """Invariant factors ``d_1 | d_2 | ...`` of an integer matrix.

    With ``with_transforms`` also returns unimodular ``U`` and ``V`` with
    ``U M V = D``.  Pivots are chosen by smallest absolute value.

    >>> smith_normal_form([[2, 4], [6, 8]]).factors
    [2, 4]
    """
    A = M.to_dense() if isinstance(M, IntMatrix) else [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else (M.cols if isinstance(M, IntMatrix) else 0)
    U = _identity(m) if with_transforms else None
    V = _identity(n) if with_transforms else None

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        if U is not None:
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        if V is not None:
            for r in V:
                r[j], r[k] = r[k], r[j]

    def add_row(src, dst, q):  # row_dst += q * row_src
        a, b = A[src], A[dst]
        for j in range(n):
            if a[j]:
                b[j] += q * a[j]
        if U is not None:
            a, b = U[src], U[dst]
            for j in range(m):
                if a[j]:
                    b[j] += q * a[j]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for r in A:
            if r[src]:
                r[dst] += q * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    factors = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                if row[j] and (best is None or abs(row[j]) < best[0]):
                    best = (abs(row[j]), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest remainder in row/column t onto the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            if abs(p) == 1:
                break
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        factors.append(A[t][t])
        t += 1
    return SmithForm(factors, U, V)


# --- homology ------------------------------------------------------------


@dataclass
class DegreeHomology:
    degree: int
    free_rank: int
    torsion: list
    chain_rank: int

    def to_dict(self):
        return {"degree": self.degree, "rank": self.free_rank, "torsion": self.torsion, "chains": self.chain_rank}


@dataclass
class HomologySummary:
    algebra: str
    degrees: list

    def ranks(self):
        return [h.free_rank for h in self.degrees]

    def has_torsion(self):
        return any(h.torsion for h in self.degrees)

    def to_dict(self):
        return {"algebra": self.algebra, "degrees": [h.to_dict() for h in self.degrees]}


def _factors_of(dense):
    return smith_normal_form(dense).factors


def homology(A: DgAlgebra, up_to: int, jobs: int = 1) -> HomologySummary:
    """Ranks and torsion of ``H_d`` for ``0 <= d <= up_to``."""
    if A.degree_bound is not None and A.degree_bound < up_to + 1:
        raise TruncationError(
            f"homology up to degree {up_to} needs the algebra truncated at >= {up_to + 1}, got {A.degree_bound}"
        )
    blocks = {d: _blocks(A, d) for d in range(0, up_to + 2)}
    tasks = []
    for d in range(1, up_to + 2):
        for key, src in blocks[d].items():
            tgt = blocks[d - 1].get(key, DegreeBasis(d - 1, (), key))
            mat = _matrix(A, src, tgt)
            if not mat.is_zero():
                tasks.append((d, mat.to_dense()))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_factors_of, [t[1] for t in tasks]))
    else:
        results = [_factors_of(t[1]) for t in tasks]
    rank = defaultdict(int)
    torsion = defaultdict(list)
    for (d, _), factors in zip(tasks, results):
        rank[d] += len(factors)
        torsion[d - 1].extend(f for f in factors if f > 1)
    out = []
    for d in range(0, up_to + 1):
        size = sum(len(b) for b in blocks[d].values())
        out.append(DegreeHomology(d, size - rank[d] - rank[d + 1], sorted(torsion[d]), size))
    return HomologySummary(A.name, out)


@dataclass
class ZeroClassResult:
    is_zero: bool
    witness: GradedElement | None = None


def class_is_zero(A: DgAlgebra, z: GradedElement) -> ZeroClassResult:
    """Decide whether the cycle ``z`` is a boundary, returning an integral witness ``x`` with ``dx = z``."""
    if not z:
        return ZeroClassResult(True, GradedElement.zero())
    d = z.degree()
    for g in z.generators():
        if g not in A:
            raise ForeignGeneratorError(f"{g.label} is not a generator of {A.name}")
    if apply_diff(A, z):
        raise NotACycleError("element is not a cycle")
    _check_bound(A, d + 1)
    if A.weight_graded:
        parts = defaultdict(dict)
        for w, c in z._terms.items():
            parts[word_weight(w)][w] = c
    else:
        parts = {None: dict(z._terms)}
    witness = GradedElement.zero()
    for weight, terms in sorted(parts.items(), key=lambda t: (t[0] is None, t[0] or ())):
        src = basis_in_degree(A, d + 1, weight)
        tgt = basis_in_degree(A, d, weight)
        row = tgt.index()
        b = [0] * len(tgt)
        for w, c in terms.items():
            b[row[w]] = c
        x = solve_integer(_matrix(A, src, tgt), b)
        if x is None:
            return ZeroClassResult(False, None)
        witness = witness + GradedElement({src.words[j]: c for j, c in enumerate(x) if c})
    return ZeroClassResult(True, witness)


def solve_integer(M: IntMatrix, b):
    """An integer solution of ``M x = b`` or ``None`` when there is none."""
    snf = smith_normal_form(M, with_transforms=True)
    ub = [sum(u * v for u, v in zip(row, b)) for row in snf.U]
    y = [0] * M.cols
    for i, f in enumerate(snf.factors):
        if ub[i] % f:
            return None
        y[i] = ub[i] // f
    if any(ub[i] for i in range(snf.rank, M.rows)):
        return None
    return [sum(snf.V[i][j] * y[j] for j in range(M.cols)) for i in range(M.cols)]
