"""Structured inversion and fractionality certificates.

Both operations follow the same recursion over the block structure of a
matrix with a bounded-treedepth column interaction graph.  The structured
inverse peels an invertible matrix apart block by block, recording every
elimination factor; the certificate runs the same recursion on bounds alone
and yields an integer that dominates the largest inverse denominator over all
invertible column submatrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .blocks import graft_path_above, primal_decompose
from .linalg import (Matrix, SingularMatrixError, block_diagonal,
                     mat_inverse, permutation_matrix)
from .structure import CapExceededError as _BaseCapError
from .structure import (StructureError, TdDecomposition, TdStats, primal_graph,
                        restrict_decomposition, td_stats, validate_td)

_LOG2_E = math.log2(math.e)


class CapExceededError(_BaseCapError):
    """Certificate grew past the configured bit cap.

    Carries ``log2_estimate``, an upper estimate of log2 of the true bound
    (may be ``inf`` when even the estimate overflows a float).
    """

    def __init__(self, log2_estimate: float, trace: Optional["CertNode"] = None):
        super().__init__(f"certificate exceeds bit cap (log2 ~ {log2_estimate:.6g})")
        self.log2_estimate = log2_estimate
        self.trace = trace


# ---------------------------------------------------------------------------
# structured inverse
# ---------------------------------------------------------------------------

def _unpermute(m: Matrix, row_perm: Sequence[int], col_perm: Sequence[int]) -> Matrix:
    """Undo ``perm = a.submatrix(row_perm, col_perm)`` on perm's inverse."""
    return permutation_matrix(col_perm).transpose() * m * permutation_matrix(row_perm)


@dataclass(frozen=True)
class BaseTrace:
    """Direct inversion of a matrix whose tree is a single path."""

    matrix: Matrix

    def replay(self) -> Matrix:
        return mat_inverse(self.matrix)


@dataclass(frozen=True)
class ForestTrace:
    """Block-diagonal split over the trees of a forest decomposition."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    parts: tuple["InverseTrace", ...]

    def replay(self) -> Matrix:
        return _unpermute(block_diagonal([p.replay() for p in self.parts]),
                          self.row_perm, self.col_perm)


@dataclass(frozen=True)
class PeelBase:
    """End of a peeling chain: the leftover border square, inverted directly."""

    matrix: Matrix

    def replay(self) -> Matrix:
        return mat_inverse(self.matrix)


@dataclass(frozen=True)
class PeelStep:
    """One peel: eliminate a strict block via its invertible column set.

    The inverse of the permuted matrix is ``e3 * diag(I, beta * rest) * e2 * e1``
    where rest is the inverse of the beta-scaled remainder.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    chosen_cols: tuple[int, ...]
    border_width: int
    m1: int
    b1: "InverseTrace"
    e1: Matrix
    e2: Matrix
    e3: Matrix
    beta: int
    rest: Union["PeelStep", PeelBase]

    def replay(self) -> Matrix:
        inner = self.rest.replay()
        mid = block_diagonal([Matrix.identity(self.m1), self.beta * inner])
        return _unpermute(self.e3 * mid * self.e2 * self.e1,
                          self.row_perm, self.col_perm)


@dataclass(frozen=True)
class SplitTrace:
    """Border split: strict blocks (with the border) left, square blocks right."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    q1_size: int
    q1: Union[PeelStep, PeelBase]
    q2_parts: tuple["InverseTrace", ...]
    lower_left: Matrix

    def replay(self) -> Matrix:
        q1_inv = self.q1.replay()
        q2_inv = block_diagonal([p.replay() for p in self.q2_parts])
        corr = -1 * (q2_inv * self.lower_left * q1_inv)
        n = len(self.row_perm)
        rows = []
        for i in range(self.q1_size):
            rows.append(list(q1_inv.row(i)) + [Fraction(0)] * (n - self.q1_size))
        for i in range(n - self.q1_size):
            rows.append(list(corr.row(i)) + list(q2_inv.row(i)))
        return _unpermute(Matrix(rows, cols=n), self.row_perm, self.col_perm)


InverseTrace = Union[BaseTrace, ForestTrace, PeelStep, PeelBase, SplitTrace]


@dataclass(frozen=True)
class StructuredInverseTrace:
    """Top-level record of a structured inversion."""

    root: InverseTrace

    def replay(self) -> Matrix:
        return self.root.replay()


def _greedy_invertible_columns(strip: Matrix) -> list[int]:
    """Leftmost column subset of full row rank, grown by exact rank tests."""
    m = strip.rows
    chosen: list[int] = []
    basis: list[list[Fraction]] = []  # row-echelon scratch of chosen columns (as rows)
    for j in range(strip.cols):
        if len(chosen) == m:
            break
        cand = list(strip.col(j))
        # eliminate against current basis vectors
        for vec in basis:
            lead = next(k for k, x in enumerate(vec) if x != 0)
            if cand[lead] != 0:
                f = cand[lead] / vec[lead]
                cand = [x - f * y for x, y in zip(cand, vec)]
        if any(x != 0 for x in cand):
            basis.append(cand)
            chosen.append(j)
    if len(chosen) != m:
        raise SingularMatrixError("block strip does not have full row rank")
    return chosen


def _invert_q1(q: Matrix, border: list[int],
               blocks: list[tuple[list[int], list[int], TdDecomposition]],
               bit_cap: int) -> tuple[Matrix, Union[PeelStep, PeelBase]]:
    """Peel the strict blocks of q one at a time.

    border and blocks hold column/row positions local to q; every block's rows
    are zero outside border + its own columns, an invariant maintained across
    peels because only leftover columns are ever modified.
    """
    if not blocks:
        return mat_inverse(q), PeelBase(q)

    rows1, cols1, f1 = blocks[0]
    m1 = len(rows1)
    cand_cols = border + cols1
    strip = q.submatrix(rows1, cand_cols)
    chosen_rel = _greedy_invertible_columns(strip)
    chosen = [cand_cols[i] for i in chosen_rel]

    hat = graft_path_above(f1, len(border))
    b1 = strip.submatrix(range(m1), chosen_rel)
    b1_inv, b1_trace = _structured(b1, restrict_decomposition(hat, chosen_rel), bit_cap)

    rest_cand = [c for c in cand_cols if c not in set(chosen)]
    other_cols = [c for _, cs, _ in blocks[1:] for c in cs]
    other_rows = [r for rs, _, _ in blocks[1:] for r in rs]
    col_perm = chosen + rest_cand + other_cols
    row_perm = rows1 + other_rows
    qp = q.submatrix(row_perm, col_perm)
    s = q.rows

    n1 = len(rest_cand)
    t_mat = b1_inv * qp.submatrix(range(m1), range(m1, m1 + n1))
    u_mat = qp.submatrix(range(m1, s), range(m1))

    e1 = block_diagonal([b1_inv, Matrix.identity(s - m1)])
    e2_rows = []
    for i in range(s):
        row = [Fraction(0)] * s
        row[i] = Fraction(1)
        if i >= m1:
            for j in range(m1):
                row[j] = -u_mat[i - m1, j]
        e2_rows.append(row)
    e2 = Matrix(e2_rows, cols=s)
    e3_rows = []
    for i in range(s):
        row = [Fraction(0)] * s
        row[i] = Fraction(1)
        if i < m1:
            for j in range(n1):
                row[m1 + j] = -t_mat[i, j]
        e3_rows.append(row)
    e3 = Matrix(e3_rows, cols=s)

    reduced = e2 * (e1 * qp) * e3
    q2pp = reduced.submatrix(range(m1, s), range(m1, s))
    beta = 1
    for x in q2pp.entries():
        beta = beta * x.denominator // math.gcd(beta, x.denominator)
    q1p = beta * q2pp

    # positions in the peeled matrix: leftover candidate columns become border
    new_border = list(range(n1))
    new_blocks = []
    c0 = n1
    r0 = 0
    for rs, cs, fdec in blocks[1:]:
        new_blocks.append((list(range(r0, r0 + len(rs))),
                           list(range(c0, c0 + len(cs))), fdec))
        r0 += len(rs)
        c0 += len(cs)
    rest_inv, rest_trace = _invert_q1(q1p, new_border, new_blocks, bit_cap)

    mid = block_diagonal([Matrix.identity(m1), beta * rest_inv])
    qp_inv = e3 * mid * e2 * e1
    q_inv = _unpermute(qp_inv, row_perm, col_perm)
    step = PeelStep(tuple(row_perm), tuple(col_perm), tuple(chosen), len(border),
                    m1, b1_trace, e1, e2, e3, beta, rest_trace)
    return q_inv, step


def _structured(a: Matrix, f: TdDecomposition, bit_cap: int) -> tuple[Matrix, InverseTrace]:
    if a.rows != a.cols:
        raise SingularMatrixError("structured inversion needs a square matrix")
    if a.rows == 0:
        return Matrix([], cols=0), BaseTrace(a)

    if len(f.roots) > 1:
        # forest: columns of different trees never share a row, so the matrix
        # is block diagonal up to permutation
        col_groups = [f.subtree(r) for r in f.roots]
        owner = {}
        for gi, cols in enumerate(col_groups):
            for c in cols:
                owner[c] = gi
        row_groups: list[list[int]] = [[] for _ in col_groups]
        for i in range(a.rows):
            support = [j for j in range(a.cols) if a[i, j] != 0]
            if not support:
                raise SingularMatrixError("zero row")
            owners = {owner[j] for j in support}
            if len(owners) != 1:
                raise StructureError("row spans decomposition trees")
            row_groups[owners.pop()].append(i)
        parts = []
        inverses = []
        for cols, rows in zip(col_groups, row_groups):
            if len(cols) != len(rows):
                raise SingularMatrixError("non-square component block")
            sub = a.submatrix(rows, cols)
            inv, tr = _structured(sub, restrict_decomposition(f, cols), bit_cap)
            inverses.append(inv)
            parts.append(tr)
        row_perm = tuple(i for rg in row_groups for i in rg)
        col_perm = tuple(j for cg in col_groups for j in cg)
        inv = _unpermute(block_diagonal(inverses), row_perm, col_perm)
        return inv, ForestTrace(row_perm, col_perm, tuple(parts))

    if td_stats(f).topological_height <= 1:
        return mat_inverse(a), BaseTrace(a)

    bs = primal_decompose(a, f)
    strict = [b for b in bs.blocks if b.diagonal.rows > b.diagonal.cols]
    square = [b for b in bs.blocks if b.diagonal.rows == b.diagonal.cols]
    if len(strict) + len(square) != len(bs.blocks):
        raise SingularMatrixError("block with more columns than rows")

    q1_rows = [i for b in strict for i in b.row_ids]
    q1_cols = list(bs.border_cols) + [j for b in strict for j in b.col_ids]
    q2_rows = [i for b in square for i in b.row_ids]
    q2_cols = [j for b in square for j in b.col_ids]
    if len(q1_rows) != len(q1_cols):
        raise SingularMatrixError("unbalanced border split")

    row_perm = q1_rows + q2_rows
    col_perm = q1_cols + q2_cols
    s1 = len(q1_cols)

    q1_matrix = a.submatrix(q1_rows, q1_cols)
    border_local = list(range(bs.k1))
    blocks_local = []
    c0 = bs.k1
    r0 = 0
    for b in strict:
        blocks_local.append((list(range(r0, r0 + b.diagonal.rows)),
                             list(range(c0, c0 + b.diagonal.cols)),
                             b.decomposition))
        r0 += b.diagonal.rows
        c0 += b.diagonal.cols
    q1_inv, q1_trace = _invert_q1(q1_matrix, border_local, blocks_local, bit_cap)

    q2_invs = []
    q2_parts = []
    for b in square:
        inv, tr = _structured(b.diagonal, b.decomposition, bit_cap)
        q2_invs.append(inv)
        q2_parts.append(tr)
    q2_inv = block_diagonal(q2_invs) if q2_invs else Matrix([], cols=0)

    lower_left = a.submatrix(q2_rows, q1_cols)
    corr = -1 * (q2_inv * lower_left * q1_inv)

    n = a.rows
    rows = []
    for i in range(s1):
        rows.append(list(q1_inv.row(i)) + [Fraction(0)] * (n - s1))
    for i in range(n - s1):
        rows.append(list(corr.row(i)) + list(q2_inv.row(i)))
    inv = _unpermute(Matrix(rows, cols=n), row_perm, col_perm)
    trace = SplitTrace(tuple(row_perm), tuple(col_perm), s1, q1_trace,
                       tuple(q2_parts), lower_left)
    return inv, trace


def structured_inverse(a: Matrix, f: TdDecomposition,
                       bit_cap: int = 10 ** 6) -> tuple[Matrix, StructuredInverseTrace]:
    """Invert a by the recursion over its block structure.

    f must validate against the primal graph of a.  The result equals
    ``mat_inverse(a)`` exactly; the trace records the split, the elimination
    factors and scalings of every peel, and can replay them.
    """
    if a.rows != a.cols:
        raise SingularMatrixError("matrix is not square")
    if f.vertex_count != a.cols:
        raise StructureError("decomposition size does not match column count")
    if not validate_td(primal_graph(a), f):
        raise StructureError("decomposition does not validate against the primal graph")
    inv, trace = _structured(a, f, bit_cap)
    return inv, StructuredInverseTrace(trace)


# ---------------------------------------------------------------------------
# certificate arithmetic
# ---------------------------------------------------------------------------

class Bound:
    """Integer bound tracked exactly up to a bit cap, with a log2 estimate.

    The log2 field is always an upper estimate of the true value; exact is
    None once the value outgrew the cap.
    """

    __slots__ = ("exact", "log2")

    def __init__(self, exact: Optional[int], log2: float):
        self.exact = exact
        self.log2 = log2

    def __repr__(self):
        if self.exact is not None:
            return f"Bound({self.exact})"
        return f"Bound(~2^{self.log2:.4g})"

    def describe(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return f"~2^{self.log2:.6g}"


class _BoundArith:
    """Bound arithmetic under a bit cap."""

    def __init__(self, bit_cap: int):
        self.cap = bit_cap

    def of(self, n: int) -> Bound:
        if n < 1:
            n = 1
        return Bound(n if n.bit_length() <= self.cap else None, float(n.bit_length()))

    def mul(self, a: Bound, b: Bound) -> Bound:
        log2 = a.log2 + b.log2
        if a.exact is not None and b.exact is not None and log2 <= self.cap:
            return self.of(a.exact * b.exact)
        return Bound(None, log2)

    def add(self, a: Bound, b: Bound) -> Bound:
        log2 = max(a.log2, b.log2) + 1
        if a.exact is not None and b.exact is not None and log2 <= self.cap:
            return self.of(a.exact + b.exact)
        return Bound(None, log2)

    def power(self, a: Bound, e: int) -> Bound:
        if e == 0:
            return self.of(1)
        log2 = a.log2 * e
        if a.exact is not None and log2 <= self.cap:
            return self.of(a.exact ** e)
        return Bound(None, log2)

    def factorial(self, a: Bound) -> Bound:
        if a.exact is not None:
            n = a.exact
            if n <= 1:
                return self.of(1)
            if n.bit_length() > 1020:
                return Bound(None, math.inf)
            est = float(n) * (math.log2(n) - _LOG2_E) + math.log2(n)
            if est <= self.cap and n <= 2 ** 22:
                return self.of(math.factorial(n))
            return Bound(None, max(est, 1.0))
        # n! <= n^n, with n <= 2^log2
        if a.log2 > 1020:
            return Bound(None, math.inf)
        return Bound(None, (2.0 ** a.log2) * max(a.log2, 1.0))

    def maximum(self, items: Sequence[Bound]) -> Bound:
        best = items[0]
        for x in items[1:]:
            if best.exact is not None and x.exact is not None:
                if x.exact > best.exact:
                    best = x
            else:
                merged = Bound(None, max(best.log2, x.log2))
                best = merged
        return best


# ---------------------------------------------------------------------------
# fractionality certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CertNode:
    """Per-level trace of the certificate recursion."""

    k1: int
    base: bool
    hadamard: Optional[str]
    q1: Optional[str]
    q2: Optional[str]
    betas: tuple[str, ...]
    children: tuple["CertNode", ...] = ()

    def render(self, indent: str = "") -> str:
        if self.base:
            lines = [f"{indent}level k1={self.k1} base hadamard={self.hadamard}"]
        else:
            lines = [f"{indent}level k1={self.k1} q1={self.q1} q2={self.q2} "
                     f"betas=[{', '.join(self.betas)}]"]
        for c in self.children:
            lines.append(c.render(indent + "  "))
        return "\n".join(lines)


@dataclass(frozen=True)
class FractionalityCertificate:
    """Sound upper bound on inverse denominators of column submatrices."""

    bound: int
    log2_bound: float
    side: str
    stats: "TdStats"
    trace: tuple[CertNode, ...]
    formula: Optional[str] = None

    def describe(self) -> str:
        return str(self.bound)


@dataclass
class _Skeleton:
    k1: int
    max_block_rows: int
    children: list["_Skeleton"] = field(default_factory=list)

    @property
    def is_base(self) -> bool:
        return not self.children


def _build_skeleton(a: Matrix, f: TdDecomposition) -> _Skeleton:
    stats = td_stats(f)
    if stats.topological_height <= 1:
        return _Skeleton(k1=stats.height, max_block_rows=max(a.rows, 1))
    bs = primal_decompose(a, f)
    kids = [_build_skeleton(b.diagonal, b.decomposition) for b in bs.blocks]
    m_max = max((b.diagonal.rows for b in bs.blocks), default=1)
    return _Skeleton(k1=bs.k1, max_block_rows=max(m_max, 1), children=kids)


def _hadamard(ar: _BoundArith, k1: int, alpha: Bound) -> Bound:
    return ar.power(ar.mul(ar.of(k1), alpha), k1)


def _cert(skel: _Skeleton, alpha: Bound, extra_k1: int, ar: _BoundArith,
          nodes: list[CertNode]) -> Bound:
    k1 = skel.k1 + extra_k1
    if skel.is_base:
        h = _hadamard(ar, k1, alpha)
        nodes.append(CertNode(k1=k1, base=True, hadamard=h.describe(),
                              q1=None, q2=None, betas=()))
        return h

    child_nodes: list[CertNode] = []
    q2 = ar.maximum([_cert(c, alpha, 0, ar, child_nodes) for c in skel.children])

    # peel loop: any block could be eliminated at any stage, so take the
    # worst hatted-strip bound each round while entry magnitudes grow
    d = len(skel.children)
    r_max = min(d, k1)
    m_max = skel.max_block_rows
    hs: list[Bound] = []
    betas: list[Bound] = []
    a_cur = alpha
    # the scaling divides the lcm of the block-inverse denominators, at most
    # one distinct denominator per entry of the peeled block's inverse
    beta_exp = max(k1, m_max) ** 2
    for _ in range(r_max):
        hat_nodes: list[CertNode] = []
        h = ar.maximum([_cert(c, a_cur, k1, ar, hat_nodes) for c in skel.children])
        hs.append(h)
        beta = ar.power(h, beta_exp)
        betas.append(beta)
        mu = ar.power(ar.mul(ar.of(m_max), a_cur), m_max)
        growth = ar.mul(ar.mul(ar.of(m_max * m_max), mu), ar.mul(a_cur, a_cur))
        a_cur = ar.mul(beta, ar.add(a_cur, growth))

    q1 = _hadamard(ar, k1, a_cur)  # leftover border square after all peels
    for h, beta in zip(reversed(hs), reversed(betas)):
        e3 = ar.factorial(h)  # fr of the zeroing factor built from the block inverse
        inner = ar.factorial(ar.mul(ar.mul(e3, q1), h))
        q1 = ar.mul(beta, inner)

    total = ar.factorial(ar.mul(q1, q2))
    nodes.append(CertNode(k1=k1, base=False, hadamard=None, q1=q1.describe(),
                          q2=q2.describe(), betas=tuple(b.describe() for b in betas),
                          children=tuple(child_nodes)))
    return total


def frac_bound(a: Matrix, f: TdDecomposition, side: str = "primal",
               bit_cap: int = 10 ** 6) -> FractionalityCertificate:
    """Certified bound on fr of the inverse of any invertible column submatrix.

    The dual side transposes the matrix first; f must then validate against
    the dual graph (= primal graph of the transpose).  Raises CapExceededError
    with a log2 estimate when the bound outgrows bit_cap.
    """
    if side == "dual":
        a = a.transpose()
    elif side != "primal":
        raise ValueError(f"unknown side {side!r}")
    if f.vertex_count != a.cols:
        raise StructureError("decomposition size does not match column count")
    if not validate_td(primal_graph(a), f):
        raise StructureError("decomposition does not validate against the graph")

    ar = _BoundArith(bit_cap)
    norm = a.max_abs()
    if norm.denominator != 1:
        raise ValueError("certificates are defined for integral matrices")
    alpha = ar.of(int(norm))

    nodes: list[CertNode] = []
    bounds = []
    for root in f.roots:
        cols = f.subtree(root)
        rows = [i for i in range(a.rows) if any(a[i, j] != 0 for j in cols)]
        sub = a.submatrix(rows, cols)
        if sub.cols == 0:
            continue
        skel = _build_skeleton(sub, restrict_decomposition(f, cols))
        bounds.append(_cert(skel, alpha, 0, ar, nodes))
    result = ar.maximum(bounds) if bounds else ar.of(1)

    trace = tuple(nodes)
    if result.exact is None:
        raise CapExceededError(result.log2, trace=trace[-1] if trace else None)
    return FractionalityCertificate(bound=result.exact, log2_bound=result.log2,
                                    side=side, stats=td_stats(f), trace=trace)


def frac_bound_special(a: int, t: int, family: str = "nfold",
                       bit_cap: int = 10 ** 6) -> FractionalityCertificate:
    """Closed-form certificate for the two-level block families.

    For border width and block size at most t and entries bounded by a, the
    value is ``a**(t*(t+1)) * t**(2*t*t*(t-1))``: the first factor bounds the
    determinant products of one border block column and up to t block entries
    per inverse entry, the second absorbs the transversal count of the border
    square.  At t=1 this reduces to a**2, which is exact for single-entry
    bricks; the exponent choice is this library's, not a published constant.
    """
    if a < 1 or t < 1:
        raise ValueError("a and t must be positive")
    if family not in ("nfold", "twostage"):
        raise ValueError(f"unknown family {family!r}")
    ar = _BoundArith(bit_cap)
    value = ar.mul(ar.power(ar.of(a), t * (t + 1)),
                   ar.power(ar.of(t), 2 * t * t * (t - 1)))
    formula = "a**(t*(t+1)) * t**(2*t*t*(t-1))"
    if value.exact is None:
        raise CapExceededError(value.log2)
    node = CertNode(k1=t, base=True, hadamard=value.describe(), q1=None, q2=None, betas=())
    side = "dual" if family == "nfold" else "primal"
    stats = TdStats(height=2 * t, topological_height=2, level_heights=(t, t))
    return FractionalityCertificate(bound=value.exact, log2_bound=value.log2,
                                    side=side, stats=stats, trace=(node,),
                                    formula=formula)
