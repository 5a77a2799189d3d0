"""Exact ILP branch and bound, the MILP scaling pipeline, and oracles.

The pipeline solves a mixed instance by bounding the denominators its optimal
continuous part can need (certificate when affordable, enumeration fallback
otherwise), scaling onto the integer grid, solving the resulting pure ILP
exactly, and mapping the optimum back.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .fracbound import CapExceededError as CertCapError
from .fracbound import frac_bound
from .integralize import IlpInstance, MilpInstance, choose_scale, integralize, recover
from .linalg import Matrix, SingularMatrixError, mat_inverse
from .simplex import SolveResult, SolveStats, lp_solve_exact, reduce_rows
from .structure import (CapExceededError, TdStats, decomposition_for_matrix,
                        restrict_decomposition, td_stats)


def vertex_enumerate(a: Matrix, b: Sequence, lower: Sequence, upper: Sequence,
                     cap: int = 12) -> list[tuple[Fraction, ...]]:
    """All basic feasible solutions of ``a x = b, lower <= x <= upper``.

    Every invertible column basis is solved against every lower/upper
    assignment of the non-basic variables; duplicates are removed.  Refuses
    systems with more than cap variables.
    """
    n = a.cols
    if n > cap:
        raise CapExceededError(f"vertex enumeration limited to {cap} variables, got {n}")
    lo = [Fraction(v) for v in lower]
    up = [Fraction(v) for v in upper]
    if any(l > u for l, u in zip(lo, up)):
        return []
    reduced = reduce_rows(a, [Fraction(v) for v in b])
    if reduced is None:
        return []
    a, bvec = reduced
    m = a.rows

    seen: set[tuple[Fraction, ...]] = set()
    out: list[tuple[Fraction, ...]] = []
    for basis in itertools.combinations(range(n), m):
        sub = a.submatrix(range(m), basis)
        try:
            inv = mat_inverse(sub)
        except SingularMatrixError:
            continue
        nonbasic = [j for j in range(n) if j not in basis]
        for picks in itertools.product((0, 1), repeat=len(nonbasic)):
            x = [Fraction(0)] * n
            for j, pick in zip(nonbasic, picks):
                x[j] = up[j] if pick else lo[j]
            rhs = [bvec[i] - sum(a[i, j] * x[j] for j in nonbasic if a[i, j] != 0)
                   for i in range(m)]
            vals = inv.apply_vector(rhs)
            ok = True
            for j, v in zip(basis, vals):
                if not (lo[j] <= v <= up[j]):
                    ok = False
                    break
                x[j] = v
            if not ok:
                continue
            xt = tuple(x)
            if xt not in seen:
                seen.add(xt)
                out.append(xt)
    return out


def _most_fractional(x: Sequence[Fraction]) -> Optional[int]:
    """Index whose value is farthest from integral; ties to the lowest index."""
    best = None
    best_key = None
    for j, v in enumerate(x):
        if v.denominator == 1:
            continue
        frac = v - (v.numerator // v.denominator)
        key = abs(frac - Fraction(1, 2))
        if best_key is None or key < best_key:
            best_key = key
            best = j
    return best


def ilp_solve(inst: IlpInstance, node_cap: Optional[int] = None) -> SolveResult:
    """Exact optimum over integer points by best-bound branch and bound.

    Relaxations are solved by the exact simplex; pruning compares rationals
    exactly, and branching picks the most fractional variable.
    """
    matrix = inst.matrix
    stats = SolveStats()
    counter = itertools.count()
    root = (inst.lower, inst.upper)
    heap: list = []

    def push(lo: tuple[int, ...], up: tuple[int, ...]) -> None:
        res = lp_solve_exact(matrix, inst.b, lo, up, inst.c)
        if res.status != "optimal":
            return
        heapq.heappush(heap, (res.objective, next(counter), res, lo, up))

    push(*root)
    incumbent: Optional[SolveResult] = None
    while heap:
        bound, _, res, lo, up = heapq.heappop(heap)
        stats.nodes += 1
        if node_cap is not None and stats.nodes > node_cap:
            raise CapExceededError(f"branch and bound node cap {node_cap} exceeded")
        if incumbent is not None and bound >= incumbent.objective:
            continue
        branch_var = _most_fractional(res.x)
        if branch_var is None:
            incumbent = res
            continue
        v = res.x[branch_var]
        floor = v.numerator // v.denominator
        down_up = up[:branch_var] + (floor,) + up[branch_var + 1:]
        if lo[branch_var] <= floor:
            push(lo, down_up)
        up_lo = lo[:branch_var] + (floor + 1,) + lo[branch_var + 1:]
        if floor + 1 <= up[branch_var]:
            push(up_lo, up)
    if incumbent is None:
        return SolveResult(status="infeasible", stats=stats)
    return SolveResult(status="optimal", x=incumbent.x, objective=incumbent.objective,
                       basis=incumbent.basis, stats=stats)


def _integer_boxes(inst: MilpInstance, cap: int) -> Iterator[tuple[int, ...]]:
    volume = 1
    for j in range(inst.z):
        volume *= inst.upper[j] - inst.lower[j] + 1
        if volume > cap:
            raise CapExceededError(f"integer box volume exceeds {cap}")
    ranges = [range(inst.lower[j], inst.upper[j] + 1) for j in range(inst.z)]
    return itertools.product(*ranges)


def milp_oracle(inst: MilpInstance, box_cap: int = 10 ** 6) -> SolveResult:
    """Ground truth by enumerating every integer assignment.

    For each assignment the continuous remainder is an exact LP; the overall
    best solve wins.  Refuses integer boxes with volume beyond box_cap.
    """
    z = inst.z
    if z == 0:
        return lp_solve_exact(inst.matrix, inst.b, inst.lower, inst.upper, inst.c)
    best_obj: Optional[Fraction] = None
    best_x: Optional[tuple[Fraction, ...]] = None
    for assign in _integer_boxes(inst, box_cap):
        residual_b = [inst.b[i] - sum(inst.a_int[i, j] * assign[j] for j in range(z))
                      for i in range(inst.rows)]
        res = lp_solve_exact(inst.a_frac, residual_b, inst.lower[z:], inst.upper[z:],
                             inst.c[z:])
        if res.status != "optimal":
            continue
        total = sum(inst.c[j] * assign[j] for j in range(z)) + res.objective
        if best_obj is None or total < best_obj:
            best_obj = total
            best_x = tuple(Fraction(v) for v in assign) + res.x
    if best_obj is None:
        return SolveResult(status="infeasible")
    return SolveResult(status="optimal", x=best_x, objective=best_obj)


@dataclass
class PipelineOptions:
    side: str = "auto"  # primal | dual | auto
    scale_override: Optional[int] = None
    exact_td_cap: int = 16
    bit_cap: int = 10 ** 6
    m_cap: int = 10 ** 4  # largest certificate the scaling stage will accept
    box_cap: int = 10 ** 6
    vertex_cap: int = 12
    node_cap: Optional[int] = None


@dataclass
class PipelineReport:
    """Machine-readable account of one pipeline run."""

    side: str = ""
    primal_stats: Optional[TdStats] = None
    dual_stats: Optional[TdStats] = None
    m_source: str = ""  # certificate | empirical | trivial | override
    m_value: int = 1
    scale: int = 1
    ilp_nodes: int = 0
    scaled_objective: Optional[Fraction] = None
    notes: list[str] = field(default_factory=list)

    def machine_lines(self) -> list[str]:
        lines = [f"side={self.side}"]
        for tag, st in (("primal", self.primal_stats), ("dual", self.dual_stats)):
            if st is not None:
                ks = ",".join(str(k) for k in st.level_heights)
                lines.append(f"td_{tag}=height:{st.height};ttd:{st.topological_height};k:{ks}")
        lines.append(f"m_source={self.m_source}")
        lines.append(f"m={self.m_value}")
        lines.append(f"scale={self.scale}")
        lines.append(f"ilp_nodes={self.ilp_nodes}")
        if self.scaled_objective is not None:
            lines.append(f"scaled_objective={self.scaled_objective}")
        return lines


def _empirical_m(inst: MilpInstance, options: PipelineOptions) -> int:
    """Largest denominator over the continuous-part vertices, across every
    integer assignment.  Valid at enumeration scale only."""
    z = inst.z
    m_val = 1
    for assign in _integer_boxes(inst, options.box_cap):
        residual_b = [inst.b[i] - sum(inst.a_int[i, j] * assign[j] for j in range(z))
                      for i in range(inst.rows)]
        for x in vertex_enumerate(inst.a_frac, residual_b, inst.lower[z:],
                                  inst.upper[z:], cap=options.vertex_cap):
            for v in x:
                if v.denominator > m_val:
                    m_val = v.denominator
    return m_val


def milp_solve(inst: MilpInstance,
               options: Optional[PipelineOptions] = None) -> tuple[SolveResult, PipelineReport]:
    """Solve a mixed instance by scaling it onto the integer grid.

    Stages: analyse both interaction graphs and pick the shallower side;
    obtain a denominator bound M (fractionality certificate when it is usable,
    else the enumeration fallback); scale by lcm(1..M); solve the pure ILP by
    branch and bound; recover and validate the mixed optimum.
    """
    options = options or PipelineOptions()
    report = PipelineReport()
    full = inst.matrix

    f_primal = decomposition_for_matrix(full, "primal", "auto", options.exact_td_cap)
    f_dual = decomposition_for_matrix(full, "dual", "auto", options.exact_td_cap)
    report.primal_stats = td_stats(f_primal)
    report.dual_stats = td_stats(f_dual)
    if options.side == "auto":
        side = "primal" if report.primal_stats.height <= report.dual_stats.height else "dual"
    else:
        side = options.side
    report.side = side

    if inst.q == 0:
        report.m_source = "trivial"
        res = ilp_solve(IlpInstance(a_int=inst.a_int, a_frac=inst.a_frac, b=inst.b,
                                    c=inst.c, lower=inst.lower, upper=inst.upper),
                        node_cap=options.node_cap)
        report.ilp_nodes = res.stats.nodes
        report.scaled_objective = res.objective
        return res, report

    if options.scale_override is not None:
        scale = options.scale_override
        report.m_source = "override"
        report.m_value = scale
    else:
        m_val = None
        try:
            if side == "primal":
                cols = list(range(inst.z, inst.z + inst.q))
                f_q = restrict_decomposition(f_primal, cols)
                cert = frac_bound(inst.a_frac, f_q, "primal", bit_cap=options.bit_cap)
            else:
                cert = frac_bound(inst.a_frac, f_dual, "dual", bit_cap=options.bit_cap)
            if cert.bound <= options.m_cap:
                m_val = cert.bound
                report.m_source = "certificate"
            else:
                report.notes.append("certificate exceeded usable cap; empirical fallback")
        except CertCapError as exc:
            report.notes.append(
                f"certificate capped at log2~{exc.log2_estimate:.3g}; empirical fallback")
        if m_val is None:
            try:
                m_val = _empirical_m(inst, options)
                report.m_source = "empirical"
            except CapExceededError as exc:
                exc.report = report  # partial report still available to callers
                raise
        report.m_value = m_val
        scale = choose_scale(m_val)
    report.scale = scale

    scaled = integralize(inst, scale)
    try:
        ilp_res = ilp_solve(scaled, node_cap=options.node_cap)
    except CapExceededError as exc:
        exc.report = report
        raise
    report.ilp_nodes = ilp_res.stats.nodes
    if ilp_res.status != "optimal":
        return SolveResult(status=ilp_res.status, stats=ilp_res.stats), report

    report.scaled_objective = ilp_res.objective
    x = recover(ilp_res.x, scale, inst)
    objective = sum((Fraction(inst.c[j]) * x[j] for j in range(len(x))), Fraction(0))
    res = SolveResult(status="optimal", x=x, objective=objective,
                      basis=ilp_res.basis, stats=ilp_res.stats)
    return res, report
