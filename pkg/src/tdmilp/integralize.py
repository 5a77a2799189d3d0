"""MILP instances and the scaling reduction onto the integer grid.

An instance keeps its constraint matrix split into the integer-variable part
and the continuous-variable part, columns ordered (integer, continuous).
Scaling by a multiple of every optimal denominator turns the instance into a
pure ILP whose optimum maps back exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix


class FeasibilityError(Exception):
    """A claimed solution violates a constraint; carries the row index."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


def _int_vector(values: Sequence[int | Fraction], name: str) -> tuple[int, ...]:
    out = []
    for v in values:
        f = Fraction(v)
        if f.denominator != 1:
            raise ValueError(f"{name} must be integral, got {v}")
        out.append(int(f))
    return tuple(out)


@dataclass(frozen=True)
class MilpInstance:
    """min c.x s.t. a_int x_Z + a_frac x_Q = b, lower <= x <= upper.

    All data is integral; columns are ordered integer variables first, then
    continuous ones.  Bounds are finite.
    """

    a_int: Matrix
    a_frac: Matrix
    b: tuple[int, ...]
    c: tuple[int, ...]
    lower: tuple[int, ...]
    upper: tuple[int, ...]

    def __post_init__(self):
        if self.a_int.rows != self.a_frac.rows:
            raise ValueError("integer and continuous parts must have equal row counts")
        if not self.a_int.is_integral() or not self.a_frac.is_integral():
            raise ValueError("constraint matrix must be integral")
        n = self.z + self.q
        object.__setattr__(self, "b", _int_vector(self.b, "b"))
        object.__setattr__(self, "c", _int_vector(self.c, "c"))
        object.__setattr__(self, "lower", _int_vector(self.lower, "lower"))
        object.__setattr__(self, "upper", _int_vector(self.upper, "upper"))
        if len(self.b) != self.a_int.rows:
            raise ValueError("right-hand side length mismatch")
        if len(self.c) != n or len(self.lower) != n or len(self.upper) != n:
            raise ValueError("vector length mismatch")
        if any(l > u for l, u in zip(self.lower, self.upper)):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def z(self) -> int:
        return self.a_int.cols

    @property
    def q(self) -> int:
        return self.a_frac.cols

    @property
    def rows(self) -> int:
        return self.a_int.rows

    @property
    def matrix(self) -> Matrix:
        return self.a_int.hstack(self.a_frac)


class IlpInstance(MilpInstance):
    """A MilpInstance with no continuous part."""

    def __post_init__(self):
        super().__post_init__()
        if self.q != 0:
            raise ValueError("IlpInstance must have no continuous columns")


def pure_ilp(matrix: Matrix, b, c, lower, upper) -> IlpInstance:
    """Convenience constructor for an all-integer instance."""
    empty = Matrix([[] for _ in range(matrix.rows)], cols=0)
    return IlpInstance(a_int=matrix, a_frac=empty, b=b, c=c, lower=lower, upper=upper)


def choose_scale(m: int) -> int:
    """lcm(1..m): divisible by the lcm of any denominator set bounded by m."""
    if m < 1:
        raise ValueError("scale parameter must be positive")
    return math.lcm(*range(1, m + 1))


def integralize(inst: MilpInstance, scale: int) -> IlpInstance:
    """Scale the continuous part onto the integer grid.

    The new instance has matrix (scale*a_int | a_frac), right-hand side
    scale*b, continuous bounds multiplied by scale and objective
    (scale*c_Z, c_Q), so objective values scale uniformly and the nonzero
    pattern (hence both interaction graphs) is unchanged.
    """
    if scale < 1:
        raise ValueError("scale must be positive")
    z = inst.z
    new_matrix = (scale * inst.a_int).hstack(inst.a_frac)
    empty = Matrix([[] for _ in range(inst.rows)], cols=0)
    return IlpInstance(
        a_int=new_matrix,
        a_frac=empty,
        b=tuple(scale * v for v in inst.b),
        c=tuple(scale * v for v in inst.c[:z]) + inst.c[z:],
        lower=inst.lower[:z] + tuple(scale * v for v in inst.lower[z:]),
        upper=inst.upper[:z] + tuple(scale * v for v in inst.upper[z:]),
    )


def recover(z_opt: Sequence[int | Fraction], scale: int,
            inst: MilpInstance) -> tuple[Fraction, ...]:
    """Map a scaled-instance solution back: divide the continuous part.

    Validates feasibility against the original instance exactly; raises
    FeasibilityError naming the violated constraint row (or bound).
    """
    if len(z_opt) != inst.z + inst.q:
        raise ValueError("solution length mismatch")
    zq = [Fraction(v) for v in z_opt]
    x = tuple(zq[:inst.z]) + tuple(v / scale for v in zq[inst.z:])
    lhs = inst.matrix.apply_vector(x)
    for i, (got, want) in enumerate(zip(lhs, inst.b)):
        if got != want:
            raise FeasibilityError(f"constraint row {i} violated: {got} != {want}", row=i)
    for j, v in enumerate(x):
        if not (inst.lower[j] <= v <= inst.upper[j]):
            raise FeasibilityError(f"bound on variable {j} violated: {v}", row=None)
    for j in range(inst.z):
        if x[j].denominator != 1:
            raise FeasibilityError(f"integer variable {j} has fractional value {x[j]}", row=None)
    return x
