import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from tdmilp.families import FamilySpec, generate
from tdmilp.fracbound import (CapExceededError, PeelStep, SplitTrace,
                              frac_bound, frac_bound_special, structured_inverse)
from tdmilp.linalg import (Matrix, SingularMatrixError, fractionality, mat_det,
                           mat_inverse)
from tdmilp.structure import TdDecomposition, decomposition_for_matrix
from oracles import structured_invertible_matrix


def bidiagonal(n):
    return Matrix([[2 if i == j else (-1 if j == i + 1 else 0) for j in range(n)]
                   for i in range(n)])


def invertible_random_td(seed, n, t=4, magnitude=3):
    rng = random.Random(seed)
    a = structured_invertible_matrix(rng, n, t, magnitude)
    assert mat_det(a) != 0
    return a


def collect_peels(trace):
    out = []
    stack = [trace.root]
    while stack:
        node = stack.pop()
        if isinstance(node, PeelStep):
            out.append(node)
            stack.append(node.rest)
            stack.append(node.b1)
        elif isinstance(node, SplitTrace):
            stack.append(node.q1)
            stack.extend(node.q2_parts)
        elif hasattr(node, "parts"):
            stack.extend(node.parts)
    return out


class TestStructuredInverse:
    def test_one_by_one(self):
        a = Matrix([[7]])
        f = TdDecomposition([None])
        inv, _ = structured_inverse(a, f)
        assert inv == Matrix([[Fraction(1, 7)]])

    def test_bidiagonal_path(self):
        a = bidiagonal(4)
        f = decomposition_for_matrix(a, "primal", "exact")
        inv, trace = structured_inverse(a, f)
        assert inv == mat_inverse(a)
        assert fractionality(inv) == 16
        assert trace.replay() == inv

    def test_two_brick_square(self):
        # border column plus two bricks; invertible and genuinely two-level
        a = Matrix([[1, 2, 0], [1, 0, 3], [2, 0, 0]])
        f = decomposition_for_matrix(a, "primal", "exact")
        inv, trace = structured_inverse(a, f)
        assert inv == mat_inverse(a)
        peels = collect_peels(trace)
        assert len(peels) <= 1  # border width 1 allows at most one peel

    def test_matches_direct_inverse_on_random_structured(self):
        for seed in range(40):
            a = invertible_random_td(seed, 3 + seed % 6)
            f = decomposition_for_matrix(a, "primal", "heuristic")
            inv, trace = structured_inverse(a, f)
            assert inv == mat_inverse(a)
            assert trace.replay() == inv

    def test_beta_divides_block_inverse_cap(self):
        # every recorded scaling divides the lcm of its block-inverse
        # denominators, so it is bounded by fr(b1)^(m1^2)
        found = 0
        for seed in range(40):
            a = invertible_random_td(seed, 6)
            f = decomposition_for_matrix(a, "primal", "heuristic")
            _, trace = structured_inverse(a, f)
            for peel in collect_peels(trace):
                fr_b1 = fractionality(peel.b1.replay())
                assert peel.beta <= fr_b1 ** (peel.m1 ** 2)
                found += 1
        assert found > 0

    def test_singular_rejected(self):
        a = Matrix([[1, 1], [1, 1]])
        f = decomposition_for_matrix(a, "primal", "exact")
        with pytest.raises(SingularMatrixError):
            structured_inverse(a, f)


class TestFracBound:
    def test_single_column_gives_norm(self):
        a = Matrix([[3], [2]])
        f = TdDecomposition([None])
        cert = frac_bound(a, f)
        assert cert.bound == 3

    def test_base_case_formula(self):
        # one dense row over three columns: path decomposition, k1=3, norm 2
        a = Matrix([[2, 1, 1]])
        f = TdDecomposition([None, 0, 1])
        cert = frac_bound(a, f)
        assert cert.bound == 216  # (3*2)**3

    def test_soundness_against_exhaustive_submatrices(self):
        rng = random.Random(1)
        for seed in range(30):
            m = rng.randrange(2, 5)
            n = rng.randrange(m, 8)
            a = generate(FamilySpec("random_td", n=n, k=m, t=3, seed=seed, magnitude=2))
            f = decomposition_for_matrix(a, "primal", "exact")
            empirical = 1
            for cols in combinations(range(n), m):
                sub = a.submatrix(range(m), cols)
                if mat_det(sub) != 0:
                    empirical = max(empirical, fractionality(mat_inverse(sub)))
            try:
                cert = frac_bound(a, f)
                assert cert.bound >= empirical
            except CapExceededError as exc:
                assert exc.log2_estimate >= math.log2(empirical)

    def test_monotone_in_norm_on_fixed_shape(self):
        f = TdDecomposition([None, 0, 1])
        prev = 0
        for a in range(1, 5):
            cert = frac_bound(Matrix([[a, a, a]]), f)
            assert cert.bound >= prev
            prev = cert.bound

    def test_dual_symmetry(self):
        a = Matrix([[1, 2, 0], [1, 0, 3]])
        f = decomposition_for_matrix(a, "dual", "exact")
        dual = frac_bound(a, f, "dual")
        primal_of_transpose = frac_bound(a.transpose(), f, "primal")
        assert dual.bound == primal_of_transpose.bound

    def test_trace_records_levels(self):
        # two-level structures overflow the factorial composition by design;
        # the cap error still carries the recursion trace and a log estimate
        a = Matrix([[1, 2, 0], [1, 0, 3], [2, 0, 0]])
        f = decomposition_for_matrix(a, "primal", "exact")
        with pytest.raises(CapExceededError) as err:
            frac_bound(a, f)
        assert err.value.log2_estimate > 0
        assert err.value.trace is not None
        assert "k1=" in err.value.trace.render()


class TestSpecialBound:
    def test_trivial_unimodular_case(self):
        assert frac_bound_special(1, 1).bound == 1

    def test_t1_dominates_enumeration(self):
        cert = frac_bound_special(2, 1)
        assert cert.bound >= 2
        # every 2-brick single-entry instance with entries in [-2, 2]:
        # dual-side submatrices of [[b1, d1, 0], [b2, 0, d2]]
        worst = 1
        for b1 in range(-2, 3):
            for b2 in range(-2, 3):
                for d1 in range(-2, 3):
                    for d2 in range(-2, 3):
                        a = Matrix([[b1, d1, 0], [b2, 0, d2]])
                        for cols in combinations(range(3), 2):
                            sub = a.submatrix(range(2), cols)
                            if mat_det(sub) != 0:
                                worst = max(worst, fractionality(mat_inverse(sub)))
        assert cert.bound >= worst

    def test_dominated_by_generic_on_canonical_shape(self):
        spec = FamilySpec("nfold", t=2, k=2, seed=0, magnitude=2)
        a = generate(spec)
        special = frac_bound_special(2, 2)
        f = decomposition_for_matrix(a, "dual", "exact")
        try:
            generic = frac_bound(a, f, "dual")
            assert special.bound <= generic.bound
        except CapExceededError as exc:
            assert math.log2(special.bound) <= exc.log2_estimate

    def test_formula_recorded(self):
        cert = frac_bound_special(2, 2)
        assert cert.formula is not None

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            frac_bound_special(0, 1)
        with pytest.raises(ValueError):
            frac_bound_special(1, 1, family="rings")
