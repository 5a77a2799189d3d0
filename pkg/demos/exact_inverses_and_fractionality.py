#!/usr/bin/env python3
# Exact rational linear algebra: determinants, inverses, and how large the
# denominators of an inverse can get for innocently-small matrices.

from fractions import Fraction

from tdmilp import (FamilySpec, fractionality, generate, mat_det, mat_inverse,
                    Matrix)

# an upper bidiagonal matrix with 2 on the diagonal and -1 above it
a = generate(FamilySpec("lemma4_a1", n=6))
print("A =")
print(a.to_text())
print("det(A) =", mat_det(a))  # triangular: product of the diagonal = 2^6

inv = mat_inverse(a)
print("\nA^-1 =")
print(inv.to_text())

# every arithmetic step is exact, so the product really is the identity
assert a * inv == Matrix.identity(6)

# the denominators double per column: entry (0, n-1) is 1 / 2^n.
# fr() picks out the largest one
print("\nfr(A^-1) =", fractionality(inv))
for n in range(2, 13):
    m = generate(FamilySpec("lemma4_a1", n=n))
    print(f"  n={n:2d}  fr = {fractionality(mat_inverse(m))}")

# the arrowhead family grows denominators only linearly, but it is a
# four-block structure that no small-block decomposition can tame
arrow = generate(FamilySpec("lemma4_a2", n=6))
print("\narrowhead A =")
print(arrow.to_text())
ainv = mat_inverse(arrow)
print("fr =", fractionality(ainv), "(= n - 2)")
print("diagonal entry:", ainv[1, 1], "- denominator n' = n-2, not n")

# fractionality is about *reduced* denominators, so scaling by an integer
# can only shrink it
half = Fraction(1, 2) * inv
print("\nfr(A^-1) =", fractionality(inv), " fr(A^-1 / 2) =", fractionality(half))
