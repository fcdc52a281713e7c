"""Wedges, the Schouten square and r-matrices on su(2) and su(3)."""
from fractions import Fraction

from twistdeform import Multivector, build_su, decomposable_twist, is_r_matrix, schouten_square

su2 = build_su(2)
print(su2.labels)

e = lambda *i: Multivector.basis(su2, *i)
print("e1^e1       =", e(0) ^ e(0))
print("e2^e1       =", e(1) ^ e(0))
print("(e1^e3)^e2  =", (e(0) ^ e(2)) ^ e(1))

# [t,t] for t = 1/2 e1^e2; [e1, e2] = 2 e3
t = Multivector.basis(su2, 0, 1, coeff=Fraction(1, 2))
print("[t,t]       =", schouten_square(t))

# every twist on su(2) is an r-matrix, the volume element being ad-invariant
print("r-matrix?   ", is_r_matrix(t).is_r_matrix)

# su(3): Y23 commutes with 2Z1 - Z2, so the twist solves CYBE outright
su3 = build_su(3)
Y23 = [1 if s == "Y23" else 0 for s in su3.labels]
H = [0] * 6 + [2, -1]
t = decomposable_twist(su3, Y23, H, Fraction(1, 2))
rep = is_r_matrix(t)
print("su(3) Y23^(2Z1-Z2):", rep.to_dict())

# a twist that is not an r-matrix
bad = Multivector.basis(su3, "X12", "X13")
rep = is_r_matrix(bad)
print("X12^X13 r-matrix?", rep.is_r_matrix, "residual directions:", rep.to_dict()["nonzero_residuals"])
