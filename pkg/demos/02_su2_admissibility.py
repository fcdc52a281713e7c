"""Admissibility of twisted complements over the moment image of CP^1.

On su(2) the determinant is a perfect square, (1 + 2 lam . xi')^2 with
xi' = (xi3, -xi2, xi1), and the image of the moment map is the sphere of
radius 1/2.  The twist is admissible there exactly when |lam| < 1.
"""
import numpy as np

from twistdeform import build_su, twist
from twistdeform.admissibility import f_t, scan_sphere, su2_closed_form

g = build_su(2)
lam = (0.3, -0.4, 0.2)
t = twist(g, {(0, 1): lam[0], (0, 2): lam[1], (1, 2): lam[2]})
xi = np.array([0.1, 0.25, -0.3])
print("f_t(xi)      =", f_t(g, t, xi))
print("closed form  =", su2_closed_form(*lam, xi))

direction = np.array([1.0, 2.0, -0.5])
direction /= np.linalg.norm(direction)
print(f"{'|lam|':>6} {'min f_t':>10} {'(1-|lam|)^2':>12}  verdict")
for norm in (0.25, 0.5, 0.9, 0.99, 1.01, 1.5):
    l = norm * direction
    rep = scan_sphere(g, twist(g, {(0, 1): l[0], (0, 2): l[1], (1, 2): l[2]}), radius=0.5)
    print(f"{norm:6.2f} {rep.min_value:10.2e} {(1 - norm) ** 2:12.2e}  {rep.verdict}")

# without the local refinement the lattice alone misses the zero circle near |lam| = 1
l = 1.01 * direction
rep = scan_sphere(g, twist(g, {(0, 1): l[0], (0, 2): l[1], (1, 2): l[2]}), refine=0)
print("lattice only, |lam| = 1.01: min |f_t| =", rep.min_abs)
