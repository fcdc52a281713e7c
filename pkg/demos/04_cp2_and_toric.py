"""Deformations of CP^2 by a commuting su(3) pair and of toric CP^n."""
import numpy as np

from twistdeform import Multivector, build_su, build_torus, decomposable_twist
from twistdeform.cpn import (
    closedness_residual,
    deformed_form,
    fubini_study,
    moment_map,
    moment_map_torus,
    twist_field,
)

rng = np.random.default_rng(0)
su3 = build_su(3)
lam = 0.3
Y23 = [1 if s == "Y23" else 0 for s in su3.labels]
t = decomposable_twist(su3, Y23, [0] * 6 + [2, -1], lam)
om = deformed_form(t, 2)

p = rng.uniform(-1, 1, 4)
corr = om(p) - fubini_study(p)
np.set_printoptions(precision=5, suppress=True)
print("omega^t - omega_FS at", p)
print(corr)
print("closedness residual:", closedness_residual(om, p))

# the correction is -(lam/2) d mu^Y23 ^ d mu^(2Z1 - Z2)
h = 1e-6
D = np.array([(moment_map(su3, p + h * e) - moment_map(su3, p - h * e)) / (2 * h) for e in np.eye(4)])
dY, dH = D[:, 5], 2 * D[:, 6] - D[:, 7]
print("max |corr + lam/2 dmuY^dmuH| =", np.abs(corr + lam / 2 * (np.outer(dY, dH) - np.outer(dH, dY))).max())

# torus on CP^3: the twist field of X_i ^ X_j only involves the coordinates of w_i and w_j
T3 = build_torus(3)
q = rng.uniform(-1, 1, 6)
print("\n(X1^X2)_M at", q)
print(twist_field(Multivector(T3, 2, {(0, 1): 1}), q))

lams = {(0, 1): 0.3, (0, 2): -0.2, (1, 2): 0.45}
om = deformed_form(Multivector(T3, 2, lams), 3)
D = np.array([(moment_map_torus(q + h * e) - moment_map_torus(q - h * e)) / (2 * h) for e in np.eye(6)])
ref = sum(-l * (np.outer(D[:, i], D[:, j]) - np.outer(D[:, j], D[:, i])) for (i, j), l in lams.items())
print("toric correction vs -sum lam_ij dmu_i^dmu_j:", np.abs(om(q) - fubini_study(q) - ref).max())
print("closedness residual:", closedness_residual(om, q))
