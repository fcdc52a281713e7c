"""Deforming Fubini-Study on CP^1 and the volume of the result."""
import math

import numpy as np

from twistdeform import build_su, twist
from twistdeform.cpn import deformed_form, fubini_study, invert_form, fubini_study_field
from twistdeform.volume import closed_volume, k_lambda, numeric_volume, pipeline_volume

g = build_su(2)
p = np.array([0.6, -0.3])
r2 = p @ p
print("omega_FS   :", fubini_study(p)[0, 1], "=", 1 / (1 + r2) ** 2)
print("pi_FS      :", invert_form(fubini_study_field(1))(p)[0, 1])

for lam in (-0.9, -0.5, 0.5, 0.9):
    om = deformed_form(twist(g, {(0, 1): lam}), 1)
    ref = 1 / ((1 + lam / 2) * r2**2 + 2 * r2 + (1 - lam / 2))
    print(f"lam={lam:+.1f}  pipeline {om(p)[0, 1]:.15f}  closed form {ref:.15f}")

print()
print(f"{'lam':>5} {'numeric':>18} {'closed':>18} {'k_lam':>10} {'nodes':>6}")
for lam in np.arange(-0.9, 0.91, 0.3):
    r = numeric_volume(lam)
    print(f"{lam:5.1f} {r.numeric_volume:18.15f} {r.closed_form:18.15f} {k_lambda(lam):10.6f} {r.quadrature_nodes:6d}")

r = pipeline_volume(0.5)
print("\nvolume from the pipeline density at lam=0.5:", r.numeric_volume, "rel err", r.rel_error)
print("pi * k_lam:", math.pi * k_lambda(0.5), " closed:", closed_volume(0.5))
