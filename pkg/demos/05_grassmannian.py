"""The canonical r-matrix of su(n) acting on Gr(r; C^n).

[t,t] is nonzero but every term contains a direction of h, the isotropy
algebra, so the induced trivector on the Grassmannian vanishes.
"""
from twistdeform.exterior import quotient_project
from twistdeform.grassmann import GrassmannInstance, bracket_case_table, canonical_r_matrix, verify_instance

print(canonical_r_matrix(2))
print(canonical_r_matrix(3))

for n in (2, 3, 4):
    for r in range(1, n):
        inst = GrassmannInstance.build(n, r)
        print(verify_instance(inst).to_dict())

inst = GrassmannInstance.build(3, 1)
print("\n[t,t] on su(3):", inst.square)
print("image in Λ^3(g/h):", quotient_project(inst.square, inst.h))

print("\nbracket relations for n = 3:")
for row in bracket_case_table(3):
    status = "ok " if row.holds else "NO "
    print(" ", status, row.relation, "" if row.holds else f"(computed opposite sign)")
