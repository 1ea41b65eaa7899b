"""
Genus one from the Freud orbit
==============================

Solve the Freud equation order by order, read off the genus-1 slots and
recover z_1 as a rational function of z0.
"""

# %%
# The quartic Freud polynomial, generated from walks on the Jacobi matrix
from freudmaps.freud import build_freud, cm_expand

print(build_freud(2))

# %%
# Center-manifold coefficients c_-1 .. c_4 (A = N**(1/2), B = r**(1/2))
e = cm_expand(2, 4)
for k in range(-1, 5):
    print(f"c_{k} =", e.c(k))

# %%
# Genus-1 slots at A = 1, and the triangular system they feed
from freudmaps.matching import ansatz_rows, derive_zg, extract_a

print(extract_a(e, 1))
for row in ansatz_rows(2, 1):
    print(row)

# %%
sol = derive_zg(2, 1, expansion=e)
print("beta =", sol.beta)
print("numerator:", sol.numerator(), " denominator:", sol.denominator())

# %%
# Higher genus works the same way; Q_{g-1} is what remains after (z0-1)**2g
for g in (2, 3):
    print(g, derive_zg(2, g).Q())
