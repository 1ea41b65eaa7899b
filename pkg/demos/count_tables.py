"""
Map counts from generating functions
====================================

Compose z_g and e_g with the coupling series of z0 and read off counts of
4-valent and 3-valent maps.
"""

# %%
from freudmaps.stringeq import string_equation, z0_coupling_series

z0 = z0_coupling_series(string_equation(2, "r"), 8)
print(z0)

# %%
# 2-legged 4-valent maps, genus 0..3
from freudmaps.genfun import e3_counts, e_counts, z_counts

for g in range(4):
    print(g, [int(c) for _, c in z_counts(g, 8).rows])

# %%
# Unlabeled 4-valent maps carry symmetry factors, so the counts are rational
for g in range(3):
    print(g, [str(c) for _, c in e_counts(g, 6).rows])

# %%
# Trivalent maps need an even number of vertices
print([str(c) for _, c in e3_counts(2, 10).rows])

# %%
# Planar counts also have a closed form
from freudmaps.genfun import genus0_unlabeled

print([str(genus0_unlabeled(2, j)) for j in range(1, 7)])
