"""
The true orbit against its expansion
====================================

Compute x_n for the quartic weight at N = r = 1 with 512-bit arithmetic and
watch the truncated expansion close in.
"""

# %%
import mpmath

from freudmaps.freud import cm_expand
from freudmaps.orbitnum import PrecisionConfig, cm_compare, freud_residual, stieltjes_x

s = stieltjes_x(2, 1, 1, 401, PrecisionConfig(bits=512))
print("refinement change:", mpmath.nstr(s.err_est, 3))
print("x_400 =", mpmath.nstr(s.at(400), 40))

# %%
# The recurrence itself is satisfied to working precision
res = freud_residual(s)
print(mpmath.nstr(max(abs(v) for v in res.values()), 3))

# %%
# Each retained term steepens the error; m = 5 converges slowly because
# c_7 is several times larger than c_6 at N = r = 1
e = cm_expand(2, 8)
ns = list(range(50, 401, 10))
for m in (0, 3, 5, 7):
    r = cm_compare(s, e, m, ns)
    print(m, round(r.slope, 3), r.expected)
