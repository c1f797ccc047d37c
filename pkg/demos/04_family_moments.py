"""
Family averages against their main terms
========================================

The first moment of L(1/2 + alpha, chi^(c_K c)) over square-free primary c,
weighted by a smooth bump w(N(c)/X), compared with the stated main terms.

The comparison is done twice.  "printed" uses the constant exactly as
stated, including |U_K|^2.  "ideal" drops that factor, since each ideal
contributes once.  A plain count (T(c) = 1) shows which constant is right.
"""

import numpy as np

from hecke_ratios.field import field_params
from hecke_ratios.moments import (MomentRequest, _ratio_terms, enumerate_c, fit_exponent,
                                  main_terms, sweep, unit_constant)
from hecke_ratios.special import WeightSpec

# %%
# Counting: with T(c) = 1 the average is the density of square-free odd ideals.
X = 20000
for d in (-1, -3, -7):
    cs = enumerate_c(d, X, 2 * X)
    count = float(np.sum(WeightSpec("bump")(np.array([c.norm() / X for c in cs]))))
    printed = _ratio_terms(d, X, "bump", 0.25, 0.25, unit_constant(d), 1e-10)[0].real
    ideal = _ratio_terms(d, X, "bump", 0.25, 0.25, unit_constant(d, "ideal"), 1e-10)[0].real
    print(f"d={d:3d}  count/printed={count / printed:.4f} (1/|U|^2={1 / field_params(d).num_units ** 2:.4f})"
          f"  count/ideal={count / ideal:.4f}")

# %%
# The first moment over an X grid (this takes a minute or so).
grid = [250, 500, 1000, 2000]
reps = sweep(MomentRequest(-1, grid[0], "first", alpha=0.25), grid)
print("\n     X        lhs     printed M1+M2  rel.res    ideal M1+M2  rel.res")
for r in reps:
    M1, M2 = main_terms(MomentRequest(-1, r.X, "first", alpha=0.25, convention="ideal"))
    ideal_res = abs(r.lhs - M1 - M2) / abs(M1)
    print(f"{r.X:6.0f} {r.lhs.real:10.3f} {(r.main1 + r.main2).real:12.3f} {r.relative_residual:8.4f}"
          f" {(M1 + M2).real:12.3f} {ideal_res:8.4f}")
print("fitted exponent of the printed residual:", round(fit_exponent((r.X, abs(r.residual)) for r in reps), 3))
