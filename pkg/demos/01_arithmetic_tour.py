"""
Arithmetic in the nine class-number-one fields
==============================================

Elements, primary generators, factorisation and the quadratic symbol.
Run with ``python demos/01_arithmetic_tour.py``.
"""

# %%
# Each field is named by d; elements are a + b*w with w the usual integral generator.
from hecke_ratios.field import FIELDS, QuadInt, field_params

for d in FIELDS:
    fp = field_params(d)
    print(f"d={d:5d}  D_K={fp.disc:5d}  |U_K|={fp.num_units}  c_K={fp.c_K}  N(c_K)={fp.norm_c_K}  2 is {fp.two_splitting}")

# %%
# Every odd ideal has exactly one primary generator.
from hecke_ratios.primary import primary_normalize

n = QuadInt(1, 2, -1)
u, m = primary_normalize(n)
print(f"\n{n} = {u}^-1 * {m}, and {m} is the primary generator")

# %%
# Factorisation into prime elements.
from hecke_ratios.ideals import factor_element

for z in (QuadInt(-3, 4, -1), QuadInt(30, 0, -7), QuadInt(11, 5, -163)):
    f = factor_element(z)
    print(z, "=", f.unit, "*", " * ".join(f"({P.generator})^{e}" for P, e in f.factors))

# %%
# The quadratic symbol and the reciprocity law for primary elements.
from hecke_ratios.symbols import symbol, symbol_fast

a, b = QuadInt(-1, -2, -1), QuadInt(3, 2, -1)
print(f"\n({a}/{b}) = {symbol(a, b)}, ({b}/{a}) = {symbol(b, a)}")
print("sign predicted by reciprocity:", (-1) ** (((a.norm() - 1) // 2) * ((b.norm() - 1) // 2)))
print("factorisation-free evaluation agrees:", symbol_fast(a, b) == symbol(a, b))

# %%
# An exhaustive check over all primary pairs of norm <= 200 in every field.
from hecke_ratios.selfcheck import symbol_check

for d in FIELDS:
    r = symbol_check(d, 200, fast_maxnorm=60)
    print(f"d={d:5d}  pairs={r.coprime_pairs:6d}  failures={r.reciprocity_failures + r.minus_one_failures + r.two_failures}")
