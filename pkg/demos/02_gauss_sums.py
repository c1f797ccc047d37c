"""
Quadratic Gauss sums
====================

Brute-force Gauss sums against the closed form, and the root number of the
conductor character.  In Z[i] the two disagree, and the brute force follows
a different, simple law.
"""

import math

from hecke_ratios.field import FIELDS, QuadInt
from hecke_ratios.intarith import kronecker
from hecke_ratios.selfcheck import gauss_rows, root_number_rows

# %%
# Closed form against brute force, norms up to 300.
for d in FIELDS:
    rows = gauss_rows(d, 300)
    bad = [r for r in rows if not r.ok]
    print(f"d={d:5d}  n checked={len(rows):4d}  mismatches={len(bad)}")

# %%
# In Z[i] the mismatches are exactly the n with N(n) = 5 mod 8.  The brute
# force equals (2/N(n)) sqrt(N(n)), which is (i/n) sqrt(N(n)) for primary n.
rows = gauss_rows(-1, 300)
for r in rows[:8]:
    N = r.n.norm()
    print(f"n={str(r.n):12s} N={N:4d}  closed={r.closed.real:+.6f}  brute={r.brute.real:+.6f}  "
          f"(2/N) sqrt(N)={kronecker(2, N) * math.sqrt(N):+.6f}")

# %%
# The root number of chi^(c_K c) is 1 in every field: the Gauss sum is sqrt(N(c_K c)).
for d in FIELDS:
    worst = max(abs(g - e) / e for _, g, e in root_number_rows(d, 30))
    print(f"d={d:5d}  worst relative deviation from sqrt(N(c_K c)): {worst:.2e}")
