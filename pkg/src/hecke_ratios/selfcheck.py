"""Exhaustive small-range checks of the exact identities (symbols, Gauss sums,
root numbers), shared by the command line and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import EUCLIDEAN_FIELDS, QuadInt
from .gauss import gauss_sum_bruteforce, gauss_sum_closed, root_number_check
from .intarith import kronecker
from .moments import enumerate_c
from .primary import primary_elements
from .symbols import lower_char_values, symbol, symbol_fast


@dataclass(frozen=True)
class SymbolCheck:
    d: int
    maxnorm: int
    elements: int
    coprime_pairs: int
    reciprocity_failures: int
    minus_one_failures: int
    two_failures: int
    fast_pairs: int
    fast_failures: int

    @property
    def ok(self) -> bool:
        return not (self.reciprocity_failures or self.minus_one_failures
                    or self.two_failures or self.fast_failures)


def symbol_matrix(ns: list[QuadInt]) -> np.ndarray:
    """S[i, j] = (n_j / n_i)."""
    x = np.array([n.a for n in ns], dtype=np.int64)
    y = np.array([n.b for n in ns], dtype=np.int64)
    return np.array([lower_char_values(n, x, y) for n in ns], dtype=np.int64)


def symbol_check(d: int, maxnorm: int, fast_maxnorm: int = 150) -> SymbolCheck:
    """Reciprocity and both supplementary laws over all primary elements of
    norm <= maxnorm; in Euclidean fields also symbol_fast against symbol."""
    ns = [n for n in primary_elements(d, maxnorm) if n.norm() > 1]
    S = symbol_matrix(ns)
    h = np.array([(n.norm() - 1) // 2 for n in ns], dtype=np.int64)
    sign = np.where((h[:, None] * h[None, :]) % 2 == 1, -1, 1)
    coprime = (S != 0) & (S.T != 0)
    np.fill_diagonal(coprime, False)
    recip_fail = int(np.sum(coprime & (S * S.T != sign)) // 2)
    pairs = int(np.sum(coprime) // 2)
    minus_one = QuadInt(-1, 0, d)
    two = QuadInt(2, 0, d)
    m1_fail = sum(symbol(minus_one, n) != (-1) ** h[i] for i, n in enumerate(ns))
    two_fail = sum(symbol(two, n) != kronecker(2, n.norm()) for n in ns)
    fast_pairs = fast_fail = 0
    if d in EUCLIDEAN_FIELDS:
        small = [i for i, n in enumerate(ns) if n.norm() <= fast_maxnorm]
        for i in small:
            for j in small:
                if i != j:
                    fast_pairs += 1
                    fast_fail += symbol_fast(ns[j], ns[i]) != S[i, j]
    return SymbolCheck(d, maxnorm, len(ns), pairs, recip_fail, int(m1_fail), int(two_fail),
                       fast_pairs, int(fast_fail))


@dataclass(frozen=True)
class GaussRow:
    n: QuadInt
    closed: complex
    brute: complex

    @property
    def diff(self) -> float:
        return abs(self.closed - self.brute)

    @property
    def ok(self) -> bool:
        return self.diff <= 1e-6 * math.sqrt(self.n.norm())


def gauss_rows(d: int, maxnorm: int) -> list[GaussRow]:
    """Closed form against brute force for odd square-free primary n."""
    one = QuadInt(1, 0, d)
    return [GaussRow(n, gauss_sum_closed(n), gauss_sum_bruteforce(one, ("lower", n), n))
            for n in enumerate_c(d, 0, maxnorm) if n.norm() > 1]


def root_number_rows(d: int, maxnorm: int) -> list[tuple[QuadInt, complex, float]]:
    """(c, g(chi^(c_K c)), sqrt(N(c_K c))) for odd square-free primary c."""
    from .field import field_params
    nk = field_params(d).norm_c_K
    return [(c, root_number_check(c), math.sqrt(nk * c.norm())) for c in enumerate_c(d, 0, maxnorm)]
