"""Descent statistics over MT_n, flag f- and h-vectors, and exact diagnostics
for the h-polynomial (log-concavity, real-rootedness by Sturm sequences)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from monotri import _kernels
from monotri.core import check_guard, leq_lace
from monotri.hecke import build_weak_dag


def _mask_set(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def all_rank_sets(n: int) -> list[frozenset[int]]:
    ground = range(1, n)
    return [frozenset(c) for k in range(n) for c in combinations(ground, k)]


@dataclass(frozen=True)
class FlagVector:
    n: int
    kind: str  # "flag-f" or "flag-h"
    values: Mapping[frozenset, int]

    def __getitem__(self, ranks) -> int:
        return self.values.get(frozenset(ranks), 0)

    def grouped(self) -> list[int]:
        """Sum of values by ``#J``, index 0 through n-1."""
        out = [0] * max(self.n, 1)
        for j, v in self.values.items():
            out[len(j)] += v
        return out

    def polynomial_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(((tuple(sorted(j)), v) for j, v in self.values.items()),
                      key=lambda t: (-len(t[0]), t[0]))


def descent_distribution(n: int, max_n: int = 8, use_numba: bool | None = None) -> FlagVector:
    """Flag h-vector as counts of triangles by descent set."""
    check_guard(n, max_n)
    hist = _kernels.descent_histogram(n, use_numba)
    values = {_mask_set(m): int(c) for m, c in enumerate(hist)}
    return FlagVector(n, "flag-h", values)


def flag_f_direct(n: int, ranks) -> int:
    """Chains of Phi_n through exactly the ranks in ``ranks``.

    Dynamic programming over rank levels with interlacing transitions;
    no descent machinery is involved.
    """
    ranks = sorted(ranks)
    if any(not 1 <= r <= n - 1 for r in ranks):
        raise ValueError(f"ranks must lie in [1, {n - 1}]")
    counts = [1]
    for r_lo, r_hi in zip([0] + ranks, ranks):
        adj = _lace_adjacency(n, r_lo, r_hi)
        counts = [sum(c for c, ok in zip(counts, col) if ok) for col in adj]
    return sum(counts)


@lru_cache(maxsize=None)
def _lace_adjacency(n: int, r_lo: int, r_hi: int) -> tuple[tuple[bool, ...], ...]:
    """``adj[b][a]``: the a-th rank-r_lo subset lies below the b-th rank-r_hi one."""
    lower = [m for m in range(1 << n) if m.bit_count() == r_lo]
    upper = [m for m in range(1 << n) if m.bit_count() == r_hi]
    return tuple(tuple(leq_lace(a, b) for a in lower) for b in upper)


def flag_f_vector(n: int) -> FlagVector:
    return FlagVector(n, "flag-f", {j: flag_f_direct(n, j) for j in all_rank_sets(n)})


def flag_h_from_f(flag_f: FlagVector) -> FlagVector:
    """Inclusion-exclusion: ``h_J = sum_{I <= J} (-1)^{#J - #I} f_I``."""
    values = {}
    for j in all_rank_sets(flag_f.n):
        total = 0
        for k in range(len(j) + 1):
            for i in combinations(sorted(j), k):
                total += (-1) ** (len(j) - k) * flag_f[i]
        values[j] = total
    return FlagVector(flag_f.n, "flag-h", values)


def h_vector(n: int, max_n: int = 8) -> list[int]:
    return descent_distribution(n, max_n).grouped()


def f_vector(n: int) -> list[int]:
    """``(f_{-1}, f_0, ..., f_{n-2})`` of the order complex of the proper part."""
    ff = flag_f_vector(n)
    out = [0] * n
    for j, v in ff.values.items():
        out[len(j)] += v
    return out


def maximal_element_count(n: int, max_n: int = 8) -> int:
    """Triangles with every generator a descent."""
    check_guard(n, max_n)
    hist = _kernels.descent_histogram(n)
    return int(hist[-1])


def maximal_element_count_dag(n: int, max_n: int = 7) -> int:
    """Nodes of the weak-order DAG with no strict incoming pi-edge."""
    dag = build_weak_dag(n, max_n)
    return int((~dag.has_preimage).sum())


# ---------------------------------------------------- polynomial checks

def log_concavity_check(coeffs: Sequence[int]) -> bool:
    if not any(coeffs):
        raise ValueError("zero polynomial")
    return all(coeffs[i] ** 2 >= coeffs[i - 1] * coeffs[i + 1] for i in range(1, len(coeffs) - 1))


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a.pop()
        _trim(a)
    return a


def _derivative(p: list[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(p)][1:]


def _gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        a, b = b, _poly_rem(a, b)
    return a


def sturm_sequence(p: Sequence[int]) -> list[list[Fraction]]:
    """Coefficient lists (constant term first) of the Sturm chain of ``p``."""
    p0 = _trim([Fraction(c) for c in p])
    seq = [p0, _derivative(p0)]
    while seq[-1]:
        rem = _poly_rem(seq[-2], seq[-1])
        if not rem:
            break
        seq.append([-c for c in rem])
    return [s for s in seq if s]


def _eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign_changes(values: list[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_infinity(p: list[Fraction], positive: bool) -> Fraction:
    lead = p[-1]
    deg = len(p) - 1
    return lead if positive or deg % 2 == 0 else -lead


def count_real_roots(p: Sequence[int], lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Distinct real roots in ``(lo, hi]`` (whole line when bounds omitted)."""
    seq = sturm_sequence(p)
    at_lo = ([_sign_at_infinity(s, False) for s in seq] if lo is None
             else [_eval(s, lo) for s in seq])
    at_hi = ([_sign_at_infinity(s, True) for s in seq] if hi is None
             else [_eval(s, hi) for s in seq])
    return _sign_changes(at_lo) - _sign_changes(at_hi)


@dataclass
class RootReport:
    real_rooted: bool
    degree: int
    distinct_real_roots: int
    squarefree_degree: int
    intervals: list[tuple[Fraction, Fraction]]

    def to_dict(self) -> dict:
        return {"real_rooted": self.real_rooted, "degree": self.degree,
                "distinct_real_roots": self.distinct_real_roots,
                "squarefree_degree": self.squarefree_degree,
                "intervals": [[str(a), str(b)] for a, b in self.intervals]}


def real_rootedness_check(p: Sequence[int], isolate: bool = True) -> RootReport:
    """Decide exactly whether every complex root of ``p`` is real.

    ``p`` lists coefficients from the constant term up.  Real-rooted means the
    number of distinct real roots equals the degree of the squarefree part.
    """
    poly = _trim([Fraction(c) for c in p])
    if not poly:
        raise ValueError("zero polynomial")
    degree = len(poly) - 1
    g = _gcd(poly, _derivative(poly)) if degree > 0 else [Fraction(1)]
    sqfree_deg = degree - (len(g) - 1)
    distinct = count_real_roots(p)
    intervals: list[tuple[Fraction, Fraction]] = []
    if isolate and distinct:
        bound = 1 + max(abs(c / poly[-1]) for c in poly[:-1]) if degree else Fraction(1)
        stack = [(-bound, bound)]
        while stack:
            a, b = stack.pop()
            k = count_real_roots(p, a, b)
            if k == 0:
                continue
            if k == 1:
                intervals.append((a, b))
                continue
            mid = (a + b) / 2
            stack.extend([(mid, b), (a, mid)])
        intervals.sort()
    return RootReport(distinct == sqfree_deg, degree, distinct, sqfree_deg, intervals)


def h_argmax(h: Sequence[int]) -> int:
    return max(range(len(h)), key=lambda i: (h[i], -i))


__all__ = [
    "FlagVector",
    "RootReport",
    "count_real_roots",
    "descent_distribution",
    "f_vector",
    "flag_f_direct",
    "flag_f_vector",
    "flag_h_from_f",
    "h_argmax",
    "h_vector",
    "log_concavity_check",
    "maximal_element_count",
    "maximal_element_count_dag",
    "real_rootedness_check",
    "sturm_sequence",
]
