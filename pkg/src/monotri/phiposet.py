"""The interlacing poset Phi_n, its alternating-vector edge labels, and
verifiers for EL-labelings and shelling orders of its maximal chains."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from monotri import _kernels
from monotri.core import (
    DomainError,
    MonotoneTrapezoid,
    MonotoneTriangle,
    card,
    check_guard,
    enumerate_mt,
    indicator,
    is_alternating,
    leq_lace,
    minimal_trapezoid,
)


# ------------------------------------------------------------- the poset

@dataclass(frozen=True)
class PhiPoset:
    n: int

    @property
    def elements(self) -> list[int]:
        return list(range(1 << self.n))

    def leq(self, a: int, b: int) -> bool:
        return leq_lace(a, b)

    def covers(self) -> list[tuple[int, int]]:
        offsets, targets = _kernels.successor_table(self.n)
        return [(a, int(b)) for a in range(1 << self.n)
                for b in targets[offsets[a]:offsets[a + 1]]]

    def non_boolean_relations(self) -> list[tuple[int, int]]:
        """Strict relations ``a < b`` of Phi_n with ``a`` not a subset of ``b``."""
        return [(a, b) for a in range(1 << self.n) for b in range(1 << self.n)
                if a != b and leq_lace(a, b) and a & ~b]


def lace_between(lo: int, hi: int, n: int) -> list[int]:
    """Subsets H with ``#H = #lo + 1`` and ``lo <=_lace H <=_lace hi``."""
    k = card(lo)
    return [h for h in _by_card(n)[k + 1] if leq_lace(lo, h) and leq_lace(h, hi)] if k < n else []


@lru_cache(maxsize=None)
def _by_card(n: int) -> tuple[tuple[int, ...], ...]:
    groups: list[list[int]] = [[] for _ in range(n + 2)]
    for mask in range(1 << n):
        groups[card(mask)].append(mask)
    return tuple(tuple(g) for g in groups)


def maximal_chains(lo: int, hi: int, n: int) -> list[MonotoneTrapezoid]:
    """All saturated chains of Phi_n from ``lo`` to ``hi``."""
    if lo >> n or hi >> n:
        raise DomainError(f"subsets must lie in [{n}]")
    if not leq_lace(lo, hi):
        return []
    out = []

    def extend(chain: list[int]) -> None:
        if chain[-1] == hi:
            out.append(MonotoneTrapezoid(lo, hi, tuple(chain)))
            return
        for h in lace_between(chain[-1], hi, n):
            chain.append(h)
            extend(chain)
            chain.pop()

    extend([lo])
    return out


# ------------------------------------------------- alternating labels

def label(lo: int, hi: int, n: int) -> tuple[int, ...]:
    """Edge label ``1_hi - 1_lo``."""
    return tuple(y - x for x, y in zip(indicator(lo, n), indicator(hi, n)))


def alt_to_subset(v: Sequence[int]) -> frozenset[int]:
    """``S(v)``: positions i in [n-1] whose tail sum from i+1 is +1."""
    if not is_alternating(v):
        raise DomainError(f"{tuple(v)} is not alternating")
    n = len(v)
    out = set()
    tail = 0
    for i in range(n - 1, 0, -1):
        tail += v[i]
        if tail == 1:
            out.add(i)
    return frozenset(out)


def subset_to_alt(s, n: int) -> tuple[int, ...]:
    """``e_1 + sum_{i in S} (e_{i+1} - e_i)``."""
    if any(not 1 <= i <= n - 1 for i in s):
        raise DomainError(f"{sorted(s)} is not a subset of [{n - 1}]")
    v = [0] * n
    v[0] = 1
    for i in s:
        v[i] += 1
        v[i - 1] -= 1
    return tuple(v)


def all_alt(n: int) -> list[tuple[int, ...]]:
    return [subset_to_alt(c, n) for k in range(n) for c in combinations(range(1, n), k)]


def el_leq(v: Sequence[int], w: Sequence[int]) -> bool:
    if len(v) != len(w):
        raise DomainError("alternating vectors of different lengths")
    return alt_to_subset(v) <= alt_to_subset(w)


def _label_code(lo: int, hi: int, n: int) -> int:
    """Bit mask of ``S(1_hi - 1_lo)``; bit ``i-1`` for element ``i``."""
    code = 0
    tail = 0
    for i in range(n - 1, 0, -1):
        tail += (hi >> i & 1) - (lo >> i & 1)
        if tail == 1:
            code |= 1 << (i - 1)
    return code


def chain_labels(rows: Sequence[int], n: int) -> list[tuple[int, ...]]:
    return [label(a, b, n) for a, b in zip(rows, rows[1:])]


# -------------------------------------------------- EL verification

@dataclass
class ELReport:
    n: int
    passed: bool
    intervals: int = 0
    chains: int = 0
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed, "intervals": self.intervals,
                "chains": self.chains, "counterexample": self.counterexample}


def verify_el_labeling(n: int, max_n: int = 6) -> ELReport:
    """Check both EL conditions on every interval of Phi_n.

    (i) exactly one chain has weakly rising labels, (ii) it is the minimal
    trapezoid, (iii) its first label is strictly below the label to every
    other atom of the interval.
    """
    check_guard(n, max_n)
    report = ELReport(n, True)
    for lo in range(1 << n):
        for hi in range(1 << n):
            if lo == hi or not leq_lace(lo, hi):
                continue
            report.intervals += 1
            chains = maximal_chains(lo, hi, n)
            report.chains += len(chains)
            rising = []
            for ch in chains:
                codes = [_label_code(a, b, n) for a, b in zip(ch.rows, ch.rows[1:])]
                if all(x & ~y == 0 for x, y in zip(codes, codes[1:])):
                    rising.append(ch)
            problem = None
            if len(rising) != 1:
                problem = f"{len(rising)} rising chains"
            elif rising[0] != minimal_trapezoid(lo, hi):
                problem = "rising chain is not the minimal trapezoid"
            else:
                first = _label_code(lo, rising[0].rows[1], n)
                for z in lace_between(lo, hi, n):
                    if z == rising[0].rows[1]:
                        continue
                    other = _label_code(lo, z, n)
                    if not (first & ~other == 0 and first != other):
                        problem = f"first label not strictly below label to atom {z}"
                        break
            if problem:
                report.passed = False
                report.counterexample = {
                    "interval": [lo, hi],
                    "reason": problem,
                    "rising": [list(c.rows) for c in rising],
                }
                return report
    return report


def el_lex_order(n: int, max_n: int = 7) -> list[MonotoneTriangle]:
    """MT_n sorted lexicographically by edge-label sequences.

    Individual labels compare by the integer value of ``S(v)``, a linear
    extension of the EL order on alternating vectors.
    """
    check_guard(n, max_n)
    tris = list(enumerate_mt(n, max_n))
    return sorted(tris, key=lambda t: [_label_code(a, b, n) for a, b in zip(t.rows, t.rows[1:])])


# -------------------------------------------------------- shelling

@dataclass
class ShellingReport:
    passed: bool
    facets: int
    witness: tuple[int, int] | None = None
    facet_pair: tuple[str, str] | None = field(default=None)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "facets": self.facets,
                "witness": list(self.witness) if self.witness else None,
                "facet_pair": list(self.facet_pair) if self.facet_pair else None}


def verify_shelling(facet_order: Sequence[MonotoneTriangle], use_numba: bool | None = None) -> ShellingReport:
    """Check the pure shelling condition for an ordering of all of MT_n.

    A codimension-one witness ``F_k`` for ``F_j`` differs from it in exactly
    one row; ``F_i`` is covered iff it differs from ``F_j`` in such a row.
    """
    if not facet_order:
        raise DomainError("empty facet order")
    n = facet_order[0].n
    rows = np.array([t.rows for t in facet_order], dtype=np.uint16)
    reference = _kernels.enumerate_rows(n)
    keys = np.sort(_kernels.pack_keys(rows, n))
    if len(keys) != len(reference) or not np.array_equal(keys, _kernels.pack_keys(reference, n)):
        raise DomainError("facet order is not a permutation of MT_n")
    i, j = _kernels.shelling_failure(rows, use_numba)
    if j < 0:
        return ShellingReport(True, len(facet_order))
    return ShellingReport(False, len(facet_order), (i, j),
                          (str(facet_order[i]), str(facet_order[j])))


def brute_force_shelling(facet_order: Sequence[MonotoneTriangle]) -> bool:
    """The shelling definition verbatim over vertex sets (small n only)."""
    facets = [frozenset((m, r) for m, r in enumerate(t.rows)) for t in facet_order]
    for j in range(1, len(facets)):
        fj = facets[j]
        for i in range(j):
            common = facets[i] & fj
            if not any(common <= (facets[k] & fj) and len(facets[k] & fj) == len(fj) - 1
                       for k in range(j)):
                return False
    return True


__all__ = [
    "ELReport",
    "PhiPoset",
    "ShellingReport",
    "all_alt",
    "alt_to_subset",
    "brute_force_shelling",
    "chain_labels",
    "el_leq",
    "el_lex_order",
    "label",
    "lace_between",
    "maximal_chains",
    "subset_to_alt",
    "verify_el_labeling",
    "verify_shelling",
]
