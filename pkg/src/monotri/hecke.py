"""The 0-Hecke action on monotone triangles and the weak order it induces."""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from monotri import _kernels
from monotri.core import (
    DomainError,
    MonotoneTriangle,
    check_guard,
    componentwise_leq,
    h_max,
    h_min,
)


def _check_index(t: MonotoneTriangle, i: int) -> None:
    if not 1 <= i <= t.n - 1:
        raise DomainError(f"generator index {i} outside [1, {t.n - 1}]")


def apply_pi(t: MonotoneTriangle, i: int) -> MonotoneTriangle:
    """``T x pi_i``: row i replaced by H_min of its neighbours."""
    _check_index(t, i)
    return t.with_row(i, h_min(t.rows[i - 1], t.rows[i + 1]))


def apply_pi_prime(t: MonotoneTriangle, i: int) -> MonotoneTriangle:
    _check_index(t, i)
    return t.with_row(i, h_max(t.rows[i - 1], t.rows[i + 1]))


def apply_word(t: MonotoneTriangle, word: Iterable[int]) -> MonotoneTriangle:
    for i in word:
        t = apply_pi(t, i)
    return t


def descent_set(t: MonotoneTriangle) -> frozenset[int]:
    return frozenset(k for k in range(1, t.n) if apply_pi(t, k) != t)


def descent_no_preimage_set(t: MonotoneTriangle, universe: Iterable[MonotoneTriangle] | None = None) -> frozenset[int]:
    """Generators ``k`` for which no ``T' != T`` has ``T' x pi_k = T``.

    With ``universe`` the search is exhaustive over it; otherwise the only
    candidate preimage differs from ``T`` in row ``k`` alone, so all
    alternatives for that row are tried.
    """
    out = set()
    if universe is not None:
        hit = set()
        for s in universe:
            if s == t:
                continue
            for k in range(1, t.n):
                if k not in hit and apply_pi(s, k) == t:
                    hit.add(k)
        return frozenset(k for k in range(1, t.n) if k not in hit)
    from monotri.phiposet import lace_between

    for k in range(1, t.n):
        lo, hi = t.rows[k - 1], t.rows[k + 1]
        if not any(apply_pi(t.with_row(k, h), k) == t
                   for h in lace_between(lo, hi, t.n) if h != t.rows[k]):
            out.add(k)
    return frozenset(out)


def pi_parabolic_min(t: MonotoneTriangle, parabolic: Iterable[int]) -> MonotoneTriangle:
    """``T x pi_{w0(J)}`` by iterating ``pi_j`` (j in J) to a fixed point."""
    gens = sorted(set(parabolic))
    for j in gens:
        _check_index(t, j)
    while True:
        before = t
        for j in gens:
            t = apply_pi(t, j)
        if t == before:
            return t


def bottom(n: int) -> MonotoneTriangle:
    return MonotoneTriangle._trusted(n, tuple((1 << m) - 1 for m in range(n + 1)))


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(k + 1 for k in range(mask.bit_length()) if mask >> k & 1)


@dataclass
class WeakOrderDag:
    """All of MT_n with edges ``T -> T x pi_i`` (pointing to smaller elements).

    ``targets[t, i-1]`` is the node id of ``T x pi_i`` (equal to ``t`` when
    ``i`` is not a descent).  Canonical order is itself a linear extension:
    ``pi_i`` lowers row ``i`` componentwise, hence lowers its mask value.
    """

    n: int
    rows: np.ndarray
    targets: np.ndarray
    descents: np.ndarray
    keys: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.rows.shape[0]

    def triangle(self, idx: int) -> MonotoneTriangle:
        return MonotoneTriangle._trusted(self.n, tuple(int(x) for x in self.rows[idx]))

    @cached_property
    def nodes(self) -> list[MonotoneTriangle]:
        return [self.triangle(i) for i in range(len(self))]

    def index(self, t: MonotoneTriangle) -> int:
        if t.n != self.n:
            raise DomainError("triangle size does not match the DAG")
        key = np.uint64(0)
        for m in range(1, self.n):
            key = (key << np.uint64(self.n)) | np.uint64(t.rows[m])
        pos = int(np.searchsorted(self.keys, key))
        if pos >= len(self.keys) or self.keys[pos] != key:
            raise DomainError(f"{t} is not a monotone triangle of size {self.n}")
        return pos

    def descent_set(self, idx: int) -> frozenset[int]:
        return _mask_to_set(int(self.descents[idx]))

    def edges(self) -> list[tuple[int, int, int]]:
        """``(source, target, generator)`` for every strict pi-edge."""
        out = []
        for s in range(len(self)):
            for i in range(1, self.n):
                t = int(self.targets[s, i - 1])
                if t != s:
                    out.append((s, t, i))
        return out

    def successors(self, idx: int) -> set[int]:
        return {int(x) for x in self.targets[idx]} - {idx}

    @cached_property
    def has_preimage(self) -> np.ndarray:
        """Nodes that are ``T' x pi_i`` for some distinct ``T'``."""
        flags = np.zeros(len(self), dtype=bool)
        src = np.arange(len(self))[:, None]
        moved = self.targets != src
        flags[self.targets[moved]] = True
        return flags

    @cached_property
    def closures(self) -> list[int]:
        """Bit set of the principal order ideal below each node (inclusive)."""
        if len(self) > 250_000:
            raise MemoryError("reachability closures are limited to n <= 7")
        down = [0] * len(self)
        for s in range(len(self)):
            acc = 1 << s
            for t in self.successors(s):
                acc |= down[t]
            down[s] = acc
        return down

    def leq(self, a: int, b: int) -> bool:
        return bool(self.closures[b] >> a & 1)

    @cached_property
    def covers(self) -> list[set[int]]:
        """Lower covers of each node in the weak order."""
        out = []
        for y in range(len(self)):
            below = self.closures[y] & ~(1 << y)
            deeper = 0
            for z in _bits(below):
                deeper |= self.closures[z] & ~(1 << z)
            out.append(set(_bits(below & ~deeper)))
        return out


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_weak_dag(n: int, max_n: int = 7) -> WeakOrderDag:
    check_guard(n, max_n)
    rows = _kernels.enumerate_rows(n)
    keys = _kernels.pack_keys(rows, n)
    images = _kernels.pi_images(rows, n)
    targets = np.empty((rows.shape[0], max(n - 1, 0)), dtype=np.int64)
    descents = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(1, n):
        moved = rows.copy()
        moved[:, i] = images[:, i - 1]
        targets[:, i - 1] = np.searchsorted(keys, _kernels.pack_keys(moved, n))
        descents |= (images[:, i - 1] != rows[:, i]).astype(np.int64) << (i - 1)
    return WeakOrderDag(n, rows, targets, descents, keys)


def weak_leq(dag: WeakOrderDag, t: MonotoneTriangle, t2: MonotoneTriangle) -> bool:
    """``t <=_W t2``: ``t`` lies in the 0-Hecke orbit of ``t2``."""
    return dag.leq(dag.index(t), dag.index(t2))


def chain_distances(dag: WeakOrderDag) -> list[int]:
    """Shortest saturated chain from the bottom to every node.

    Saturated chains are made of weak-order covers, so this is a BFS upward
    along covers starting at node 0 (the bottom in canonical order).
    """
    ups: dict[int, list[int]] = {}
    for y, cov in enumerate(dag.covers):
        for x in cov:
            ups.setdefault(x, []).append(y)
    dist = [-1] * len(dag)
    dist[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for y in ups.get(x, ()):
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def shortest_chain_length(dag: WeakOrderDag, t: MonotoneTriangle) -> int:
    return chain_distances(dag)[dag.index(t)]


def pi_step_distance(dag: WeakOrderDag, t: MonotoneTriangle) -> int:
    """Fewest strict pi-steps taking ``t`` down to the bottom element."""
    dist = np.zeros(len(dag), dtype=np.int64)
    for s in range(1, len(dag)):
        dist[s] = 1 + min(int(dist[x]) for x in dag.successors(s))
    return int(dist[dag.index(t)])


@dataclass
class RelationReport:
    n: int
    passed: bool
    checks: int = 0
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {"n": self.n, "passed": self.passed, "checks": self.checks,
                "counterexample": self.counterexample}


def relation_words(n: int) -> list[tuple[str, tuple[int, ...], tuple[int, ...]]]:
    """Defining relations of the 0-Hecke monoid on generators 1..n-1."""
    out = []
    for i in range(1, n):
        out.append(("idempotent", (i, i), (i,)))
        if i + 1 < n:
            out.append(("braid", (i, i + 1, i), (i + 1, i, i + 1)))
        for j in range(i + 2, n):
            out.append(("commute", (i, j), (j, i)))
    return out


def verify_relations(n: int, max_n: int = 5) -> RelationReport:
    """Check every defining relation on every triangle of MT_n."""
    check_guard(n, max_n)
    dag = build_weak_dag(n, max_n)
    relations = relation_words(n)
    report = RelationReport(n, True)
    for idx in range(len(dag)):
        for name, left, right in relations:
            report.checks += 1
            a = b = idx
            for g in left:
                a = int(dag.targets[a, g - 1])
            for g in right:
                b = int(dag.targets[b, g - 1])
            if a != b:
                report.passed = False
                report.counterexample = {"triangle": str(dag.triangle(idx)), "relation": name,
                                         "left": list(left), "right": list(right)}
                return report
    return report


STRATEGIES = ("canonical-topological", "permutations-first", "seeded-random")


def linear_extension(dag: WeakOrderDag, strategy: str = "canonical-topological",
                     seed: int = 0) -> list[int]:
    """Node ids ordered so every pi-edge target precedes its source."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    size = len(dag)
    pending = np.zeros(size, dtype=np.int64)
    parents: list[list[int]] = [[] for _ in range(size)]
    for s in range(size):
        succ = dag.successors(s)
        pending[s] = len(succ)
        for t in succ:
            parents[t].append(s)
    rng = random.Random(seed)
    if strategy == "permutations-first":
        is_perm = [dag.triangle(i).is_permutation() for i in range(size)]
        prio = lambda i: (not is_perm[i], i)
    elif strategy == "seeded-random":
        keys = [rng.random() for _ in range(size)]
        prio = lambda i: (keys[i], i)
    else:
        prio = lambda i: (i,)
    heap = [(prio(i), i) for i in range(size) if pending[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, s = heapq.heappop(heap)
        order.append(s)
        for p in parents[s]:
            pending[p] -= 1
            if pending[p] == 0:
                heapq.heappush(heap, (prio(p), p))
    return order


def is_linear_extension(dag: WeakOrderDag, order: Sequence[int]) -> bool:
    pos = np.empty(len(dag), dtype=np.int64)
    if sorted(order) != list(range(len(dag))):
        return False
    pos[np.asarray(order)] = np.arange(len(dag))
    src = np.arange(len(dag))[:, None]
    return bool(np.all((dag.targets == src) | (pos[dag.targets] < pos[src])))


def brute_parabolic_min(t: MonotoneTriangle, parabolic: Iterable[int],
                        universe: Iterable[MonotoneTriangle]) -> MonotoneTriangle:
    """Componentwise minimum over triangles agreeing with ``t`` off ``J``."""
    fixed = [m for m in range(t.n + 1) if m not in set(parabolic)]
    agree = [s for s in universe if all(s.rows[m] == t.rows[m] for m in fixed)]
    mins = [s for s in agree
            if all(all(componentwise_leq(s.rows[m], o.rows[m]) for m in range(t.n + 1)) for o in agree)]
    if len(mins) != 1:
        raise DomainError("no unique componentwise minimum")
    return mins[0]


__all__ = [
    "RelationReport",
    "STRATEGIES",
    "WeakOrderDag",
    "apply_pi",
    "apply_pi_prime",
    "apply_word",
    "bottom",
    "build_weak_dag",
    "chain_distances",
    "descent_no_preimage_set",
    "descent_set",
    "is_linear_extension",
    "linear_extension",
    "pi_parabolic_min",
    "pi_step_distance",
    "relation_words",
    "verify_relations",
    "shortest_chain_length",
    "weak_leq",
]
