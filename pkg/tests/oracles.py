"""Brute-force reference implementations used only by the tests.

Everything here works straight from definitions (explicit element lists,
exhaustive searches) and shares no code with the package beyond the
triangle/matrix containers.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product


def elems(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def to_mask(xs) -> int:
    out = 0
    for x in xs:
        out |= 1 << (x - 1)
    return out


def alternating(v) -> bool:
    nz = [x for x in v if x]
    return bool(nz) and nz[0] == 1 and nz[-1] == 1 and all(a == -b for a, b in zip(nz, nz[1:]))


def interlaces(small: int, big: int) -> bool:
    """The chain j_1 <= i_1 <= j_2 <= ... <= i_m <= j_{m+1} for #big = #small + 1."""
    i, j = elems(small), elems(big)
    if len(j) != len(i) + 1:
        return False
    return all(j[m] <= i[m] <= j[m + 1] for m in range(len(i)))


def comp_leq(a: int, b: int) -> bool:
    x, y = elems(a), elems(b)
    return len(x) == len(y) and all(p <= q for p, q in zip(x, y))


@lru_cache(maxsize=None)
def subsets_of_size(n: int, k: int) -> tuple[int, ...]:
    return tuple(to_mask(c) for c in combinations(range(1, n + 1), k))


def trapezoids(lo: int, hi: int, n: int) -> list[tuple[int, ...]]:
    """All chains lo = I_k, I_{k+1}, ..., I_l = hi of consecutive interlacings."""
    k, l = len(elems(lo)), len(elems(hi))
    out = []

    def walk(chain):
        cur = chain[-1]
        size = len(elems(cur))
        if size == l:
            if cur == hi:
                out.append(tuple(chain))
            return
        for h in subsets_of_size(n, size + 1):
            if interlaces(cur, h):
                walk(chain + [h])

    if k <= l:
        walk([lo])
    return out


def componentwise_min(cands):
    cands = set(cands)
    mins = [c for c in cands if all(comp_leq(c, o) for o in cands)]
    return next(iter(mins)) if len(mins) == 1 else None


def componentwise_max(cands):
    cands = set(cands)
    maxs = [c for c in cands if all(comp_leq(o, c) for o in cands)]
    return next(iter(maxs)) if len(maxs) == 1 else None


def strictly_between(lo: int, hi: int, n: int) -> list[int]:
    """(k+1)-subsets H with trapezoids from lo to H and from H to hi."""
    k = len(elems(lo))
    return [h for h in subsets_of_size(n, k + 1) if interlaces(lo, h) and trapezoids(h, hi, n)]


def all_triangles(n: int) -> list[tuple[int, ...]]:
    return sorted(trapezoids(0, (1 << n) - 1, n)) if n else [(0,)]


def alt_vectors(n: int) -> list[tuple[int, ...]]:
    return [v for v in product((-1, 0, 1), repeat=n) if alternating(v)]


def all_asm_entries(n: int) -> list[tuple[tuple[int, ...], ...]]:
    rows = alt_vectors(n)
    out = []
    for m in product(rows, repeat=n):
        if all(alternating([r[c] for r in m]) for c in range(n)):
            out.append(m)
    return out


def brute_pi(rows: tuple[int, ...], i: int, n: int) -> tuple[int, ...]:
    """Row i replaced by the componentwise-least subset fitting between its neighbours."""
    cands = [h for h in subsets_of_size(n, i) if interlaces(rows[i - 1], h) and interlaces(h, rows[i + 1])]
    new = componentwise_min(cands)
    return rows[:i] + (new,) + rows[i + 1:]


def brute_descents(rows: tuple[int, ...], n: int) -> frozenset[int]:
    return frozenset(i for i in range(1, n) if brute_pi(rows, i, n) != rows)


def brute_below(n: int) -> dict[tuple[int, ...], set[tuple[int, ...]]]:
    """Down-set of every triangle under repeated pi moves (reflexive)."""
    tris = all_triangles(n)
    out = {}
    for t in tris:
        seen = {t}
        stack = [t]
        while stack:
            s = stack.pop()
            for i in range(1, n):
                u = brute_pi(s, i, n)
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        out[t] = seen
    return out


def brute_mobius(below, x, y) -> int:
    memo = {}

    def mu(z):
        if z == x:
            return 1
        if z not in memo:
            memo[z] = -sum(mu(w) for w in below[z] if w != z and x in below[w])
        return memo[z]

    return mu(y)
