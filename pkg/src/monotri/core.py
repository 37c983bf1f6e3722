"""Ground types: subsets as bit sets, alternating vectors, monotone triangles,
trapezoids, ASMs and permutations, plus the interlacing order on subsets.

Subsets of ``[n]`` are plain ``int`` bit masks: element ``i`` lives in bit
``i - 1``.  The ground size is passed explicitly wherever it matters.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator, Sequence

MAX_GROUND = 62
MAX_ENUM_N = 8


class DomainError(ValueError):
    """An argument violates the precondition of a construction."""


class CardinalityError(DomainError):
    pass


class InvalidEntryError(ValueError):
    pass


class InvalidASMError(ValueError):
    pass


class InvalidTriangleError(ValueError):
    pass


class ResourceGuardError(RuntimeError):
    """Requested size exceeds the configured enumeration limit."""


# ---------------------------------------------------------------- subsets

def subset(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1 or e > MAX_GROUND:
            raise DomainError(f"element {e} outside [1, {MAX_GROUND}]")
        mask |= 1 << (e - 1)
    return mask


def elements(mask: int) -> tuple[int, ...]:
    """Members of ``mask`` in increasing order."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def card(mask: int) -> int:
    return mask.bit_count()


def full_set(n: int) -> int:
    return (1 << n) - 1


def indicator(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(n))


def format_subset(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"


def componentwise_leq(a: int, b: int) -> bool:
    ea, eb = elements(a), elements(b)
    if len(ea) != len(eb):
        raise CardinalityError(f"cardinality mismatch: {len(ea)} vs {len(eb)}")
    return all(x <= y for x, y in zip(ea, eb))


def _comp_leq_seq(xs: Sequence[int], ys: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(xs, ys))


def leq_lace(a: int, b: int) -> bool:
    """``b`` interlaces ``a`` in the generalized sense (the order of Phi_n).

    Returns False when ``#a > #b`` rather than raising.
    """
    i, j = elements(a), elements(b)
    k, l = len(i), len(j)
    if k > l:
        return False
    return _comp_leq_seq(j[:k], i) and _comp_leq_seq(i, j[l - k:])


def is_alternating(v: Sequence[int]) -> bool:
    total = 0
    last = -1
    for x in v:
        if x not in (-1, 0, 1):
            raise InvalidEntryError(f"entry {x!r} not in {{-1, 0, +1}}")
    for x in v:
        if x == 0:
            continue
        if x == last:
            return False
        last = x
        total += x
    return total == 1 and last == 1


def cover_diff_is_alternating(a: int, b: int, n: int) -> bool:
    if card(b) != card(a) + 1:
        raise CardinalityError("need #J = #I + 1")
    ia, ib = indicator(a, n), indicator(b, n)
    return is_alternating([y - x for x, y in zip(ia, ib)])


# ------------------------------------------------------ H_min / H_max

def _check_gap(a: int, b: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    i, j = elements(a), elements(b)
    if len(j) < len(i) + 2:
        raise DomainError(f"need #J >= #I + 2, got #I={len(i)}, #J={len(j)}")
    if not leq_lace(a, b):
        raise DomainError(f"{format_subset(a)} is not <=_lace {format_subset(b)}")
    return i, j


def h_min(a: int, b: int) -> int:
    """Componentwise-smallest (k+1)-subset lace-between ``a`` and ``b``."""
    i, j = _check_gap(a, b)
    prev = (0,) + i
    return subset(max(prev[m], j[m]) for m in range(len(i) + 1))


def h_max(a: int, b: int) -> int:
    """Componentwise-largest (k+1)-subset lace-between ``a`` and ``b``."""
    i, j = _check_gap(a, b)
    k, l = len(i), len(j)
    nxt = i + (MAX_GROUND + 1,)
    return subset(min(nxt[m], j[m + l - k - 1]) for m in range(k + 1))


# -------------------------------------------------------------- triangles

@dataclass(frozen=True, order=True)
class MonotoneTriangle:
    """Rows ``T_0 .. T_n`` as bit masks; ``T_0`` and ``T_n`` are stored."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        validate_rows(self.n, self.rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], n: int | None = None) -> "MonotoneTriangle":
        """Build from the interior rows ``T_1 .. T_{n-1}`` given as element lists."""
        rows = [subset(r) for r in rows]
        if n is None:
            n = len(rows) + 1
        return cls(n, (0, *rows, full_set(n)))

    @classmethod
    def _trusted(cls, n: int, rows: tuple[int, ...]) -> "MonotoneTriangle":
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "rows", rows)
        return obj

    def row(self, m: int) -> tuple[int, ...]:
        return elements(self.rows[m])

    def with_row(self, m: int, mask: int) -> "MonotoneTriangle":
        rows = list(self.rows)
        rows[m] = mask
        return MonotoneTriangle._trusted(self.n, tuple(rows))

    def is_permutation(self) -> bool:
        return all(self.rows[m] & ~self.rows[m + 1] == 0 for m in range(self.n))

    def __str__(self) -> str:
        return ";".join(" ".join(map(str, self.row(m))) for m in range(1, self.n))


def validate_rows(n: int, rows: Sequence[int]) -> None:
    if not 0 <= n <= MAX_GROUND:
        raise InvalidTriangleError(f"n={n} outside [0, {MAX_GROUND}]")
    if len(rows) != n + 1:
        raise InvalidTriangleError(f"expected {n + 1} rows, got {len(rows)}")
    if rows[0] != 0 or rows[n] != full_set(n):
        raise InvalidTriangleError("T_0 must be empty and T_n must be [n]")
    for m, r in enumerate(rows):
        if r >> n:
            raise InvalidTriangleError(f"row {m} has entries outside [{n}]")
        if card(r) != m:
            raise InvalidTriangleError(f"row {m} has {card(r)} entries, expected {m}")
    for m in range(n):
        if not leq_lace(rows[m], rows[m + 1]):
            raise InvalidTriangleError(f"row {m + 1} does not interlace row {m}")


@dataclass(frozen=True)
class MonotoneTrapezoid:
    bottom: int
    top: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not self.rows or self.rows[0] != self.bottom or self.rows[-1] != self.top:
            raise DomainError("trapezoid rows must run from bottom to top")
        for x, y in zip(self.rows, self.rows[1:]):
            if card(y) != card(x) + 1 or not leq_lace(x, y):
                raise DomainError("consecutive trapezoid rows must be lace covers")

    def __len__(self) -> int:
        return len(self.rows) - 1


def minimal_trapezoid(a: int, b: int) -> MonotoneTrapezoid:
    if not leq_lace(a, b):
        raise DomainError(f"{format_subset(a)} is not <=_lace {format_subset(b)}")
    i, j = elements(a), elements(b)
    k, l = len(i), len(j)
    rows = []
    for m in range(k, l + 1):
        row = []
        for p in range(1, m + 1):
            q = p + k - m
            row.append(max(j[p - 1], i[q - 1] if q >= 1 else 0))
        rows.append(subset(row))
    return MonotoneTrapezoid(a, b, tuple(rows))


def maximal_trapezoid(a: int, b: int) -> MonotoneTrapezoid:
    if not leq_lace(a, b):
        raise DomainError(f"{format_subset(a)} is not <=_lace {format_subset(b)}")
    rows = [a]
    while card(b) - card(rows[-1]) >= 2:
        rows.append(h_max(rows[-1], b))
    if b != a:
        rows.append(b)
    return MonotoneTrapezoid(a, b, tuple(rows))


# ----------------------------------------------------------------- ASMs

@dataclass(frozen=True)
class AsmMatrix:
    n: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise InvalidASMError(f"expected a {self.n}x{self.n} matrix")
        for r, row in enumerate(self.entries):
            if not is_alternating(row):
                raise InvalidASMError(f"row {r + 1} is not alternating")
        for c in range(self.n):
            if not is_alternating([row[c] for row in self.entries]):
                raise InvalidASMError(f"column {c + 1} is not alternating")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "AsmMatrix":
        return cls(len(rows), tuple(tuple(int(x) for x in r) for r in rows))

    def __str__(self) -> str:
        return "\n".join(" ".join(str(x) for x in row) for row in self.entries)


def asm_to_mt(a: AsmMatrix) -> MonotoneTriangle:
    n = a.n
    partial = [0] * n
    rows = [0]
    for r, row in enumerate(a.entries):
        partial = [p + x for p, x in zip(partial, row)]
        if any(p not in (0, 1) for p in partial):
            raise InvalidASMError(f"partial row sum {r + 1} is not 0/1-valued")
        rows.append(subset(c + 1 for c, p in enumerate(partial) if p))
    return MonotoneTriangle(n, tuple(rows))


def mt_to_asm(t: MonotoneTriangle) -> AsmMatrix:
    n = t.n
    out = []
    for m in range(1, n + 1):
        hi, lo = indicator(t.rows[m], n), indicator(t.rows[m - 1], n)
        out.append(tuple(x - y for x, y in zip(hi, lo)))
    return AsmMatrix(n, tuple(out))


def inversion_number(a: AsmMatrix) -> int:
    """Sum of a_ij * a_kl over i < k and j > l."""
    n = a.n
    e = a.entries
    total = 0
    # below[k][l]: sum of a_{k'l'} over k' > k, l' < l
    for i in range(n):
        for j in range(n):
            if e[i][j]:
                s = 0
                for k in range(i + 1, n):
                    for l in range(j):
                        s += e[k][l]
                total += e[i][j] * s
    return total


# --------------------------------------------------------- permutations

def validate_permutation(w: Sequence[int]) -> tuple[int, ...]:
    w = tuple(int(x) for x in w)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise DomainError(f"{w} is not a permutation of 1..{len(w)}")
    return w


def perm_to_mt(w: Sequence[int]) -> MonotoneTriangle:
    w = validate_permutation(w)
    rows = [0]
    for x in w:
        rows.append(rows[-1] | (1 << (x - 1)))
    return MonotoneTriangle._trusted(len(w), tuple(rows))


def mt_to_perm(t: MonotoneTriangle) -> tuple[int, ...] | None:
    w = []
    for m in range(t.n):
        diff = t.rows[m + 1] & ~t.rows[m]
        if t.rows[m] & ~t.rows[m + 1]:
            return None
        w.append(diff.bit_length())
    return tuple(w)


def perm_matrix(w: Sequence[int]) -> AsmMatrix:
    """The ASM whose triangle is ``T(w)``: row m has its 1 in column w_m."""
    w = validate_permutation(w)
    n = len(w)
    return AsmMatrix(n, tuple(tuple(int(c + 1 == x) for c in range(n)) for x in w))


def inverse_perm(w: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(w)
    for i, x in enumerate(w):
        out[x - 1] = i + 1
    return tuple(out)


# ------------------------------------------------------------ reflection

def w0_subset(mask: int, n: int) -> int:
    return subset(n + 1 - i for i in elements(mask))


def w0_reflect(x, n: int | None = None):
    """The involution induced by the longest permutation.

    Accepts a bit-mask subset (``n`` required), a triangle, a trapezoid
    (``n`` required) or an ASM.
    """
    if isinstance(x, MonotoneTriangle):
        return MonotoneTriangle._trusted(x.n, tuple(w0_subset(r, x.n) for r in x.rows))
    if isinstance(x, AsmMatrix):
        return AsmMatrix(x.n, tuple(tuple(reversed(row)) for row in x.entries))
    if isinstance(x, MonotoneTrapezoid):
        if n is None:
            raise TypeError("n is required to reflect a trapezoid")
        return MonotoneTrapezoid(w0_subset(x.bottom, n), w0_subset(x.top, n),
                                 tuple(w0_subset(r, n) for r in x.rows))
    if isinstance(x, int):
        if n is None:
            raise TypeError("n is required to reflect a subset")
        return w0_subset(x, n)
    raise TypeError(f"cannot reflect {type(x).__name__}")


# ----------------------------------------------------------- enumeration

def asm_count(n: int) -> int:
    """Product formula prod_{k<n} (3k+1)!/(n+k)!."""
    num = den = 1
    for k in range(n):
        num *= factorial(3 * k + 1)
        den *= factorial(n + k)
    return num // den


def check_guard(n: int, max_n: int = MAX_ENUM_N) -> None:
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n > max_n:
        raise ResourceGuardError(f"n={n} exceeds the configured maximum {max_n}")


def enumerate_mt(n: int, max_n: int = MAX_ENUM_N) -> Iterator[MonotoneTriangle]:
    """All of MT_n in canonical order (lexicographic on the row masks)."""
    check_guard(n, max_n)
    from monotri import _kernels

    for row in _kernels.enumerate_rows(n):
        yield MonotoneTriangle._trusted(n, tuple(int(x) for x in row))


def all_asms(n: int) -> list[AsmMatrix]:
    return [mt_to_asm(t) for t in enumerate_mt(n)]
