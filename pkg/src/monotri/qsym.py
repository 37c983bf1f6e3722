"""Quasisymmetric functions in the monomial and fundamental bases, the
permutation shuffle product, the row-shuffle product on ASMs, and the
descent map from ASMs to QSym."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from monotri.core import (
    AsmMatrix,
    CardinalityError,
    DomainError,
    InvalidASMError,
    MonotoneTriangle,
    all_asms,
    asm_to_mt,
    check_guard,
    validate_permutation,
)
from monotri.hecke import descent_set

Composition = tuple[int, ...]


# ---------------------------------------------------------- compositions

def validate_composition(alpha: Iterable[int]) -> Composition:
    alpha = tuple(int(p) for p in alpha)
    if any(p < 1 for p in alpha):
        raise DomainError(f"composition parts must be positive: {alpha}")
    return alpha


def alpha_of_set(J: Iterable[int], n: int) -> Composition:
    """The composition of ``n`` whose partial sums are the elements of ``J``."""
    cuts = sorted(set(J))
    if any(not 1 <= j <= n - 1 for j in cuts):
        raise DomainError(f"{cuts} is not a subset of [{n - 1}]")
    if n == 0:
        return ()
    bounds = [0] + cuts + [n]
    return tuple(b - a for a, b in zip(bounds, bounds[1:]))


def set_of_alpha(alpha: Sequence[int]) -> tuple[frozenset[int], int]:
    alpha = validate_composition(alpha)
    partial, out = 0, []
    for p in alpha[:-1]:
        partial += p
        out.append(partial)
    return frozenset(out), sum(alpha)


def compositions(n: int) -> Iterator[Composition]:
    """Compositions of ``n`` ordered by their partial-sum sets."""
    ground = range(1, n)
    for k in range(n):
        for cuts in combinations(ground, k):
            yield alpha_of_set(cuts, n)
    if n == 0:
        yield ()


def refinements(alpha: Sequence[int]) -> Iterator[Composition]:
    """Compositions whose partial-sum set contains that of ``alpha``."""
    cuts, n = set_of_alpha(alpha)
    free = [j for j in range(1, n) if j not in cuts]
    for k in range(len(free) + 1):
        for extra in combinations(free, k):
            yield alpha_of_set(cuts.union(extra), n)


# -------------------------------------------------------- QSym elements

@dataclass(eq=False)
class QSymElement:
    """Homogeneous integer combination of ``M_alpha`` or ``L_alpha``."""

    basis: str
    terms: dict[Composition, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in ("M", "L"):
            raise ValueError(f"basis must be 'M' or 'L', not {self.basis!r}")
        clean: dict[Composition, int] = {}
        for alpha, c in self.terms.items():
            alpha = validate_composition(alpha)
            if c:
                clean[alpha] = clean.get(alpha, 0) + int(c)
        self.terms = {a: c for a, c in clean.items() if c}
        degrees = {sum(a) for a in self.terms}
        if len(degrees) > 1:
            raise DomainError(f"inhomogeneous element with degrees {sorted(degrees)}")

    @classmethod
    def single(cls, basis: str, alpha: Iterable[int], coeff: int = 1) -> "QSymElement":
        return cls(basis, {tuple(alpha): coeff})

    @property
    def degree(self) -> int | None:
        return sum(next(iter(self.terms))) if self.terms else None

    def is_zero(self) -> bool:
        return not self.terms

    def __getitem__(self, alpha) -> int:
        return self.terms.get(tuple(alpha), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSymElement):
            return NotImplemented
        if self.basis != other.basis:
            other = to_basis(other, self.basis)
        return self.terms == other.terms

    def __add__(self, other: "QSymElement") -> "QSymElement":
        other = to_basis(other, self.basis)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return QSymElement(self.basis, out)

    def __sub__(self, other: "QSymElement") -> "QSymElement":
        return self + other.scale(-1)

    def scale(self, k: int) -> "QSymElement":
        return QSymElement(self.basis, {a: k * c for a, c in self.terms.items()})

    def __mul__(self, other: "QSymElement") -> "QSymElement":
        if self.basis == "L":
            return l_product(self, to_basis(other, "L"))
        return m_product(self, to_basis(other, "M"))

    def sorted_terms(self) -> list[tuple[Composition, int]]:
        return sorted(self.terms.items(), key=lambda t: _set_key(t[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha, c in self.sorted_terms():
            name = f"{self.basis}({','.join(map(str, alpha))})"
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)

    def to_dict(self) -> dict:
        return {"basis": self.basis,
                "terms": [[list(a), c] for a, c in self.sorted_terms()]}


def _set_key(alpha: Composition) -> tuple[int, list[int]]:
    cuts = sorted(set_of_alpha(alpha)[0]) if alpha else []
    return len(cuts), cuts


def l_to_m(x: QSymElement) -> QSymElement:
    """``L_alpha`` is the sum of ``M_beta`` over refinements ``beta`` of ``alpha``."""
    if x.basis != "L":
        raise DomainError("expected an element in the L basis")
    out: dict[Composition, int] = {}
    for alpha, c in x.terms.items():
        for beta in refinements(alpha):
            out[beta] = out.get(beta, 0) + c
    return QSymElement("M", out)


def m_to_l(x: QSymElement) -> QSymElement:
    """Inverse of :func:`l_to_m`: signed sum over refinements."""
    if x.basis != "M":
        raise DomainError("expected an element in the M basis")
    out: dict[Composition, int] = {}
    for alpha, c in x.terms.items():
        for beta in refinements(alpha):
            sign = (-1) ** (len(beta) - len(alpha))
            out[beta] = out.get(beta, 0) + sign * c
    return QSymElement("L", out)


def to_basis(x: QSymElement, basis: str) -> QSymElement:
    if x.basis == basis:
        return x
    return l_to_m(x) if basis == "M" else m_to_l(x)


# ------------------------------------------------------- product engines

Monomial = tuple[int, ...]


def _monomials(alpha: Composition, nvars: int) -> Iterator[Monomial]:
    k = len(alpha)
    for idx in combinations(range(nvars), k):
        exps = [0] * nvars
        for i, p in zip(idx, alpha):
            exps[i] = p
        yield tuple(exps)


def _expand(x: QSymElement, nvars: int) -> dict[Monomial, int]:
    poly: dict[Monomial, int] = {}
    for alpha, c in x.terms.items():
        for mono in _monomials(alpha, nvars):
            poly[mono] = poly.get(mono, 0) + c
    return poly


def _poly_mul(p: Mapping[Monomial, int], q: Mapping[Monomial, int]) -> dict[Monomial, int]:
    out: dict[Monomial, int] = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return out


def _read_m(poly: Mapping[Monomial, int]) -> dict[Composition, int]:
    """M-coefficients from monomials supported on an initial segment."""
    out = {}
    for mono, c in poly.items():
        k = sum(1 for e in mono if e)
        if all(mono[:k]) and c:
            out[mono[:k]] = c
    return out


def m_product(x: QSymElement, y: QSymElement) -> QSymElement:
    """Product in the M basis via exact expansion in ``deg x + deg y`` variables."""
    if x.basis != "M" or y.basis != "M":
        raise DomainError("m_product expects M-basis inputs")
    if x.is_zero() or y.is_zero():
        return QSymElement("M")
    nvars = x.degree + y.degree
    if nvars == 0:
        return QSymElement("M", {(): x[()] * y[()]})
    return QSymElement("M", _read_m(_poly_mul(_expand(x, nvars), _expand(y, nvars))))


@lru_cache(maxsize=None)
def _quasi_shuffle(alpha: Composition, beta: Composition) -> tuple[tuple[Composition, int], ...]:
    if not alpha:
        return ((beta, 1),)
    if not beta:
        return ((alpha, 1),)
    acc: Counter = Counter()
    for rest, c in _quasi_shuffle(alpha[1:], beta):
        acc[(alpha[0],) + rest] += c
    for rest, c in _quasi_shuffle(alpha, beta[1:]):
        acc[(beta[0],) + rest] += c
    for rest, c in _quasi_shuffle(alpha[1:], beta[1:]):
        acc[(alpha[0] + beta[0],) + rest] += c
    return tuple(acc.items())


def m_product_quasi_shuffle(x: QSymElement, y: QSymElement) -> QSymElement:
    """Second M-basis engine through quasi-shuffles of compositions."""
    if x.basis != "M" or y.basis != "M":
        raise DomainError("expects M-basis inputs")
    out: Counter = Counter()
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            for g, c in _quasi_shuffle(a, b):
                out[g] += ca * cb * c
    return QSymElement("M", dict(out))


def l_product(x: QSymElement, y: QSymElement) -> QSymElement:
    out: Counter = Counter()
    for a, ca in to_basis(x, "L").terms.items():
        for b, cb in to_basis(y, "L").terms.items():
            for g, c in _l_basis_product(a, b):
                out[g] += ca * cb * c
    return QSymElement("L", dict(out))


@lru_cache(maxsize=None)
def _l_basis_product(a: Composition, b: Composition) -> tuple[tuple[Composition, int], ...]:
    prod = m_to_l(m_product(l_to_m(QSymElement.single("L", a)), l_to_m(QSymElement.single("L", b))))
    return tuple(prod.terms.items())


def fundamental(J: Iterable[int], n: int) -> QSymElement:
    return QSymElement.single("L", alpha_of_set(J, n))


def monomial(alpha: Iterable[int]) -> QSymElement:
    return QSymElement.single("M", alpha)


# ---------------------------------------------------------- permutations

def perm_descents(w: Sequence[int]) -> frozenset[int]:
    return frozenset(i + 1 for i in range(len(w) - 1) if w[i] > w[i + 1])


def shuffles(u: Sequence[int], v: Sequence[int]) -> list[tuple[int, ...]]:
    """Interleavings of ``u`` and ``v`` shifted up by ``len(u)``."""
    u = validate_permutation(u)
    v = validate_permutation(v)
    a, b = len(u), len(v)
    shifted = [x + a for x in v]
    out = []
    for S in combinations(range(a + b), a):
        chosen = set(S)
        iu, iv = iter(u), iter(shifted)
        out.append(tuple(next(iu) if k in chosen else next(iv) for k in range(a + b)))
    return out


def shuffle_rule_product(u: Sequence[int], v: Sequence[int]) -> QSymElement:
    """Right-hand side of the fundamental shuffle rule for ``u`` and ``v``."""
    n = len(u) + len(v)
    out: Counter = Counter()
    for w in shuffles(u, v):
        out[alpha_of_set(perm_descents(w), n)] += 1
    return QSymElement("L", dict(out))


# ----------------------------------------------------------------- ASMs

@dataclass
class AsmCombination:
    n: int
    terms: dict[AsmMatrix, int] = field(default_factory=dict)

    def __post_init__(self):
        for a in self.terms:
            if a.n != self.n:
                raise DomainError(f"matrix of size {a.n} in a size-{self.n} combination")
        self.terms = {a: c for a, c in self.terms.items() if c}

    def __len__(self) -> int:
        return len(self.terms)


def _pad_rows(a: AsmMatrix, left: int, right: int) -> list[tuple[int, ...]]:
    return [(0,) * left + row + (0,) * right for row in a.entries]


def row_shuffle(A: AsmMatrix, B: AsmMatrix, S: Iterable[int]) -> AsmMatrix:
    """Rows of ``A o b`` placed at positions ``S``, rows of ``a o B`` elsewhere."""
    a, b = A.n, B.n
    S = set(S)
    if len(S) != a or any(not 1 <= s <= a + b for s in S):
        raise CardinalityError(f"S must be an {a}-subset of [{a + b}]")
    top, bottom = iter(_pad_rows(A, 0, b)), iter(_pad_rows(B, a, 0))
    rows = [next(top) if k in S else next(bottom) for k in range(1, a + b + 1)]
    try:
        return AsmMatrix(a + b, tuple(rows))
    except InvalidASMError as exc:  # pragma: no cover - a shuffle is always an ASM
        raise RuntimeError(f"row shuffle produced an invalid ASM: {exc}") from exc


def asm_product(A: AsmMatrix, B: AsmMatrix) -> AsmCombination:
    a, b = A.n, B.n
    terms: Counter = Counter()
    for S in combinations(range(1, a + b + 1), a):
        terms[row_shuffle(A, B, S)] += 1
    return AsmCombination(a + b, dict(terms))


def asm_product_triangle(TA: MonotoneTriangle, TB: MonotoneTriangle, S: Iterable[int]) -> MonotoneTriangle:
    """Triangle of the shuffle selected by ``S`` built row by row."""
    a, b = TA.n, TB.n
    S = set(S)
    if len(S) != a or any(not 1 <= s <= a + b for s in S):
        raise CardinalityError(f"S must be an {a}-subset of [{a + b}]")
    rows = [0]
    i = 0
    for k in range(1, a + b + 1):
        i += k in S
        rows.append(TA.rows[i] | (TB.rows[k - i] << a))
    return MonotoneTriangle(a + b, tuple(rows))


def phi_asm(x: AsmMatrix | AsmCombination) -> QSymElement:
    """``A -> L_{alpha(Des(T(A)))}``, extended linearly."""
    if isinstance(x, AsmMatrix):
        return fundamental(descent_set(asm_to_mt(x)), x.n)
    out: Counter = Counter()
    for a, c in x.terms.items():
        out[alpha_of_set(descent_set(asm_to_mt(a)), a.n)] += c
    return QSymElement("L", dict(out))


@dataclass
class MorphismReport:
    a: int
    b: int
    passed: bool
    pairs: int = 0
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "passed": self.passed,
                "pairs": self.pairs, "counterexample": self.counterexample}


def _check_block(args: tuple[int, int, int]) -> tuple[int, dict | None]:
    """Check every pair ``(A_i, B)`` for one ``A_i``; returns (count, failure)."""
    a, b, i = args
    A = _asms(a)[i]
    rhs_cache: dict = {}
    checked = 0
    phi_a = phi_asm(A)
    for B in _asms(b):
        checked += 1
        lhs = phi_asm(asm_product(A, B))
        key = descent_set(asm_to_mt(B))
        if key not in rhs_cache:
            rhs_cache[key] = l_product(phi_a, phi_asm(B))
        if lhs != rhs_cache[key]:
            return checked, {"A": [list(r) for r in A.entries], "B": [list(r) for r in B.entries],
                             "lhs": str(lhs), "rhs": str(rhs_cache[key])}
    return checked, None


@lru_cache(maxsize=None)
def _asms(n: int) -> tuple[AsmMatrix, ...]:
    return tuple(all_asms(n))


def verify_morphism(a: int, b: int, max_total: int = 6, jobs: int = 1) -> MorphismReport:
    """Check ``phi(A.B) = phi(A) phi(B)`` for every ``A`` in ASM_a, ``B`` in ASM_b.

    The right side is computed by the M-basis polynomial engine; the left
    side only ever sees row shuffles and descent sets.
    """
    if a < 0 or b < 0:
        raise DomainError("sizes must be nonnegative")
    check_guard(a + b, max_total)
    tasks = [(a, b, i) for i in range(len(_asms(a)))]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_check_block, tasks))
    else:
        results = map(_check_block, tasks)
    report = MorphismReport(a, b, True)
    for checked, failure in results:
        report.pairs += checked
        if failure:
            report.passed = False
            report.counterexample = failure
            break
    return report


# ------------------------------------------------------------- symmetry

def is_symmetric(x: QSymElement) -> bool:
    """M-coefficients constant on rearrangement classes of compositions."""
    x = to_basis(x, "M")
    seen = set()
    for alpha, c in x.terms.items():
        key = tuple(sorted(alpha))
        if key in seen:
            continue
        seen.add(key)
        if any(x[beta] != c for beta in set(permutations(alpha))):
            return False
    return True


def p1_power(n: int) -> QSymElement:
    """``(x_1 + x_2 + ...)^n`` in the M basis: multinomial coefficients."""
    out = {}
    for alpha in compositions(n):
        c = factorial(n)
        for p in alpha:
            c //= factorial(p)
        out[alpha] = c
    return QSymElement("M", out)


def phi_sum(asms: Iterable[AsmMatrix], n: int) -> QSymElement:
    return phi_asm(AsmCombination(n, dict(Counter(asms))))


def _is_perm(A: AsmMatrix) -> bool:
    return all(x >= 0 for row in A.entries for x in row)


def _is_transpose_symmetric(A: AsmMatrix) -> bool:
    return all(A.entries[i][j] == A.entries[j][i] for i in range(A.n) for j in range(A.n))


def _is_vertically_symmetric(A: AsmMatrix) -> bool:
    return all(row == row[::-1] for row in A.entries)


def _is_half_turn_symmetric(A: AsmMatrix) -> bool:
    return A.entries == tuple(tuple(reversed(r)) for r in reversed(A.entries))


PREDICATES: dict[str, Callable[[AsmMatrix], bool]] = {
    "all": lambda A: True,
    "permutations": _is_perm,
    "transpose-symmetric": _is_transpose_symmetric,
    "half-turn-symmetric": _is_half_turn_symmetric,
    "vertically-symmetric": _is_vertically_symmetric,
    "has-minus-one": lambda A: not _is_perm(A),
}


@dataclass
class SymmetryRow:
    predicate: str
    n: int
    size: int
    symmetric: bool
    image: QSymElement

    def to_dict(self) -> dict:
        return {"predicate": self.predicate, "n": self.n, "size": self.size,
                "symmetric": self.symmetric, "image_M": self.image.to_dict()}


def symmetric_subsets(n: int, predicates: Mapping[str, Callable[[AsmMatrix], bool]] | None = None) -> list[SymmetryRow]:
    """For each predicate, whether the image of the selected ASMs is symmetric."""
    predicates = PREDICATES if predicates is None else predicates
    rows = []
    for name, pred in predicates.items():
        chosen = [A for A in _asms(n) if pred(A)]
        image = l_to_m(phi_sum(chosen, n)) if chosen else QSymElement("M")
        rows.append(SymmetryRow(name, n, len(chosen), is_symmetric(image), image))
    return rows


__all__ = [
    "AsmCombination",
    "Composition",
    "MorphismReport",
    "PREDICATES",
    "QSymElement",
    "alpha_of_set",
    "asm_product",
    "asm_product_triangle",
    "refinements",
    "compositions",
    "fundamental",
    "is_symmetric",
    "l_product",
    "l_to_m",
    "m_product",
    "m_product_quasi_shuffle",
    "m_to_l",
    "monomial",
    "p1_power",
    "perm_descents",
    "phi_asm",
    "phi_sum",
    "row_shuffle",
    "set_of_alpha",
    "shuffle_rule_product",
    "shuffles",
    "symmetric_subsets",
    "to_basis",
    "verify_morphism",
]
