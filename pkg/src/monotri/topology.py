"""Moebius functions of weak-order intervals, order complexes of open
intervals with integral homology, and structural checks (lattice, ranked)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from monotri.core import DomainError, MonotoneTriangle, ResourceGuardError, check_guard
from monotri.hecke import WeakOrderDag, _bits, build_weak_dag, descent_set, pi_parabolic_min

MAX_PROPER = 16


def _node(dag: WeakOrderDag, x: MonotoneTriangle | int) -> int:
    return x if isinstance(x, int) else dag.index(x)


def _require_leq(dag: WeakOrderDag, x: int, y: int) -> None:
    if not dag.leq(x, y):
        raise DomainError(f"{dag.triangle(x)} is not below {dag.triangle(y)} in weak order")


def interval_mask(dag: WeakOrderDag, x: int, y: int) -> int:
    """Bit set of ``[x, y]``."""
    return sum(1 << z for z in _bits(dag.closures[y]) if dag.leq(x, z))


# ---------------------------------------------------------------- Moebius

@dataclass
class MobiusTable:
    """``mu(x, .)`` for one fixed lower element over its whole up-set."""

    dag: WeakOrderDag
    bottom: int
    values: dict[int, int] = field(default_factory=dict)

    @classmethod
    def build(cls, dag: WeakOrderDag, x: int) -> "MobiusTable":
        closures = dag.closures
        up = [z for z in range(x, len(dag)) if closures[z] >> x & 1]
        upmask = sum(1 << z for z in up)
        values = {x: 1}
        # canonical index order is a linear extension, so z sees its whole interval
        for z in up[1:]:
            values[z] = -sum(values[w] for w in _bits(closures[z] & upmask & ~(1 << z)))
        return cls(dag, x, values)

    def __getitem__(self, y: int) -> int:
        if y not in self.values:
            raise DomainError("pair is not comparable")
        return self.values[y]


def mobius(dag: WeakOrderDag, x: MonotoneTriangle | int, y: MonotoneTriangle | int) -> int:
    x, y = _node(dag, x), _node(dag, y)
    _require_leq(dag, x, y)
    return MobiusTable.build(dag, x)[y]


# ------------------------------------------------------------- prediction

@dataclass(frozen=True)
class Prediction:
    value: int
    J: frozenset[int]
    sphere: bool


def conjecture_prediction(dag: WeakOrderDag, lower: MonotoneTriangle | int,
                          upper: MonotoneTriangle | int) -> Prediction:
    """Predicted Moebius value: ``(-1)^#J`` when ``lower = upper . pi_{w0(J)}``, else 0.

    ``J`` collects the rows where the two triangles differ.
    """
    lo, hi = _node(dag, lower), _node(dag, upper)
    _require_leq(dag, lo, hi)
    tl, th = dag.triangle(lo), dag.triangle(hi)
    J = frozenset(m for m in range(1, dag.n) if tl.rows[m] != th.rows[m])
    if J <= descent_set(th) and pi_parabolic_min(th, J) == tl:
        return Prediction((-1) ** len(J), J, True)
    return Prediction(0, J, False)


@dataclass
class ConjectureReport:
    n: int
    pairs: int = 0
    agreements: int = 0
    discrepancies: list[dict] = field(default_factory=list)
    value_counts: dict[int, int] = field(default_factory=dict)
    sphere_pairs: int = 0

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def to_dict(self) -> dict:
        return {"n": self.n, "pairs": self.pairs, "agreements": self.agreements,
                "discrepancies": self.discrepancies, "sphere_pairs": self.sphere_pairs,
                "mobius_values": {str(k): v for k, v in sorted(self.value_counts.items())},
                "passed": self.passed}


def verify_conjecture(n: int, max_n: int = 4) -> ConjectureReport:
    """Compare Moebius values with the predicted ones on every comparable pair."""
    check_guard(n, max_n)
    dag = build_weak_dag(n)
    report = ConjectureReport(n)
    for x in range(len(dag)):
        table = MobiusTable.build(dag, x)
        for y, mu in table.values.items():
            pred = conjecture_prediction(dag, x, y)
            report.pairs += 1
            report.value_counts[mu] = report.value_counts.get(mu, 0) + 1
            report.sphere_pairs += pred.sphere
            if mu == pred.value:
                report.agreements += 1
            else:
                report.discrepancies.append({
                    "lower": str(dag.triangle(x)), "upper": str(dag.triangle(y)),
                    "mobius": mu, "predicted": pred.value, "J": sorted(pred.J)})
    return report


# ----------------------------------------------------- order complexes

@dataclass
class IntervalComplex:
    """Order complex of the open interval ``(bottom, top)``."""

    dag: WeakOrderDag
    bottom: int
    top: int
    proper: list[int]
    faces: list[tuple[int, ...]]

    @classmethod
    def build(cls, dag: WeakOrderDag, bottom: MonotoneTriangle | int, top: MonotoneTriangle | int,
              max_proper: int = MAX_PROPER) -> "IntervalComplex":
        lo, hi = _node(dag, bottom), _node(dag, top)
        _require_leq(dag, lo, hi)
        if lo == hi:
            raise DomainError("open interval of a single element is undefined")
        proper = [z for z in _bits(interval_mask(dag, lo, hi)) if z not in (lo, hi)]
        if len(proper) > max_proper:
            raise ResourceGuardError(f"{len(proper)} proper elements exceed the bound {max_proper}")
        faces: list[tuple[int, ...]] = []

        def extend(chain: tuple[int, ...], start: int) -> None:
            faces.append(chain)
            for k in range(start, len(proper)):
                z = proper[k]
                if not chain or dag.leq(chain[-1], z):
                    extend(chain + (z,), k + 1)

        extend((), 0)
        return cls(dag, lo, hi, proper, faces)

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def faces_of_dim(self, d: int) -> list[tuple[int, ...]]:
        return [f for f in self.faces if len(f) == d + 1]


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of a diagonal form of an integer matrix.

    Pivot is always the entry of least absolute value; any nonzero remainder
    left in its row or column restarts the selection, so pivots shrink
    until the row and column clear.
    """
    a = [list(r) for r in matrix]
    rows, cols = len(a), (len(a[0]) if a else 0)
    diag = []
    t = 0
    while t < min(rows, cols):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not entries:
                return diag
            _, pi, pj = min(entries)
            a[t], a[pi] = a[pi], a[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
            if not any(a[i][t] for i in range(t + 1, rows)) and not any(a[t][j] for j in range(t + 1, cols)):
                break
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def boundary_matrix(complex_: IntervalComplex, d: int) -> list[list[int]]:
    """Matrix of the boundary from d-faces to (d-1)-faces; the empty face is dimension -1."""
    rows_f = complex_.faces_of_dim(d - 1)
    cols_f = complex_.faces_of_dim(d)
    index = {f: i for i, f in enumerate(rows_f)}
    mat = [[0] * len(cols_f) for _ in rows_f]
    for j, f in enumerate(cols_f):
        for k in range(len(f)):
            mat[index[f[:k] + f[k + 1:]]][j] += (-1) ** k
    return mat


@dataclass
class Homology:
    betti: dict[int, int]
    torsion: dict[int, list[int]]

    def reduced_euler(self) -> int:
        return sum((-1) ** d * b for d, b in self.betti.items())

    def to_dict(self) -> dict:
        return {"betti": {str(d): b for d, b in self.betti.items()},
                "torsion": {str(d): t for d, t in self.torsion.items() if t}}


def reduced_homology(complex_: IntervalComplex) -> Homology:
    """Reduced integral homology, degrees -1 through the dimension."""
    top = complex_.dimension
    sizes = {d: len(complex_.faces_of_dim(d)) for d in range(-1, top + 1)}
    ranks = {-1: 0, top + 1: 0}
    torsion: dict[int, list[int]] = {}
    for d in range(0, top + 1):
        diag = smith_diagonal(boundary_matrix(complex_, d))
        ranks[d] = len(diag)
        torsion[d - 1] = sorted(x for x in diag if x > 1)
    torsion.setdefault(top, [])
    betti = {d: sizes[d] - ranks[d] - ranks[d + 1] for d in range(-1, top + 1)}
    return Homology(betti, torsion)


def betti_numbers(complex_: IntervalComplex) -> tuple[int, ...]:
    """Reduced Betti numbers in degrees ``0..dim``."""
    h = reduced_homology(complex_)
    return tuple(h.betti[d] for d in range(0, complex_.dimension + 1))


# ------------------------------------------------------------- structure

@dataclass
class StructureReport:
    is_lattice: bool
    is_ranked: bool
    chain_lengths: list[int]
    join_witnesses: list[tuple[int, int, list[int]]]
    meet_witnesses: list[tuple[int, int, list[int]]]

    def to_dict(self, dag: WeakOrderDag) -> dict:
        fmt = lambda ws: [[str(dag.triangle(a)), str(dag.triangle(b)), [str(dag.triangle(m)) for m in ms]]
                          for a, b, ms in ws]
        return {"is_lattice": self.is_lattice, "is_ranked": self.is_ranked,
                "chain_lengths": self.chain_lengths,
                "join_witnesses": fmt(self.join_witnesses), "meet_witnesses": fmt(self.meet_witnesses)}


def _extremal(dag: WeakOrderDag, cands: list[int], minimal: bool) -> list[int]:
    if minimal:
        return [c for c in cands if not any(o != c and dag.leq(o, c) for o in cands)]
    return [c for c in cands if not any(o != c and dag.leq(c, o) for o in cands)]


def structure_checks(dag: WeakOrderDag, bottom: MonotoneTriangle | int,
                     top: MonotoneTriangle | int) -> StructureReport:
    lo, hi = _node(dag, bottom), _node(dag, top)
    _require_leq(dag, lo, hi)
    members = list(_bits(interval_mask(dag, lo, hi)))
    joins, meets = [], []
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            ups = [z for z in members if dag.leq(a, z) and dag.leq(b, z)]
            mub = _extremal(dag, ups, minimal=True)
            if len(mub) != 1:
                joins.append((a, b, mub))
            downs = [z for z in members if dag.leq(z, a) and dag.leq(z, b)]
            mlb = _extremal(dag, downs, minimal=False)
            if len(mlb) != 1:
                meets.append((a, b, mlb))
    inside = set(members)
    lengths: dict[int, set[int]] = {lo: {0}}
    for z in members[1:]:
        lengths[z] = {k + 1 for c in dag.covers[z] if c in inside for k in lengths[c]}
    chain_lengths = sorted(lengths[hi])
    return StructureReport(not joins and not meets, len(chain_lengths) == 1,
                           chain_lengths, joins, meets)


def permutation_nodes(dag: WeakOrderDag) -> list[int]:
    return [i for i in range(len(dag)) if dag.triangle(i).is_permutation()]


def interval_nodes(dag: WeakOrderDag, x: int, y: int) -> list[int]:
    return list(_bits(interval_mask(dag, x, y)))


__all__ = [
    "ConjectureReport",
    "Homology",
    "IntervalComplex",
    "MobiusTable",
    "Prediction",
    "StructureReport",
    "betti_numbers",
    "boundary_matrix",
    "conjecture_prediction",
    "interval_mask",
    "interval_nodes",
    "mobius",
    "permutation_nodes",
    "reduced_homology",
    "smith_diagonal",
    "structure_checks",
    "verify_conjecture",
]
