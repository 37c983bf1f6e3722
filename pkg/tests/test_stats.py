from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from monotri.core import ResourceGuardError, asm_count, enumerate_mt
from monotri.hecke import descent_set
from monotri.stats import (
    count_real_roots, descent_distribution, f_vector, flag_f_direct, flag_f_vector, flag_h_from_f,
    h_argmax, h_vector, log_concavity_check, maximal_element_count, maximal_element_count_dag,
    real_rootedness_check,
)

import oracles
import tables


def test_descent_distribution_examples():
    d3 = descent_distribution(3)
    assert d3.values == {frozenset(): 1, frozenset({1}): 2, frozenset({2}): 2, frozenset({1, 2}): 2}
    assert descent_distribution(4)[{2}] == 5
    assert descent_distribution(5)[{1, 3}] == 26


@pytest.mark.parametrize("n", range(1, 6))
def test_descent_distribution_against_brute_force(n):
    counts = {}
    for rows in oracles.all_triangles(n):
        des = oracles.brute_descents(rows, n)
        counts[des] = counts.get(des, 0) + 1
    assert {k: v for k, v in descent_distribution(n).values.items() if v} == counts


def test_flag_f_examples():
    assert flag_f_direct(3, ()) == 1
    assert flag_f_direct(3, (1,)) == 3
    assert flag_f_direct(3, (1, 2)) == 7
    with pytest.raises(ValueError):
        flag_f_direct(3, (3,))


@pytest.mark.parametrize("n", range(1, 7))
def test_flag_h_two_ways(n):
    assert flag_h_from_f(flag_f_vector(n)).values == descent_distribution(n).values


@pytest.mark.parametrize("n", range(2, 8))
def test_h_vectors_match_table(n):
    assert tuple(h_vector(n)) == tables.H_VECTORS[n]
    assert sum(h_vector(n)) == asm_count(n)


def test_h_vector_n8():
    assert tuple(h_vector(8)) == tables.H_VECTORS[8]


@pytest.mark.parametrize("n", range(3, 7))
def test_flag_polynomials_match_table(n):
    expected = tables.parse_flag_polynomial(tables.FLAG_POLYNOMIALS[n])
    assert len(expected) == 2 ** (n - 1)
    assert descent_distribution(n).values == expected


@pytest.mark.parametrize("n", range(2, 7))
def test_w0_symmetry_of_distribution(n):
    d = descent_distribution(n)
    for J, v in d.values.items():
        assert d[{n - i for i in J}] == v


@pytest.mark.parametrize("n", range(2, 7))
def test_f_vector(n):
    f = f_vector(n)
    assert f[0] == 1
    assert f[1] == 2 ** n - 2  # every proper subset is a vertex
    assert sum(f) == sum(flag_f_vector(n).values.values())


def test_maximal_counts():
    for n in range(2, 9):
        assert maximal_element_count(n) == tables.MAXIMAL_COUNTS[n]
    for n in range(2, 7):
        assert maximal_element_count_dag(n) == tables.MAXIMAL_COUNTS[n]
    with pytest.raises(ResourceGuardError):
        maximal_element_count(9)


def test_maximal_means_full_descent_set():
    n = 4
    full = frozenset(range(1, n))
    assert sum(descent_set(t) == full for t in enumerate_mt(n)) == 9


def test_log_concavity():
    assert not log_concavity_check((1, 1, 5))
    assert log_concavity_check((1, 11, 21, 9))
    for n in range(2, 9):
        assert log_concavity_check(tables.H_VECTORS[n])
    with pytest.raises(ValueError):
        log_concavity_check((0, 0))


@pytest.mark.parametrize("n", range(2, 9))
def test_h_polynomials_real_rooted(n):
    report = real_rootedness_check(tables.H_VECTORS[n])
    assert report.real_rooted and report.distinct_real_roots == n - 1
    assert len(report.intervals) == n - 1
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(tables.H_VECTORS[n])), x)
    roots = poly.real_roots()
    for (a, b), r in zip(report.intervals, sorted(roots)):
        assert a < r <= b


def test_real_rootedness_edge_cases():
    assert not real_rootedness_check((1, 0, 1)).real_rooted
    rep = real_rootedness_check((1, 2, 1))
    assert rep.real_rooted and rep.distinct_real_roots == 1 and rep.squarefree_degree == 1
    assert real_rootedness_check((5,)).real_rooted
    with pytest.raises(ValueError):
        real_rootedness_check((0,))
    assert count_real_roots((-2, 0, 1), Fraction(0), Fraction(2)) == 1


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=7).filter(lambda p: p[-1] != 0))
@settings(max_examples=80, deadline=None)
def test_sturm_matches_sympy(coeffs):
    x = sympy.symbols("x")
    poly = sympy.Poly(list(reversed(coeffs)), x)
    distinct = len(set(poly.real_roots())) if poly.degree() > 0 else 0
    assert count_real_roots(coeffs) == distinct
    sqf = sympy.Poly(sympy.sqf_part(poly.as_expr()), x).degree() if poly.degree() > 0 else 0
    assert real_rootedness_check(coeffs, isolate=False).real_rooted == (distinct == sqf)


def test_h_argmax():
    assert h_argmax((1, 4, 2)) == 1
    assert [h_argmax(tables.H_VECTORS[n]) for n in range(3, 9)] == [n - 2 for n in range(3, 9)]
    assert h_argmax((1, 3, 3)) == 1
