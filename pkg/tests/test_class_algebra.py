from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import CORPUS, classes, group, normal_partition_specs
from classalg import exact
from classalg.class_algebra import (
	IntPolynomial, casimir_matrix, char_poly_of_element, gram_matrix, integer_roots, regular_representation,
	render_factored,
)
from classalg.partitions import SolutionCounter, build_partition, structure_constants


def rep_of(spec, kind="trivial", arg=None):
	return regular_representation(structure_constants(build_partition(group(spec), classes(spec), kind, arg)))


def test_s3_regular_rep():
	r = rep_of("Sn:3")
	assert r.matrices[1] == [[0, 3, 0], [1, 0, 2], [0, 3, 0]]
	assert r.matrices[0] == exact.identity(3)


def test_z2_regular_rep_and_gram():
	r = rep_of("Zn:2")
	assert r.matrices[1] == [[0, 1], [1, 0]]
	g = gram_matrix(r)
	assert [list(x) for x in g.p] == [[2, 0], [0, 2]] and g.det == 4


def test_s3_gram():
	g = gram_matrix(rep_of("Sn:3"))
	assert (g.p[0][0], g.p[1][1], g.p[2][2]) == (3, 18, 9)
	assert g.semisimple


def test_z5_rational_gram():
	# values from the float oracle below; see the decisions ledger for the discrepancy
	g = gram_matrix(rep_of("Zn:5", "rational"))
	assert [list(x) for x in g.p] == [[2, 3], [3, 17]]
	assert g.det == 25
	r = rep_of("Zn:5", "rational")
	assert r.matrices[1] == [[0, 4], [1, 3]]


def test_charpoly_examples():
	r = rep_of("Sn:3")
	assert char_poly_of_element(r, [0, 1, 0]).coeffs == (0, -9, 0, 1)
	assert char_poly_of_element(r, [1, 0, 0]).coeffs == (-1, 3, -3, 1)
	assert char_poly_of_element(r, [0, 0, 0]).coeffs == (0, 0, 0, 1)


def test_casimir_examples():
	k, cp = casimir_matrix(rep_of("Sn:3"))
	assert sum(k[i][i] for i in range(3)) == Fraction(9, 4)
	# roots 1, 1, 1/4
	assert cp(1) == 0 and cp(Fraction(1, 4)) == 0
	k2, cp2 = casimir_matrix(rep_of("Zn:2"))
	assert k2 == exact.identity(2)
	_, cp5 = casimir_matrix(rep_of("Zn:5", "rational"))
	assert cp5.coeffs == (Fraction(1, 4), Fraction(-5, 4), 1)


def test_polynomial_helpers():
	p = IntPolynomial((4, -5, 1))
	assert integer_roots(p, 1, 10) == [1, 4]
	assert integer_roots(IntPolynomial((1, 0, 1)), -5, 5) is None
	assert render_factored([1, 1, 4]) == "(x-1)^2*(x-4)"
	assert str(IntPolynomial((0, -9, 0, 1))) == "-9*x + 1*x^3"
	assert p.mod(3) == [1, 1, 1]


@pytest.mark.parametrize("spec", CORPUS)
def test_gram_matches_float_oracle(spec):
	mul = group(spec).mul.astype(np.int64)
	for kind, arg in [("trivial", None), ("rational", None)]:
		r = rep_of(spec, kind, arg)
		part = r.tensor.partition
		blocks = [frozenset(part.elements(b).tolist()) for b in range(part.n)]
		a = oracles.class_matrices(mul, blocks)
		mats = [a[:, :, j] for j in range(part.n)]
		expect = [[int(np.trace(mats[i] @ mats[j])) for j in range(part.n)] for i in range(part.n)]
		g = gram_matrix(r)
		assert [list(x) for x in g.p] == expect
		assert g.det == round(np.linalg.det(np.array(expect, dtype=float))) or abs(g.det) > 2 ** 50


@pytest.mark.parametrize("spec", ["Sn:3", "D:8", "Q8", "An:4", "Zn:6", "SL2:3"])
def test_gram_from_solution_counts(spec):
	for kind in ("trivial", "rational"):
		r = rep_of(spec, kind)
		part = r.tensor.partition
		count = SolutionCounter(r.tensor)
		g = gram_matrix(r)
		inv = part.inverse_block
		for i in range(part.n):
			for j in range(part.n):
				v = sum(Fraction(count(i, j, t, inv[t]), part.sizes[t]) for t in range(part.n))
				assert v == g.p[i][j]


@pytest.mark.parametrize("spec", CORPUS)
def test_semisimple_for_normal_subgroup_partitions(spec):
	for kind, arg in [("trivial", None), ("rational", None)] + normal_partition_specs(spec):
		assert gram_matrix(rep_of(spec, kind, arg)).det != 0


@pytest.mark.parametrize("spec", CORPUS)
def test_casimir_roots_are_squared_degrees(spec):
	_, cp = casimir_matrix(rep_of(spec))
	c = [Fraction(x) for x in cp.coeffs]
	rev = IntPolynomial(tuple(x / c[0] for x in reversed(c)))
	roots = integer_roots(rev, 1, group(spec).order)
	assert roots == sorted(f * f for f in oracles.degree_list(group(spec).mul.astype(np.int64)))


@given(spec=st.sampled_from(["Sn:3", "Sn:4", "Q8", "D:10", "SL2:3"]), data=st.data())
def test_cayley_hamilton(spec, data):
	r = rep_of(spec)
	coeffs = data.draw(st.lists(st.integers(-5, 5), min_size=r.n, max_size=r.n))
	cp = char_poly_of_element(r, coeffs)
	assert cp.degree == r.n and cp.coeffs[-1] == 1
	z = cp.eval_matrix(r.element(coeffs))
	assert all(x == 0 for row in z for x in row)


@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_exact_determinant_and_charpoly(rows):
	m = np.array(rows, dtype=float)
	assert exact.bareiss_det(rows) == round(np.linalg.det(m))
	cp = exact.charpoly_rational(rows)
	assert [round(float(x)) for x in cp] == [round(x) for x in np.poly(m)[::-1].real]
	assert cp[0] == exact.bareiss_det(rows) * (-1) ** 4
