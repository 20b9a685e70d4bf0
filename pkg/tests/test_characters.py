from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import CORPUS, classes, group, normal_partition_specs
from classalg.characters import (
	character_table, degree_products, degrees_and_multiplicities, eigen_system_mod_p, galois_orbits_of_columns,
	identity_suite, partition_table, select_prime,
)
from classalg.class_algebra import gram_matrix, regular_representation
from classalg.cyclotomic import Cyclotomic
from classalg.partitions import build_partition, structure_constants, unit_group


@lru_cache(maxsize=None)
def table(spec):
	return character_table(group(spec), classes(spec))


def system(spec, kind="trivial", arg=None, prime=None):
	part = build_partition(group(spec), classes(spec), kind, arg)
	tensor = structure_constants(part)
	rep = regular_representation(tensor)
	gram = gram_matrix(rep)
	return part, tensor, gram, eigen_system_mod_p(rep, gram, prime=prime)


def test_z2_mod3_columns():
	_, _, gram, es = system("Zn:2", prime=3)
	assert sorted(es.column(t) for t in range(2)) == [(1, 1), (1, 2)]
	assert degree_products(es, gram) == (1, 1)


def test_s3_mod7_degrees():
	_, _, gram, es = system("Sn:3", prime=7)
	dd = degrees_and_multiplicities(es, gram)
	assert sorted(dd.d) == [1, 1, 4]
	assert sorted(dd.f) == [1, 1, 2]


def test_z5_rational_mod11():
	_, _, gram, es = system("Zn:5", "rational", prime=11)
	_, _, _, ordinary = system("Zn:5", prime=11)
	dd = degrees_and_multiplicities(es, gram, ordinary)
	assert sorted(zip(dd.d, dd.o, dd.f)) == [(1, 1, 1), (4, 4, 1)]


def test_prime_selection():
	assert select_prime(6, 6) == 7
	assert select_prime(30, 60) == 61
	assert select_prime(6, 6, avoid=7) == 13
	with pytest.raises(ValueError):
		system("Sn:3", prime=5)


def test_s3_values():
	ct = table("Sn:3")
	assert ct.degrees == (1, 1, 2)
	cl = classes("Sn:3")
	three = next(i for i in range(cl.n_classes) if cl.orders[i] == 3)
	v = ct.value(three, 2)
	w = Cyclotomic.root(3)
	assert v == w + w * w and v.to_rational() == -1


def test_q8_two_dimensional():
	ct = table("Q8")
	t = ct.degrees.index(2)
	assert [ct.value(i, t).to_rational() for i in range(5)] == [2, -2, 0, 0, 0]


def test_z3_values():
	ct = table("Zn:3")
	col = [ct.value(1, t) for t in range(3)]
	assert Cyclotomic.root(3) in col and Cyclotomic.root(3, 2) in col
	assert ct.galois_image(1, 2) == 2 and ct.galois_image(0, 2) == 0


def test_json_shape():
	js = table("Zn:3").to_json()
	assert len(js["characters"]) == 3
	assert js["characters"][0]["values"] == [1, 1, 1]


def _oracle_rows(spec):
	mul = group(spec).mul.astype(np.int64)
	cl_sets, rows = oracles.character_table(mul)
	cl = classes(spec)
	ours = [frozenset(cl.members(i).tolist()) for i in range(cl.n_classes)]
	order = [cl_sets.index(s) for s in ours]
	return rows[:, order]


@pytest.mark.parametrize("spec", CORPUS)
def test_table_matches_float_oracle(spec):
	ct = table(spec)
	expect = _oracle_rows(spec)
	ours = np.array([[complex(ct.value(i, t)) for i in range(ct.n)] for t in range(ct.n)])
	used = set()
	for row in ours:
		hit = [k for k in range(len(expect)) if k not in used and np.allclose(row, expect[k], atol=1e-6)]
		assert hit, f"no oracle character matches {np.round(row, 3)}"
		used.add(hit[0])
	assert sorted(ct.degrees) == oracles.degree_list(group(spec).mul.astype(np.int64))


@pytest.mark.parametrize("spec", CORPUS)
def test_exact_orthogonality(spec):
	ct = table(spec)
	cl = ct.classes
	n = ct.n
	order = group(spec).order
	for s in range(n):
		for t in range(s, n):
			acc = Cyclotomic.rational(ct.m, 0)
			for i in range(n):
				acc = acc + ct.value(i, s) * ct.value(i, t).conj() * cl.sizes[i]
			assert acc == (order if s == t else 0)
	for i in range(n):
		acc = sum((ct.value(i, t) * ct.value(i, t).conj() for t in range(n)), Cyclotomic.rational(ct.m, 0))
		assert acc == order // cl.sizes[i]


@pytest.mark.parametrize("spec", CORPUS)
def test_galois_action_permutes_characters(spec):
	ct = table(spec)
	for t in unit_group(ct.m):
		for k in range(ct.n):
			img = ct.galois_image(k, t)
			assert all(ct.value(i, k).galois(t) == ct.value(i, img) for i in range(ct.n))


@pytest.mark.parametrize("spec", CORPUS)
def test_partition_tables_pass_identity_suite(spec):
	kinds = [("trivial", None), ("rational", None)] + [k for k in normal_partition_specs(spec) if k[0] == "custom"]
	ct = table(spec)
	for kind, arg in kinds:
		part, tensor, gram, _ = system(spec, kind, arg)
		pt = partition_table(ct, part, gram)
		checks = identity_suite(pt, tensor, gram)
		assert all(c.passed for c in checks), [c for c in checks if not c.passed]
		assert pt.n == part.n
		assert sum(m * f for m, f in zip(pt.mults, pt.degrees)) == group(spec).order


@pytest.mark.parametrize("spec", CORPUS)
def test_rational_orbits_match_multiplicities(spec):
	ct = table(spec)
	part, _, gram, _ = system(spec, "rational")
	pt = partition_table(ct, part, gram)
	es = eigen_system_mod_p(regular_representation(structure_constants(part)), gram, prime=ct.eigen.p)
	dd = degrees_and_multiplicities(es, gram, ct.eigen)
	assert sorted(dd.o) == sorted(pt.orbit_lengths)
	assert sorted(dd.d) == sorted(pt.d)
	for d, f, o in zip(dd.d, dd.f, dd.o):
		assert d == f * f * o
	orbits = galois_orbits_of_columns(ct.eigen, unit_group(ct.m))
	assert sorted(len(o) for o in orbits) == sorted(dd.o)


def test_z5_rational_row_relation_on_inverse_pair():
	ct = table("Zn:5")
	part, tensor, gram, _ = system("Zn:5", "rational")
	pt = partition_table(ct, part, gram)
	big = part.sizes.index(4)
	inv = part.inverse_block[big]
	acc = sum((pt.chi[big][t] * pt.chi[inv][t] * (pt.mults[t] / pt.degrees[t]) for t in range(pt.n)),
		Cyclotomic.rational(ct.m, 0))
	assert acc == 20


@given(st.sampled_from(["Sn:3", "D:8", "Q8", "An:4", "Zn:7"]), st.integers(0, 10 ** 6))
def test_seed_invariance(spec, seed):
	a = table(spec)
	b = character_table(group(spec), classes(spec), seed=seed)
	rows_a = sorted(tuple(a.value(i, t).key() for i in range(a.n)) for t in range(a.n))
	rows_b = sorted(tuple(b.value(i, t).key() for i in range(b.n)) for t in range(b.n))
	assert rows_a == rows_b
