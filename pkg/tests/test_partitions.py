from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import CORPUS, SMALL, classes, group, normal_partition_specs
from classalg.partitions import (
	PartitionError, SolutionCounter, algebra_identity, build_partition, galois_closure, galois_residues,
	parse_partition_spec, solution_count, structure_constants, unit_group, validate_good_partition,
)


def part(spec, kind="trivial", arg=None):
	return build_partition(group(spec), classes(spec), kind, arg)


def elements_of(p, b):
	return frozenset(p.elements(b).tolist())


def test_z5_rational_blocks():
	p = part("Zn:5", "rational")
	assert p.n == 2 and p.sizes == (1, 4)
	t = structure_constants(p)
	assert t[1, 1, 1] == 3 and t[0, 1, 1] == 4
	assert algebra_identity(t) == (1, 0)


def test_s3_trivial_and_coset():
	p = part("Sn:3")
	assert p.sizes == (1, 3, 2)
	a3 = [0, 2]
	q = part("Sn:3", "coset", a3)
	assert q.sizes == (3, 3)
	assert q.identity_coeffs == (Fraction(1, 3), 0)
	assert algebra_identity(structure_constants(q)) == (Fraction(1, 3), 0)


def test_s3_structure_constants_example():
	t = structure_constants(part("Sn:3"))
	# 1-based a_{lij}: a_122=3, a_322=3, a_223=2, a_133=2, a_333=1, a_222=0
	assert (t[0, 1, 1], t[2, 1, 1], t[1, 1, 2], t[0, 2, 2], t[2, 2, 2], t[1, 1, 1]) == (3, 3, 2, 2, 1, 0)


def test_z2_structure_constants():
	t = structure_constants(part("Zn:2"))
	assert t[0, 1, 1] == 1


def test_bad_partition_reports_witness():
	g, cl = group("Sn:3"), classes("Sn:3")
	with pytest.raises(PartitionError, match="product closure"):
		build_partition(g, cl, "custom", [[0, 1], [2]])


def test_validation_report_lists_failures():
	from classalg.partitions import GoodPartition
	bad = GoodPartition(group("Sn:3"), classes("Sn:3"), ((0, 1), (2,)), "custom")
	rep = validate_good_partition(bad)
	assert not rep.ok
	failed = [c for c in rep.checks if not c.passed]
	assert failed[0].name == "product closure" and "not constant" in failed[0].witness


def test_not_normal():
	with pytest.raises(PartitionError, match="normal"):
		part("Sn:3", "coset", [1])


def test_galois_non_unit_rejected():
	with pytest.raises(PartitionError):
		part("Zn:6", "galois", [2])


def test_parse_partition_spec():
	assert parse_partition_spec("trivial") == ("trivial", None)
	assert parse_partition_spec("galois=1,5") == ("galois", [1, 5])
	assert parse_partition_spec("coset=1,3") == ("coset", [0, 2])
	assert parse_partition_spec("custom=1;2,3") == ("custom", [[0], [1, 2]])
	with pytest.raises(PartitionError):
		parse_partition_spec("galois=a")
	with pytest.raises(PartitionError):
		parse_partition_spec("nonsense")


def test_galois_closure():
	assert galois_closure([7], 30) == [1, 7, 13, 19]
	assert galois_closure([], 12) == [1]
	assert unit_group(1) == [1]


def test_solution_count_examples():
	t = structure_constants(part("Sn:3"))
	assert solution_count(t, 1, 1, 2) == 6
	assert solution_count(t, 1, 1, 1, 1) == 27
	for i in range(3):
		assert solution_count(t, i, t.partition.inverse_block[i]) == t.partition.sizes[i]


@pytest.mark.parametrize("spec", CORPUS)
def test_trivial_tensor_matches_oracle(spec):
	mul = group(spec).mul.astype(np.int64)
	p = part(spec)
	blocks = [elements_of(p, b) for b in range(p.n)]
	assert np.array_equal(structure_constants(p).a, oracles.class_matrices(mul, blocks))


@pytest.mark.parametrize("spec", CORPUS)
def test_partition_families(spec):
	mul = group(spec).mul.astype(np.int64)
	cl = classes(spec)
	kinds = [("trivial", None), ("rational", None)] + normal_partition_specs(spec)
	for kind, arg in kinds:
		p = part(spec, kind, arg)
		t = structure_constants(p)
		blocks = [elements_of(p, b) for b in range(p.n)]
		assert np.array_equal(t.a, oracles.class_matrices(mul, blocks))
		inv = p.inverse_block
		assert all(inv[inv[i]] == i and p.sizes[inv[i]] == p.sizes[i] for i in range(p.n))
		c = p.identity_coeffs
		# sum_i c_i A_i acts as the identity
		assert all(sum(c[i] * int(t.a[l, i, j]) for i in range(p.n)) == (l == j) for l in range(p.n) for j in range(p.n))
		if kind == "rational":
			for blk in p.blocks:
				assert len({cl.sizes[x] for x in blk}) == 1
			assert galois_residues(p) == unit_group(int(np.lcm.reduce(cl.orders)))


@pytest.mark.parametrize("spec", SMALL + ["SL2:3"])
def test_solution_counts_against_brute_force(spec):
	g = group(spec)
	mul = g.mul.astype(np.int64)
	for kind in ("trivial", "rational"):
		p = part(spec, kind)
		t = structure_constants(p)
		count = SolutionCounter(t)
		blocks = [sorted(elements_of(p, b)) for b in range(p.n)]
		hist = {}
		for r in (2, 3, 4):
			for idx in product(range(p.n), repeat=r):
				if r == 4 and g.order > 12:
					continue
				ind = []
				for b in idx:
					v = np.zeros(g.order, dtype=object)
					v[blocks[b]] = 1
					ind.append(v)
				acc = ind[0]
				for v in ind[1:]:
					acc = oracles.convolve(mul, acc, v)
				hist[idx] = int(acc[0])
				assert count(*idx) == hist[idx], idx
		inv = p.inverse_block
		for idx, v in hist.items():
			assert count(*(inv[i] for i in idx)) == v
			assert count(*(idx[1:] + idx[:1])) == v
			assert count(*reversed(idx)) == v
			if len(idx) < 4:
				total = sum(count(*idx, k) for k in range(p.n))
				assert total == int(np.prod([p.sizes[i] for i in idx]))


@given(st.sampled_from(["Sn:4", "D:12", "Q8", "SL2:3", "Zn:6xZn:2"]), st.data())
def test_solution_count_permutation_invariance(spec, data):
	p = part(spec)
	t = structure_constants(p)
	count = SolutionCounter(t)
	idx = data.draw(st.lists(st.integers(0, p.n - 1), min_size=2, max_size=5))
	perm = data.draw(st.permutations(idx))
	assert count(*idx) == count(*perm)
	inv = p.inverse_block
	assert count(*idx) == count(*(inv[i] for i in idx))


@given(st.sampled_from(["Zn:12", "D:12", "Zn:6xZn:2", "SL2:3", "An:5"]), st.data())
def test_galois_partitions_are_good(spec, data):
	m = int(np.lcm.reduce(classes(spec).orders))
	units = unit_group(m)
	ts = data.draw(st.lists(st.sampled_from(units), max_size=3))
	p = part(spec, "galois", ts)
	cl = classes(spec)
	orbit = galois_closure(ts, m)
	for blk in p.blocks:
		assert len({cl.sizes[c] for c in blk}) == 1
		assert {cl.power_class(blk[0], t) for t in orbit} == set(blk)
	assert validate_good_partition(p).ok
	assert sum(p.sizes) == group(spec).order
