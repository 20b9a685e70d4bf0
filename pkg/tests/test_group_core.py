from __future__ import annotations

from math import factorial, lcm

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import CORPUS, classes, group
from classalg.group_core import (
	GroupInputError, builtin, conjugacy_classes, exponent, from_permutations, from_table, generate_subgroup,
	induced_group, is_subgroup, load_group, normalizer, p_part, parse_cycles, read_cayley_file, sylow_subgroup,
)
from classalg.modp import prime_factors


def test_z2_table():
	g = builtin("Zn:2")
	assert g.order == 2
	assert g.mul.tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("k", [3, 4, 5])
def test_symmetric_orders(k):
	assert builtin(f"Sn:{k}").order == factorial(k)


def test_a5_from_permutation_generators():
	g = from_permutations([parse_cycles("(1 2 3 4 5)"), parse_cycles("(1 2 3)")])
	assert g.order == 60


def test_permutation_file(tmp_path):
	f = tmp_path / "a5.txt"
	f.write_text("(1 2 3 4 5)\n(1 2 3)\n")
	assert load_group(str(f)).order == 60


def test_cayley_file_roundtrip(tmp_path):
	g = builtin("Sn:3")
	f = tmp_path / "s3.txt"
	f.write_text("6\n" + "\n".join(" ".join(str(x + 1) for x in row) for row in g.mul) + "\n")
	h = read_cayley_file(f)
	assert np.array_equal(h.mul, g.mul)
	assert load_group(str(f)).order == 6


@pytest.mark.parametrize("bad, msg", [
	([[0, 1], [1, 1]], "Latin"),
	([[1, 0], [0, 1]], "identity"),
	([[0, 1, 2], [1, 2, 0], [2, 0, 3]], "range"),
])
def test_malformed_tables(bad, msg):
	with pytest.raises(GroupInputError, match=msg):
		from_table(bad)


def test_non_associative_latin_square():
	# a loop of order 5 with identity 0 that is not a group
	mul = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
	with pytest.raises(GroupInputError):
		from_table(mul)


def test_order_bound():
	with pytest.raises(GroupInputError, match="bound"):
		builtin("Sn:5", bound=100)


def test_unknown_builtin():
	with pytest.raises(GroupInputError):
		builtin("Foo:3")


def test_class_examples():
	s3 = classes("Sn:3")
	assert s3.n_classes == 3 and s3.sizes == (1, 3, 2)
	z5 = classes("Zn:5")
	assert z5.sizes == (1,) * 5
	g = group("Zn:5")
	for i in range(5):
		x = z5.reps[i]
		assert z5.inverse_class[i] == z5.class_of[g.inv[x]]
	assert sorted(classes("Q8").sizes) == [1, 1, 2, 2, 2]


@pytest.mark.parametrize("spec, m", [("Sn:3", 6), ("Q8", 4), ("Zn:2xZn:2", 2), ("An:5", 30), ("SL2:3", 12)])
def test_exponent(spec, m):
	assert exponent(group(spec)) == m


@pytest.mark.parametrize("spec", CORPUS)
def test_classes_match_oracle(spec):
	g = group(spec)
	cl = classes(spec)
	mul = g.mul.astype(np.int64)
	ours = {frozenset(cl.members(i).tolist()) for i in range(cl.n_classes)}
	assert ours == set(oracles.classes(mul))
	assert cl.reps[0] == 0 and cl.sizes[0] == 1
	assert sum(cl.sizes) == g.order
	assert all(g.order % s == 0 for s in cl.sizes)
	for i in range(cl.n_classes):
		assert cl.orders[i] == oracles.element_order(mul, cl.reps[i])
		j = cl.inverse_class[i]
		assert cl.inverse_class[j] == i and cl.sizes[i] == cl.sizes[j]
		assert cl.power_class(i, 1) == i
		for t in range(2 * cl.orders[i]):
			assert cl.power_class(i, t) == cl.class_of[g.power(cl.reps[i], t)]


@pytest.mark.parametrize("spec", ["Sn:4", "SL2:3", "D:12", "An:5"])
@given(s=st.integers(0, 200), t=st.integers(0, 200))
def test_power_class_composition(spec, s, t):
	cl = classes(spec)
	for i in range(cl.n_classes):
		assert cl.power_class(cl.power_class(i, s), t) == cl.power_class(i, s * t)


def test_sylow_examples():
	s3 = group("Sn:3")
	p3 = sylow_subgroup(s3, 3)
	assert p3.order == 3 and set(s3.element_order(x) for x in p3.members) == {1, 3}
	a5 = group("An:5")
	p2 = sylow_subgroup(a5, 2)
	assert p2.order == 4 and all(a5.element_order(x) <= 2 for x in p2.members)
	z12 = group("Zn:12")
	unique = {x for x in range(12) if 4 % z12.element_order(x) == 0}
	assert set(sylow_subgroup(z12, 2).members) == unique
	with pytest.raises(ValueError):
		sylow_subgroup(s3, 5)


def test_normalizer_examples():
	a5 = group("An:5")
	n = normalizer(a5, sylow_subgroup(a5, 2))
	assert n.order == 12
	assert conjugacy_classes(induced_group(a5, n)).n_classes == 4
	s3 = group("Sn:3")
	p2 = sylow_subgroup(s3, 2)
	assert normalizer(s3, p2).members == p2.members
	whole = generate_subgroup(s3, range(6))
	assert normalizer(s3, whole).order == 6


def test_induced_examples():
	s3 = group("Sn:3")
	assert induced_group(s3, generate_subgroup(s3, [0])).order == 1
	z2 = induced_group(s3, sylow_subgroup(s3, 2))
	assert z2.order == 2 and z2.mul.tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("spec", CORPUS)
def test_sylow_normalizer_properties(spec):
	g = group(spec)
	for p in prime_factors(g.order):
		for seed in (None, 3):
			s = sylow_subgroup(g, p, seed)
			assert s.order == p_part(g.order, p)
			assert is_subgroup(g, s.members)
			n = normalizer(g, s)
			assert set(s.members) <= set(n.members)
			assert n.order % s.order == 0
			ng = induced_group(g, n)
			# element orders survive re-indexing
			for k, x in enumerate(ng.labels):
				assert ng.element_order(k) == g.element_order(x)


@given(st.lists(st.sampled_from(["Zn:2", "Zn:3", "Zn:4", "Sn:3", "Q8"]), min_size=1, max_size=3))
def test_direct_products(parts):
	spec = "x".join(parts)
	g = builtin(spec)
	orders = [builtin(p).order for p in parts]
	assert g.order == int(np.prod(orders))
	assert exponent(g) == lcm(*(exponent(builtin(p)) for p in parts))
	assert sum(conjugacy_classes(g).sizes) == g.order
