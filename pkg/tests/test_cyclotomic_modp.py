from __future__ import annotations

import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from classalg import modp
from classalg.cyclotomic import Cyclotomic, Shadow, field, totient, units


def z(e, k=1):
	return Cyclotomic.root(e, k)


def test_basic_identities():
	w = z(3)
	assert w + w * w + 1 == 0
	assert w ** 3 == 1
	assert str(w + w * w) == "-1"
	i = z(4)
	assert i * i == -1
	assert (z(5) ** 5 - 1).is_zero()
	assert Cyclotomic.rational(6, Fraction(3, 2)).to_rational() == Fraction(3, 2)
	assert (z(3) - z(3, 2)).to_rational() is None


def test_lift_between_exponents():
	a = z(3)
	b = z(6, 2)
	assert a == b
	assert (a + z(4)).e == 12


def test_galois_and_conj():
	w = z(5)
	assert w.galois(2) == w * w
	assert w.conj() == z(5, 4)
	assert (w * w.conj()).to_rational() == 1
	# mean over the four conjugates: (-1)/4
	assert w.trace_rational() == Fraction(-1, 4)


def test_division():
	w = z(7)
	x = 2 + w
	assert (x / x) == 1
	assert ((1 / x) * x) == 1


def test_mod_embedding():
	p = 13
	omega = modp.root_of_unity(3, p)
	assert (z(3) ** 2).mod(p, omega) == omega * omega % p


def test_field_primes():
	f = field(12)
	assert len(f.primes) == 2
	assert all((q - 1) % 12 == 0 and modp.is_prime(q) and q < 2 ** 24 for q in f.primes)
	assert totient(12) == 4 and units(12) == [1, 5, 7, 11]


coeff = st.integers(-20, 20)


@given(st.sampled_from([3, 4, 5, 6, 8, 12]), st.data())
def test_ring_axioms_against_complex(e, data):
	def draw():
		return Cyclotomic(e, data.draw(st.lists(coeff, min_size=e, max_size=e)))

	a, b, c = draw(), draw(), draw()
	assert (a + b) * c == a * c + b * c
	assert a * b == b * a
	lhs = complex(a * b - c)
	rhs = complex(a) * complex(b) - complex(c)
	assert abs(lhs - rhs) < 1e-6 * (1 + abs(rhs))
	zeta = cmath.exp(2j * cmath.pi / e)
	direct = sum(k * zeta ** j for j, k in enumerate(a.coeffs)) / a.den
	assert abs(complex(a) - direct) < 1e-8 * (1 + abs(direct))


@given(st.sampled_from([5, 7, 9, 12]), st.lists(coeff, min_size=1, max_size=12), st.integers(1, 40))
def test_galois_is_multiplicative(e, cs, t):
	from math import gcd
	if gcd(t, e) != 1:
		t = 1
	a = Cyclotomic(e, (cs + [0] * e)[:e])
	assert (a * a).galois(t) == a.galois(t) * a.galois(t)


def test_shadow_zero_test():
	vals = [[z(3) + z(3, 2) + 1, z(4) * z(4) + 1], [z(5), Cyclotomic.rational(5, 0)]]
	sh = Shadow.of(vals, 60)
	assert sh.zero_mask().tolist() == [[True, True], [False, True]]
	assert not sh.all_zero()
	r = Shadow.rationals([[1, 2], [3, 4]], 60)
	assert (r - r).all_zero()


@given(st.integers(2, 10 ** 6))
def test_prime_factors(n):
	fs = modp.prime_factors(n)
	m = n
	for f in fs:
		assert modp.is_prime(f)
		while m % f == 0:
			m //= f
	assert m == 1


@given(st.integers(1, 60), st.integers(0, 500))
def test_prime_congruent_one(m, above):
	p = modp.prime_congruent_one(m, above)
	assert p > above and (p - 1) % m == 0 and modp.is_prime(p)
	assert not any(modp.is_prime(q) and (q - 1) % m == 0 for q in range(above + 1, p))


@given(st.lists(st.integers(0, 100), min_size=1, max_size=6, unique=True))
def test_roots_mod_p(rs):
	p = 101
	f = [1]
	for r in rs:
		f = modp.pmul(f, [(-r) % p, 1], p)
	assert sorted(modp.roots(f, p)) == sorted(set(r % p for r in rs))


@given(st.integers(0, 2 ** 32))
def test_simultaneous_eigenvectors(seed):
	p = 101
	rng = np.random.default_rng(seed)
	n = 4
	while True:
		basis = rng.integers(0, p, (n, n))
		if modp.det(basis, p):
			break
	inv = modp.solve(basis, np.eye(n, dtype=np.int64), p)
	diag = [rng.permutation(n) for _ in range(2)]
	mats = [modp.matmul(modp.matmul(basis, np.diag(d), p), inv, p) for d in diag]
	pairs = modp.simultaneous_eigenvectors(mats, p, seed=0)
	assert len(pairs) == n
	for v, vals in pairs:
		for m, lam in zip(mats, vals):
			assert np.array_equal(modp.matmul(m, np.array(v).reshape(-1, 1), p).ravel() % p, np.array(v) * lam % p)


def test_singular_solve():
	with pytest.raises(ZeroDivisionError):
		modp.solve(np.array([[1, 2], [2, 4]]), np.eye(2, dtype=np.int64), 7)


@given(st.sampled_from([3, 5, 8, 9]), st.data())
def test_division_inverts_multiplication(e, data):
	a = Cyclotomic(e, data.draw(st.lists(coeff, min_size=e, max_size=e)))
	b = Cyclotomic(e, data.draw(st.lists(coeff, min_size=e, max_size=e)))
	if b.is_zero():
		with pytest.raises(ZeroDivisionError):
			a / b
	else:
		assert (a / b) * b == a
