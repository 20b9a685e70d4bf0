"""Generalized commutator counts, power sums, Newton identities, reconstruction from triples."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import exact, modp
from .class_algebra import IntPolynomial
from .partitions import GoodPartition, StructTensor

PARTITION = "partition"
ORDINARY = "ordinary"


@dataclass(frozen=True, eq=False)
class CommutatorCounts:
	"""p[r-1] holds the r-index count tensor; trace_constant c gives p = c * Tr(A_i1 ... A_ir)."""

	convention: str
	trace_constant: int
	p: tuple[np.ndarray, ...]
	partition: GoodPartition

	@property
	def p1(self) -> np.ndarray:
		return self.p[0]

	@property
	def p2(self) -> np.ndarray:
		return self.p[1]

	@property
	def p3(self) -> np.ndarray:
		return self.p[2]

	def to_json(self) -> dict:
		return {"convention": self.convention, "trace_constant": self.trace_constant,
			"partition": self.partition.describe(),
			**{f"p{r + 1}": t.tolist() for r, t in enumerate(self.p)}}


def _as_int_array(x: np.ndarray) -> np.ndarray:
	"""Object array of Python ints to int64 when it fits, else kept as objects."""
	flat = [int(v) for v in x.ravel()] if x.size else []
	if all(abs(v) < 2 ** 62 for v in flat):
		return np.array(flat, dtype=np.int64).reshape(x.shape)
	return np.array(flat, dtype=object).reshape(x.shape)


def _check_convention(part: GoodPartition, convention: str) -> int:
	if convention == PARTITION:
		return 1
	if convention == ORDINARY:
		if part.kind != "trivial":
			raise ValueError("the ordinary convention counts over conjugacy classes")
		return part.group.order
	raise ValueError(f"unknown convention {convention!r}")


def element_weights(t: StructTensor, convention: str) -> tuple[Fraction, ...]:
	"""Per-element commutator multiplicity on each block, from the tensor.

	partition: sum_i #{(x, y) in block i x block i' : xy = h} / size_i
	ordinary:  #{(s, r) in G x G : s^-1 r^-1 s r = h}, which is |G| times the above
	"""
	part = t.partition
	c = _check_convention(part, convention)
	inv = part.inverse_block
	return tuple(c * sum(Fraction(int(t.a[j, i, inv[i]]), part.sizes[i]) for i in range(t.n)) for j in range(t.n))


def block_product_coefficients(t: StructTensor, r: int) -> np.ndarray:
	"""coef[j, i1, ..., ir]: coefficient of block sum j in the product of block sums i1..ir."""
	a = t.a.astype(object)
	n = t.n
	if r == 1:
		return np.eye(n, dtype=object).astype(object)
	coef = a
	for _ in range(r - 2):
		coef = np.tensordot(coef, a, axes=([0], [1]))  # (i1.., l) x (j, l, c) -> move j first
		coef = np.moveaxis(coef, -2, 0)
	return coef


def commutator_counts(t: StructTensor, convention: str = PARTITION, max_r: int = 3) -> CommutatorCounts:
	"""p_{i1..ir} = sum over h of (commutator multiplicity of h) * (#tuples multiplying to h)."""
	part = t.partition
	c = _check_convention(part, convention)
	w = element_weights(t, convention)
	den = lcm(*[x.denominator for x in w])
	wi = np.array([int(x * den) * s for x, s in zip(w, part.sizes)], dtype=object)
	out = []
	for r in range(1, max_r + 1):
		coef = block_product_coefficients(t, r)
		val = np.tensordot(wi, coef, axes=([0], [0]))
		if any(int(v) % den for v in np.ravel(val)):
			raise ArithmeticError("non-integer commutator count")
		out.append(_as_int_array(np.vectorize(lambda v: int(v) // den, otypes=[object])(val)))
	return CommutatorCounts(convention, c, tuple(out), part)


# -- element-level oracle ------------------------------------------------------

def brute_force_weights(part: GoodPartition, convention: str) -> np.ndarray:
	"""Per-element commutator multiplicities by direct enumeration (Fractions for the partition convention)."""
	_check_convention(part, convention)
	g = part.group
	mul = g.mul.astype(np.int64)
	inv = g.inv.astype(np.int64)
	if convention == ORDINARY:
		comm = mul[mul[inv[:, None], inv[None, :]], mul]
		return np.array([Fraction(int(x)) for x in np.bincount(comm.ravel(), minlength=g.order)], dtype=object)
	w = np.array([Fraction(0)] * g.order, dtype=object)
	for i in range(part.n):
		xs = part.elements(i)
		ys = part.elements(part.inverse_block[i])
		hist = np.bincount(mul[np.ix_(xs, ys)].ravel(), minlength=g.order)
		w = w + np.array([Fraction(int(h), part.sizes[i]) for h in hist], dtype=object)
	return w


def brute_force_counts(part: GoodPartition, convention: str = PARTITION, max_r: int = 3) -> CommutatorCounts:
	g = part.group
	c = _check_convention(part, convention)
	wf = brute_force_weights(part, convention)
	den = lcm(*[x.denominator for x in wf])
	w = np.array([int(x * den) for x in wf], dtype=np.int64)
	mul = g.mul.astype(np.int64)
	n = part.n
	ind = np.zeros((n, g.order), dtype=np.int64)
	for b in range(n):
		ind[b, part.elements(b)] = 1
	# wk[z, k] = sum over y in block k of w(z y)
	wk = np.stack([w[mul[:, part.elements(k)]].sum(axis=1) for k in range(n)], axis=1)
	out = [ind @ w]
	if max_r >= 2:
		out.append(ind @ wk)
	if max_r >= 3:
		hist2 = np.zeros((n, n, g.order), dtype=np.int64)
		for i in range(n):
			for j in range(n):
				prods = mul[np.ix_(part.elements(i), part.elements(j))].ravel()
				hist2[i, j] = np.bincount(prods, minlength=g.order)
		out.append(np.einsum("ijz,zk->ijk", hist2, wk))
	res = []
	for arr in out:
		if (arr % den).any():
			raise ArithmeticError("non-integer brute-force count")
		res.append(arr // den)
	return CommutatorCounts(convention, c, tuple(res), part)


# -- traces of products --------------------------------------------------------

def power_sum_forms(t: StructTensor, max_r: int = 3) -> tuple[np.ndarray, ...]:
	"""Coefficient tensors of the r-th power sum of the linear forms: Tr(A_i1 ... A_ir)."""
	n = t.n
	bound = n * (n * int(t.a.max(initial=1))) ** max_r
	if bound >= 2 ** 62:
		raise OverflowError("trace tensors would overflow 64-bit integers")
	# mats[j] = A_j with A_j[l, i] = a[l, i, j]
	mats = np.ascontiguousarray(np.transpose(t.a, (2, 0, 1)).astype(np.int64))
	out = [np.trace(mats, axis1=1, axis2=2)]
	prod = mats
	for _ in range(2, max_r + 1):
		prod = np.einsum("...ij,cjk->...cik", prod, mats)
		out.append(np.trace(prod, axis1=-2, axis2=-1))
	return tuple(out)


def verify_trace_constant(counts: CommutatorCounts, traces: Sequence[np.ndarray]) -> bool:
	c = counts.trace_constant
	return all(np.array_equal(np.asarray(p, dtype=object), c * np.asarray(tr, dtype=object))
		for p, tr in zip(counts.p, traces))


# -- Newton identities ---------------------------------------------------------

def newton_elementary(power_sums: Sequence) -> list[Fraction]:
	"""sigma_1..sigma_k from s_1..s_k: k sigma_k = sum_i (-1)^(i-1) sigma_(k-i) s_i."""
	s = [Fraction(x) for x in power_sums]
	sigma = [Fraction(1)]
	for k in range(1, len(s) + 1):
		acc = sum(((-1) ** (i - 1)) * sigma[k - i] * s[i - 1] for i in range(1, k + 1))
		sigma.append(acc / k)
	return sigma[1:]


def newton_power_sums(elementary: Sequence) -> list[Fraction]:
	"""Inverse of newton_elementary."""
	e = [Fraction(1)] + [Fraction(x) for x in elementary]
	s: list[Fraction] = []
	for k in range(1, len(e)):
		acc = ((-1) ** (k - 1)) * k * e[k]
		for i in range(1, k):
			acc += ((-1) ** (k - 1 + i)) * e[k - i] * s[i - 1]
		s.append(acc)
	return s


def charpoly_from_power_sums(power_sums: Sequence) -> IntPolynomial:
	"""prod (x - root) given the power sums of the n roots, lowest degree first."""
	sigma = [Fraction(1)] + newton_elementary(power_sums)
	n = len(sigma) - 1
	return IntPolynomial(tuple(((-1) ** (n - k)) * sigma[n - k] for k in range(n + 1)))


# -- reconstruction from triple counts -----------------------------------------

@dataclass(frozen=True, eq=False)
class TripleReconstruction:
	"""Forms recovered modulo p from p_ij and p_ijl, plus the exact structure constants."""

	a: np.ndarray
	sizes: tuple[int, ...]
	p: int
	forms_mod: tuple[tuple[int, ...], ...]
	mults: tuple[int, ...]

	def multiset(self) -> Counter:
		return Counter(zip(self.forms_mod, self.mults))


def reconstruct_from_triples(counts: CommutatorCounts, order: int, seed: int = 0) -> TripleReconstruction:
	"""With P = (p_ij)/c and T_l = (p_ijl)/c, the matrices T_l P^-1 share the form vectors
	as eigenvectors; the structure constants also follow exactly from a_.ij = T_ij. P^-1."""
	c = counts.trace_constant
	pm = [[Fraction(int(x), c) for x in row] for row in counts.p2]
	n = len(pm)
	tt = counts.p3
	pinv = exact.inverse_rational(pm)
	a = np.zeros((n, n, n), dtype=np.int64)
	for i in range(n):
		for j in range(n):
			row = [Fraction(int(tt[i, j, k]), c) for k in range(n)]
			for l in range(n):
				v = sum(row[k] * pinv[k][l] for k in range(n))
				if v.denominator != 1 or v < 0:
					raise ArithmeticError("triple counts are inconsistent with a partition algebra")
				a[l, i, j] = int(v)
	sizes = []
	for i in range(n):
		js = [j for j in range(n) if a[0, i, j]]
		if len(js) != 1:
			raise ArithmeticError("cannot identify inverse blocks from the counts")
		sizes.append(int(a[0, i, js[0]]))
	inverse = [next(j for j in range(n) if a[0, i, j]) for i in range(n)]

	p = order
	while True:
		p = modp.prime_congruent_one(order, p)
		try:
			forms, mults = _forms_mod_p(pm, tt, c, sizes, inverse, order, p, seed)
			break
		except (ArithmeticError, ZeroDivisionError):
			continue
	return TripleReconstruction(a, tuple(sizes), p, forms, mults)


def _forms_mod_p(pm, tt, c, sizes, inverse, order, p, seed):
	n = len(pm)
	fm = lambda x: Fraction(x).numerator * modp.inv(Fraction(x).denominator, p) % p
	pmat = np.array([[fm(x) for x in row] for row in pm], dtype=np.int64)
	pinv = modp.solve(pmat, np.eye(n, dtype=np.int64), p)
	cinv = modp.inv(c, p)
	mats = []
	for l in range(n):
		tl = np.array([[int(tt[i, j, l]) % p * cinv % p for j in range(n)] for i in range(n)], dtype=np.int64)
		mats.append(modp.matmul(tl, pinv, p))
	pairs = modp.simultaneous_eigenvectors(mats, p, seed)
	if len(pairs) != n:
		raise ArithmeticError("eigen recovery did not produce n forms")
	forms = []
	mults = []
	total = sum(sizes)
	for v, vals in pairs:
		if int(v[0]) == 0:
			raise ArithmeticError("recovered form has no identity coefficient")
		col = tuple(int(x) * modp.inv(int(v[0]), p) % p for x in v)
		if tuple(vals) != col:
			raise ArithmeticError("eigenvalues disagree with the eigenvector")
		s = sum(col[i] * col[inverse[i]] % p * modp.inv(sizes[i], p) for i in range(n)) % p
		d = total * modp.inv(s, p) % p
		if not 1 <= d <= total:
			raise ArithmeticError("multiplicity does not lift")
		forms.append(col)
		mults.append(d)
	order_idx = sorted(range(n), key=lambda k: forms[k])
	return tuple(forms[k] for k in order_idx), tuple(mults[k] for k in order_idx)


def forms_mod_p(forms, mults, m: int, p: int) -> Counter:
	"""Reduce exact forms modulo p (p = 1 mod m) for comparison with a reconstruction."""
	if (p - 1) % m:
		raise ValueError("prime must be 1 mod the exponent")
	w = modp.root_of_unity(m, p)
	return Counter((tuple(c.lift(m).mod(p, w) for c in f), k) for f, k in zip(forms, mults))
