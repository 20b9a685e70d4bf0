"""Characters of partition algebras: modular eigen data, degrees, exact lifting, identities."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

import numpy as np

from . import modp
from .class_algebra import GramMatrix, RegularRep, gram_matrix, regular_representation
from .cyclotomic import Cyclotomic, Shadow
from .group_core import ClassData, FiniteGroup, conjugacy_classes, exponent
from .partitions import (
	Check, GoodPartition, SolutionCounter, StructTensor, build_partition, galois_closure,
	galois_residues, structure_constants,
)


@dataclass(frozen=True, eq=False)
class EigenSystemModP:
	"""lam[i, t]: eigenvalue of block sum i on the t-th simple module, modulo p."""

	p: int
	m: int
	omega: int
	lam: np.ndarray
	partition: GoodPartition

	@property
	def n(self) -> int:
		return self.lam.shape[1]

	def column(self, t: int) -> tuple[int, ...]:
		return tuple(int(x) for x in self.lam[:, t])


def select_prime(m: int, above: int, avoid: int = 0) -> int:
	"""Smallest prime 1 mod m exceeding `above` that does not divide `avoid`."""
	p = modp.prime_congruent_one(m, above)
	while avoid and avoid % p == 0:
		p = modp.prime_congruent_one(m, p)
	return p


def _mod_fraction(x, p: int) -> int:
	x = Fraction(x)
	return x.numerator * modp.inv(x.denominator, p) % p


def eigen_system_mod_p(rep: RegularRep, gram: GramMatrix | None = None, seed: int = 0,
		prime: int | None = None) -> EigenSystemModP:
	part = rep.tensor.partition
	m = exponent(part.group, part.classes)
	p = prime or select_prime(m, part.group.order, gram.det if gram else 0)
	if (p - 1) % m or p <= part.group.order:
		raise ValueError(f"prime {p} must be 1 mod {m} and exceed the group order")
	mats = [np.array(a, dtype=np.int64).T % p for a in rep.matrices]
	pairs = modp.simultaneous_eigenvectors(mats, p, seed)
	if len(pairs) != part.n:
		raise ArithmeticError("expected one joint eigenline per block")
	lam = np.array([vals for _, vals in pairs], dtype=np.int64).T
	lam = lam[:, sorted(range(part.n), key=lambda t: tuple(lam[:, t]))]
	a = rep.tensor.a
	lhs = lam[:, None, :] * lam[None, :, :] % p
	rhs = np.einsum("ijl,it->jlt", a % p, lam) % p
	if not np.array_equal(lhs, rhs):
		raise ArithmeticError("eigen columns violate the multiplication table")
	unit = [_mod_fraction(c, p) for c in part.identity_coeffs]
	if any(sum(u * int(x) for u, x in zip(unit, lam[:, t])) % p != 1 for t in range(part.n)):
		raise ArithmeticError("unit element does not act as 1 on some column")
	if len({tuple(lam[:, t]) for t in range(part.n)}) != part.n:
		raise ArithmeticError("eigen columns are not distinct")
	lam.setflags(write=False)
	return EigenSystemModP(p, m, modp.root_of_unity(m, p), lam, part)


def degree_products(es: EigenSystemModP, gram: GramMatrix) -> tuple[int, ...]:
	"""d_t = total / sum_g lam[g,t] Tr(A_g) / size_g, lifted from F_p to [1, total]."""
	part = es.partition
	p = es.p
	w = [gram.traces[g] * modp.inv(part.sizes[g], p) % p for g in range(part.n)]
	out = []
	for t in range(es.n):
		s = sum(int(es.lam[g, t]) * w[g] for g in range(part.n)) % p
		if s == 0:
			raise ArithmeticError(f"degree denominator vanishes for column {t + 1}")
		d = part.total * modp.inv(s, p) % p
		if not 1 <= d <= part.total:
			raise ArithmeticError(f"degree product {d} of column {t + 1} does not lift")
		out.append(d)
	return tuple(out)


def galois_column_action(es: EigenSystemModP, t: int) -> list[int]:
	"""Permutation of ordinary eigen columns induced by g -> g^t on classes."""
	cl = es.partition.classes
	index = {es.column(c): c for c in range(es.n)}
	rows = [cl.power_class(i, t) for i in range(cl.n_classes)]
	return [index[tuple(int(x) for x in es.lam[rows, c])] for c in range(es.n)]


def galois_orbits_of_columns(es: EigenSystemModP, residues) -> list[list[int]]:
	perms = [galois_column_action(es, t) for t in galois_closure(residues, es.m)]
	seen = [False] * es.n
	orbits = []
	for c in range(es.n):
		if not seen[c]:
			orb = sorted({perm[c] for perm in perms})
			for x in orb:
				seen[x] = True
			orbits.append(orb)
	return orbits


@dataclass(frozen=True)
class DegreeData:
	d: tuple[int, ...]
	f: tuple[int, ...] | None = None
	e: tuple[int, ...] | None = None
	o: tuple[int, ...] | None = None


def degrees_and_multiplicities(es: EigenSystemModP, gram: GramMatrix,
		ordinary: EigenSystemModP | None = None) -> DegreeData:
	"""Degree products, and for trivial/galois partitions the split into f, e and orbit length."""
	part = es.partition
	d = degree_products(es, gram)
	residues = galois_residues(part)
	if part.kind == "trivial":
		f = []
		for x in d:
			r = isqrt(x)
			if r * r != x:
				raise ArithmeticError(f"degree product {x} is not a square")
			f.append(r)
		return DegreeData(d, tuple(f), tuple(f), (1,) * len(d))
	if residues is None or ordinary is None:
		return DegreeData(d)
	if ordinary.p != es.p:
		raise ValueError("ordinary and partition eigen systems must share the prime")
	index = {es.column(t): t for t in range(es.n)}
	o = [0] * es.n
	for orb in galois_orbits_of_columns(ordinary, residues):
		c = orb[0]
		sums = tuple(sum(int(ordinary.lam[k, c]) for k in blk) % es.p for blk in part.blocks)
		t = index.get(sums)
		if t is None or o[t]:
			raise ArithmeticError("Galois orbit does not match a partition column")
		o[t] = len(orb)
	f = []
	for x, k in zip(d, o):
		r = isqrt(x // k) if k and x % k == 0 else -1
		if r < 0 or r * r * k != x:
			raise ArithmeticError(f"degree product {x} is not a square times the orbit length {k}")
		f.append(r)
	return DegreeData(d, tuple(f), tuple(a * b for a, b in zip(f, o)), tuple(o))


# -- ordinary character table --------------------------------------------------

@dataclass(frozen=True, eq=False)
class CharacterTable:
	"""values[i][t] = chi_t(g_i) for class representatives g_i."""

	group: FiniteGroup
	classes: ClassData
	m: int
	degrees: tuple[int, ...]
	values: tuple[tuple[Cyclotomic, ...], ...]
	eigen: EigenSystemModP

	@property
	def n(self) -> int:
		return len(self.degrees)

	def value(self, i: int, t: int) -> Cyclotomic:
		return self.values[i][t]

	def column(self, t: int) -> list[Cyclotomic]:
		return [row[t] for row in self.values]

	def galois_image(self, t: int, s: int) -> int:
		"""Index of the character g -> chi_t(g^s)."""
		return galois_column_action(self.eigen, s)[t]

	def to_json(self) -> dict:
		cl = self.classes
		return {
			"order": self.group.order,
			"exponent": self.m,
			"classes": [
				{"rep": int(cl.reps[i]) + 1, "size": cl.sizes[i], "element_order": cl.orders[i],
					"class_of_powers": [p + 1 for p in cl.powers[i]]}
				for i in range(cl.n_classes)
			],
			"characters": [
				{"degree": self.degrees[t], "multiplicity": self.degrees[t],
					"values": [self.values[i][t].to_json() for i in range(cl.n_classes)]}
				for t in range(self.n)
			],
		}

	def render(self) -> str:
		cl = self.classes
		head = ["class"] + [str(i + 1) for i in range(cl.n_classes)]
		rows = [head, ["size"] + [str(s) for s in cl.sizes], ["order"] + [str(o) for o in cl.orders]]
		for t in range(self.n):
			rows.append([f"X.{t + 1}"] + [str(self.values[i][t]) for i in range(cl.n_classes)])
		return _render_grid(rows)


def lift_character_table(es: EigenSystemModP, degrees: Sequence[int]) -> CharacterTable:
	"""Exact values from the modular eigen data of the trivial partition.

	For g of order o the multiplicity of xi_o^k as an eigenvalue of g is
	(1/o) sum_j chi(g^j) w^(-jk) mod p; it lies in [0, chi(1)] and p > chi(1), so it lifts.
	"""
	part = es.partition
	if part.kind != "trivial":
		raise ValueError("exact lifting runs on the trivial partition")
	cl = part.classes
	p, m, w = es.p, es.m, es.omega
	n = es.n
	size_inv = np.array([modp.inv(s, p) for s in cl.sizes], dtype=np.int64)
	fvec = np.array(degrees, dtype=np.int64)
	chi = es.lam * size_inv[:, None] % p * fvec[None, :] % p
	values = [[None] * n for _ in range(n)]
	for i in range(cl.n_classes):
		o = cl.orders[i]
		step = m // o
		wo_inv = modp.inv(pow(w, step, p), p)
		fourier = np.array([[pow(wo_inv, j * k % o, p) for j in range(o)] for k in range(o)], dtype=np.int64)
		pcs = [cl.power_class(i, j) for j in range(o)]
		mult = modp.matmul(fourier, chi[pcs, :], p) * modp.inv(o, p) % p
		for t in range(n):
			col = mult[:, t]
			if int(col.max()) > degrees[t] or int(col.sum()) != degrees[t]:
				raise ArithmeticError(f"eigenvalue multiplicities of class {i + 1} in character {t + 1} do not lift")
			coeffs = [0] * m
			for k in range(o):
				coeffs[k * step] = int(col[k])
			values[i][t] = Cyclotomic(m, coeffs)
	order = sorted(range(n), key=lambda t: (degrees[t], any(values[i][t].coeffs[0] != 1 or values[i][t].den != 1
		or any(values[i][t].coeffs[1:]) for i in range(n)), es.column(t)))
	lam = es.lam[:, order]
	lam.setflags(write=False)
	es = EigenSystemModP(es.p, es.m, es.omega, lam, part)
	table = CharacterTable(part.group, cl, m, tuple(degrees[t] for t in order),
		tuple(tuple(values[i][t] for t in order) for i in range(n)), es)
	_check_ordinary(table)
	return table


def _check_ordinary(table: CharacterTable) -> None:
	g = table.group
	if sum(f * f for f in table.degrees) != g.order or any(g.order % f for f in table.degrees):
		raise ArithmeticError("character degrees are inconsistent with the group order")
	x = Shadow.of(table.values, table.m)
	xc = Shadow.of([[v.conj() for v in row] for row in table.values], table.m)
	sizes = Shadow.rationals(table.classes.sizes, table.m)
	gram = (x[:, :, None] * xc[:, None, :] * sizes[:, None, None]).sum(0)
	expect = np.diag([g.order] * table.n).tolist()
	if not (gram - expect).all_zero(1e-6 * g.order):
		raise ArithmeticError("lifted characters are not orthonormal")


def character_table(g: FiniteGroup, classes: ClassData | None = None, seed: int = 0) -> CharacterTable:
	classes = classes or conjugacy_classes(g)
	part = build_partition(g, classes, "trivial")
	rep = regular_representation(structure_constants(part))
	gram = gram_matrix(rep)
	es = eigen_system_mod_p(rep, gram, seed)
	deg = degrees_and_multiplicities(es, gram)
	return lift_character_table(es, deg.f)


# -- characters of a general partition -----------------------------------------

@dataclass(frozen=True, eq=False)
class PartitionTable:
	"""chi[i][t]: sum of the t-th character over the elements of block i.

	Each column is the block sum of an ordinary character; `fibers[t]` lists the
	ordinary characters that restrict to the same algebra character.
	"""

	partition: GoodPartition
	ordinary: CharacterTable
	fibers: tuple[tuple[int, ...], ...]
	chi: tuple[tuple[Cyclotomic, ...], ...]
	degrees: tuple[int, ...]
	d: tuple[int, ...]

	@property
	def n(self) -> int:
		return len(self.degrees)

	@property
	def mults(self) -> tuple[Fraction, ...]:
		return tuple(Fraction(d, f) for d, f in zip(self.d, self.degrees))

	@property
	def orbit_lengths(self) -> tuple[int, ...]:
		return tuple(len(fb) for fb in self.fibers)

	def lam(self, i: int, t: int) -> Cyclotomic:
		return self.chi[i][t] / self.degrees[t]

	def render(self) -> str:
		part = self.partition
		rows = [["block"] + [str(i + 1) for i in range(part.n)], ["size"] + [str(x) for x in part.sizes]]
		for t in range(self.n):
			rows.append([f"X.{t + 1}"] + [str(self.chi[i][t]) for i in range(part.n)])
		foot = [f"X.{t + 1}: degree {self.degrees[t]}, multiplicity {self.mults[t]}, ordinary "
			+ ",".join(str(k + 1) for k in self.fibers[t]) for t in range(self.n)]
		return _render_grid(rows) + "\n" + "\n".join(foot)

	def to_json(self) -> dict:
		return {
			"partition": self.partition.describe(),
			"characters": [
				{"degree": self.degrees[t], "degree_product": self.d[t], "multiplicity": _fraction_json(self.mults[t]),
					"ordinary": [k + 1 for k in self.fibers[t]],
					"values": [self.chi[i][t].to_json() for i in range(self.partition.n)]}
				for t in range(self.n)
			],
		}


def _render_grid(rows: list[list[str]]) -> str:
	widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
	return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows)


def _fraction_json(x: Fraction):
	return x.numerator if x.denominator == 1 else str(x)


def block_sums(ordinary: CharacterTable, part: GoodPartition, t: int) -> list[Cyclotomic]:
	cl = ordinary.classes
	out = []
	for blk in part.blocks:
		acc = Cyclotomic.rational(ordinary.m, 0)
		for c in blk:
			acc = acc + ordinary.values[c][t] * cl.sizes[c]
		out.append(acc)
	return out


def partition_table(ordinary: CharacterTable, part: GoodPartition, gram: GramMatrix | None = None,
		seed: int = 0) -> PartitionTable:
	"""Block-sum the ordinary table and cross-check against the partition's own modular system."""
	m = ordinary.m
	unit = part.identity_coeffs
	groups: dict[tuple, list[int]] = {}
	sums: dict[tuple, list[Cyclotomic]] = {}
	for t in range(ordinary.n):
		b = block_sums(ordinary, part, t)
		lam = [x / ordinary.degrees[t] for x in b]
		at_unit = sum((l * c for l, c in zip(lam, unit)), Cyclotomic.rational(m, 0))
		if at_unit == 0:
			continue
		if not at_unit == 1:
			raise ArithmeticError(f"character {t + 1} does not restrict to an algebra character")
		key = tuple(tuple(x.key()) for x in lam)
		groups.setdefault(key, []).append(t)
		sums.setdefault(key, b)
	keys = list(groups)
	if len(keys) != part.n:
		raise ArithmeticError(f"found {len(keys)} algebra characters, expected {part.n}")
	fibers = tuple(tuple(groups[k]) for k in keys)
	chi = tuple(tuple(sums[k][i] for k in keys) for i in range(part.n))
	degrees = tuple(ordinary.degrees[fb[0]] for fb in fibers)

	rep = regular_representation(structure_constants(part))
	gram = gram or gram_matrix(rep)
	es = eigen_system_mod_p(rep, gram, seed, prime=ordinary.eigen.p)
	d_mod = degree_products(es, gram)
	index = {es.column(t): t for t in range(es.n)}
	p, w = es.p, ordinary.eigen.omega
	d = []
	for t in range(part.n):
		col = tuple(chi[i][t].mod(p, w) * modp.inv(degrees[t], p) % p for i in range(part.n))
		if col not in index:
			raise ArithmeticError(f"exact column {t + 1} has no modular counterpart")
		d.append(d_mod[index[col]])
	if len(set(index[tuple(chi[i][t].mod(p, w) * modp.inv(degrees[t], p) % p for i in range(part.n))]
			for t in range(part.n))) != part.n:
		raise ArithmeticError("exact and modular columns are not in bijection")
	return PartitionTable(part, ordinary, fibers, chi, degrees, tuple(d))


def trivial_partition_table(ordinary: CharacterTable) -> PartitionTable:
	part = build_partition(ordinary.group, ordinary.classes, "trivial")
	return partition_table(ordinary, part)


# -- identity suite ------------------------------------------------------------

def identity_suite(pt: PartitionTable, tensor: StructTensor, gram: GramMatrix,
		samples: int = 200, seed: int = 0) -> list[Check]:
	"""Orthogonality, weighted solution counts and the trace formula in exact arithmetic.

	Requires the identity element to form its own block.
	"""
	part = pt.partition
	if not part.identity_is_singleton():
		raise ValueError("the identity suite needs the identity as a block of its own")
	n = part.n
	m = pt.ordinary.m
	order = part.group.order
	sizes = part.sizes
	inv = list(part.inverse_block)
	x = Shadow.of(pt.chi, m)
	f = pt.degrees
	e = pt.mults
	scale = float(order) * max(sizes) * max(f) ** 2
	checks: list[Check] = []

	def record(name: str, diff: Shadow, tol: float) -> None:
		mask = diff.zero_mask(tol)
		bad = np.argwhere(~mask)
		witness = "" if not len(bad) else f"fails at {tuple(int(k) + 1 for k in bad[0])}"
		checks.append(Check(name, not len(bad), witness))

	xinv = x[inv, :]
	w_i = Shadow.rationals([Fraction(1, s) for s in sizes], m)
	g1 = (x[:, :, None] * xinv[:, None, :] * w_i[:, None, None]).sum(0)
	expect = [[Fraction(order * f[j], 1) / e[j] if j == l else 0 for l in range(n)] for j in range(n)]
	off = Shadow.rationals([[0 if j == l else 1 for l in range(n)] for j in range(n)], m)
	diag = Shadow.rationals([[1 if j == l else 0 for l in range(n)] for j in range(n)], m)
	diff = g1 - expect
	record("column orthogonality, off-diagonal", diff * off, 1e-6 * scale)
	record("column orthogonality, diagonal", diff * diag, 1e-6 * scale)

	w_l = Shadow.rationals([el / fl for el, fl in zip(e, f)], m)
	g2 = (x[:, None, :] * x[None, :, :] * w_l[None, None, :]).sum(2)
	expect = [[order * sizes[i] if j == inv[i] else 0 for j in range(n)] for i in range(n)]
	pair = Shadow.rationals([[1 if j == inv[i] else 0 for j in range(n)] for i in range(n)], m)
	diff = g2 - expect
	record("row orthogonality, non-inverse pairs", diff * (1 - pair), 1e-6 * scale * order)
	record("row orthogonality, inverse pairs", diff * pair, 1e-6 * scale * order)

	ew = Shadow.rationals(list(e), m)
	v = (x[1:, :] * ew[None, :]).sum(1) if n > 1 else None
	checks.append(Check("weighted block sums vanish off the identity", v is None or v.all_zero(1e-6 * scale),
		"" if v is None or v.all_zero(1e-6 * scale) else "a non-identity block sum is nonzero"))
	total = sum(el * fl for el, fl in zip(e, f))
	checks.append(Check("degree-weighted multiplicities sum to the order", total == order, "" if total == order else f"sum is {total}"))

	counter = SolutionCounter(tensor)
	for r in (2, 3):
		w_r = Shadow.rationals([el / fl ** (r - 1) for el, fl in zip(e, f)], m)
		if r == 2:
			lhs = (x[:, None, :] * x[None, :, :] * w_r[None, None, :]).sum(2)
			rhs = [[order * counter(i, j) for j in range(n)] for i in range(n)]
		else:
			lhs = (x[:, None, None, :] * x[None, :, None, :] * x[None, None, :, :] * w_r[None, None, None, :]).sum(3)
			rhs = [[[order * counter(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]
		record(f"solution counts r={r}", lhs - rhs, 1e-6 * scale * order * max(sizes) ** (r - 1) * max(f))
	rng = random.Random(seed)
	tuples = [tuple(rng.randrange(n) for _ in range(4)) for _ in range(samples)]
	w4 = Shadow.rationals([el / fl ** 3 for el, fl in zip(e, f)], m)
	idx = np.array(tuples, dtype=np.int64).T
	lhs = (x[idx[0], :] * x[idx[1], :] * x[idx[2], :] * x[idx[3], :] * w4[None, :]).sum(1)
	rhs = [order * counter(*tp) for tp in tuples]
	record("solution counts r=4 (sampled)", lhs - rhs, 1e-6 * scale * order * max(sizes) ** 3 * max(f))

	w_p = Shadow.rationals([Fraction(1, fl * fl) for fl in f], m)
	pij = (x[:, None, :] * x[None, :, :] * w_p[None, None, :]).sum(2)
	record("trace formula for the Gram matrix", pij - [list(r) for r in gram.p], 1e-6 * scale)

	if part.kind == "trivial":
		vals = Shadow.of(pt.ordinary.values, m)
		for r in (2, 3):
			w_r = Shadow.rationals([Fraction(1, fl ** (r - 2)) for fl in f], m)
			if r == 2:
				lhs = (vals[:, None, :] * vals[None, :, :] * w_r[None, None, :]).sum(2)
				rhs = [[Fraction(order * counter(i, j), sizes[i] * sizes[j]) for j in range(n)] for i in range(n)]
			else:
				lhs = (vals[:, None, None, :] * vals[None, :, None, :] * vals[None, None, :, :] * w_r[None, None, None, :]).sum(3)
				rhs = [[[Fraction(order * counter(i, j, k), sizes[i] * sizes[j] * sizes[k]) for k in range(n)]
					for j in range(n)] for i in range(n)]
			record(f"ordinary solution counts r={r}", lhs - rhs, 1e-6 * scale * order)

	a = tensor.a
	fw = Shadow.rationals(list(f), m)
	lhs = x[:, None, :] * x[None, :, :]
	rhs = (x[:, None, None, :] * Shadow.rationals(a.tolist(), m)[:, :, :, None]).sum(0) * fw[None, None, :]
	record("eigenvalue multiplication rule", lhs - rhs, 1e-6 * scale * order)
	return checks
