"""Sylow-normalizer comparison of p'-degree polynomials, residue counts, Galois-fixed counts."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .characters import CharacterTable, character_table, degrees_and_multiplicities, eigen_system_mod_p
from .class_algebra import gram_matrix, regular_representation
from .cyclotomic import Cyclotomic
from .group_core import FiniteGroup, conjugacy_classes, exponent, induced_group, normalizer, sylow_subgroup
from .partitions import build_partition, galois_closure, structure_constants
from .polynomials import PPrimePart, degree_polynomial_casimir, p_prime_part


def residue_degree_counts(ct: CharacterTable, p: int) -> dict[int, int]:
	"""M_i: number of characters of degree = +-i mod p, for 1 <= i <= (p-1)/2 (i = 1 when p = 2)."""
	top = max(1, (p - 1) // 2)
	out = {}
	for i in range(1, top + 1):
		out[i] = sum(1 for f in ct.degrees if f % p in (i % p, (-i) % p))
	return out


def check_residue_counts(ct: CharacterTable, p: int, dpp: PPrimePart) -> bool:
	"""M_i equals the multiplicity of the root i^2 of the p'-degree polynomial."""
	mult = dpp.root_multiplicities()
	return all(mult.get(i * i % p, 0) == k for i, k in residue_degree_counts(ct, p).items())


def _partition_for(g: FiniteGroup, residues):
	classes = conjugacy_classes(g)
	m = exponent(g, classes)
	ts = galois_closure([t % m for t in residues], m) if m > 1 else [1]
	if ts == [1]:
		return build_partition(g, classes, "trivial")
	return build_partition(g, classes, "galois", ts)


def pprime_degree_polynomial(g: FiniteGroup, p: int, residues=(1,)) -> PPrimePart:
	part = _partition_for(g, residues)
	rep = regular_representation(structure_constants(part))
	return p_prime_part(degree_polynomial_casimir(rep), p)


def galois_fixed_counts(ct: CharacterTable, p: int, t: int) -> int:
	"""Characters of p'-degree with chi(g^t) = chi(g) for all g."""
	if gcd(t, ct.m) != 1:
		raise ValueError(f"{t} is not a unit modulo the exponent {ct.m}")
	return sum(1 for k in range(ct.n) if ct.degrees[k] % p and ct.galois_image(k, t) == k)


def galois_fixed_from_partition(g: FiniteGroup, ct: CharacterTable, p: int, t: int) -> int:
	"""The same count read off the <t>-Galois partition: columns with orbit length 1 and p'-degree."""
	m = ct.m
	part = _partition_for(g, [t % m if m > 1 else 1])
	rep = regular_representation(structure_constants(part))
	gram = gram_matrix(rep)
	es = eigen_system_mod_p(rep, gram, prime=ct.eigen.p)
	dd = degrees_and_multiplicities(es, gram, ct.eigen)
	return sum(1 for f, o in zip(dd.f, dd.o) if o == 1 and f % p)


@dataclass(frozen=True)
class FCharacters:
	"""Orbit sums of ordinary characters under a group of Galois automorphisms."""

	residues: tuple[int, ...]
	orbits: tuple[tuple[int, ...], ...]
	values: tuple[tuple[Cyclotomic, ...], ...]  # values[j][i]: orbit sum j at class i

	@property
	def orbit_lengths(self) -> tuple[int, ...]:
		return tuple(len(o) for o in self.orbits)

	def to_json(self) -> dict:
		return {"residues": list(self.residues),
			"characters": [{"orbit": [k + 1 for k in o], "orbit_length": len(o), "values": [v.to_json() for v in vals]}
				for o, vals in zip(self.orbits, self.values)]}


def f_character_data(ct: CharacterTable, residues) -> FCharacters:
	m = ct.m
	ts = galois_closure([t % m for t in residues], m) if m > 1 else [1]
	seen = [False] * ct.n
	orbits = []
	for k in range(ct.n):
		if not seen[k]:
			orb = sorted({ct.galois_image(k, t) for t in ts})
			for x in orb:
				seen[x] = True
			orbits.append(tuple(orb))
	values = []
	for orb in orbits:
		row = []
		for i in range(ct.n):
			v = Cyclotomic.rational(m, 0)
			for k in orb:
				v = v + ct.values[i][k]
			if any(not v.galois(t) == v for t in ts):
				raise ArithmeticError("orbit sum is not fixed by the Galois group")
			row.append(v)
		values.append(tuple(row))
	return FCharacters(tuple(ts), tuple(orbits), tuple(values))


def _order_mod(t: int, m: int) -> int:
	k, x = 1, t % m
	while x != 1:
		x = x * t % m
		k += 1
	return k


def cyclic_generator(residues, m: int) -> int | None:
	"""A generator of the closed residue group, or None if it is not cyclic."""
	if m == 1:
		return 1
	ts = galois_closure(residues, m)
	return next((t for t in ts if _order_mod(t, m) == len(ts)), None)


def equivalence_applies(residues, m: int, p: int) -> bool:
	"""True when the residues generate a cyclic p-group acting trivially on p'-roots of unity.

	Only then do fixed-character counts and the p'-degree polynomials over the subfield
	measure the same thing.
	"""
	ts = galois_closure(residues, m) if m > 1 else [1]
	size = len(ts)
	while size % p == 0:
		size //= p
	if size != 1 or cyclic_generator(ts, m) is None:
		return False
	mp = m
	while mp % p == 0:
		mp //= p
	return all((t - 1) % mp == 0 for t in ts)


@dataclass(frozen=True)
class McKayVerdict:
	group: str
	order: int
	p: int
	field: tuple[int, ...]
	sylow_order: int
	normalizer_order: int
	d_g: PPrimePart
	d_n: PPrimePart
	m_table_g: dict
	m_table_n: dict
	galois_fixed: tuple[dict, ...]
	equivalence: bool

	@property
	def equal(self) -> bool:
		return self.d_g.reduced == self.d_n.reduced

	def to_json(self) -> dict:
		return {
			"group": self.group, "order": self.order, "p": self.p,
			"field": "splitting" if self.field == (1,) else list(self.field),
			"sylow_order": self.sylow_order, "normalizer_order": self.normalizer_order,
			"D_G_pprime": self.d_g.to_json(), "D_N_pprime": self.d_n.to_json(), "equal": self.equal,
			"M_table_G": {str(k): v for k, v in self.m_table_g.items()},
			"M_table_N": {str(k): v for k, v in self.m_table_n.items()},
			"galois_fixed": list(self.galois_fixed),
			"equivalence_applies": self.equivalence,
		}


def mckay_check(g: FiniteGroup, p: int, residues=(1,), extra_t: int | None = None, seed: int | None = None) -> McKayVerdict:
	"""Compare D^{p'} of G with that of the normalizer of a Sylow p-subgroup, over the field fixed by the residues."""
	if g.order % p:
		raise ValueError(f"{p} does not divide the group order {g.order}")
	classes = conjugacy_classes(g)
	m = exponent(g, classes)
	ts = tuple(galois_closure([t % m for t in residues], m)) if m > 1 else (1,)
	syl = sylow_subgroup(g, p, seed)
	nsub = normalizer(g, syl)
	ng = induced_group(g, nsub)
	mn = exponent(ng)
	ts_n = tuple(galois_closure([t % mn for t in ts], mn)) if mn > 1 else (1,)
	d_g = pprime_degree_polynomial(g, p, ts)
	d_n = pprime_degree_polynomial(ng, p, ts_n)

	ct_g = character_table(g, classes)
	ct_n = character_table(ng)
	for ct, grp in ((ct_g, g), (ct_n, ng)):
		if not check_residue_counts(ct, p, pprime_degree_polynomial(grp, p)):
			raise ArithmeticError("residue counts disagree with the p'-degree polynomial")

	tests = [1, m - 1] if m > 2 else [1]
	equiv = equivalence_applies(list(ts), m, p)
	if equiv:
		tests.append(cyclic_generator(list(ts), m))
	if extra_t is not None:
		if gcd(extra_t, m) != 1:
			raise ValueError(f"{extra_t} is not a unit modulo {m}")
		tests.append(extra_t % m)
	fixed = []
	for t in dict.fromkeys(tests):
		row = {"t": t}
		for label, ct, grp in (("G", ct_g, g), ("N", ct_n, ng)):
			tt = t % ct.m if ct.m > 1 else 1
			direct = galois_fixed_counts(ct, p, tt)
			via = galois_fixed_from_partition(grp, ct, p, tt)
			if direct != via:
				raise ArithmeticError("Galois-fixed counts disagree between table and partition")
			row[label] = direct
		fixed.append(row)
	return McKayVerdict(g.origin, g.order, p, ts, syl.order, nsub.order, d_g, d_n,
		residue_degree_counts(ct_g, p), residue_degree_counts(ct_n, p), tuple(fixed),
		equiv)
