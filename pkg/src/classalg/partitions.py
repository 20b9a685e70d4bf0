"""Good partitions of the conjugacy classes, structure constants and solution counts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .exact import solve_rational
from .group_core import ClassData, FiniteGroup, conjugacy_classes, exponent, is_subgroup


class PartitionError(ValueError):
	"""The requested partition cannot be built or is not good."""


@dataclass(frozen=True, eq=False)
class GoodPartition:
	group: FiniteGroup
	classes: ClassData
	blocks: tuple[tuple[int, ...], ...]
	kind: str
	sizes: tuple[int, ...] = field(init=False)
	block_of: tuple[int, ...] = field(init=False)
	inverse_block: tuple[int, ...] = field(init=False)
	identity_coeffs: tuple[Fraction, ...] = field(init=False, default=())

	def __post_init__(self):
		nc = self.classes.n_classes
		block_of = [-1] * nc
		for b, blk in enumerate(self.blocks):
			for c in blk:
				if not 0 <= c < nc:
					raise PartitionError(f"class index {c} out of range")
				if block_of[c] >= 0:
					raise PartitionError(f"class {c} appears in two blocks")
				block_of[c] = b
		object.__setattr__(self, "block_of", tuple(block_of))
		object.__setattr__(self, "sizes", tuple(sum(self.classes.sizes[c] for c in blk) for blk in self.blocks))
		invb = []
		for blk in self.blocks:
			images = {block_of[self.classes.inverse_class[c]] for c in blk}
			if len(images) != 1 or -1 in images:
				invb.append(-1)
			else:
				invb.append(images.pop())
		object.__setattr__(self, "inverse_block", tuple(invb))

	@property
	def n(self) -> int:
		return len(self.blocks)

	@property
	def total(self) -> int:
		"""Number of group elements covered by the blocks."""
		return sum(self.sizes)

	def elements(self, b: int) -> np.ndarray:
		return np.concatenate([self.classes.members(c) for c in self.blocks[b]])

	def rep(self, b: int) -> int:
		return self.classes.reps[self.blocks[b][0]]

	def identity_is_singleton(self) -> bool:
		return self.blocks[0] == (0,)

	def describe(self) -> dict:
		return {"kind": self.kind, "blocks": [[c + 1 for c in blk] for blk in self.blocks], "sizes": list(self.sizes)}


def _canonical(blocks) -> tuple[tuple[int, ...], ...]:
	blocks = [tuple(sorted(set(b))) for b in blocks if b]
	return tuple(sorted(blocks, key=lambda b: b[0]))


def unit_group(m: int) -> list[int]:
	return [t for t in range(1, m + 1) if gcd(t, m) == 1] if m > 1 else [1]


def galois_closure(residues, m: int) -> list[int]:
	"""Subgroup of (Z/m)* generated by the residues."""
	if m == 1:
		return [1]
	gens = []
	for t in residues:
		if gcd(int(t), m) != 1:
			raise PartitionError(f"residue {t} is not a unit mod {m}")
		gens.append(int(t) % m)
	group = {1}
	frontier = [1]
	while frontier:
		frontier = [x * t % m for x in frontier for t in gens if x * t % m not in group]
		group.update(frontier)
	return sorted(group)


def galois_orbits(classes: ClassData, residues, m: int) -> list[list[int]]:
	ts = galois_closure(residues, m)
	seen = [False] * classes.n_classes
	orbits = []
	for c in range(classes.n_classes):
		if seen[c]:
			continue
		orb = sorted({classes.power_class(c, t) for t in ts})
		for x in orb:
			seen[x] = True
		orbits.append(orb)
	return orbits


def normal_subgroup_elements(g: FiniteGroup, classes: ClassData, class_list) -> np.ndarray:
	cl = sorted(set(int(c) for c in class_list) | {0})
	if any(not 0 <= c < classes.n_classes for c in cl):
		raise PartitionError("class index out of range")
	els = np.concatenate([classes.members(c) for c in cl])
	if not is_subgroup(g, els):
		raise PartitionError("the listed classes do not form a normal subgroup")
	return np.sort(els)


def build_partition(g: FiniteGroup, classes: ClassData | None, kind: str, arg=None) -> GoodPartition:
	"""Build a partition of the given kind and check that it is good.

	kinds: trivial, rational, galois (arg: residues mod the exponent),
	coset and subgroup (arg: class indices of a normal subgroup), custom (arg: blocks).
	Class indices are 0-based here.
	"""
	classes = classes or conjugacy_classes(g)
	nc = classes.n_classes
	if kind == "trivial":
		blocks, tag = [[c] for c in range(nc)], "trivial"
	elif kind in ("rational", "galois"):
		m = exponent(g, classes)
		residues = unit_group(m) if kind == "rational" else list(arg)
		blocks = galois_orbits(classes, residues, m)
		tag = "rational" if kind == "rational" else f"galois({','.join(str(t) for t in galois_closure(residues, m))})"
	elif kind == "coset":
		els = normal_subgroup_elements(g, classes, arg)
		blocks = _coset_blocks(g, classes, els)
		tag = f"coset({','.join(str(c + 1) for c in sorted(set(classes.class_of[els].tolist())))})"
	elif kind == "subgroup":
		els = normal_subgroup_elements(g, classes, arg)
		inside = sorted(set(classes.class_of[els].tolist()))
		blocks = [[c] for c in inside]
		tag = f"subgroup({','.join(str(c + 1) for c in inside)})"
	elif kind == "custom":
		blocks, tag = [list(b) for b in arg], "custom"
	else:
		raise PartitionError(f"unknown partition kind {kind!r}")
	part = GoodPartition(g, classes, _canonical(blocks), tag)
	report = validate_good_partition(part)
	if not report.ok:
		raise PartitionError("partition is not good: " + "; ".join(f"{c.name}: {c.witness}" for c in report.checks if not c.passed))
	object.__setattr__(part, "identity_coeffs", report.identity)
	return part


def _coset_blocks(g: FiniteGroup, classes: ClassData, n_els: np.ndarray) -> list[list[int]]:
	mul = g.mul.astype(np.int64)
	coset_of = np.full(g.order, -1, dtype=np.int64)
	for x in range(g.order):
		if coset_of[x] < 0:
			coset_of[mul[x, n_els]] = x
	parent = list(range(classes.n_classes))

	def find(a):
		while parent[a] != a:
			parent[a] = parent[parent[a]]
			a = parent[a]
		return a

	owner: dict[int, int] = {}
	for x in range(g.order):
		c = int(classes.class_of[x])
		k = int(coset_of[x])
		if k in owner:
			parent[find(c)] = find(owner[k])
		else:
			owner[k] = c
	groups: dict[int, list[int]] = {}
	for c in range(classes.n_classes):
		groups.setdefault(find(c), []).append(c)
	return list(groups.values())


def parse_partition_spec(spec: str) -> tuple[str, object]:
	"""CLI grammar (1-based class indices): trivial | rational | galois=t1,t2 |
	coset=c1,c2 | subgroup=c1,c2 | custom=b1c1,b1c2;b2c1,..."""
	spec = spec.strip()
	name, _, rest = spec.partition("=")
	try:
		if name in ("trivial", "rational") and not rest:
			return name, None
		if name == "galois":
			return name, [int(t) for t in rest.split(",") if t.strip()]
		if name in ("coset", "subgroup"):
			return name, [int(c) - 1 for c in rest.split(",") if c.strip()]
		if name == "custom":
			return name, [[int(c) - 1 for c in b.split(",") if c.strip()] for b in rest.split(";") if b.strip()]
	except ValueError as exc:
		raise PartitionError(f"cannot parse partition spec {spec!r}") from exc
	raise PartitionError(f"cannot parse partition spec {spec!r}")


# -- validation ----------------------------------------------------------------

@dataclass
class Check:
	name: str
	passed: bool
	witness: str = ""


@dataclass
class ValidationReport:
	checks: list[Check]
	identity: tuple[Fraction, ...] = ()

	@property
	def ok(self) -> bool:
		return all(c.passed for c in self.checks)


def _product_histograms(part: GoodPartition):
	mul = part.group.mul
	els = [part.elements(b) for b in range(part.n)]
	for i in range(part.n):
		for j in range(i, part.n):
			prods = mul[np.ix_(els[i], els[j])].ravel()
			yield i, j, np.bincount(prods.astype(np.int64), minlength=part.group.order)


def validate_good_partition(part: GoodPartition) -> ValidationReport:
	"""Check inverse closure, closure of block-sum products and existence of a unit."""
	checks = []
	bad = [b for b, ib in enumerate(part.inverse_block) if ib < 0]
	checks.append(Check("inverse closure", not bad,
		f"inverses of block {bad[0] + 1} are not a block" if bad else ""))
	covered = np.zeros(part.group.order, dtype=bool)
	block_el = np.full(part.group.order, -1, dtype=np.int64)
	for b in range(part.n):
		e = part.elements(b)
		covered[e] = True
		block_el[e] = b
	a = np.zeros((part.n, part.n, part.n), dtype=np.int64)
	witness = ""
	for i, j, hist in _product_histograms(part):
		if hist[~covered].any():
			x = int(np.nonzero(hist * ~covered)[0][0])
			witness = f"product of blocks {i + 1},{j + 1} hits uncovered element {x}"
			break
		for l in range(part.n):
			vals = hist[block_el == l]
			if vals.min() != vals.max():
				witness = f"product of blocks {i + 1},{j + 1} is not constant on block {l + 1}"
				break
			a[l, i, j] = a[l, j, i] = vals[0]
		if witness:
			break
	checks.append(Check("product closure", not witness, witness))
	ident: tuple[Fraction, ...] = ()
	if not witness:
		c = _solve_identity(a)
		ident = tuple(c) if c is not None else ()
		checks.append(Check("identity", c is not None, "" if c is not None else "no unit element in the span"))
	else:
		checks.append(Check("identity", False, "not checked: products not closed"))
	return ValidationReport(checks, ident)


def _solve_identity(a: np.ndarray):
	n = a.shape[0]
	rows, rhs = [], []
	for j in range(n):
		for l in range(n):
			rows.append([int(a[l, i, j]) for i in range(n)])
			rhs.append(1 if l == j else 0)
	return solve_rational(rows, rhs)


# -- structure constants -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StructTensor:
	"""a[l, i, j] = #{(x, y) in block i x block j : x y = fixed representative of block l}."""

	a: np.ndarray
	partition: GoodPartition

	@property
	def n(self) -> int:
		return self.a.shape[0]

	def __getitem__(self, key) -> int:
		return int(self.a[key])


def structure_constants(part: GoodPartition) -> StructTensor:
	n = part.n
	a = np.zeros((n, n, n), dtype=np.int64)
	reps = [part.rep(l) for l in range(n)]
	block_el = np.full(part.group.order, -1, dtype=np.int64)
	for b in range(n):
		block_el[part.elements(b)] = b
	for i, j, hist in _product_histograms(part):
		for l in range(n):
			vals = hist[block_el == l]
			if vals.min() != vals.max():
				raise PartitionError(f"product of blocks {i + 1},{j + 1} is not constant on block {l + 1}")
			a[l, i, j] = a[l, j, i] = hist[reps[l]]
	a.setflags(write=False)
	t = StructTensor(a, part)
	check_tensor(t)
	return t


def check_tensor(t: StructTensor) -> None:
	a = t.a
	sizes = np.array(t.partition.sizes, dtype=np.int64)
	inv = t.partition.inverse_block
	if not np.array_equal(a, a.transpose(0, 2, 1)):
		raise AssertionError("structure constants are not symmetric")
	if not np.array_equal(np.einsum("lij,l->ij", a, sizes), np.outer(sizes, sizes)):
		raise AssertionError("row-sum identity fails")
	# l_{ijk} = l_k a_{k'ij} must be invariant under rotation (i j k) -> (j k i)
	lijk = sizes[None, None, :] * a[list(inv)].transpose(1, 2, 0)
	if not np.array_equal(lijk, lijk.transpose(1, 2, 0)):
		raise AssertionError("rotation symmetry of solution counts fails")


def algebra_identity(t: StructTensor) -> tuple[Fraction, ...]:
	c = _solve_identity(t.a)
	if c is None:
		raise PartitionError("the span of the block sums has no unit")
	return tuple(c)


# -- solution counts -----------------------------------------------------------

class SolutionCounter:
	"""Number of solutions of g_1 ... g_r = 1 with g_k in the given blocks."""

	def __init__(self, t: StructTensor):
		self.t = t
		self.sizes = t.partition.sizes
		self.inv = t.partition.inverse_block
		self._cache: dict[tuple[int, ...], Fraction] = {}

	def __call__(self, *idx: int) -> int:
		v = self._count(tuple(idx))
		if v.denominator != 1:
			raise ArithmeticError(f"non-integer solution count for {idx}")
		return int(v)

	def _count(self, idx: tuple[int, ...]) -> Fraction:
		if idx in self._cache:
			return self._cache[idx]
		r = len(idx)
		if r < 2:
			raise ValueError("solution counts need at least two indices")
		if r == 2:
			i, j = idx
			v = Fraction(self.sizes[i] if j == self.inv[i] else 0)
		elif r == 3:
			i, j, k = idx
			v = Fraction(self.sizes[k] * int(self.t.a[self.inv[k], i, j]))
		else:
			v = Fraction(0)
			head = idx[:2]
			tail = idx[2:]
			for j in range(self.t.n):
				left = self._count(head + (j,))
				if left:
					v += left * self._count((self.inv[j],) + tail) / self.sizes[j]
		self._cache[idx] = v
		return v


def solution_count(t: StructTensor, *idx: int) -> int:
	return SolutionCounter(t)(*idx)


def galois_residues(part: GoodPartition) -> list[int] | None:
	"""The unit residues a galois or rational partition was built from, else None."""
	if part.kind == "trivial":
		return [1]
	if part.kind == "rational":
		return unit_group(exponent(part.group, part.classes))
	if part.kind.startswith("galois("):
		return [int(t) for t in part.kind[7:-1].split(",")]
	return None
