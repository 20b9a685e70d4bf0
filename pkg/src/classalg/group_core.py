"""Finite groups as Cayley tables: loading, conjugacy classes, Sylow subgroups."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import lcm
from pathlib import Path

import numpy as np

DEFAULT_ORDER_BOUND = 20000
EXHAUSTIVE_ASSOC_LIMIT = 512


class GroupInputError(ValueError):
	"""Malformed or oversized group description."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
	"""A finite group given by its multiplication table; element 0 is the identity."""

	mul: np.ndarray
	inv: np.ndarray
	origin: str = ""
	labels: tuple = field(default=(), repr=False)

	@property
	def order(self) -> int:
		return int(self.mul.shape[0])

	@property
	def identity(self) -> int:
		return 0

	def digest_bytes(self) -> bytes:
		return np.ascontiguousarray(self.mul, dtype=np.int32).tobytes()

	def element_order(self, x: int) -> int:
		k, y = 1, x
		while y != 0:
			y = int(self.mul[y, x])
			k += 1
		return k

	def power(self, x: int, t: int) -> int:
		t %= self.element_order(x)
		y = 0
		base = x
		while t:
			if t & 1:
				y = int(self.mul[y, base])
			base = int(self.mul[base, base])
			t >>= 1
		return y

	def conjugate(self, x: int, g: int) -> int:
		"""g x g^-1."""
		return int(self.mul[self.mul[g, x], self.inv[g]])

	def is_abelian(self) -> bool:
		return bool(np.array_equal(self.mul, self.mul.T))


def _table_dtype(n: int):
	return np.int16 if n < 2 ** 15 else np.int32


def validate_table(mul: np.ndarray, seed: int = 0) -> np.ndarray:
	"""Check group axioms for a 0-based table with identity 0; return the inverse map."""
	n = mul.shape[0]
	if mul.shape != (n, n) or n == 0:
		raise GroupInputError("multiplication table must be square and non-empty")
	if mul.min() < 0 or mul.max() >= n:
		raise GroupInputError("table entry out of range")
	ar = np.arange(n)
	if not np.array_equal(mul[0], ar) or not np.array_equal(mul[:, 0], ar):
		raise GroupInputError("element 0 does not act as identity")
	if not (np.all(np.sort(mul, axis=1) == ar) and np.all(np.sort(mul, axis=0) == ar[:, None])):
		raise GroupInputError("table is not a Latin square")
	inv = np.argmin(mul, axis=1)  # position of the identity in each row
	if not np.all(mul[ar, inv] == 0) or not np.all(mul[inv, ar] == 0):
		raise GroupInputError("left and right inverses differ")
	m64 = mul.astype(np.int64)
	if n <= EXHAUSTIVE_ASSOC_LIMIT:
		for a in range(n):
			if not np.array_equal(m64[m64[a]], m64[a][m64]):
				raise GroupInputError(f"associativity fails with first factor {a}")
	else:
		rng = np.random.default_rng(seed)
		remaining = 10 * n * n
		while remaining > 0:
			k = min(remaining, 1 << 20)
			a, b, c = (rng.integers(0, n, k) for _ in range(3))
			if not np.array_equal(m64[m64[a, b], c], m64[a, m64[b, c]]):
				raise GroupInputError("associativity fails on a sampled triple")
			remaining -= k
	return inv.astype(_table_dtype(n))


def from_table(mul, origin: str = "table", bound: int = DEFAULT_ORDER_BOUND, labels: tuple = ()) -> FiniteGroup:
	mul = np.asarray(mul)
	if mul.shape[0] > bound:
		raise GroupInputError(f"group order {mul.shape[0]} exceeds bound {bound}")
	mul = mul.astype(_table_dtype(mul.shape[0]))
	inv = validate_table(mul)
	mul.setflags(write=False)
	inv.setflags(write=False)
	return FiniteGroup(mul, inv, origin, labels)


# -- permutation groups --------------------------------------------------------

def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
	"""Parse cycle notation like '(1 2 3)(4 5)' into a 0-based image tuple."""
	text = text.strip()
	if not re.fullmatch(r"(\(\s*\d+(\s*[ ,]\s*\d+)*\s*\)\s*)*|\(\s*\)", text):
		raise GroupInputError(f"bad cycle notation: {text!r}")
	cycles = [[int(x) for x in re.split(r"[ ,]+", c.strip())] for c in re.findall(r"\(([^)]*)\)", text) if c.strip()]
	top = max([max(c) for c in cycles] + [degree or 0, 1])
	img = list(range(top))
	seen = set()
	for c in cycles:
		if min(c) < 1 or len(set(c)) != len(c) or seen & set(c):
			raise GroupInputError(f"bad cycle in {text!r}")
		seen |= set(c)
		for a, b in zip(c, c[1:] + c[:1]):
			img[a - 1] = b - 1
	return tuple(img)


def from_permutations(gens: list[tuple[int, ...]], origin: str = "permutations", bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	"""Close generators under composition and build the Cayley table.

	Products are composed left to right: (x*y)(k) = y(x(k)).
	"""
	degree = max([len(g) for g in gens] + [1])
	gens = [tuple(g) + tuple(range(len(g), degree)) for g in gens]
	ident = tuple(range(degree))
	elements = [ident]
	index = {ident: 0}
	k = 0
	while k < len(elements):
		x = elements[k]
		for g in gens:
			y = tuple(g[i] for i in x)
			if y not in index:
				if len(elements) >= bound:
					raise GroupInputError(f"generator closure exceeds bound {bound}")
				index[y] = len(elements)
				elements.append(y)
		k += 1
	perms = np.array(elements, dtype=np.int64)
	n = len(elements)
	mul = np.empty((n, n), dtype=np.int64)
	if degree <= 15:
		w = degree ** np.arange(degree, dtype=np.int64)
		codes = perms @ w
		order = np.argsort(codes)
		sorted_codes = codes[order]
		for x in range(n):
			prod = perms[:, perms[x]]  # prod[y, k] = y(x(k))
			mul[x] = order[np.searchsorted(sorted_codes, prod @ w)]
	else:
		for x in range(n):
			px = elements[x]
			mul[x] = [index[tuple(y[i] for i in px)] for y in elements]
	return from_table(mul, origin, bound, labels=tuple(elements))


def cyclic(k: int) -> FiniteGroup:
	if k < 1:
		raise GroupInputError("cyclic group needs k >= 1")
	a = np.arange(k)
	return from_table((a[:, None] + a[None, :]) % k, f"Zn:{k}")


def dihedral(order: int) -> FiniteGroup:
	"""Dihedral group of the given (even) order; element r^a s^b has index a + k b."""
	if order < 2 or order % 2:
		raise GroupInputError("dihedral order must be even and >= 2")
	k = order // 2
	mul = np.empty((order, order), dtype=np.int64)
	for x in range(order):
		a1, b1 = x % k, x // k
		for y in range(order):
			a2, b2 = y % k, y // k
			# r^a1 s^b1 r^a2 s^b2 = r^(a1 + (-1)^b1 a2) s^(b1+b2)
			a = (a1 + (a2 if b1 == 0 else -a2)) % k
			mul[x, y] = a + k * ((b1 + b2) % 2)
	return from_table(mul, f"D:{order}")


def quaternion() -> FiniteGroup:
	# unit quaternions +-1, +-i, +-j, +-k encoded as (sign, axis)
	names = [(1, 0), (-1, 0), (1, 1), (-1, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)]
	table = {
		(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
		(1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
		(2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
		(3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
	}
	idx = {q: i for i, q in enumerate(names)}
	mul = np.empty((8, 8), dtype=np.int64)
	for x, (s1, u) in enumerate(names):
		for y, (s2, v) in enumerate(names):
			s, w = table[(u, v)]
			mul[x, y] = idx[(s * s1 * s2, w)]
	return from_table(mul, "Q8")


def symmetric(k: int, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	if k < 1:
		raise GroupInputError("symmetric group needs k >= 1")
	gens = [tuple(range(k))]
	if k >= 2:
		gens = [tuple([1, 0] + list(range(2, k))), tuple(list(range(1, k)) + [0])]
	return from_permutations(gens, f"Sn:{k}", bound)


def alternating(k: int, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	if k < 1:
		raise GroupInputError("alternating group needs k >= 1")
	if k < 3:
		return from_permutations([tuple(range(k))], f"An:{k}", bound)
	gens = [tuple([1, 2, 0] + list(range(3, k)))]
	for j in range(3, k):
		# 3-cycles (1 2 j+1) generate A_k
		img = list(range(k))
		img[0], img[1], img[j] = 1, j, 0
		gens.append(tuple(img))
	return from_permutations(gens, f"An:{k}", bound)


def special_linear_2(q: int, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	"""SL(2, q) for a prime q, as 2x2 matrices mod q."""
	from .modp import is_prime
	if not is_prime(q):
		raise GroupInputError("SL2 needs a prime field size")
	els = [m for m in itertools.product(range(q), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % q == 1]
	els.sort(key=lambda m: m != (1, 0, 0, 1))
	if len(els) > bound:
		raise GroupInputError(f"group order {len(els)} exceeds bound {bound}")
	idx = {m: i for i, m in enumerate(els)}
	n = len(els)
	mul = np.empty((n, n), dtype=np.int64)
	for x, (a, b, c, d) in enumerate(els):
		for y, (e, f, g, h) in enumerate(els):
			mul[x, y] = idx[((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)]
	return from_table(mul, f"SL2:{q}", bound)


def direct_product(g: FiniteGroup, h: FiniteGroup, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	"""Element (a, b) has index a * |h| + b."""
	m = h.order
	if g.order * m > bound:
		raise GroupInputError(f"group order {g.order * m} exceeds bound {bound}")
	gm = g.mul.astype(np.int64)
	hm = h.mul.astype(np.int64)
	mul = (gm[:, None, :, None] * m + hm[None, :, None, :]).reshape(g.order * m, g.order * m)
	return from_table(mul, f"{g.origin}x{h.origin}", bound)


_BUILTIN = re.compile(r"(Zn|Sn|An|D|SL2):(\d+)|Q8")


def builtin(spec: str, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	"""Builtin grammar: Zn:k, Sn:k, An:k, D:2k, Q8, SL2:q, products joined by 'x'."""
	parts = spec.strip().split("x")
	groups = []
	for part in parts:
		m = _BUILTIN.fullmatch(part.strip())
		if not m:
			raise GroupInputError(f"unknown builtin group {part!r}")
		if part.strip() == "Q8":
			groups.append(quaternion())
			continue
		kind, k = m.group(1), int(m.group(2))
		maker = {"Zn": cyclic, "D": dihedral}.get(kind)
		if maker:
			groups.append(maker(k))
		else:
			groups.append({"Sn": symmetric, "An": alternating, "SL2": special_linear_2}[kind](k, bound))
	out = groups[0]
	for g in groups[1:]:
		out = direct_product(out, g, bound)
	if out.order > bound:
		raise GroupInputError(f"group order {out.order} exceeds bound {bound}")
	return out


def read_cayley_file(path: str | Path, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
	try:
		n = int(lines[0])
		rows = [[int(t) for t in ln.split()] for ln in lines[1:]]
	except (ValueError, IndexError) as exc:
		raise GroupInputError(f"cannot parse Cayley table file {path}") from exc
	if n > bound:
		raise GroupInputError(f"group order {n} exceeds bound {bound}")
	if len(rows) != n or any(len(r) != n for r in rows):
		raise GroupInputError("Cayley table has the wrong shape")
	return from_table(np.array(rows, dtype=np.int64) - 1, str(path), bound)


def read_permutation_file(path: str | Path, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
	gens = [parse_cycles(ln) for ln in lines]
	if not gens:
		raise GroupInputError("permutation file has no generators")
	return from_permutations(gens, str(path), bound)


def load_group(source: str, bound: int = DEFAULT_ORDER_BOUND) -> FiniteGroup:
	"""Load from a builtin spec or a file; files whose first token is '(' hold permutations."""
	path = Path(source)
	if path.exists():
		head = path.read_text().lstrip()[:1]
		if head == "(":
			return read_permutation_file(path, bound)
		return read_cayley_file(path, bound)
	return builtin(source, bound)


# -- conjugacy classes ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClassData:
	class_of: np.ndarray
	reps: tuple[int, ...]
	sizes: tuple[int, ...]
	inverse_class: tuple[int, ...]
	orders: tuple[int, ...]
	powers: tuple[tuple[int, ...], ...]  # powers[i][t] = class of g_i^t, t < order

	@property
	def n_classes(self) -> int:
		return len(self.reps)

	def power_class(self, i: int, t: int) -> int:
		row = self.powers[i]
		return row[t % len(row)]

	def members(self, i: int) -> np.ndarray:
		return np.nonzero(self.class_of == i)[0]


def conjugacy_classes(g: FiniteGroup) -> ClassData:
	n = g.order
	mul = g.mul.astype(np.int64)
	inv = g.inv.astype(np.int64)
	class_of = np.full(n, -1, dtype=np.int64)
	reps: list[int] = []
	sizes: list[int] = []
	for x in range(n):
		if class_of[x] >= 0:
			continue
		orbit = np.unique(mul[mul[:, x], inv])
		class_of[orbit] = len(reps)
		reps.append(x)
		sizes.append(len(orbit))
	inverse_class = tuple(int(class_of[inv[r]]) for r in reps)
	orders = []
	powers = []
	for r in reps:
		row = [0]
		y = r
		while y != 0:
			row.append(int(class_of[y]))
			y = int(mul[y, r])
		orders.append(len(row))
		powers.append(tuple(row))
	class_of.setflags(write=False)
	return ClassData(class_of, tuple(reps), tuple(sizes), inverse_class, tuple(orders), tuple(powers))


def exponent(g: FiniteGroup, classes: ClassData | None = None) -> int:
	c = classes or conjugacy_classes(g)
	return lcm(*c.orders)


# -- subgroups -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subgroup:
	parent: FiniteGroup
	members: tuple[int, ...]

	def __post_init__(self):
		if self.parent.order % len(self.members):
			raise AssertionError("subgroup order does not divide group order")

	@property
	def order(self) -> int:
		return len(self.members)

	def mask(self) -> np.ndarray:
		m = np.zeros(self.parent.order, dtype=bool)
		m[list(self.members)] = True
		return m


def generate_subgroup(g: FiniteGroup, gens) -> Subgroup:
	mul = g.mul
	inside = np.zeros(g.order, dtype=bool)
	inside[0] = True
	frontier = [0]
	gens = sorted(set(int(x) for x in gens))
	while frontier:
		new = []
		for x in frontier:
			for s in gens:
				y = int(mul[x, s])
				if not inside[y]:
					inside[y] = True
					new.append(y)
		frontier = new
	return Subgroup(g, tuple(int(i) for i in np.nonzero(inside)[0]))


def is_subgroup(g: FiniteGroup, members) -> bool:
	members = np.asarray(sorted(set(int(m) for m in members)))
	if len(members) == 0 or members[0] != 0 or g.order % len(members):
		return False
	mask = np.zeros(g.order, dtype=bool)
	mask[members] = True
	prods = g.mul[np.ix_(members, members)]
	return bool(mask[prods].all())


def normalizer(g: FiniteGroup, s: Subgroup) -> Subgroup:
	mask = s.mask()
	mem = np.array(s.members, dtype=np.int64)
	mul = g.mul.astype(np.int64)
	inv = g.inv.astype(np.int64)
	out = [x for x in range(g.order) if mask[mul[mul[x, mem], inv[x]]].all()]
	return Subgroup(g, tuple(out))


def p_part(n: int, p: int) -> int:
	q = 1
	while n % p == 0:
		n //= p
		q *= p
	return q


def sylow_subgroup(g: FiniteGroup, p: int, seed: int | None = None) -> Subgroup:
	"""Sylow p-subgroup grown inside successive normalizers.

	Starting from the trivial subgroup, a p-element of N(S) outside S is adjoined
	until |S| reaches the full p-part of the order. With a seed, candidate
	elements are scanned in a shuffled order, which can land on a different
	conjugate.
	"""
	target = p_part(g.order, p)
	if target == 1:
		raise ValueError(f"{p} does not divide the group order {g.order}")
	order = list(range(g.order))
	if seed is not None:
		np.random.default_rng(seed).shuffle(order)
	s = Subgroup(g, (0,))
	while s.order < target:
		in_norm = normalizer(g, s).mask()
		inside = s.mask()
		for y in order:
			if not in_norm[y] or inside[y]:
				continue
			o = g.element_order(y)
			x = g.power(y, o // p_part(o, p))
			if not inside[x]:
				s = generate_subgroup(g, list(s.members) + [x])
				break
		else:
			raise AssertionError("normalizer growth stalled")
	if s.order != target:
		raise AssertionError("Sylow growth overshot")
	return s


def induced_group(g: FiniteGroup, s: Subgroup) -> FiniteGroup:
	"""The subgroup as a group in its own right, members re-indexed in sorted order."""
	mem = np.array(s.members, dtype=np.int64)
	pos = np.full(g.order, -1, dtype=np.int64)
	pos[mem] = np.arange(len(mem))
	sub = pos[g.mul.astype(np.int64)[np.ix_(mem, mem)]]
	if (sub < 0).any():
		raise ValueError("members are not closed under multiplication")
	return from_table(sub, f"subgroup of order {len(mem)} in {g.origin}", bound=max(g.order, 1),
		labels=tuple(int(x) for x in mem))
