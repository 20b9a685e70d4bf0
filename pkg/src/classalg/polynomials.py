"""Frobenius and degree polynomials, p'-parts, form matching, round trips, lattices."""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import exact, modp
from .characters import CharacterTable, PartitionTable
from .class_algebra import IntPolynomial, RegularRep, casimir_matrix, integer_roots, render_factored
from .cyclotomic import Cyclotomic, Shadow, field
from .partitions import GoodPartition, StructTensor


# -- Frobenius polynomial ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearFormProduct:
	"""prod_t gamma_t(x)^mults[t] with gamma_t(x) = sum_i forms[t][i] x_i."""

	forms: tuple[tuple[Cyclotomic, ...], ...]
	mults: tuple[int, ...]
	m: int
	partition: GoodPartition | None = None

	@property
	def n_vars(self) -> int:
		return len(self.forms[0]) if self.forms else 0

	def form_value(self, t: int, x) -> Cyclotomic:
		acc = Cyclotomic.rational(self.m, 0)
		for c, v in zip(self.forms[t], x):
			if v:
				acc = acc + c * v
		return acc

	def evaluate(self, x) -> Fraction:
		"""Exact value at a rational point; the product is Galois stable, hence rational."""
		acc = Cyclotomic.rational(self.m, 1)
		for t, k in enumerate(self.mults):
			acc = acc * self.form_value(t, x) ** k
		r = acc.to_rational()
		if r is None:
			raise ArithmeticError("product of the linear forms is not rational")
		return r

	def shadow(self) -> Shadow:
		return Shadow.of(self.forms, self.m)

	def to_json(self) -> dict:
		out = {"forms": [{"coeffs": [c.to_json() for c in f], "multiplicity": k} for f, k in zip(self.forms, self.mults)]}
		if self.partition is not None:
			out["partition"] = self.partition.describe()
		return out

	def render(self) -> str:
		parts = []
		for f, k in zip(self.forms, self.mults):
			terms = []
			for i, c in enumerate(f):
				if c == 0:
					continue
				s = str(c)
				coef = "" if s == "1" else "-" if s == "-1" else (f"({s})" if " " in s else s)
				terms.append(f"{coef}x{i + 1}")
			body = " + ".join(terms).replace("+ -", "- ")
			parts.append(f"({body})" + (f"^{k}" if k != 1 else ""))
		return "*".join(parts)


def frobenius_polynomial(pt: PartitionTable) -> LinearFormProduct:
	n = pt.partition.n
	forms = tuple(tuple(pt.lam(i, t) for i in range(n)) for t in range(pt.n))
	keys = {tuple(tuple(c.key()) for c in f) for f in forms}
	if len(keys) != len(forms):
		raise ArithmeticError("repeated linear form")
	if pt.partition.identity_is_singleton() and any(not f[0] == 1 for f in forms):
		raise ArithmeticError("identity coefficient of a form is not 1")
	return LinearFormProduct(forms, pt.d, pt.ordinary.m, pt.partition)


# -- degree polynomial ---------------------------------------------------------

@dataclass(frozen=True)
class DegreePolynomial:
	poly: IntPolynomial
	route: str
	roots: tuple[int, ...]

	def render(self) -> str:
		return render_factored(list(self.roots))

	def to_json(self) -> dict:
		return {"route": self.route, "coeffs": self.poly.to_json(), "roots": list(self.roots), "factored": self.render()}


def _from_roots(roots) -> IntPolynomial:
	c = [1]
	for r in roots:
		c = [(c[k - 1] if k else 0) - r * (c[k] if k < len(c) else 0) for k in range(len(c) + 1)]
	return IntPolynomial(tuple(c))


def degree_polynomial_casimir(rep: RegularRep) -> DegreePolynomial:
	"""Reverse the Casimir characteristic polynomial: its roots 1/d_t become d_t."""
	_, cp = casimir_matrix(rep)
	c = [Fraction(x) for x in cp.coeffs]
	if c[0] == 0:
		raise ArithmeticError("Casimir element is singular")
	rev = [x / c[0] for x in reversed(c)]
	poly = IntPolynomial(tuple(rev))
	if not poly.is_integral:
		raise ArithmeticError("degree polynomial has non-integer coefficients")
	roots = integer_roots(poly, 1, rep.tensor.partition.total)
	if roots is None:
		raise ArithmeticError("degree polynomial does not split over the positive integers")
	return DegreePolynomial(poly, "casimir", tuple(roots))


def degree_polynomial_characters(d) -> DegreePolynomial:
	roots = tuple(sorted(d))
	return DegreePolynomial(_from_roots(roots), "characters", roots)


def degree_polynomial(rep: RegularRep, pt: PartitionTable | None = None) -> tuple[DegreePolynomial, DegreePolynomial | None]:
	a = degree_polynomial_casimir(rep)
	if pt is None:
		return a, None
	b = degree_polynomial_characters(pt.d)
	if a.poly != b.poly:
		raise ArithmeticError(f"degree polynomial routes disagree: {a.poly} vs {b.poly}")
	return a, b


# -- p'-parts ------------------------------------------------------------------

@dataclass(frozen=True)
class PPrimePart:
	"""D mod p = x^stripped * reduced, with reduced(0) != 0."""

	p: int
	stripped: int
	reduced: tuple[int, ...]

	def root_multiplicities(self) -> dict[int, int]:
		out: dict[int, int] = {}
		rest = list(self.reduced)
		for r in sorted(set(modp.roots(list(rest), self.p))) if len(rest) > 1 else []:
			while len(rest) > 1 and modp.peval(rest, r, self.p) == 0:
				rest, _ = modp.pdivmod(rest, [(-r) % self.p, 1], self.p)
				out[r] = out.get(r, 0) + 1
		return out

	def render(self) -> str:
		mult = self.root_multiplicities()
		if not mult:
			return "1"
		parts = []
		for r in sorted(mult, key=lambda r: (-r) % self.p):
			base = f"(x+{(-r) % self.p})"
			parts.append(base if mult[r] == 1 else f"{base}^{mult[r]}")
		return "*".join(parts)

	def to_json(self) -> dict:
		return {"p": self.p, "stripped": self.stripped, "coeffs": list(self.reduced), "factored": self.render()}


def p_prime_part(d: DegreePolynomial | IntPolynomial, p: int) -> PPrimePart:
	poly = d.poly if isinstance(d, DegreePolynomial) else d
	c = poly.mod(p)
	s = 0
	while s < len(c) - 1 and c[s] == 0:
		s += 1
	return PPrimePart(p, s, tuple(modp.ptrim(c[s:])))


# -- equality up to a permutation of variables ---------------------------------

def _form_ids(forms, m: int, ids: dict) -> list[tuple[int, ...]]:
	out = []
	for f in forms:
		row = []
		for c in f:
			k = tuple(c.lift(m).key())
			row.append(ids.setdefault(k, len(ids)))
		out.append(tuple(row))
	return out


def equal_by_permutation(f: LinearFormProduct, h: LinearFormProduct) -> tuple[bool, tuple[int, ...] | None]:
	"""Search sigma with sigma(0) = 0 such that the forms of f, read with variable i
	renamed to sigma(i), are the forms of h with the same multiplicities."""
	n = f.n_vars
	if n != h.n_vars or len(f.forms) != len(h.forms) or sorted(f.mults) != sorted(h.mults):
		return False, None
	m = lcm(f.m, h.m)
	ids: dict = {}
	fa = _form_ids(f.forms, m, ids)
	ha = _form_ids(h.forms, m, ids)

	def column_sig(rows, mults, i):
		return tuple(sorted(Counter((r[i], k) for r, k in zip(rows, mults)).items()))

	fsig = [column_sig(fa, f.mults, i) for i in range(n)]
	hsig = [column_sig(ha, h.mults, i) for i in range(n)]
	if sorted(fsig) != sorted(hsig) or fsig[0] != hsig[0]:
		return False, None
	cand = [[j for j in range(n) if hsig[j] == fsig[i]] for i in range(n)]
	cand[0] = [0]
	order = sorted(range(n), key=lambda i: (i != 0, len(cand[i])))
	sigma = [-1] * n
	used = [False] * n

	def consistent(k: int) -> bool:
		vs = order[:k + 1]
		left = Counter((tuple(r[i] for i in vs), mm) for r, mm in zip(fa, f.mults))
		right = Counter((tuple(r[sigma[i]] for i in vs), mm) for r, mm in zip(ha, h.mults))
		return left == right

	def search(k: int) -> bool:
		if k == n:
			return True
		i = order[k]
		for j in cand[i]:
			if not used[j]:
				sigma[i] = j
				used[j] = True
				if consistent(k) and search(k + 1):
					return True
				used[j] = False
		sigma[i] = -1
		return False

	if search(0):
		return True, tuple(sigma)
	return False, None


# -- reconstruction of the tensor from the forms -------------------------------

@dataclass(frozen=True)
class Reconstruction:
	a: np.ndarray
	sizes: tuple[int, ...]
	inverse: tuple[int, ...]
	degree_products: tuple[int, ...]


def tensor_from_forms(f: LinearFormProduct) -> np.ndarray:
	"""Solve lam_i lam_j = sum_l a_lij lam_l for the integer tensor, then verify exactly."""
	n = f.n_vars
	fl = field(f.m)
	q, w = fl.primes[0], fl.roots[0]
	lam = np.array([[f.forms[t][i].mod(q, w) for t in range(n)] for i in range(n)], dtype=np.int64)
	rinv = modp.solve(lam, np.eye(n, dtype=np.int64), q)
	if rinv is None:
		raise ArithmeticError("the eigen matrix is singular")
	prod = lam[:, None, :] * lam[None, :, :] % q
	a = np.zeros((n, n, n), dtype=np.int64)
	for i in range(n):
		a[:, i, :] = modp.matmul(prod[i], rinv, q).T
	a = np.where(a > q // 2, a - q, a)
	if (a < 0).any():
		raise ArithmeticError("reconstructed structure constants are negative")
	x = Shadow.of([[f.forms[t][i] for t in range(n)] for i in range(n)], f.m)
	lhs = x[:, None, :] * x[None, :, :]
	rhs = (x[:, None, None, :] * Shadow.rationals(a.tolist(), f.m)[:, :, :, None]).sum(0)
	if not (lhs - rhs).all_zero(1e-6 * (1 + lhs.magnitude())):
		raise ArithmeticError("reconstructed structure constants fail verification")
	return a


def table_from_frobenius(f: LinearFormProduct) -> Reconstruction:
	"""Tensor, block sizes and degree products from the Frobenius polynomial alone.

	Needs the identity block to be a block of its own (coefficient 1 in every form).
	"""
	a = tensor_from_forms(f)
	n = f.n_vars
	if any(a[l, 0, j] != (l == j) for l in range(n) for j in range(n)):
		raise ArithmeticError("first variable is not the identity block")
	inverse = []
	sizes = []
	for i in range(n):
		js = [j for j in range(n) if a[0, i, j]]
		if len(js) != 1:
			raise ArithmeticError("cannot identify the inverse block")
		inverse.append(js[0])
		sizes.append(int(a[0, i, js[0]]))
	total = sum(sizes)
	mats = [[[int(a[l, i, j]) for i in range(n)] for l in range(n)] for j in range(n)]
	k = [[Fraction(0)] * n for _ in range(n)]
	for i in range(n):
		pr = exact.matmul(mats[i], mats[inverse[i]])
		for r in range(n):
			for c in range(n):
				k[r][c] += Fraction(pr[r][c], sizes[i] * total)
	cp = [Fraction(x) for x in exact.charpoly_rational(k)]
	poly = IntPolynomial(tuple(x / cp[0] for x in reversed(cp)))
	roots = integer_roots(poly, 1, total) if poly.is_integral else None
	if roots is None:
		raise ArithmeticError("reconstructed degree polynomial does not split")
	return Reconstruction(a, tuple(sizes), tuple(inverse), tuple(roots))


# -- group determinant ---------------------------------------------------------

@dataclass(frozen=True)
class DeterminantTrial:
	point: tuple[int, ...]
	determinant: int
	product: Fraction

	@property
	def agrees(self) -> bool:
		return self.determinant == self.product


@dataclass(frozen=True)
class DeterminantReport:
	seed: int
	trials: tuple[DeterminantTrial, ...]
	mult_sum: int

	@property
	def ok(self) -> bool:
		return all(t.agrees for t in self.trials)

	def to_json(self) -> dict:
		return {"seed": self.seed, "ok": self.ok, "multiplicity_sum": self.mult_sum,
			"trials": [{"point": list(t.point), "determinant": str(t.determinant), "product": str(t.product),
				"agrees": t.agrees} for t in self.trials]}


def collapsed_determinant(part: GoodPartition, x) -> int:
	g = part.group
	val = np.zeros(g.order, dtype=object)
	for b in range(part.n):
		val[part.elements(b)] = int(x[b])
	# entry (P, Q) is the variable of P Q^-1
	idx = g.mul[:, g.inv].astype(np.int64)
	return exact.bareiss_det(val[idx].tolist())


def group_determinant_check(part: GoodPartition, f: LinearFormProduct, trials: int = 20, seed: int = 0,
		max_order: int = 60) -> DeterminantReport:
	if part.group.order > max_order:
		raise ValueError(f"group order {part.group.order} exceeds {max_order}")
	if not part.identity_is_singleton() or part.total != part.group.order:
		raise ValueError("the determinant check needs a partition of all classes with the identity alone")
	rng = random.Random(seed)
	points = [tuple([1] + [0] * (part.n - 1))]
	while len(points) < trials:
		points.append(tuple(rng.randint(-9, 9) for _ in range(part.n)))
	out = tuple(DeterminantTrial(pt, collapsed_determinant(part, pt), f.evaluate(pt)) for pt in points[:trials])
	return DeterminantReport(seed, out, sum(f.mults))


# -- class sizes from the table ------------------------------------------------

def class_sizes_from_table(ct: CharacterTable) -> tuple[int, ...]:
	"""l_i = |G| / sum_t |chi_t(g_i)|^2."""
	out = []
	for i in range(ct.n):
		s = sum((v * v.conj() for v in ct.values[i]), Cyclotomic.rational(ct.m, 0)).to_rational()
		if s is None or ct.group.order % s:
			raise ArithmeticError(f"centralizer order of class {i + 1} is not an integer divisor")
		out.append(int(ct.group.order / s))
	return tuple(out)


# -- normal subgroup lattice ---------------------------------------------------

@dataclass(frozen=True)
class Lattice:
	nodes: tuple[tuple[int, ...], ...]
	sizes: tuple[int, ...]
	edges: tuple[tuple[int, int], ...]  # covering relations, smaller -> larger

	def to_json(self) -> dict:
		return {"nodes": [{"classes": [c + 1 for c in nd], "size": s} for nd, s in zip(self.nodes, self.sizes)],
			"edges": [list(e) for e in self.edges]}

	def render(self) -> str:
		lines = []
		children = {k: [b for a, b in self.edges if a == k] for k in range(len(self.nodes))}

		def walk(k: int, depth: int, seen: set) -> None:
			mark = " (see above)" if k in seen else ""
			lines.append("  " * depth + f"[{self.sizes[k]}] classes {','.join(str(c + 1) for c in self.nodes[k])}{mark}")
			if k in seen:
				return
			seen.add(k)
			for c in children[k]:
				walk(c, depth + 1, seen)

		walk(0, 0, set())
		return "\n".join(lines)


def _close(a: np.ndarray, start: set[int]) -> frozenset[int]:
	s = set(start) | {0}
	while True:
		idx = sorted(s)
		hit = a[:, idx][:, :, idx].reshape(a.shape[0], -1).any(axis=1)
		new = set(np.nonzero(hit)[0].tolist()) | s
		if new == s:
			return frozenset(s)
		s = new


def normal_subgroup_lattice(t: StructTensor) -> Lattice:
	"""Closed class subsets: no product of two members has a component outside."""
	if t.partition.kind != "trivial":
		raise ValueError("the lattice is computed from the class algebra")
	a = t.a
	n = t.n
	irreducible = {_close(a, {c}) for c in range(n)}
	found = set(irreducible) | {frozenset({0})}
	frontier = list(found)
	while frontier:
		nxt = []
		for x in frontier:
			for y in irreducible:
				z = _close(a, set(x | y))
				if z not in found:
					found.add(z)
					nxt.append(z)
		frontier = nxt
	sizes_of = t.partition.sizes
	nodes = sorted(found, key=lambda s: (sum(sizes_of[c] for c in s), sorted(s)))
	sizes = tuple(sum(sizes_of[c] for c in s) for s in nodes)
	edges = []
	for i, x in enumerate(nodes):
		for j, y in enumerate(nodes):
			if x < y and not any(x < z < y for z in nodes):
				edges.append((i, j))
	return Lattice(tuple(tuple(sorted(s)) for s in nodes), sizes, tuple(edges))
