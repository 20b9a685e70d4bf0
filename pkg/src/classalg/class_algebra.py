"""Regular representation of a partition algebra, Gram matrix, characteristic polynomials."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import exact
from .partitions import GoodPartition, StructTensor


@dataclass(frozen=True)
class IntPolynomial:
	"""Polynomial with exact coefficients, lowest degree first."""

	coeffs: tuple
	var: str = "x"

	def __post_init__(self):
		c = list(self.coeffs)
		while len(c) > 1 and c[-1] == 0:
			c.pop()
		c = [int(x) if isinstance(x, Fraction) and x.denominator == 1 else x for x in c]
		object.__setattr__(self, "coeffs", tuple(c))

	@property
	def degree(self) -> int:
		return len(self.coeffs) - 1

	@property
	def is_integral(self) -> bool:
		return all(Fraction(c).denominator == 1 for c in self.coeffs)

	def __call__(self, x):
		acc = 0
		for c in reversed(self.coeffs):
			acc = acc * x + c
		return acc

	def eval_matrix(self, m: exact.Matrix) -> exact.Matrix:
		n = len(m)
		acc = [[0] * n for _ in range(n)]
		for c in reversed(self.coeffs):
			acc = exact.matmul(acc, m)
			for i in range(n):
				acc[i][i] += c
		return acc

	def mod(self, p: int) -> list[int]:
		out = []
		for c in self.coeffs:
			c = Fraction(c)
			out.append(c.numerator * pow(c.denominator, -1, p) % p)
		return out

	def __str__(self) -> str:
		terms = []
		for k, c in enumerate(self.coeffs):
			if c == 0 and self.degree > 0:
				continue
			mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
			terms.append(f"{c}" if k == 0 else f"{c}*{mono}")
		return " + ".join(terms) if terms else "0"

	def to_json(self) -> list:
		return [c if isinstance(c, int) else str(c) for c in self.coeffs]


def integer_roots(poly: IntPolynomial, low: int, high: int) -> list[int] | None:
	"""Roots with multiplicity if the monic polynomial splits over integers in [low, high]."""
	rest = [Fraction(c) for c in poly.coeffs]
	found = []
	for r in range(low, high + 1):
		while len(rest) > 1:
			# synthetic division by (x - r)
			q = [Fraction(0)] * (len(rest) - 1)
			acc = Fraction(0)
			for k in range(len(rest) - 1, 0, -1):
				acc = acc * r + rest[k]
				q[k - 1] = acc
			if acc * r + rest[0] != 0:
				break
			found.append(r)
			rest = q
		if len(rest) == 1:
			break
	return found if len(rest) == 1 else None


def render_factored(roots: list[int], var: str = "x") -> str:
	parts = []
	for r in sorted(set(roots)):
		k = roots.count(r)
		base = var if r == 0 else (f"({var}-{r})" if r > 0 else f"({var}+{-r})")
		parts.append(base if k == 1 else f"{base}^{k}")
	return "*".join(parts) if parts else "1"


@dataclass(frozen=True, eq=False)
class RegularRep:
	"""matrices[j][l][i] = a[l, i, j]: the action of block sum j on the block-sum basis."""

	matrices: tuple
	tensor: StructTensor

	@property
	def n(self) -> int:
		return len(self.matrices)

	def element(self, coeffs: Sequence) -> exact.Matrix:
		n = self.n
		out = [[0] * n for _ in range(n)]
		for c, m in zip(coeffs, self.matrices):
			if c:
				for i in range(n):
					for j in range(n):
						out[i][j] += c * m[i][j]
		return out


def _stack(t: StructTensor) -> np.ndarray:
	"""stack[j] = A_j as an int64 array."""
	return np.ascontiguousarray(np.transpose(t.a, (2, 0, 1)).astype(np.int64))


def _fits_int64(stack: np.ndarray) -> bool:
	n = stack.shape[0]
	top = int(stack.max(initial=0))
	return n * n * top * top < 2 ** 62


def regular_representation(t: StructTensor) -> RegularRep:
	n = t.n
	stack = _stack(t)
	as_lists = stack.tolist()
	if _fits_int64(stack):
		for i in range(n):
			diff = (stack[i] @ stack[i + 1:] != stack[i + 1:] @ stack[i]).any(axis=(1, 2))
			if diff.any():
				raise AssertionError(f"matrices {i + 1} and {i + 2 + int(np.argmax(diff))} do not commute")
	else:
		for i in range(n):
			for j in range(i + 1, n):
				if exact.matmul(as_lists[i], as_lists[j]) != exact.matmul(as_lists[j], as_lists[i]):
					raise AssertionError(f"matrices {i + 1} and {j + 1} do not commute")
	rep = RegularRep(tuple(as_lists), t)
	ident = t.partition.identity_coeffs
	if ident:
		u = rep.element(ident)
		if u != exact.identity(n):
			raise AssertionError("unit coefficients do not act as the identity")
	return rep


@dataclass(frozen=True)
class GramMatrix:
	"""p[i][j] = Tr(A_i A_j); traces[i] = Tr(A_i)."""

	p: tuple
	det: int
	traces: tuple

	@property
	def semisimple(self) -> bool:
		return self.det != 0


def gram_matrix(rep: RegularRep) -> GramMatrix:
	n = rep.n
	mats = rep.matrices
	stack = _stack(rep.tensor)
	if _fits_int64(stack):
		p = np.einsum("ilk,jkl->ij", stack, stack).tolist()
	else:
		p = [[exact.trace(exact.matmul(mats[i], mats[j])) for j in range(n)] for i in range(n)]
	info = GramMatrix(tuple(tuple(r) for r in p), exact.bareiss_det(p), tuple(exact.trace(m) for m in mats))
	inv = rep.tensor.partition.inverse_block
	for i in range(n):
		for j in range(n):
			if not (p[i][inv[j]] == p[j][inv[i]] == p[inv[i]][j] == p[inv[j]][i]):
				raise AssertionError("inverse symmetry of the Gram matrix fails")
	if not info.semisimple:
		raise AssertionError(f"Gram determinant vanishes for partition {rep.tensor.partition.kind}")
	return info


def char_poly_of_element(rep: RegularRep, coeffs: Sequence) -> IntPolynomial:
	m = rep.element([Fraction(c) for c in coeffs])
	return IntPolynomial(tuple(exact.charpoly_rational(m)), "x")


def casimir_matrix(rep: RegularRep) -> tuple[exact.Matrix, IntPolynomial]:
	"""K = sum_i A_i A_i' / (l_i * total), and its characteristic polynomial."""
	part = rep.tensor.partition
	n = rep.n
	total = part.total
	k = [[Fraction(0)] * n for _ in range(n)]
	for i in range(n):
		prod = exact.matmul(rep.matrices[i], rep.matrices[part.inverse_block[i]])
		w = Fraction(1, part.sizes[i] * total)
		for r in range(n):
			for c in range(n):
				k[r][c] += w * prod[r][c]
	return k, IntPolynomial(tuple(exact.charpoly_rational(k)), "x")
