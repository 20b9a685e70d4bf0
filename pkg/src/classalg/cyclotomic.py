"""Elements of Q(xi_e) stored as coefficient vectors modulo x^e - 1.

The representation is not canonical (no reduction by the cyclotomic polynomial),
so equality is decided by evaluation. A value a = c / den is declared zero when
c vanishes under every embedding xi -> w^j (j a unit mod e, w a fixed primitive
e-th root) modulo two primes q1, q2 = 1 (mod e), and every complex embedding is
below a small tolerance. That is a proof: the first condition puts c in
q1*q2*Z[xi], so a nonzero c would have some conjugate of size >= q1*q2.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np

from . import modp

_PRIME_LIMIT = 1 << 24
COMPLEX_TOL = 1e-9


def units(e: int) -> list[int]:
	return [j for j in range(1, e + 1) if gcd(j, e) == 1] if e > 1 else [1]


def totient(e: int) -> int:
	return len(units(e))


def _mobius(n: int) -> int:
	k = 0
	for q in modp.prime_factors(n):
		if n % (q * q) == 0:
			return 0
		k += 1
	return -1 if k % 2 else 1


class Field:
	"""Evaluation data for exponent e: two check primes, complex and modular power tables."""

	def __init__(self, e: int):
		self.e = e
		self.units = units(e)
		self.primes = modp.primes_congruent_one_below(e, _PRIME_LIMIT, 2)
		self.roots = [modp.root_of_unity(e, q) for q in self.primes]
		k = np.arange(e)
		self.mod_tables = [
			np.array([[pow(w, j * kk % e, q) for kk in range(e)] for j in self.units], dtype=np.int64)
			for q, w in zip(self.primes, self.roots)
		]
		self.cx_table = np.exp(2j * np.pi * np.outer(self.units, k) / e)
		# traces of xi^k over Q (Ramanujan sums)
		phi = len(self.units)
		self.trace = []
		for kk in range(e):
			g = gcd(kk, e)
			self.trace.append(_mobius(e // g) * phi // totient(e // g))


@lru_cache(maxsize=None)
def field(e: int) -> Field:
	return Field(e)


class Cyclotomic:
	"""sum_k coeffs[k] xi_e^k / den."""

	__slots__ = ("e", "coeffs", "den")

	def __init__(self, e: int, coeffs, den: int = 1):
		coeffs = [int(c) for c in coeffs]
		if len(coeffs) != e:
			raise ValueError("coefficient vector length must equal the exponent")
		if den <= 0:
			raise ValueError("denominator must be positive")
		g = gcd(den, *coeffs) if any(coeffs) else den
		self.e = e
		self.coeffs = tuple(c // g for c in coeffs)
		self.den = den // g

	@classmethod
	def rational(cls, e: int, value) -> "Cyclotomic":
		v = Fraction(value)
		return cls(e, [v.numerator] + [0] * (e - 1), v.denominator)

	@classmethod
	def root(cls, e: int, k: int = 1) -> "Cyclotomic":
		c = [0] * e
		c[k % e] = 1
		return cls(e, c)

	def lift(self, e: int) -> "Cyclotomic":
		if e == self.e:
			return self
		if e % self.e:
			raise ValueError("can only lift to a multiple of the exponent")
		s = e // self.e
		c = [0] * e
		for k, v in enumerate(self.coeffs):
			c[k * s] = v
		return Cyclotomic(e, c, self.den)

	def _coerce(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
		if isinstance(other, Cyclotomic):
			e = lcm(self.e, other.e)
			return self.lift(e), other.lift(e)
		return self, Cyclotomic.rational(self.e, other)

	def __add__(self, other):
		a, b = self._coerce(other)
		d = lcm(a.den, b.den)
		return Cyclotomic(a.e, [x * (d // a.den) + y * (d // b.den) for x, y in zip(a.coeffs, b.coeffs)], d)

	__radd__ = __add__

	def __neg__(self):
		return Cyclotomic(self.e, [-x for x in self.coeffs], self.den)

	def __sub__(self, other):
		return self + (-other if isinstance(other, Cyclotomic) else -Fraction(other))

	def __rsub__(self, other):
		return (-self) + other

	def __mul__(self, other):
		if not isinstance(other, Cyclotomic):
			v = Fraction(other)
			return Cyclotomic(self.e, [x * v.numerator for x in self.coeffs], self.den * v.denominator)
		a, b = self._coerce(other)
		e = a.e
		out = [0] * e
		bc = [(k, y) for k, y in enumerate(b.coeffs) if y]
		for i, x in enumerate(a.coeffs):
			if x:
				for k, y in bc:
					out[(i + k) % e] += x * y
		return Cyclotomic(e, out, a.den * b.den)

	__rmul__ = __mul__

	def __truediv__(self, other):
		if isinstance(other, Cyclotomic):
			r = other.to_rational()
			if r is None:
				# multiply through by the other conjugates so the divisor becomes its norm
				a, b = self._coerce(other)
				conj = [b.galois(t) for t in units(b.e)[1:]]
				for c in conj:
					a, b = a * c, b * c
				r = b.to_rational()
				self = a
			other = r
		v = Fraction(other)
		if v == 0:
			raise ZeroDivisionError("division by zero")
		sign = -1 if v < 0 else 1
		return Cyclotomic(self.e, [sign * x * v.denominator for x in self.coeffs], self.den * abs(v.numerator))

	def __rtruediv__(self, other):
		return Cyclotomic.rational(self.e, other) / self

	def __pow__(self, k: int):
		out = Cyclotomic.rational(self.e, 1)
		base = self
		while k:
			if k & 1:
				out = out * base
			base = base * base
			k >>= 1
		return out

	def galois(self, t: int) -> "Cyclotomic":
		"""Image under xi -> xi^t."""
		c = [0] * self.e
		for k, v in enumerate(self.coeffs):
			c[k * t % self.e] += v
		return Cyclotomic(self.e, c, self.den)

	def conj(self) -> "Cyclotomic":
		return self.galois(-1)

	# -- evaluation ----------------------------------------------------------

	def embeddings_mod(self) -> list[np.ndarray]:
		f = field(self.e)
		out = []
		for q, tab in zip(f.primes, f.mod_tables):
			c = np.array([x % q for x in self.coeffs], dtype=np.int64)
			dinv = modp.inv(self.den, q)
			out.append((tab @ c) % q * dinv % q)
		return out

	def embeddings_complex(self) -> np.ndarray:
		return field(self.e).cx_table @ np.array(self.coeffs, dtype=float) / self.den

	def __complex__(self) -> complex:
		return complex(self.embeddings_complex()[0])

	def mod(self, p: int, omega: int) -> int:
		"""Image in F_p under xi -> omega (omega a primitive e-th root mod p)."""
		acc = 0
		w = 1
		for c in self.coeffs:
			acc = (acc + c * w) % p
			w = w * omega % p
		return acc * modp.inv(self.den, p) % p

	def is_zero(self) -> bool:
		if not any(self.coeffs):
			return True
		f = field(self.e)
		for q, tab in zip(f.primes, f.mod_tables):
			c = np.array([x % q for x in self.coeffs], dtype=np.int64)
			if ((tab @ c) % q).any():
				return False
		scale = (1 + sum(abs(x) for x in self.coeffs)) / self.den
		return bool(np.all(np.abs(self.embeddings_complex()) <= COMPLEX_TOL * scale))

	def __eq__(self, other) -> bool:
		if not isinstance(other, (Cyclotomic, int, Fraction)):
			return NotImplemented
		return (self - other).is_zero()

	def __hash__(self):
		raise TypeError("Cyclotomic values are not hashable; use key()")

	def key(self) -> tuple[int, ...]:
		"""Images at the first check prime under all embeddings; equal values give equal keys."""
		return tuple(int(x) for x in self.embeddings_mod()[0])

	def trace_rational(self) -> Fraction:
		f = field(self.e)
		return Fraction(sum(c * t for c, t in zip(self.coeffs, f.trace)), self.den * len(f.units))

	def to_rational(self) -> Fraction | None:
		r = self.trace_rational()
		return r if (self - r).is_zero() else None

	def to_json(self):
		r = self.to_rational()
		if r is not None:
			return r.numerator if r.denominator == 1 else str(r)
		out = {"exponent": self.e, "coeffs": list(self.coeffs)}
		if self.den != 1:
			out["den"] = self.den
		return out

	def __str__(self) -> str:
		r = self.to_rational()
		if r is not None:
			return str(r)
		terms = []
		for k, c in enumerate(self.coeffs):
			if c:
				if k == 0:
					terms.append(str(c))
					continue
				mono = f"z{self.e}" if k == 1 else f"z{self.e}^{k}"
				terms.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
		body = " + ".join(terms).replace("+ -", "- ")
		return body if self.den == 1 else f"({body})/{self.den}"

	def __repr__(self) -> str:
		return f"Cyclotomic({self})"


class Shadow:
	"""Arrays of cyclotomic values held only through their embeddings.

	mod has shape (2, phi, *S) with entries reduced modulo the field's check primes;
	cx has shape (phi, *S). Ring operations act entrywise with broadcasting over S.
	"""

	def __init__(self, field: Field, mod: np.ndarray, cx: np.ndarray):
		self.field = field
		self.mod = mod
		self.cx = cx

	@classmethod
	def of(cls, values, e: int) -> "Shadow":
		arr = np.array(values, dtype=object)
		shape = arr.shape
		flat = [v if isinstance(v, Cyclotomic) else Cyclotomic.rational(e, v) for v in arr.ravel()]
		flat = [v.lift(e) for v in flat]
		f = field(e)
		phi = len(f.units)
		mod = np.zeros((2, phi, len(flat)), dtype=np.int64)
		cx = np.zeros((phi, len(flat)), dtype=complex)
		for k, v in enumerate(flat):
			for s, m in enumerate(v.embeddings_mod()):
				mod[s, :, k] = m
			cx[:, k] = v.embeddings_complex()
		return cls(f, mod.reshape((2, phi) + shape), cx.reshape((phi,) + shape))

	@classmethod
	def rationals(cls, values, e: int) -> "Shadow":
		arr = np.array(values, dtype=object)
		f = field(e)
		phi = len(f.units)
		mod = np.zeros((2, phi) + arr.shape, dtype=np.int64)
		for s, q in enumerate(f.primes):
			r = np.array([Fraction(v).numerator % q * modp.inv(Fraction(v).denominator, q) % q for v in arr.ravel()],
				dtype=np.int64).reshape(arr.shape)
			mod[s] = r
		cx = np.broadcast_to(np.array([float(Fraction(v)) for v in arr.ravel()]).reshape(arr.shape), (phi,) + arr.shape).astype(complex)
		return cls(f, mod, cx)

	def _aligned(self, k: int) -> tuple[np.ndarray, np.ndarray]:
		"""mod and cx with the value shape left-padded to k dimensions."""
		pad = (1,) * (k - len(self.shape))
		return (self.mod.reshape(self.mod.shape[:2] + pad + self.shape),
			self.cx.reshape(self.cx.shape[:1] + pad + self.shape))

	def _binary(self, other, op_mod, op_cx) -> "Shadow":
		o = other if isinstance(other, Shadow) else Shadow.rationals(other, self.field.e)
		k = max(len(self.shape), len(o.shape))
		am, ac = self._aligned(k)
		bm, bc = o._aligned(k)
		m = op_mod(am, bm)
		return Shadow(self.field, m % self._qb(m), op_cx(ac, bc))

	def _qb(self, a: np.ndarray) -> np.ndarray:
		return np.array(self.field.primes, dtype=np.int64).reshape((2,) + (1,) * (a.ndim - 1))

	def __add__(self, other):
		return self._binary(other, np.add, np.add)

	def __sub__(self, other):
		return self._binary(other, np.subtract, np.subtract)

	def __mul__(self, other):
		return self._binary(other, np.multiply, np.multiply)

	def __rsub__(self, other):
		return self._binary(other, lambda a, b: b - a, lambda a, b: b - a)

	def __neg__(self):
		return Shadow(self.field, (-self.mod) % self._qb(self.mod), -self.cx)

	__radd__ = __add__
	__rmul__ = __mul__

	def __getitem__(self, idx):
		if not isinstance(idx, tuple):
			idx = (idx,)
		return Shadow(self.field, self.mod[(slice(None), slice(None)) + idx], self.cx[(slice(None),) + idx])

	def expand(self, axis: int) -> "Shadow":
		"""Insert a new broadcast axis at position `axis` of the value shape."""
		return Shadow(self.field, np.expand_dims(self.mod, axis + 2), np.expand_dims(self.cx, axis + 1))

	def sum(self, axis: int) -> "Shadow":
		m = self.mod.sum(axis=axis + 2)
		return Shadow(self.field, m % self._qb(m), self.cx.sum(axis=axis + 1))

	@property
	def shape(self) -> tuple:
		return self.cx.shape[1:]

	def magnitude(self) -> float:
		return float(np.abs(self.cx).max()) if self.cx.size else 0.0

	def zero_mask(self, tol: float = 1e-6) -> np.ndarray:
		"""Entrywise zero test. The modular images decide; the complex images only
		need to be far below q1*q2 to exclude nonzero multiples of it, so `tol` can be
		scaled to the size of the operands that produced this array."""
		mod_zero = (self.mod == 0).all(axis=(0, 1))
		return mod_zero & (np.abs(self.cx) <= tol).all(axis=0)

	def all_zero(self, tol: float = 1e-6) -> bool:
		return bool(self.zero_mask(tol).all())
