"""Arithmetic over prime fields: primes, roots of unity, polynomials and matrices mod p."""
from __future__ import annotations

import random

import numpy as np


def is_prime(n: int) -> bool:
	if n < 2:
		return False
	for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
		if n % q == 0:
			return n == q
	d, s = n - 1, 0
	while d % 2 == 0:
		d //= 2
		s += 1
	# deterministic for n < 3.3e24
	for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
		x = pow(a, d, n)
		if x in (1, n - 1):
			continue
		for _ in range(s - 1):
			x = x * x % n
			if x == n - 1:
				break
		else:
			return False
	return True


def prime_factors(n: int) -> list[int]:
	out = []
	q = 2
	while q * q <= n:
		if n % q == 0:
			out.append(q)
			while n % q == 0:
				n //= q
		q += 1
	if n > 1:
		out.append(n)
	return out


def prime_congruent_one(m: int, above: int) -> int:
	"""Smallest prime p with p = 1 mod m and p > above."""
	k = max(1, above // m)
	while True:
		p = k * m + 1
		if p > above and is_prime(p):
			return p
		k += 1


def primes_congruent_one_below(m: int, limit: int, count: int) -> list[int]:
	"""The `count` largest primes below `limit` that are 1 mod m."""
	out = []
	k = (limit - 2) // m
	while len(out) < count and k > 0:
		p = k * m + 1
		if is_prime(p):
			out.append(p)
		k -= 1
	if len(out) < count:
		raise ValueError(f"not enough primes 1 mod {m} below {limit}")
	return out


def generator(p: int) -> int:
	if p == 2:
		return 1
	qs = prime_factors(p - 1)
	g = 2
	while any(pow(g, (p - 1) // q, p) == 1 for q in qs):
		g += 1
	return g


def root_of_unity(m: int, p: int) -> int:
	"""A fixed primitive m-th root of unity in F_p (requires m | p - 1)."""
	if (p - 1) % m:
		raise ValueError(f"{m} does not divide {p} - 1")
	return pow(generator(p), (p - 1) // m, p)


def inv(a: int, p: int) -> int:
	a %= p
	if a == 0:
		raise ZeroDivisionError("inverse of 0 mod p")
	return pow(a, p - 2, p)


def sym(a: int, p: int) -> int:
	"""Symmetric representative of a mod p in (-p/2, p/2]."""
	a %= p
	return a - p if a > p // 2 else a


# -- polynomials: coefficient lists, lowest degree first -----------------------

def ptrim(f: list[int]) -> list[int]:
	while f and f[-1] == 0:
		f = f[:-1]
	return f


def pmul(f: list[int], g: list[int], p: int) -> list[int]:
	if not f or not g:
		return []
	out = [0] * (len(f) + len(g) - 1)
	for i, a in enumerate(f):
		if a:
			for j, b in enumerate(g):
				out[i + j] = (out[i + j] + a * b) % p
	return ptrim(out)


def pdivmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
	g = ptrim([c % p for c in g])
	if not g:
		raise ZeroDivisionError("polynomial division by zero")
	f = [c % p for c in f]
	lead = inv(g[-1], p)
	dg = len(g) - 1
	q = [0] * max(len(f) - dg, 1)
	for k in range(len(f) - 1, dg - 1, -1):
		c = f[k] * lead % p
		if c:
			q[k - dg] = c
			for j in range(dg + 1):
				f[k - dg + j] = (f[k - dg + j] - c * g[j]) % p
	return ptrim(q), ptrim(f[:dg])


def pmonic(f: list[int], p: int) -> list[int]:
	f = ptrim([c % p for c in f])
	if not f:
		return f
	c = inv(f[-1], p)
	return [a * c % p for a in f]


def pgcd(f: list[int], g: list[int], p: int) -> list[int]:
	f, g = ptrim([c % p for c in f]), ptrim([c % p for c in g])
	while g:
		f, g = g, pdivmod(f, g, p)[1]
	return pmonic(f, p)


def ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
	result = [1]
	base = pdivmod(base, mod, p)[1]
	while e:
		if e & 1:
			result = pdivmod(pmul(result, base, p), mod, p)[1]
		base = pdivmod(pmul(base, base, p), mod, p)[1]
		e >>= 1
	return result


def peval(f: list[int], x: int, p: int) -> int:
	acc = 0
	for c in reversed(f):
		acc = (acc * x + c) % p
	return acc


def roots(f: list[int], p: int, seed: int = 0) -> list[int]:
	"""Distinct roots of f in F_p, sorted.

	The split part gcd(f, x^p - x) is found by repeated squaring modulo f and then
	broken apart with random shifts (Cantor-Zassenhaus), so the cost does not scale
	with p.
	"""
	f = pmonic(f, p)
	if len(f) <= 1:
		return []
	if p == 2:
		return [x for x in (0, 1) if peval(f, x, p) == 0]
	xp = ppowmod([0, 1], p, f, p)
	sub = xp + [0] * max(0, 2 - len(xp))
	sub[1] = (sub[1] - 1) % p
	g = pgcd(f, ptrim(sub), p)
	rng = random.Random(seed)
	found: list[int] = []
	stack = [g]
	while stack:
		h = stack.pop()
		d = len(h) - 1
		if d == 0:
			continue
		if d == 1:
			found.append((-h[0]) * inv(h[1], p) % p)
			continue
		while True:
			a = rng.randrange(p)
			w = ppowmod([a, 1], (p - 1) // 2, h, p)
			w = w + [0] * max(0, 1 - len(w))
			w[0] = (w[0] - 1) % p
			s = pgcd(h, ptrim(w), p)
			if 0 < len(s) - 1 < d:
				stack.append(s)
				stack.append(pdivmod(h, s, p)[0])
				break
	return sorted(found)


# -- matrices over F_p (numpy int64; requires p < 2**31) ----------------------

def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
	if p < (1 << 26):
		return (a @ b) % p
	return np.asarray((a.astype(object) @ b.astype(object)) % p, dtype=np.int64)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
	a = np.array(a, dtype=np.int64) % p
	rows, cols = a.shape
	pivots: list[int] = []
	r = 0
	for c in range(cols):
		if r == rows:
			break
		nz = np.nonzero(a[r:, c])[0]
		if len(nz) == 0:
			continue
		k = r + int(nz[0])
		if k != r:
			a[[r, k]] = a[[k, r]]
		a[r] = a[r] * inv(int(a[r, c]), p) % p
		for i in range(rows):
			if i != r and a[i, c]:
				a[i] = (a[i] - int(a[i, c]) * a[r]) % p
		pivots.append(c)
		r += 1
	return a, pivots


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
	"""Basis of {v : a v = 0} as the columns of the returned matrix."""
	red, pivots = rref(a, p)
	cols = a.shape[1]
	free = [c for c in range(cols) if c not in pivots]
	basis = np.zeros((cols, len(free)), dtype=np.int64)
	for k, fcol in enumerate(free):
		basis[fcol, k] = 1
		for r, pc in enumerate(pivots):
			basis[pc, k] = (-int(red[r, fcol])) % p
	return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
	"""Solve a x = b for square invertible a (b may have several columns)."""
	n = a.shape[0]
	b2 = b.reshape(n, -1)
	red, pivots = rref(np.hstack([a % p, b2 % p]), p)
	if pivots[:n] != list(range(n)):
		raise ZeroDivisionError("singular matrix mod p")
	x = red[:n, n:]
	return x.reshape(b.shape)


def det(a: np.ndarray, p: int) -> int:
	a = np.array(a, dtype=np.int64) % p
	n = a.shape[0]
	d = 1
	for c in range(n):
		nz = np.nonzero(a[c:, c])[0]
		if len(nz) == 0:
			return 0
		k = c + int(nz[0])
		if k != c:
			a[[c, k]] = a[[k, c]]
			d = -d
		piv = int(a[c, c])
		d = d * piv % p
		pinv = inv(piv, p)
		for i in range(c + 1, n):
			if a[i, c]:
				a[i] = (a[i] - int(a[i, c]) * pinv % p * a[c]) % p
	return d % p


def charpoly(a: np.ndarray, p: int) -> list[int]:
	"""Characteristic polynomial det(xI - a) mod p, lowest degree first.

	Uses reduction to Hessenberg form, which only needs field operations.
	"""
	h = np.array(a, dtype=np.int64) % p
	n = h.shape[0]
	for c in range(n - 2):
		nz = np.nonzero(h[c + 1:, c])[0]
		if len(nz) == 0:
			continue
		k = c + 1 + int(nz[0])
		if k != c + 1:
			h[[c + 1, k]] = h[[k, c + 1]]
			h[:, [c + 1, k]] = h[:, [k, c + 1]]
		pinv = inv(int(h[c + 1, c]), p)
		for i in range(c + 2, n):
			if h[i, c]:
				u = int(h[i, c]) * pinv % p
				h[i] = (h[i] - u * h[c + 1]) % p
				h[:, c + 1] = (h[:, c + 1] + u * h[:, i]) % p
	# recurrence on leading principal minors of the Hessenberg matrix
	polys: list[list[int]] = [[1]]
	for k in range(n):
		cur = pmul([(-int(h[k, k])) % p, 1], polys[k], p)
		prod = 1
		for i in range(k - 1, -1, -1):
			prod = prod * int(h[i + 1, i]) % p
			coef = prod * int(h[i, k]) % p
			if coef:
				term = [(-coef * c) % p for c in polys[i]]
				cur = padd(cur, term, p)
		polys.append(cur)
	out = polys[n]
	return out + [0] * (n + 1 - len(out))


def padd(f: list[int], g: list[int], p: int) -> list[int]:
	n = max(len(f), len(g))
	return ptrim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def simultaneous_eigenvectors(mats: list[np.ndarray], p: int, seed: int = 0) -> list[tuple[np.ndarray, list[int]]]:
	"""Common eigenvectors of pairwise commuting diagonalisable matrices over F_p.

	Returns (vector, eigenvalues) pairs, one per one-dimensional joint eigenspace.
	Subspaces are split by the eigenspaces of each matrix in turn until every
	piece is a line. Raises ArithmeticError if a piece of dimension > 1 cannot be
	split by any matrix, or if a matrix fails to split over F_p.
	"""
	n = mats[0].shape[0]
	pending = [np.eye(n, dtype=np.int64)]
	done: list[np.ndarray] = []
	while pending:
		basis = pending.pop()
		if basis.shape[1] == 1:
			done.append(basis)
			continue
		for m in mats:
			pieces = _split(basis, m, p, seed)
			if len(pieces) > 1:
				pending.extend(pieces)
				break
		else:
			raise ArithmeticError("eigenspace splitting stalled on a subspace of dimension "
				f"{basis.shape[1]}")
	out = []
	for basis in done:
		v = basis[:, 0]
		k = int(np.nonzero(v)[0][0])
		vals = [int(matmul(m, v.reshape(-1, 1), p)[k, 0]) * inv(int(v[k]), p) % p for m in mats]
		v = v * inv(int(v[k]), p) % p
		out.append((v, vals))
	return out


def _restrict(basis: np.ndarray, m: np.ndarray, p: int) -> np.ndarray:
	"""Matrix X with m @ basis = basis @ X (basis columns span an invariant subspace)."""
	image = matmul(m, basis, p)
	# pivot columns of basis^T pick rows of basis forming an invertible block
	_, rows = rref(basis.T, p)
	return solve(basis[rows, :], image[rows, :], p)


def _split(basis: np.ndarray, m: np.ndarray, p: int, seed: int) -> list[np.ndarray]:
	x = _restrict(basis, m, p)
	d = x.shape[0]
	f = charpoly(x, p)
	rts = roots(f, p, seed)
	if len(rts) == 1:
		if np.any((x - rts[0] * np.eye(d, dtype=np.int64)) % p):
			raise ArithmeticError("matrix is not diagonalisable over F_p")
		return [basis]
	pieces = []
	total = 0
	for r in rts:
		k = nullspace((x - r * np.eye(d, dtype=np.int64)) % p, p)
		total += k.shape[1]
		pieces.append(matmul(basis, k, p))
	if total != d:
		raise ArithmeticError("characteristic polynomial does not split over F_p")
	return pieces
