"""Exact integer and rational linear algebra on plain nested lists."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = list[list]


def matmul(a: Matrix, b: Matrix) -> Matrix:
	bt = list(zip(*b))
	return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def trace(a: Matrix) -> int | Fraction:
	return sum(a[i][i] for i in range(len(a)))


def identity(n: int) -> Matrix:
	return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def bareiss_det(a: Matrix) -> int:
	"""Determinant of an integer matrix by fraction-free elimination."""
	m = [list(map(int, row)) for row in a]
	n = len(m)
	if n == 0:
		return 1
	sign = 1
	prev = 1
	for k in range(n - 1):
		if m[k][k] == 0:
			for i in range(k + 1, n):
				if m[i][k] != 0:
					m[k], m[i] = m[i], m[k]
					sign = -sign
					break
			else:
				return 0
		pivot = m[k][k]
		rowk = m[k]
		for i in range(k + 1, n):
			row = m[i]
			f = row[k]
			row[k + 1:] = [(pivot * row[j] - f * rowk[j]) // prev for j in range(k + 1, n)]
			row[k] = 0
		prev = pivot
	return sign * m[n - 1][n - 1]


def charpoly_int(a: Matrix) -> list[int]:
	"""det(xI - a) for an integer matrix, lowest degree first (Faddeev-LeVerrier).

	Every division is exact over the integers.
	"""
	n = len(a)
	coeffs = [0] * (n + 1)
	coeffs[n] = 1
	m = [[0] * n for _ in range(n)]
	for k in range(1, n + 1):
		am = matmul(a, m)
		c_prev = coeffs[n - k + 1]
		m = [[am[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
		t = trace(matmul(a, m))
		if t % k:
			raise ArithmeticError("inexact division in Faddeev-LeVerrier")
		coeffs[n - k] = -t // k
	return coeffs


def charpoly_rational(a: Matrix) -> list[Fraction]:
	"""det(xI - a) for a rational matrix; denominators are cleared first."""
	n = len(a)
	den = lcm(*[Fraction(x).denominator for row in a for x in row]) if n else 1
	scaled = [[int(Fraction(x) * den) for x in row] for row in a]
	c = charpoly_int(scaled)
	# det(xI - A) = den^-n det((den x) I - den A)
	return [Fraction(c[k], den ** (n - k)) for k in range(n + 1)]


def solve_rational(a: Matrix, b: Sequence) -> list[Fraction] | None:
	"""One solution of a x = b over Q (a may be rectangular), or None if inconsistent."""
	rows = len(a)
	cols = len(a[0]) if rows else 0
	m = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(rows)]
	pivots: list[int] = []
	r = 0
	for c in range(cols):
		k = next((i for i in range(r, rows) if m[i][c] != 0), None)
		if k is None:
			continue
		m[r], m[k] = m[k], m[r]
		pv = m[r][c]
		m[r] = [x / pv for x in m[r]]
		for i in range(rows):
			if i != r and m[i][c] != 0:
				f = m[i][c]
				m[i] = [x - f * y for x, y in zip(m[i], m[r])]
		pivots.append(c)
		r += 1
		if r == rows:
			break
	if any(m[i][cols] != 0 for i in range(r, rows)):
		return None
	x = [Fraction(0)] * cols
	for i, c in enumerate(pivots):
		x[c] = m[i][cols]
	return x


def inverse_rational(a: Matrix) -> Matrix:
	n = len(a)
	m = [[Fraction(x) for x in a[i]] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
	for c in range(n):
		k = next((i for i in range(c, n) if m[i][c] != 0), None)
		if k is None:
			raise ZeroDivisionError("singular matrix")
		m[c], m[k] = m[k], m[c]
		pv = m[c][c]
		m[c] = [x / pv for x in m[c]]
		for i in range(n):
			if i != c and m[i][c] != 0:
				f = m[i][c]
				m[i] = [x - f * y for x, y in zip(m[i], m[c])]
	return [row[n:] for row in m]
