"""Command-line interface: `classalg <command> --builtin Sn:4 [options]`."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import pickle
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .characters import character_table, identity_suite, partition_table
from .class_algebra import casimir_matrix, char_poly_of_element, gram_matrix, regular_representation
from .commutators import (
	ORDINARY, PARTITION, brute_force_counts, commutator_counts, forms_mod_p, power_sum_forms,
	reconstruct_from_triples, verify_trace_constant,
)
from .group_core import (
	DEFAULT_ORDER_BOUND, GroupInputError, builtin, conjugacy_classes, is_subgroup, read_cayley_file,
	read_permutation_file,
)
from .modp import prime_factors
from .mckay import f_character_data, mckay_check
from .partitions import build_partition, parse_partition_spec, structure_constants, unit_group
from .polynomials import (
	degree_polynomial, equal_by_permutation, frobenius_polynomial, group_determinant_check,
	normal_subgroup_lattice, p_prime_part, table_from_frobenius,
)

log = logging.getLogger("classalg")

CACHE_VERSION = f"classalg-{__version__}-cache-1"

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class VerificationFailure(Exception):
	"""An invariant or conjecture check did not hold; `payload` keeps the partial report."""

	def __init__(self, message: str, payload: dict | None = None):
		super().__init__(message)
		self.payload = payload


# -- cache ---------------------------------------------------------------------

class Cache:
	"""Content-addressed pickle store. Each file is `<sha256 of payload>\\n<payload>`."""

	def __init__(self, root: str | Path | None):
		self.root = Path(root) if root else None
		self.hits = 0

	@staticmethod
	def key(*parts) -> str:
		h = hashlib.sha256(CACHE_VERSION.encode())
		for p in parts:
			h.update(b"\0")
			h.update(p if isinstance(p, bytes) else str(p).encode())
		return h.hexdigest()

	def get_or_compute(self, kind: str, key: str, compute):
		if self.root is None:
			return compute()
		path = self.root / f"{kind}-{key}.pkl"
		if path.exists():
			raw = path.read_bytes()
			digest, _, payload = raw.partition(b"\n")
			if hashlib.sha256(payload).hexdigest().encode() == digest:
				self.hits += 1
				return pickle.loads(payload)
			log.warning("cache entry %s is corrupt; recomputing", path.name)
		value = compute()
		payload = pickle.dumps(value, protocol=pickle.HIGHEST_PROTOCOL)
		self.root.mkdir(parents=True, exist_ok=True)
		fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-")
		with os.fdopen(fd, "wb") as fh:
			fh.write(hashlib.sha256(payload).hexdigest().encode() + b"\n" + payload)
		os.replace(tmp, path)
		return value


# -- lazily computed objects for one run ---------------------------------------

class Context:
	def __init__(self, args: argparse.Namespace, group=None):
		self.args = args
		self.cache = Cache(args.cache_dir)
		self.group = group if group is not None else load_source(args)
		self.digest = Cache.key(self.group.digest_bytes(), self.group.order)
		self._memo: dict = {}

	def _lazy(self, name, fn):
		if name not in self._memo:
			self._memo[name] = fn()
		return self._memo[name]

	@property
	def classes(self):
		return self._lazy("classes", lambda: self.cache.get_or_compute(
			"classes", self.digest, lambda: conjugacy_classes(self.group)))

	@property
	def table(self):
		return self._lazy("table", lambda: self.cache.get_or_compute(
			"chartable", Cache.key(self.digest, self.args.seed),
			lambda: character_table(self.group, self.classes, self.args.seed)))

	@property
	def partition(self):
		def build():
			kind, arg = parse_partition_spec(self.args.partition)
			return build_partition(self.group, self.classes, kind, arg)
		return self._lazy("partition", lambda: self.cache.get_or_compute(
			"partition", Cache.key(self.digest, self.args.partition), build))

	@property
	def tensor(self):
		return self._lazy("tensor", lambda: self.cache.get_or_compute(
			"tensor", Cache.key(self.digest, self.args.partition), lambda: structure_constants(self.partition)))

	@property
	def rep(self):
		return self._lazy("rep", lambda: regular_representation(self.tensor))

	@property
	def gram(self):
		return self._lazy("gram", lambda: gram_matrix(self.rep))

	@property
	def ptable(self):
		return self._lazy("ptable", lambda: partition_table(self.table, self.partition, self.gram, self.args.seed))

	@property
	def frobenius(self):
		return self._lazy("frobenius", lambda: frobenius_polynomial(self.ptable))


def load_source(args) -> object:
	if args.builtin:
		return builtin(args.builtin, args.bound)
	if args.table:
		return read_cayley_file(args.table, args.bound)
	if args.perms:
		return read_permutation_file(args.perms, args.bound)
	raise GroupInputError("one of --builtin, --table or --perms is required")


def parse_field(text: str, m: int) -> list[int]:
	text = text.strip()
	if text in ("splitting", "1", ""):
		return [1]
	if text == "rational":
		return unit_group(m)
	try:
		return [int(t) for t in text.split(",") if t.strip()]
	except ValueError as exc:
		raise GroupInputError(f"cannot parse field spec {text!r}") from exc


# -- commands ------------------------------------------------------------------
# Each returns (json payload, text rendering).

def cmd_classes(ctx: Context):
	cl = ctx.classes
	rows = [{"class": i + 1, "rep": int(cl.reps[i]) + 1, "size": cl.sizes[i], "order": cl.orders[i],
		"inverse": cl.inverse_class[i] + 1} for i in range(cl.n_classes)]
	text = "\n".join(f"{r['class']:>3}  size {r['size']:<4} order {r['order']:<3} inverse {r['inverse']}" for r in rows)
	return {"order": ctx.group.order, "classes": rows}, text


def cmd_partition(ctx: Context):
	d = ctx.partition.describe()
	text = f"{d['kind']}: " + " | ".join(",".join(map(str, b)) for b in d["blocks"]) + f"\nsizes {d['sizes']}"
	return d, text


def cmd_structconst(ctx: Context):
	a = ctx.tensor.a
	n = a.shape[0]
	lines = []
	for i in range(n):
		for j in range(i, n):
			terms = [f"{int(a[l, i, j])}*C{l + 1}" for l in range(n) if a[l, i, j]]
			lines.append(f"C{i + 1}*C{j + 1} = " + (" + ".join(terms) or "0"))
	return {"partition": ctx.partition.describe(), "a": a.tolist()}, "\n".join(lines)


def cmd_gram(ctx: Context):
	g = ctx.gram
	text = "\n".join(" ".join(f"{x:>6}" for x in row) for row in g.p) + f"\ndet = {g.det}"
	return {"p": [list(r) for r in g.p], "det": str(g.det), "traces": list(g.traces), "semisimple": g.semisimple}, text


def cmd_charpoly(ctx: Context):
	n = ctx.partition.n
	if ctx.args.element:
		coeffs = [int(c) for c in ctx.args.element.split(",")]
		if len(coeffs) != n:
			raise GroupInputError(f"--element needs {n} coefficients")
	else:
		coeffs = list(range(1, n + 1))
	cp = char_poly_of_element(ctx.rep, coeffs)
	return {"element": coeffs, "charpoly": cp.to_json()}, str(cp)


def cmd_casimir(ctx: Context):
	k, cp = casimir_matrix(ctx.rep)
	text = "\n".join(" ".join(f"{str(x):>8}" for x in row) for row in k) + f"\ncharpoly: {cp}"
	return {"matrix": [[str(x) for x in row] for row in k], "charpoly": cp.to_json()}, text


def cmd_chartable(ctx: Context):
	if ctx.partition.kind != "trivial":
		return ctx.ptable.to_json(), ctx.ptable.render()
	ct = ctx.table
	return ct.to_json(), ct.render()


def cmd_frobpoly(ctx: Context):
	f = ctx.frobenius
	return f.to_json(), f.render()


def cmd_degpoly(ctx: Context):
	cas, chars = degree_polynomial(ctx.rep, ctx.ptable)
	return {"casimir": cas.to_json(), "characters": chars.to_json(), "agree": True}, cas.render()


def _need_prime(ctx: Context) -> int:
	p = ctx.args.prime
	if p is None:
		raise GroupInputError("this command needs -p/--prime")
	if p not in prime_factors(ctx.group.order):
		raise GroupInputError(f"{p} is not a prime divisor of {ctx.group.order}")
	return p


def cmd_pprime(ctx: Context):
	p = _need_prime(ctx)
	cas, _ = degree_polynomial(ctx.rep)
	pp = p_prime_part(cas, p)
	return pp.to_json(), pp.render()


def cmd_pijl(ctx: Context):
	conv = ctx.args.convention
	if ctx.args.brute:
		if ctx.group.order > 200:
			raise GroupInputError("--brute is limited to groups of order at most 200")
		counts = brute_force_counts(ctx.partition, conv, ctx.args.max_r)
	else:
		counts = commutator_counts(ctx.tensor, conv, ctx.args.max_r)
	lines = [f"convention {conv}, p = {counts.trace_constant} * Tr"]
	for r, arr in enumerate(counts.p, 1):
		lines.append(f"p{r}: {arr.tolist()}")
	return counts.to_json(), "\n".join(lines)


def cmd_reconstruct(ctx: Context):
	t = ctx.tensor
	f = ctx.frobenius
	out: dict = {}
	back = table_from_frobenius(f)
	out["frobenius_to_tensor"] = bool(np.array_equal(back.a, t.a))
	out["frobenius_to_sizes"] = list(back.sizes) == list(ctx.partition.sizes)
	out["frobenius_to_degrees"] = sorted(back.degree_products) == sorted(f.mults)
	counts = commutator_counts(t, PARTITION, 3)
	rec = reconstruct_from_triples(counts, ctx.group.order, ctx.args.seed)
	out["triples_to_tensor"] = bool(np.array_equal(rec.a, t.a))
	out["triples_to_frobenius"] = rec.multiset() == forms_mod_p(f.forms, f.mults, f.m, rec.p)
	out["prime"] = rec.p
	text = "\n".join(f"{k}: {v}" for k, v in out.items())
	if not all(v for k, v in out.items() if k != "prime"):
		raise VerificationFailure(text, out)
	return out, text


def cmd_mckay(ctx: Context):
	p = _need_prime(ctx)
	m = ctx.table.m
	verdict = mckay_check(ctx.group, p, parse_field(ctx.args.field, m), ctx.args.t, ctx.args.seed)
	js = verdict.to_json()
	text = (f"p = {p}, |P| = {verdict.sylow_order}, |N| = {verdict.normalizer_order}\n"
		f"D_G^p' = {verdict.d_g.render()}\nD_N^p' = {verdict.d_n.render()}\n"
		f"verdict: {'equal' if verdict.equal else 'UNEQUAL'}")
	if not verdict.equal:
		raise VerificationFailure(text, js)
	return js, text


def cmd_fchars(ctx: Context):
	fc = f_character_data(ctx.table, parse_field(ctx.args.field, ctx.table.m))
	text = "\n".join(f"orbit {[k + 1 for k in o]}: " + "  ".join(str(v) for v in vals)
		for o, vals in zip(fc.orbits, fc.values))
	return fc.to_json(), text


def cmd_lattice(ctx: Context):
	if ctx.partition.kind != "trivial":
		raise GroupInputError("the lattice uses the trivial partition")
	lat = normal_subgroup_lattice(ctx.tensor)
	return lat.to_json(), lat.render()


def cmd_compare(ctx: Context):
	if not ctx.args.other:
		raise GroupInputError("compare needs --other")
	other = Context(ctx.args, builtin(ctx.args.other, ctx.args.bound) if not Path(ctx.args.other).exists()
		else read_cayley_file(ctx.args.other, ctx.args.bound))
	same, sigma = equal_by_permutation(ctx.frobenius, other.frobenius)
	js = {"same_frobenius": same, "permutation": [s + 1 for s in sigma] if sigma else None}
	return js, ("same character table" if same else "different character tables")


def cmd_detcheck(ctx: Context):
	rep = group_determinant_check(ctx.partition, ctx.frobenius, ctx.args.trials, ctx.args.seed)
	text = f"{sum(t.agrees for t in rep.trials)}/{len(rep.trials)} points agree; sum of multiplicities {rep.mult_sum}"
	if not rep.ok or rep.mult_sum != ctx.group.order:
		raise VerificationFailure(text, rep.to_json())
	return rep.to_json(), text


def cmd_verify_all(ctx: Context):
	checks: list[tuple[str, bool, str]] = []

	def run(name, fn):
		try:
			res = fn()
			if isinstance(res, list):
				for c in res:
					checks.append((f"{name}: {c.name}", c.passed, c.witness))
			else:
				checks.append((name, bool(res), ""))
		except Exception as exc:  # a failing check must not stop the suite
			checks.append((name, False, f"{type(exc).__name__}: {exc}"))

	part = ctx.partition
	g = ctx.group
	run("semisimple", lambda: ctx.gram.semisimple)
	run("degree polynomial routes", lambda: degree_polynomial(ctx.rep, ctx.ptable)[1] is not None)
	if part.identity_is_singleton():
		run("identities", lambda: identity_suite(ctx.ptable, ctx.tensor, ctx.gram, seed=ctx.args.seed))
		run("reconstruction", lambda: cmd_reconstruct(ctx) is not None)
		if part.total == g.order and g.order <= 60:
			run("group determinant", lambda: cmd_detcheck(ctx) is not None)
	if g.order <= 200:
		convs = [PARTITION] + ([ORDINARY] if part.kind == "trivial" else [])
		for conv in convs:
			def pin(conv=conv):
				tensor_side = commutator_counts(ctx.tensor, conv, 3)
				brute = brute_force_counts(part, conv, 3)
				same = all(np.array_equal(a, b) for a, b in zip(tensor_side.p, brute.p))
				return same and verify_trace_constant(brute, power_sum_forms(ctx.tensor, 3))
			run(f"commutator counts ({conv})", pin)
	if part.kind == "trivial":
		def lattice_ok():
			lat = normal_subgroup_lattice(ctx.tensor)
			cl = ctx.classes
			for nd in lat.nodes:
				els = np.concatenate([cl.members(c) for c in nd])
				if not is_subgroup(g, els):
					return False
			return True
		run("normal subgroup lattice", lattice_ok)
		for p in prime_factors(g.order):
			run(f"mckay p={p}", lambda p=p: mckay_check(g, p, seed=ctx.args.seed).equal)
	js = {"partition": part.describe(), "checks": [{"name": n, "passed": ok, "witness": w} for n, ok, w in checks],
		"ok": all(ok for _, ok, _ in checks)}
	text = "\n".join(f"{'PASS' if ok else 'FAIL'}  {n}" + (f"  ({w})" if w and not ok else "") for n, ok, w in checks)
	if not js["ok"]:
		raise VerificationFailure(text, js)
	return js, text


COMMANDS = {
	"classes": cmd_classes, "partition": cmd_partition, "structconst": cmd_structconst, "gram": cmd_gram,
	"charpoly": cmd_charpoly, "casimir": cmd_casimir, "chartable": cmd_chartable, "frobpoly": cmd_frobpoly,
	"degpoly": cmd_degpoly, "pprime": cmd_pprime, "pijl": cmd_pijl, "reconstruct": cmd_reconstruct,
	"mckay": cmd_mckay, "fchars": cmd_fchars, "lattice": cmd_lattice, "compare": cmd_compare,
	"detcheck": cmd_detcheck, "verify-all": cmd_verify_all,
}


HELP = {
	"classes": "conjugacy classes with sizes, element orders and inverses",
	"partition": "blocks of the chosen partition",
	"structconst": "structure constants of the block sums",
	"gram": "trace form matrix and its determinant",
	"charpoly": "characteristic polynomial of an algebra element (--element)",
	"casimir": "Casimir element and its characteristic polynomial",
	"chartable": "exact character table, or block characters for a partition",
	"frobpoly": "the norm form as a product of linear forms",
	"degpoly": "degree polynomial by both routes",
	"pprime": "degree polynomial mod p with the x-power stripped (-p)",
	"pijl": "generalized commutator counts up to --max-r",
	"reconstruct": "rebuild the algebra from its norm form and from triple counts",
	"mckay": "compare p'-degree polynomials of G and a Sylow normalizer (-p)",
	"fchars": "characters summed over Galois orbits for --field",
	"lattice": "normal subgroup lattice from the class algebra",
	"compare": "test whether --other has the same character table",
	"detcheck": "collapsed group determinant against the norm form",
	"verify-all": "run every applicable check and report pass/fail",
}


def build_parser() -> argparse.ArgumentParser:
	common = argparse.ArgumentParser(add_help=False)
	src = common.add_mutually_exclusive_group()
	src.add_argument("--builtin", help="builtin group, e.g. Sn:4, D:8, Q8, Zn:2xZn:2")
	src.add_argument("--table", help="Cayley table file (order, then rows of 1-based entries)")
	src.add_argument("--perms", help="file with one permutation generator per line in cycle notation")
	common.add_argument("--partition", default="trivial",
		help="trivial | rational | galois=t,.. | coset=c,.. | subgroup=c,.. | custom=c,c;c,..")
	common.add_argument("-p", "--prime", type=int)
	common.add_argument("--field", default="splitting", help="splitting | rational | residues t,.. mod the exponent")
	common.add_argument("--t", type=int, help="extra Galois residue tested by mckay")
	common.add_argument("--element", help="coefficients of an algebra element for charpoly")
	common.add_argument("--convention", choices=[PARTITION, ORDINARY], default=PARTITION)
	common.add_argument("--max-r", type=int, default=3)
	common.add_argument("--brute", action="store_true", help="pijl: count at element level instead of from the tensor")
	common.add_argument("--trials", type=int, default=20)
	common.add_argument("--other", help="second group for compare (builtin spec or Cayley file)")
	common.add_argument("--format", choices=["text", "json"], default="text")
	common.add_argument("--cache-dir")
	common.add_argument("--seed", type=int, default=0)
	common.add_argument("--bound", type=int, default=DEFAULT_ORDER_BOUND)
	common.add_argument("--output", help="write the report here instead of stdout")
	parser = argparse.ArgumentParser(prog="classalg", description="Exact computations in class algebras of finite groups.")
	parser.add_argument("--version", action="version", version=__version__)
	sub = parser.add_subparsers(dest="command", required=True)
	for name in COMMANDS:
		sub.add_parser(name, parents=[common], help=HELP[name])
	return parser


def _report(args, payload) -> dict:
	src = args.builtin or args.table or args.perms
	return {"command": args.command, "group": src, "partition": args.partition, "seed": args.seed, "result": payload}


def main(argv: list[str] | None = None) -> int:
	logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
	parser = build_parser()
	try:
		args = parser.parse_args(argv)
	except SystemExit as exc:
		return EXIT_OK if exc.code == 0 else EXIT_INPUT
	status = EXIT_OK
	try:
		ctx = Context(args)
		payload, text = COMMANDS[args.command](ctx)
	except VerificationFailure as exc:
		payload = {"error": "verification failed", "detail": str(exc)}
		if exc.payload is not None:
			payload["report"] = exc.payload
		text, status = str(exc), EXIT_FAIL
	except (ValueError, OSError) as exc:
		print(f"error: {exc}", file=sys.stderr)
		return EXIT_INPUT
	except (ArithmeticError, AssertionError) as exc:
		payload, text, status = {"error": "verification failed", "detail": str(exc)}, str(exc), EXIT_FAIL
	if args.format == "json":
		out = json.dumps(_report(args, payload), indent=2, sort_keys=True)
	else:
		out = text
	if args.output:
		Path(args.output).write_text(out + "\n")
	else:
		print(out)
	return status


if __name__ == "__main__":
	sys.exit(main())
