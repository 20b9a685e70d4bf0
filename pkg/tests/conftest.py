from __future__ import annotations

import sys
from functools import lru_cache
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from classalg.characters import character_table  # noqa: E402
from classalg.group_core import builtin, conjugacy_classes  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=40,
	suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CYCLIC = [f"Zn:{n}" for n in range(1, 25)]
NONCYCLIC = ["Zn:2xZn:2", "Zn:6xZn:2", "D:8", "D:10", "D:12", "Q8", "Sn:3", "Sn:4", "An:4", "An:5", "SL2:3", "Sn:5"]
CORPUS = CYCLIC + NONCYCLIC
SMALL = ["Zn:2", "Zn:5", "Zn:6", "Zn:2xZn:2", "D:8", "Q8", "Sn:3", "An:4", "D:10"]


@lru_cache(maxsize=None)
def group(spec: str):
	return builtin(spec)


@lru_cache(maxsize=None)
def classes(spec: str):
	return conjugacy_classes(group(spec))


@lru_cache(maxsize=None)
def table(spec: str):
	return character_table(group(spec), classes(spec))


@lru_cache(maxsize=None)
def normal_class_sets(spec: str) -> tuple[tuple[int, ...], ...]:
	"""Class-index sets of all normal subgroups, from the brute-force oracle."""
	import numpy as np

	import oracles

	cl = classes(spec)
	mul = group(spec).mul.astype(np.int64)
	out = set()
	for n_els in oracles.normal_subgroups(mul):
		out.add(tuple(sorted({int(cl.class_of[x]) for x in n_els})))
	return tuple(sorted(out, key=lambda s: (len(s), s)))


def normal_partition_specs(spec: str) -> list[tuple[str, object]]:
	"""Partitions generated from normal subgroups N: coset(N), subgroup(N), and the layered
	custom partition {e} | N - {e} | G - N."""
	n_cl = classes(spec).n_classes
	everything = tuple(range(n_cl))
	specs: list[tuple[str, object]] = []
	for ncl in normal_class_sets(spec):
		specs.append(("coset", list(ncl)))
		specs.append(("subgroup", list(ncl)))
		layers = [[0], [c for c in ncl if c], [c for c in everything if c not in ncl]]
		specs.append(("custom", [b for b in layers if b]))
	return specs


def pytest_terminal_summary(terminalreporter):
	mod = sys.modules.get("test_acceptance")
	results = getattr(mod, "RESULTS", None)
	if results:
		terminalreporter.section("acceptance criteria")
		for n in sorted(results):
			terminalreporter.write_line(results[n])
