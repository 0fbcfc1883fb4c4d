"""Small posets up to isomorphism and batch checks over the lattices they generate.

The catalog is grown one maximal element at a time: every poset on n points
arises from one on n - 1 points by adding a maximal element above a down-set.
Candidates are bucketed by ``poset_invariant`` and rejected by ``is_isomorphic``.

Verification runs shard work by catalog index over a process pool and merge
results in index order, so the JSON they produce is byte-identical no matter
how many workers are used.  Wall time is reported only on request.
"""
from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from typing import Any, Callable, Iterable, Sequence

from .congruence import all_compatible_partitions, congruence_lattice
from .errors import InvalidParameter
from .order import (
    Lattice,
    Poset,
    crown,
    downset_lattice,
    downsets,
    is_distributive,
    is_isomorphic,
    join_irreducibles,
    poset_invariant,
)
from .props import (
    cyclic_elements,
    has_bmep,
    has_dcep,
    has_two_cover,
    is_cyclic,
    is_multicyclic,
)
from .slimsm import build_Ln, random_slim

__all__ = [
    "KNOWN_POSET_COUNTS",
    "KNOWN_LATTICE_COUNTS",
    "PosetCatalog",
    "VerificationRun",
    "enumerate_posets",
    "brute_force_poset_counts",
    "bounded_lattices",
    "verify_theorem_A",
    "verify_theorem_B",
    "verify_theorem_C",
    "verify_remark_18",
    "verify_birkhoff",
    "verify_congruence_oracle",
]

KNOWN_POSET_COUNTS = (1, 2, 5, 16, 63, 318, 2045)
# unlabelled lattices on 1..8 elements
KNOWN_LATTICE_COUNTS = (1, 1, 1, 2, 5, 15, 53, 222)

MAX_CATALOG_SIZE = 7
_BRUTE_LIMIT = 5


# -- catalog -----------------------------------------------------------------

@dataclass
class PosetCatalog:
    """``by_size[k - 1]`` lists one representative per isomorphism class on k points."""

    by_size: list[list[Poset]]

    @property
    def max_size(self) -> int:
        return len(self.by_size)

    def counts(self) -> list[int]:
        return [len(ps) for ps in self.by_size]

    def entries(self, max_size: int | None = None) -> list[Poset]:
        top = self.max_size if max_size is None else min(max_size, self.max_size)
        return [p for ps in self.by_size[:top] for p in ps]


def _add_maximal(p: Poset, below: int) -> Poset:
    n = p.n
    up = [row | (1 << n if below >> x & 1 else 0) for x, row in enumerate(p.up)]
    up.append(1 << n)
    return Poset(up, check=False)


def enumerate_posets(max_size: int) -> PosetCatalog:
    """All posets with at most ``max_size`` points, up to isomorphism."""
    if not isinstance(max_size, int) or not 1 <= max_size <= MAX_CATALOG_SIZE:
        raise InvalidParameter(f"max_size must be in 1..{MAX_CATALOG_SIZE}, got {max_size!r}")
    levels = [[Poset([1])]]
    for _ in range(1, max_size):
        buckets: dict[tuple, list[Poset]] = {}
        level: list[Poset] = []
        for p in levels[-1]:
            for d in downsets(p):
                q = _add_maximal(p, d)
                key = poset_invariant(q)
                bucket = buckets.setdefault(key, [])
                if any(is_isomorphic(q, r) is not None for r in bucket):
                    continue
                bucket.append(q)
                level.append(q)
        levels.append(level)
    return PosetCatalog(levels)


def brute_force_poset_counts(max_size: int) -> list[int]:
    """Independent count oracle: naturally labelled strict orders, quotiented by
    the minimum relabelled edge mask over all permutations."""
    if not 1 <= max_size <= _BRUTE_LIMIT:
        raise InvalidParameter(f"brute force is limited to sizes 1..{_BRUTE_LIMIT}")
    out = []
    for n in range(1, max_size + 1):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        perms = list(permutations(range(n)))
        classes = set()
        for mask in range(1 << len(pairs)):
            rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
            if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
                continue
            canon = min(
                sum(1 << (s[a] * n + s[b]) for a, b in rel)
                for s in perms
            )
            classes.add(canon)
        out.append(len(classes))
    return out


def bounded_lattices(catalog: PosetCatalog, max_elements: int) -> list[Lattice]:
    """Every lattice with at most ``max_elements`` elements, up to isomorphism.

    A lattice with at least two elements is a poset with a new bottom and top
    added, so this walks catalog entries of size ``max_elements - 2``.
    """
    if max_elements - 2 > catalog.max_size:
        raise InvalidParameter("catalog too small for the requested lattice size")
    out = [Lattice([1])]
    if max_elements >= 2:
        out.append(Lattice([0b11, 0b10]))
    for p in catalog.entries(max_elements - 2):
        n = p.n + 2
        top = 1 << (n - 1)
        up = [(1 << n) - 1] + [(row << 1) | top for row in p.up] + [top]
        candidate = Poset(up, check=False)
        try:
            out.append(Lattice(candidate.up))
        except ValueError:
            continue
    return out


# -- runs ----------------------------------------------------------------------

@dataclass
class VerificationRun:
    """Configuration, per-lattice results and summary of one batch check."""

    name: str
    config: dict
    results: list[dict] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)
    skipped: int = 0
    wall_time: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if not self.counterexamples else "fail"

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def summary(self) -> dict:
        out = {
            "checked": len(self.results),
            "skipped": self.skipped,
            "counterexamples": len(self.counterexamples),
            "verdict": self.verdict,
        }
        out.update(self.extra)
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_json(self, *, results: bool = True) -> dict:
        obj = {
            "name": self.name,
            "config": self.config,
            "summary": self.summary(),
            "counterexamples": self.counterexamples,
        }
        if results:
            obj["results"] = self.results
        return obj

    def dumps(self, *, results: bool = True) -> str:
        return json.dumps(self.to_json(results=results), sort_keys=True, indent=1)

    def text(self) -> str:
        s = self.summary()
        line = f"{self.name}: {s['verdict']} ({s['checked']} checked, {s['skipped']} skipped, {s['counterexamples']} counterexamples)"
        if self.wall_time is not None:
            line += f" in {self.wall_time:.1f}s"
        return line


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers < 1:
        raise InvalidParameter("workers must be positive")
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, so merging is deterministic
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _finish(run: VerificationRun, records: Iterable[dict | None], start: float, timings: bool) -> VerificationRun:
    for rec in records:
        if rec is None:
            run.skipped += 1
            continue
        bad = rec.pop("counterexample", None)
        run.results.append(rec)
        if bad is not None:
            run.counterexamples.append(bad)
    if timings:
        run.wall_time = time.perf_counter() - start
    return run


def _catalog_items(max_poset_size: int) -> list[tuple[int, tuple[int, ...]]]:
    cat = enumerate_posets(max_poset_size)
    return list(enumerate(p.up for p in cat.entries()))


def _poset_json(up: Sequence[int]) -> dict:
    return Poset(up, check=False).to_json()


# theorem B: DCEP <=> BMEP under Two-cover

def _check_B(item) -> dict | None:
    index, up = item
    d = downset_lattice(Poset(up, check=False))
    if not has_two_cover(d):
        return None
    dcep, bmep = has_dcep(d), has_bmep(d)
    rec = {"index": index, "poset_size": len(up), "size": d.n, "dcep": dcep.verdict, "bmep": bmep.verdict}
    if dcep.verdict != bmep.verdict:
        rec["counterexample"] = {
            "index": index,
            "poset": _poset_json(up),
            "lattice": d.to_json(),
            "dcep": dcep.to_json(),
            "bmep": bmep.to_json(),
        }
    return rec


def verify_theorem_B(max_poset_size: int = 6, *, workers: int = 1, timings: bool = False) -> VerificationRun:
    """Over Id(P) for catalog posets P with the Two-cover Property: DCEP iff BMEP."""
    start = time.perf_counter()
    items = _catalog_items(max_poset_size)
    run = VerificationRun("theorem-B", {"max_poset_size": max_poset_size, "properties": ["dcep", "bmep"], "workers": workers})
    _finish(run, _map(_check_B, items, workers), start, timings)
    run.extra["dcep_true"] = sum(r["dcep"] for r in run.results)
    return run


# theorem C: the sentence agrees with the combinatorial check

def _check_C(item) -> dict | None:
    from .folang import Evaluator, builtin

    index, up = item
    d = downset_lattice(Poset(up, check=False))
    if not has_two_cover(d):
        return None
    ev = Evaluator(d.to_structure())
    psi = ev.holds(builtin("psi_dcep"))
    comb = has_dcep(d).verdict
    rho = builtin("rho_mcyclic")
    bad_x = [x for x in range(d.n) if ev.holds(rho, {"x": x}) != is_multicyclic(d, x)]
    rec = {"index": index, "size": d.n, "psi_dcep": psi, "dcep": comb, "mcyclic_mismatches": len(bad_x)}
    if psi != comb or bad_x:
        rec["counterexample"] = {
            "index": index,
            "poset": _poset_json(up),
            "lattice": d.to_json(),
            "psi_dcep": psi,
            "dcep": comb,
            "mcyclic_mismatch_elements": bad_x,
        }
    return rec


def verify_theorem_C(max_poset_size: int = 6, *, workers: int = 1, timings: bool = False) -> VerificationRun:
    """Sentence ``psi_dcep`` versus ``has_dcep``, and ``rho_mcyclic`` versus ``is_multicyclic``."""
    start = time.perf_counter()
    items = _catalog_items(max_poset_size)
    run = VerificationRun("theorem-C", {"max_poset_size": max_poset_size, "properties": ["psi_dcep", "rho_mcyclic"], "workers": workers})
    return _finish(run, _map(_check_C, items, workers), start, timings)


# remark: fewer than 18 elements and Two-cover means no cyclic element

def _check_R18(item) -> dict | None:
    index, up = item
    d = downset_lattice(Poset(up, check=False))
    if d.n >= 18 or not has_two_cover(d):
        return None
    cyc = cyclic_elements(d)
    rec = {"index": index, "size": d.n, "cyclic": len(cyc)}
    if cyc:
        rec["counterexample"] = {"index": index, "poset": _poset_json(up), "lattice": d.to_json(), "cyclic": cyc}
    return rec


def verify_remark_18(max_poset_size: int = 6, *, workers: int = 1, timings: bool = False) -> VerificationRun:
    """Two-cover lattices Id(P) with fewer than 18 elements have no cyclic element;
    Id(crown(3)) has exactly 18 elements and a cyclic top."""
    start = time.perf_counter()
    items = _catalog_items(max_poset_size)
    run = VerificationRun("remark-18", {"max_poset_size": max_poset_size, "workers": workers})
    _finish(run, _map(_check_R18, items, workers), start, timings)
    fd3 = downset_lattice(crown(3))
    top_cyclic = is_cyclic(fd3, fd3.top)
    run.extra["fd3_size"] = fd3.n
    run.extra["fd3_top_cyclic"] = top_cyclic
    if fd3.n != 18 or not top_cyclic:
        run.counterexamples.append({"lattice": fd3.to_json(), "size": fd3.n, "top_cyclic": top_cyclic})
    return run


# theorem A: congruence lattices of slim semimodular lattices

def _check_A(item) -> dict:
    index, kind, params = item
    if kind == "Ln":
        diagram = build_Ln(params["n"])
    else:
        diagram = random_slim(params["seed"], params["gridK"], params["forks"])
    l = diagram.lattice
    d = congruence_lattice(l)
    distributive = is_distributive(d)
    rec: dict[str, Any] = {"index": index, "kind": kind, **params, "size": l.n, "con_size": d.n, "distributive": distributive}
    reports = {}
    if distributive:
        reports["two_cover"] = has_two_cover(d)
        reports["bmep"] = has_bmep(d)
        reports["bmep_cover"] = has_bmep(d, reading="cover")
        if reports["two_cover"]:
            reports["dcep"] = has_dcep(d)
    for key in ("two_cover", "bmep", "bmep_cover", "dcep"):
        rec[key] = reports[key].verdict if key in reports else None
    failed = [k for k in ("distributive", "two_cover", "bmep", "dcep") if rec[k] is not True]
    if failed:
        rec["counterexample"] = {
            "index": index,
            "kind": kind,
            **params,
            "failed": failed,
            "diagram": diagram.to_json(),
            "lattice": d.to_json(),
            "reports": {k: r.to_json() for k, r in reports.items()},
        }
    return rec


def theorem_A_instances(count: int, seed: int, max_forks: int, max_grid: int = 4, ln: Sequence[int] = (4, 6, 8, 10)):
    """The instance list of ``verify_theorem_A``: (index, kind, params) triples."""
    rng = random.Random(seed)
    items = []
    for i in range(count):
        params = {"gridK": rng.randint(1, max_grid), "forks": rng.randint(0, max_forks), "seed": rng.randrange(2**32)}
        items.append((i, "random", params))
    for j, n in enumerate(ln):
        items.append((count + j, "Ln", {"n": n}))
    return items


def verify_theorem_A(
    count: int = 100,
    seed: int = 0,
    max_forks: int = 6,
    *,
    max_grid: int = 4,
    ln: Sequence[int] = (4, 6, 8, 10),
    workers: int = 1,
    timings: bool = False,
) -> VerificationRun:
    """Con(L) for random slim semimodular L and for the L_n: distributive, Two-cover,
    BMEP and DCEP.  BMEP is tested on the E graph; the common-lower-cover reading
    is recorded alongside as ``bmep_cover``."""
    if count < 0 or max_forks < 0 or max_grid < 1:
        raise InvalidParameter("count and max_forks must be nonnegative, max_grid positive")
    start = time.perf_counter()
    items = theorem_A_instances(count, seed, max_forks, max_grid, ln)
    run = VerificationRun(
        "theorem-A",
        {"count": count, "seed": seed, "max_forks": max_forks, "max_grid": max_grid, "ln": list(ln), "workers": workers},
    )
    _finish(run, _map(_check_A, items, workers), start, timings)
    run.extra["failed_by_property"] = {
        k: sum(1 for r in run.results if r[k] is not True) for k in ("distributive", "two_cover", "bmep", "bmep_cover", "dcep")
    }
    return run


# oracles: Birkhoff round trip, catalog counts, congruence lattices by brute force

def _check_birkhoff(item) -> dict:
    index, up = item
    p = Poset(up, check=False)
    d = downset_lattice(p)
    iso = is_isomorphic(join_irreducibles(d), p) is not None
    rec = {"index": index, "poset_size": p.n, "size": d.n, "round_trip": iso}
    if not iso:
        rec["counterexample"] = {"index": index, "poset": p.to_json(), "lattice": d.to_json()}
    return rec


def verify_birkhoff(max_poset_size: int = 6, *, workers: int = 1, timings: bool = False) -> VerificationRun:
    """J(Id(P)) is isomorphic to P for every catalog poset, and catalog counts match."""
    start = time.perf_counter()
    cat = enumerate_posets(max_poset_size)
    items = list(enumerate(p.up for p in cat.entries()))
    run = VerificationRun("birkhoff", {"max_poset_size": max_poset_size, "workers": workers})
    _finish(run, _map(_check_birkhoff, items, workers), start, timings)
    counts = cat.counts()
    expected = list(KNOWN_POSET_COUNTS[:max_poset_size])
    run.extra["catalog_counts"] = counts
    if counts != expected:
        run.counterexamples.append({"catalog_counts": counts, "expected": expected})
    if max_poset_size <= _BRUTE_LIMIT:
        brute = brute_force_poset_counts(max_poset_size)
        run.extra["brute_force_counts"] = brute
        if brute != counts:
            run.counterexamples.append({"catalog_counts": counts, "brute_force_counts": brute})
    return run


def _check_con(item) -> dict:
    index, up = item
    l = Lattice(up, check=False)
    fast = set(congruence_lattice(l).congruences)
    brute = all_compatible_partitions(l, limit=l.n)
    rec = {"index": index, "size": l.n, "congruences": len(fast), "agree": fast == brute}
    if fast != brute:
        rec["counterexample"] = {
            "index": index,
            "lattice": l.to_json(),
            "missing": sorted(c.to_json() for c in brute - fast),
            "extra": sorted(c.to_json() for c in fast - brute),
        }
    return rec


def verify_congruence_oracle(max_elements: int = 8, *, workers: int = 1, timings: bool = False) -> VerificationRun:
    """``congruence_lattice`` against brute-force partition search on every lattice
    with at most ``max_elements`` elements."""
    if not 1 <= max_elements <= 9:
        raise InvalidParameter("max_elements must be in 1..9")
    start = time.perf_counter()
    cat = enumerate_posets(max(1, max_elements - 2))
    lattices = bounded_lattices(cat, max_elements)
    items = list(enumerate(l.up for l in lattices))
    run = VerificationRun("congruence-oracle", {"max_elements": max_elements, "workers": workers})
    _finish(run, _map(_check_con, items, workers), start, timings)
    counts = [sum(1 for l in lattices if l.n == k) for k in range(1, max_elements + 1)]
    run.extra["lattice_counts"] = counts
    expected = list(KNOWN_LATTICE_COUNTS[:max_elements])
    if max_elements <= len(KNOWN_LATTICE_COUNTS) and counts != expected:
        run.counterexamples.append({"lattice_counts": counts, "expected": expected})
    return run
