"""Acceptance criteria 1-9, one test each.

Every test records a line ``criterion N: PASS|FAIL ...`` that is printed as it
runs and again in the pytest terminal summary.  Run this file directly to get
just the nine lines.
"""
import os
import time
from math import gcd

import pytest

from slimcon.congruence import jir_congruence_poset
from slimcon.enumverify import (
    KNOWN_POSET_COUNTS,
    brute_force_poset_counts,
    verify_birkhoff,
    verify_congruence_oracle,
    verify_remark_18,
    verify_theorem_A,
    verify_theorem_B,
    verify_theorem_C,
)
from slimcon.folang import Evaluator, builtin
from slimcon.order import crown, downset_lattice, is_isomorphic, join_irreducibles
from slimcon.props import has_dcep, max_jir_graph
from slimcon.slimsm import build_Ln
from slimcon.structures import circle_graph, cyclic_group, is_bipartite

WORKERS = max(1, os.cpu_count() or 1)
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, elapsed: float, bound: float, detail: str):
    in_time = elapsed < bound
    verdict = "PASS" if ok and in_time else "FAIL"
    line = f"criterion {n}: {verdict} ({detail}; {elapsed:.1f}s of {bound:.0f}s)"
    RESULTS[n] = line
    print(line)
    assert ok, line
    assert in_time, line


def test_criterion_1_fd3():
    t = time.perf_counter()
    d = downset_lattice(crown(3))
    iso = is_isomorphic(join_irreducibles(d), crown(3)) is not None
    record(1, d.n == 18 and iso, time.perf_counter() - t, 1, f"|Id(K_3)| = {d.n}, J isomorphic to K_3: {iso}")


def test_criterion_2_Ln_congruences():
    t = time.perf_counter()
    got = {}
    for n in (4, 6, 8, 10):
        got[n] = is_isomorphic(jir_congruence_poset(build_Ln(n).lattice), crown(n)) is not None
    bad = [n for n, ok in got.items() if not ok]
    record(2, not bad, time.perf_counter() - t, 60, f"J(Con L_n) = K_n for n in 4,6,8,10; mismatches {bad}")


def _run_detail(run):
    s = run.summary()
    return f"{s['checked']} checked, {s['skipped']} skipped, {s['counterexamples']} counterexamples"


def test_criterion_3_theorem_B():
    t = time.perf_counter()
    run = verify_theorem_B(6, workers=WORKERS)
    ok = run.passed and run.summary()["checked"] + run.skipped == sum(KNOWN_POSET_COUNTS[:6])
    record(3, ok, time.perf_counter() - t, 300, _run_detail(run))


def test_criterion_4_theorem_C():
    t = time.perf_counter()
    run = verify_theorem_C(6, workers=WORKERS)
    record(4, run.passed, time.perf_counter() - t, 600, _run_detail(run))


def test_criterion_5_remark_18():
    t = time.perf_counter()
    run = verify_remark_18(6, workers=WORKERS)
    sizes = sorted(c["lattice"]["size"] for c in run.counterexamples if "lattice" in c)
    detail = _run_detail(run) + (f"; violating lattice sizes {sizes}" if sizes else "")
    record(5, run.passed, time.perf_counter() - t, 300, detail)


def test_criterion_6_theorem_A():
    t = time.perf_counter()
    run = verify_theorem_A(100, 0, 6, max_grid=4, workers=WORKERS)
    fails = run.extra["failed_by_property"]
    detail = _run_detail(run) + "; failures by property " + ", ".join(f"{k}={v}" for k, v in fails.items())
    record(6, run.passed, time.perf_counter() - t, 600, detail)


def _alternating(u, a):
    m = len(a)
    if m % 4 == 0:
        pos = {i for i in range(m) if i % 4 in (0, 1)}
    else:
        pos = {i for i in range(m) if i < 4 or i % 4 in (2, 3)}
    return any(
        set(u) == {a[(r + s * i) % m] for i in pos} for r in range(m) for s in (1, -1)
    )


def test_criterion_7_crown_dcep():
    t = time.perf_counter()
    wrong = []
    for n in range(3, 9):
        k = crown(n)
        d = downset_lattice(k)
        a = [d.downset_index[k.down[j]] for j in range(n)]
        r = has_dcep(d)
        if r.verdict is not (n % 2 == 0):
            wrong.append(n)
            continue
        if r.verdict:
            dec = next(w for w in r.witness["decompositions"] if w["x"] == d.top)
            if not _alternating(dec["u"], a):
                wrong.append(n)
        assert sorted(max_jir_graph(d).vertices) == sorted(a)
    record(7, not wrong, time.perf_counter() - t, 60, f"DCEP exactly for even n in 3..8; wrong {wrong}")


def test_criterion_8_sentences():
    t = time.perf_counter()
    bad = []
    false_sentence = builtin("lambda", -1)
    for n in range(3, 13):
        ev = Evaluator(circle_graph(n))
        for k in range(1, 13):
            if ev.holds(builtin("lambda", k)) is not (n >= k):
                bad.append(("lambda", k, n))
        if ev.holds(false_sentence):
            bad.append(("lambda", -1, n))
    for n in range(2, 11):
        ev = Evaluator(crown(n).to_structure())
        for name in ("delta1", "delta2", "delta3"):
            if not ev.holds(builtin(name)):
                bad.append((name, n))
        if ev.holds(false_sentence):
            bad.append(("lambda", -1, "crown", n))
    for n in range(3, 10):
        ev = Evaluator(crown(n).to_structure())
        for m in range(3, 10):
            if ev.holds(builtin("xi", m)) is not (m != n):
                bad.append(("xi", m, n))
    for n in range(1, 13):
        ev = Evaluator(cyclic_group(n))
        for k in range(1, 13):
            for name in ("eta", "tau"):
                if ev.holds(builtin(name, k)) is not (gcd(k, n) == 1):
                    bad.append((name, k, n))
        if ev.holds(false_sentence):
            bad.append(("lambda", -1, "Z", n))
    for n in range(3, 33):
        if is_bipartite(circle_graph(n)).verdict is not (n % 2 == 0):
            bad.append(("bipartite", n))
    record(8, not bad, time.perf_counter() - t, 60, f"truth tables; mismatches {bad[:5]}")


def test_criterion_9_oracles():
    t = time.perf_counter()
    con = verify_congruence_oracle(8, workers=WORKERS)
    birk = verify_birkhoff(6, workers=WORKERS)
    counts = birk.extra["catalog_counts"]
    brute = brute_force_poset_counts(5)
    ok = con.passed and birk.passed and counts == [1, 2, 5, 16, 63, 318] and brute == counts[:5]
    detail = (
        f"{con.summary()['checked']} lattices vs brute force, "
        f"{birk.summary()['checked']} Birkhoff round trips, counts {counts}"
    )
    record(9, ok, time.perf_counter() - t, 600, detail)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
