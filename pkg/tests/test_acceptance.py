"""Acceptance criteria, run at their stated sizes and tolerances.

Each test prints one ``PASS``/``FAIL`` line.  All comparisons are exact
integer comparisons; runtimes are measured and included in the verdict.
"""

from __future__ import annotations

import time
from functools import lru_cache

import pytest

from satlab import cli
from satlab.certificate import basis_independence_selftest, independence_certificate
from satlab.constructions import all_partition_constructions, conjectured_size, cross_extremal, lift
from satlab.cross import check_theorem_cross, compute_G, eq1_identity_check, is_cross_saturated
from satlab.disjoint import bkr_check, box_general, box_increasing, talagrand_check
from satlab.family import SetFamily, is_s_saturated, random_order, saturate
from satlab.fuzz import random_cross_saturated, random_family, random_increasing_family, random_saturated, trial_rng
from satlab.search import min_saturated_search

from conftest import increasing_families

pytestmark = pytest.mark.acceptance

SEED = 20240601
SEARCH_CASES = [  # (n, s, expected minimum, modes)
    (3, 2, 4, ("raw", "antichain")),
    (3, 3, 6, ("raw", "antichain")),
    (4, 2, 8, ("raw", "antichain")),
    (4, 3, 12, ("raw", "antichain")),
    (5, 3, 24, ("antichain",)),
    (3, 4, 7, ("raw", "antichain")),
]
CROSS_GRID = [(n, s) for n in range(1, 7) for s in (2, 3, 4)]
CROSS_TRIALS = 500


def report(capsys, number: int, ok: bool, text: str) -> None:
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {text}")


@lru_cache(maxsize=None)
def cross_corpus() -> dict[tuple[int, int], list]:
    """Criterion 4 corpus; trial t of (n, s) is what ``satlab cross`` draws for --seed SEED."""
    return {(n, s): [random_cross_saturated(n, s, trial_rng(SEED, "cross", t)) for t in range(CROSS_TRIALS)]
            for n, s in CROSS_GRID}


def test_criterion_1_maximal_intersecting_size(capsys):
    start = time.perf_counter()
    bad = []
    for n in range(1, 7):
        for t in range(100):
            f = saturate(SetFamily.empty(n), 2, random_order(n, trial_rng(SEED, "c1", n * 1000 + t)))
            if f.size() != 1 << (n - 1):
                bad.append((n, t, f.size()))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 5
    report(capsys, 1, ok, f"600 saturate(empty, 2) sizes equal 2^(n-1); failures={bad[:3]} time={elapsed:.2f}s")
    assert ok


def test_criterion_2_minimum_saturated_sizes(capsys):
    lines, bad = [], []
    for n, s, expect, modes in SEARCH_CASES:
        certs = {}
        for mode in modes:
            start = time.perf_counter()
            certs[mode] = min_saturated_search(n, s, mode)
            elapsed = time.perf_counter() - start
            limit = 300 if n == 5 else 5
            if certs[mode].minimum_size != expect or elapsed >= limit:
                bad.append((n, s, mode, certs[mode].minimum_size, round(elapsed, 2)))
        if len(certs) == 2:
            r, a = certs["raw"], certs["antichain"]
            if (r.minimum_size, r.witness) != (a.minimum_size, a.witness) or r.non_increasing_saturated:
                bad.append((n, s, "raw/antichain disagree"))
        lines.append(f"({n},{s})={certs[modes[-1]].minimum_size}")
    ok = not bad
    report(capsys, 2, ok, " ".join(lines) + f"; failures={bad}")
    assert ok


def test_criterion_3_lower_bound_on_saturated(capsys):
    start = time.perf_counter()
    bad = {}
    for n in range(1, 8):
        for s in (2, 3, 4):
            for t in range(1000):
                f = random_saturated(n, s, trial_rng(SEED, f"c3/{n}/{s}", t))
                if s * f.size() < (s - 1) << n:
                    bad.setdefault((n, s), (t, f.size()))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    detail = ", ".join(f"(n={n},s={s}) trial {t} size {z}" for (n, s), (t, z) in sorted(bad.items()))
    report(capsys, 3, ok, f"s|F| >= (s-1)2^n on 21000 saturate outputs; violations: {detail or 'none'}; "
                          f"time={elapsed:.1f}s")
    assert ok


def test_criterion_4_cross_lower_bound(capsys):
    start = time.perf_counter()
    corpus = cross_corpus()
    bad = []
    for (n, s), seqs in corpus.items():
        for t, seq in enumerate(seqs):
            if not is_cross_saturated(seq) or not check_theorem_cross(seq, check=False).holds:
                bad.append((n, s, t))
    tight = all(sum(cross_extremal(SetFamily.empty(n), s).sizes()) == (s - 1) << n for n, s in CROSS_GRID)
    elapsed = time.perf_counter() - start
    ok = not bad and tight and elapsed < 120
    report(capsys, 4, ok, f"{len(corpus) * CROSS_TRIALS} cross-saturated sums >= (s-1)2^n; "
                          f"equality by (empty, P, ..) = {tight}; failures={bad[:3]} time={elapsed:.1f}s")
    assert ok


def test_criterion_5_correlation_inequalities(capsys):
    start = time.perf_counter()
    bad = []
    for n in range(1, 11):
        for t in range(1000):
            rng = trial_rng(SEED, f"c5i/{n}", t)
            a, b = random_increasing_family(n, rng), random_increasing_family(n, rng)
            boxed = box_increasing(a, b)
            for rep in (talagrand_check(a, b, boxed), bkr_check(a, b, boxed)):
                if not rep.holds:
                    bad.append((rep.name, "increasing", n, t))
    for n in range(1, 7):
        for t in range(200):
            rng = trial_rng(SEED, f"c5a/{n}", t)
            a, b = random_family(n, rng), random_family(n, rng)
            boxed = box_general(a, b)
            for rep in (talagrand_check(a, b, boxed), bkr_check(a, b, boxed)):
                if not rep.holds:
                    bad.append((rep.name, "arbitrary", n, t))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    report(capsys, 5, ok, f"Talagrand and BKR on 10000 increasing + 1200 arbitrary pairs; "
                          f"failures={bad[:3]} time={elapsed:.1f}s")
    assert ok


def test_criterion_6_box_paths_agree(capsys):
    start = time.perf_counter()
    bad = []
    pairs = 0
    for n in (1, 2, 3):
        fams = list(increasing_families(n))
        for a in fams:
            for b in fams:
                pairs += 1
                if box_general(a, b) != box_increasing(a, b):
                    bad.append((n, a.bits, b.bits))
    for n in range(1, 9):
        for t in range(1000):
            rng = trial_rng(SEED, f"c6/{n}", t)
            a, b = random_increasing_family(n, rng), random_increasing_family(n, rng)
            pairs += 1
            if box_general(a, b) != box_increasing(a, b):
                bad.append((n, t))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    report(capsys, 6, ok, f"box_general == box_increasing on {pairs} pairs; failures={bad[:3]} time={elapsed:.1f}s")
    assert ok


def test_criterion_7_first_proof_pipeline(capsys):
    start = time.perf_counter()
    bad = []
    for (n, s), seqs in cross_corpus().items():
        for t, seq in enumerate(seqs):
            if not all(r.holds for r in eq1_identity_check(seq, check=False)):
                bad.append(("eq1", n, s, t))
                continue
            g = compute_G(seq, check=False)  # raises on overlapping G_i
            if g.total > 1 << n:
                bad.append(("G", n, s, t))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 180
    report(capsys, 7, ok, f"dual/box identity and disjoint G_i with total <= 2^n on the criterion-4 corpus; "
                          f"failures={bad[:3]} time={elapsed:.1f}s")
    assert ok


def test_criterion_8_algebraic_certificate(capsys):
    start = time.perf_counter()
    bad = []
    for (n, s), seqs in cross_corpus().items():
        for t, seq in enumerate(seqs):
            rep = independence_certificate(seq, check=False)
            if not (rep.cross_orthogonal and rep.total_rank == sum(rep.comp_sizes) and rep.bound_confirmed):
                bad.append((n, s, t, rep.failures[:2]))
    selftest = all(basis_independence_selftest(n) for n in range(1, 9))
    elapsed = time.perf_counter() - start
    ok = not bad and selftest and elapsed < 300
    report(capsys, 8, ok, f"orthogonality and rank = sum |comp F_i| on the criterion-4 corpus; "
                          f"basis self-test n<=8 = {selftest}; failures={bad[:2]} time={elapsed:.1f}s")
    assert ok


def test_criterion_9_constructions(capsys):
    start = time.perf_counter()
    bad = []
    built = 0
    for n in range(1, 6):
        for s in range(2, 5):
            if s - 1 > n:
                continue
            for blocks, f in all_partition_constructions(n, s):  # each call verifies its postconditions
                built += 1
                if f.size() != conjectured_size(n, s) or not is_s_saturated(f, s):
                    bad.append(("partition", n, s, blocks))
    lifted = 0
    for n in range(1, 6):
        for s in (2, 3, 4):
            for t in range(100):
                f = random_saturated(n, s, trial_rng(SEED, f"c9/{n}/{s}", t))
                g = lift(f, s, check=False)
                lifted += 1
                if not is_s_saturated(g, s + 1) or g.size() != f.size() + (1 << n):
                    bad.append(("lift", n, s, t))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    report(capsys, 9, ok, f"{built} partition constructions and {lifted} lifts verified; "
                          f"failures={bad[:3]} time={elapsed:.1f}s")
    assert ok


def test_criterion_10_reports_identical_across_threads(capsys):
    runs = []
    for n, s, _, modes in SEARCH_CASES:
        for mode in modes:
            runs.append(["search-min", "--n", n, "--s", s, "--mode", mode])
    for n, s in CROSS_GRID:
        runs.append(["cross", "bound", "--n", n, "--s", s, "--trials", CROSS_TRIALS, "--seed", SEED])
    bad = []
    for argv in runs:
        outs = [cli.run([str(a) for a in argv] + ["--format", "json", "--threads", str(k)]) for k in (1, 2, 8)]
        if len({o.text for o in outs}) != 1 or any(o.code != 0 for o in outs):
            bad.append(" ".join(map(str, argv)))
    ok = not bad
    report(capsys, 10, ok, f"{len(runs)} CLI reports byte-identical at --threads 1, 2, 8; differing={bad[:3]}")
    assert ok
