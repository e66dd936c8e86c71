"""Exhaustive minimum-size searches over saturated families.

``raw`` mode tests every one of the 2^(2^n) families.  ``antichain`` mode
enumerates increasing families through their antichains of minimal sets,
which is exhaustive because every s-saturated family is increasing (raw
mode re-checks that claim wherever it runs).

Work is split into a fixed list of independent tasks (word ranges, or the
first minimal set of the antichain); each task keeps its own incumbent, so
counters and witnesses are identical for any number of worker threads.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from satlab import kernels, lattice
from satlab.constructions import intersecting_prefix_family
from satlab.cross import is_cross_saturated
from satlab.family import FamilySequence, SetFamily, is_increasing, is_s_saturated
from satlab.lattice import check_n

RAW_N_MAX = 4
ANTICHAIN_N_MAX = 6
CROSS_N_MAX = 3
CROSS_S_MAX = 3
RAW_CHUNKS = 64


class ResourceCapError(ValueError):
    """Requested search exceeds the configured desk-scale caps."""


@dataclass
class MinimumCertificate:
    n: int
    s: int
    mode: str
    minimum_size: int
    witness: SetFamily
    families_examined: int
    elapsed_ms: int
    witness_count: int
    witnesses: list[SetFamily] = field(default_factory=list, repr=False)
    initial_bound: int | None = None
    saturated_total: int | None = None
    non_increasing_saturated: int | None = None

    def as_dict(self, include_witnesses: bool = False) -> dict:
        out = {
            "n": self.n, "s": self.s, "mode": self.mode,
            "minimum_size": self.minimum_size,
            "witness": self.witness.sets(),
            "witness_bits": format(self.witness.bits, "x"),
            "families_examined": self.families_examined,
            "witness_count": self.witness_count,
        }
        if self.initial_bound is not None:
            out["initial_bound"] = self.initial_bound
        if self.saturated_total is not None:
            out["saturated_total"] = self.saturated_total
            out["non_increasing_saturated"] = self.non_increasing_saturated
        if include_witnesses:
            out["witnesses"] = [format(w.bits, "x") for w in self.witnesses]
        return out


def _run_tasks(fn: Callable, tasks: Sequence, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, tasks))


def _merge(n: int, results: Iterable[tuple[int, list[int]]]) -> tuple[int, list[int]]:
    best, found = -1, []
    for b, items in results:
        if b < 0:
            continue
        if best < 0 or b < best:
            best, found = b, list(items)
        elif b == best:
            found.extend(items)
    found.sort(key=lambda bits: lattice.lex_key(n, bits))
    return best, found


def seed_family(n: int, s: int) -> SetFamily:
    """A known s-saturated family used as the initial incumbent."""
    if s - 1 <= n:
        return intersecting_prefix_family(n, s)
    return SetFamily(n, lattice.all_bits(n) & ~1)


def min_saturated_search(n: int, s: int, mode: str = "antichain", threads: int = 1,
                         allow_long: bool = False) -> MinimumCertificate:
    """Exact minimum size of an s-saturated family on [n], with all minimum witnesses."""
    n = check_n(n)
    if s < 2:
        raise ValueError("s must be >= 2")
    start = time.perf_counter()
    extra: dict = {}
    if mode == "raw":
        if n > RAW_N_MAX and not allow_long:
            raise ResourceCapError(f"raw mode is capped at n <= {RAW_N_MAX}")
        kern = kernels.raw_kernel(n)
        total = 1 << (1 << n)
        chunks = min(RAW_CHUNKS, total)
        step = -(-total // chunks)
        ranges = [(lo, min(total, lo + step)) for lo in range(0, total, step)]
        out = _run_tasks(lambda r: kern.raw_range(n, s, r[0], r[1]), ranges, threads)
        best, found = _merge(n, ((b, w) for b, w, *_ in out))
        examined = sum(r[2] for r in out)
        extra["saturated_total"] = sum(r[3] for r in out)
        extra["non_increasing_saturated"] = sum(r[4] for r in out)
    elif mode == "antichain":
        if n > ANTICHAIN_N_MAX and not allow_long:
            raise ResourceCapError(f"antichain mode is capped at n <= {ANTICHAIN_N_MAX}")
        kern = kernels.antichain_kernel(n)
        seed = seed_family(n, s)
        if not is_s_saturated(seed, s):  # pragma: no cover - constructions are verified
            raise AssertionError("seed family is not saturated")
        bound = seed.size()
        extra["initial_bound"] = bound
        tasks = list(range(-1, (1 << n) - 1))
        out = _run_tasks(lambda t: kern.antichain_branch(n, s, t, bound), tasks, threads)
        best, found = _merge(n, ((b, w) for b, w, _ in out))
        examined = sum(r[2] for r in out)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if best < 0:  # pragma: no cover - the seed family is always found
        raise AssertionError("search found no saturated family")
    wits = [SetFamily(n, b) for b in found]
    witness = wits[0]
    if witness.size() != best or not is_s_saturated(witness, s):
        raise AssertionError("reported witness fails verification")
    elapsed = int((time.perf_counter() - start) * 1000)
    return MinimumCertificate(n, s, mode, best, witness, examined, elapsed, len(wits), wits, **extra)


def increasing_families(n: int) -> list[SetFamily]:
    """Every increasing family on [n] (2, 3, 6, 20, 168, ... of them)."""
    n = check_n(n)
    out = []
    for bits in range(1 << (1 << n)):
        if lattice.up_bits(n, bits) == bits:
            out.append(SetFamily(n, bits))
    return out


@dataclass
class CrossMinimum:
    n: int
    s: int
    minimum_sum: int
    witness: FamilySequence
    witness_count: int
    sequences_examined: int
    elapsed_ms: int

    def as_dict(self) -> dict:
        return {
            "n": self.n, "s": self.s, "minimum_sum": self.minimum_sum,
            "bound": (self.s - 1) << self.n,
            "witness": [f.sets() for f in self.witness],
            "witness_count": self.witness_count,
            "sequences_examined": self.sequences_examined,
        }


def min_cross_search(n: int, s: int, allow_long: bool = False) -> CrossMinimum:
    """Exact minimum of |F_1| + ... + |F_s| over cross-saturated sequences.

    Only increasing families can occur, so each slot ranges over them; a
    partial sum already above the incumbent is cut.
    """
    n = check_n(n)
    if s < 2:
        raise ValueError("s must be >= 2")
    if (n > CROSS_N_MAX or s > CROSS_S_MAX) and not allow_long:
        raise ResourceCapError(f"cross search is capped at n <= {CROSS_N_MAX}, s <= {CROSS_S_MAX}")
    start = time.perf_counter()
    fams = sorted(increasing_families(n), key=lambda f: (f.size(), lattice.lex_key(n, f.bits)))
    best = s << n
    found: list[tuple[SetFamily, ...]] = []
    examined = 0

    def rec(prefix: list[SetFamily], total: int) -> None:
        nonlocal best, found, examined
        if len(prefix) == s:
            examined += 1
            if total <= best and is_cross_saturated(FamilySequence(tuple(prefix))):
                if total < best:
                    best, found = total, []
                found.append(tuple(prefix))
            return
        for f in fams:
            if total + f.size() > best:
                break
            prefix.append(f)
            rec(prefix, total + f.size())
            prefix.pop()

    rec([], 0)
    found.sort(key=lambda seq: [lattice.lex_key(n, f.bits) for f in seq])
    elapsed = int((time.perf_counter() - start) * 1000)
    return CrossMinimum(n, s, best, FamilySequence(found[0]), len(found), examined, elapsed)


def is_increasing_all(families: Iterable[SetFamily]) -> bool:
    return all(is_increasing(f) for f in families)
