"""Seeded random families for fuzzing and acceptance corpora.

Every trial draws from its own ``random.Random`` keyed by (seed, tag, trial),
so any trial can be replayed alone and results never depend on how trials
are scheduled across threads.
"""

from __future__ import annotations

import random

from satlab.cross import cross_saturate
from satlab.family import FamilySequence, SetFamily, random_order, saturate, up_closure

GEOMETRIC_P = 0.25


def trial_rng(seed: int, tag: str, trial: int) -> random.Random:
    return random.Random(f"{seed}/{tag}/{trial}")


def geometric(rng: random.Random, p: float = GEOMETRIC_P) -> int:
    """Failures before the first success, support {0, 1, 2, ...}."""
    k = 0
    while rng.random() >= p:
        k += 1
    return k


def random_increasing_family(n: int, rng: random.Random) -> SetFamily:
    """Up-closure of k uniform random subsets, k ~ Geometric(0.25)."""
    k = geometric(rng)
    gens = [rng.getrandbits(n) for _ in range(k)]
    return up_closure(SetFamily.from_masks(n, gens))


def random_family(n: int, rng: random.Random) -> SetFamily:
    """Each of the 2^n subsets included independently with probability 1/2."""
    return SetFamily(n, rng.getrandbits(1 << n))


def random_saturated(n: int, s: int, rng: random.Random) -> SetFamily:
    return saturate(SetFamily.empty(n), s, random_order(n, rng))


def random_cross_saturated(n: int, s: int, rng: random.Random) -> FamilySequence:
    """Cross-saturate either the all-empty sequence or (random increasing F_1, ∅, ..., ∅)."""
    empty = SetFamily.empty(n)
    if rng.random() < 0.5:
        start = FamilySequence((empty,) * s)
    else:
        f1 = random_increasing_family(n, rng)
        start = FamilySequence((f1,) + (empty,) * (s - 1))
    return cross_saturate(start, random_order(n, rng))
