"""Cross-dependent and cross-saturated sequences, and the disjoint-occurrence proof.

Cross-saturated families are increasing: if A is in F_i, adding a superset
of A cannot create a disjoint transversal that A did not already give.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from satlab import lattice
from satlab.disjoint import box_fold
from satlab.family import (
    FamilySequence,
    SetFamily,
    default_order,
    family_complement,
    family_dual,
    is_s_saturated,
    pointwise_complement,
)


class ClaimViolation(AssertionError):
    """A checked postcondition failed; the input contradicts a proven claim."""


def transversal_bits(n: int, families: Sequence[SetFamily]) -> int:
    """Every T containing pairwise disjoint A_j from each listed F_j.

    With no families listed this is all of P([n]).
    """
    bits = lattice.all_bits(n)
    for f in families:
        bits = lattice.box_up_bits(n, bits, f.bits)
    return bits


def find_transversal(families: Sequence[SetFamily], within: int) -> tuple[int, ...] | None:
    """Pairwise disjoint picks, one per family, all inside ``within``.

    Each pick is the smallest mask that still leaves room for the rest.
    """
    if not families:
        return ()
    n = families[0].n
    suffix = [lattice.all_bits(n)]
    for f in reversed(families):
        suffix.append(lattice.box_up_bits(n, suffix[-1], f.bits))
    suffix.reverse()
    if not suffix[0] >> within & 1:
        return None
    picks = []
    free = within
    for j, f in enumerate(families):
        for m in f:
            if m & ~free == 0 and suffix[j + 1] >> (free ^ m) & 1:
                picks.append(m)
                free ^= m
                break
        else:  # pragma: no cover - the suffix tables guarantee a pick
            raise ClaimViolation("transversal reconstruction failed")
    return tuple(picks)


@dataclass(frozen=True)
class CrossReport:
    holds: bool
    reason: str | None = None  # "disjoint_transversal" or "not_maximal"
    witness: tuple[int, ...] | None = None
    index: int | None = None   # 0-based family index for an addable set
    addable: int | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_cross_dependant(seq: FamilySequence) -> CrossReport:
    """No choice of one set per family is pairwise disjoint."""
    full = lattice.full_mask(seq.n)
    if transversal_bits(seq.n, seq.families) >> full & 1:
        return CrossReport(False, "disjoint_transversal", witness=find_transversal(seq.families, full))
    return CrossReport(True)


def others_bits(seq: FamilySequence, i: int) -> int:
    return transversal_bits(seq.n, seq.families[:i] + seq.families[i + 1:])


def is_cross_saturated(seq: FamilySequence) -> CrossReport:
    """Cross dependent, and every set missing from any F_i is blocked.

    A missing from F_i is addable iff the other families have no disjoint
    transversal inside [n] - A.
    """
    dep = is_cross_dependant(seq)
    if not dep:
        return dep
    n = seq.n
    for i, f in enumerate(seq.families):
        blocked = lattice.pwcomp_bits(n, others_bits(seq, i))
        bad = lattice.all_bits(n) & ~f.bits & ~blocked
        if bad:
            return CrossReport(False, "not_maximal", index=i, addable=(bad & -bad).bit_length() - 1)
    return CrossReport(True)


def cross_saturate(seq: FamilySequence, order: Sequence[int] | None = None) -> FamilySequence:
    """Extend a cross-dependent sequence to a cross-saturated one.

    The t-th candidate set A in ``order`` is offered to families
    t, t+1, ..., t+s-1 (mod s) in turn; one pass suffices since adding sets
    only blocks further additions.
    """
    if not is_cross_dependant(seq):
        raise ValueError("input sequence is not cross dependant")
    n, s = seq.n, seq.s
    order = default_order(n) if order is None else order
    full = lattice.full_mask(n)
    bits = [f.bits for f in seq.families]
    cache: dict[int, int] = {}
    for t, a in enumerate(order):
        for r in range(s):
            i = (t + r) % s
            if bits[i] >> a & 1:
                continue
            if i not in cache:
                others = [SetFamily(n, b) for j, b in enumerate(bits) if j != i]
                cache[i] = transversal_bits(n, others)
            if cache[i] >> (full ^ a) & 1:
                continue
            bits[i] |= 1 << a
            for j in list(cache):
                if j != i:
                    del cache[j]
    return FamilySequence(tuple(SetFamily(n, b) for b in bits))


def _require_saturated(seq: FamilySequence) -> None:
    rep = is_cross_saturated(seq)
    if not rep:
        raise ValueError(f"sequence is not cross saturated ({rep.reason})")


@dataclass(frozen=True)
class Eq1Result:
    index: int
    holds: bool
    first_difference: int | None = None


def eq1_identity_check(seq: FamilySequence, check: bool = True) -> list[Eq1Result]:
    """For each i, compare dual(F_i) with the box fold of the other families."""
    if check:
        _require_saturated(seq)
    out = []
    for i, f in enumerate(seq.families):
        folded = box_fold(seq.families[:i] + seq.families[i + 1:])
        diff = family_dual(f).bits ^ folded.bits
        out.append(Eq1Result(i, diff == 0, None if diff == 0 else (diff & -diff).bit_length() - 1))
    return out


@dataclass(frozen=True)
class GFamilies:
    families: tuple[SetFamily, ...]
    comp_sizes: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(g.size() for g in self.families)


def compute_G(seq: FamilySequence, check: bool = True) -> GFamilies:
    """G_1 = comp(F_1); G_i = fold(F_1..F_{i-1}) & pwcomp(fold(F_{i+1}..F_s)), i >= 2.

    An empty tail fold is P([n]).  Pairwise disjointness of the G_i and
    |comp(F_i)| <= |G_i| are verified before returning.
    """
    if check:
        _require_saturated(seq)
    n, fams = seq.n, seq.families
    gs = [family_complement(fams[0])]
    for i in range(1, seq.s):
        head = box_fold(fams[:i])
        tail = box_fold(fams[i + 1:]) if i + 1 < seq.s else SetFamily.power_set(n)
        gs.append(head & pointwise_complement(tail))
    comp_sizes = tuple(family_complement(f).size() for f in fams)
    for i in range(seq.s):
        for j in range(i + 1, seq.s):
            common = gs[i].bits & gs[j].bits
            if common:
                raise ClaimViolation(
                    f"G_{i + 1} and G_{j + 1} share mask {(common & -common).bit_length() - 1}")
        if comp_sizes[i] > gs[i].size():
            raise ClaimViolation(f"|comp F_{i + 1}| = {comp_sizes[i]} exceeds |G_{i + 1}| = {gs[i].size()}")
    result = GFamilies(tuple(gs), comp_sizes)
    if result.total > 1 << n:
        raise ClaimViolation(f"sum of |G_i| = {result.total} exceeds 2^n")
    return result


@dataclass(frozen=True)
class CrossBoundReport:
    sizes: tuple[int, ...]
    total: int
    bound: int
    holds: bool

    def as_dict(self) -> dict:
        return {"sizes": list(self.sizes), "sum": self.total, "bound": self.bound, "holds": self.holds}


def check_theorem_cross(seq: FamilySequence, check: bool = True) -> CrossBoundReport:
    """Sum of sizes against (s - 1) * 2^n."""
    if check:
        _require_saturated(seq)
    sizes = tuple(seq.sizes())
    bound = (seq.s - 1) << seq.n
    return CrossBoundReport(sizes, sum(sizes), bound, sum(sizes) >= bound)


@dataclass(frozen=True)
class SaturatedBoundsReport:
    size: int
    s: int
    thm_bound: Fraction
    conj_bound: Fraction
    meets_thm: bool
    meets_conj: bool

    def as_dict(self) -> dict:
        def num(x: Fraction):
            return x.numerator if x.denominator == 1 else str(x)
        return {"size": self.size, "s": self.s, "thm_bound": num(self.thm_bound),
                "conj_bound": num(self.conj_bound), "meets_thm": self.meets_thm,
                "meets_conj": self.meets_conj}


def check_saturated_bounds(f: SetFamily, s: int, check: bool = True) -> SaturatedBoundsReport:
    """|F| against (1 - 1/s) 2^n and (1 - 2^-(s-1)) 2^n, compared in integers."""
    if check and not is_s_saturated(f, s):
        raise ValueError(f"family is not {s}-saturated")
    size, total = f.size(), 1 << f.n
    meets_thm = s * size >= (s - 1) * total
    meets_conj = size << (s - 1) >= ((1 << (s - 1)) - 1) * total
    return SaturatedBoundsReport(
        size, s,
        Fraction((s - 1) * total, s),
        Fraction(((1 << (s - 1)) - 1) * total, 1 << (s - 1)),
        meets_thm, meets_conj,
    )
