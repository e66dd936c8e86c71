"""Set families over [n], their duals, and s-saturation.

Subsets are integer masks (element ``i`` is bit ``i - 1``).  A ``SetFamily``
stores its characteristic bitvector as one Python int, so complements,
closures and disjoint-occurrence tables are whole-int bit operations.

Tuples of "pairwise disjoint" members may repeat a member.  Only the empty
set is disjoint from itself, so the convention matters exactly for ∅: a
family containing ∅ contains k pairwise disjoint sets for every k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from satlab import kernels, lattice
from satlab.lattice import N_MAX_CORE, check_n


def mask_of(labels: Iterable[int]) -> int:
    """Mask of a set given by 1-based element labels."""
    mask = 0
    for i in labels:
        if i < 1:
            raise ValueError(f"element labels start at 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def labels_of(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def canonical_key(mask: int) -> tuple[int, int]:
    """Sort subsets by (size, mask)."""
    return mask.bit_count(), mask


@dataclass(frozen=True)
class SetFamily:
    """A family of subsets of [n] stored as a 2**n-bit characteristic vector."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", check_n(self.n))
        if not 0 <= self.bits <= lattice.all_bits(self.n):
            raise ValueError(f"bitvector does not fit P([{self.n}])")

    @classmethod
    def empty(cls, n: int) -> SetFamily:
        return cls(n, 0)

    @classmethod
    def power_set(cls, n: int) -> SetFamily:
        return cls(n, lattice.all_bits(check_n(n)))

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> SetFamily:
        n = check_n(n)
        bits = 0
        limit = 1 << n
        for m in masks:
            if not 0 <= m < limit:
                raise ValueError(f"mask {m} is not a subset of [{n}]")
            bits |= 1 << m
        return cls(n, bits)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> SetFamily:
        """Build from sets of 1-based labels, e.g. ``from_sets(2, [{1}, {1, 2}])``."""
        n = check_n(n)
        masks = []
        for labels in sets:
            m = mask_of(labels)
            if m >> n:
                raise ValueError(f"set {sorted(labels)} is not a subset of [{n}]")
            masks.append(m)
        return cls.from_masks(n, masks)

    def size(self) -> int:
        return self.bits.bit_count()

    __len__ = size

    def __contains__(self, mask: int) -> bool:
        return 0 <= mask < (1 << self.n) and bool(self.bits >> mask & 1)

    def __iter__(self) -> Iterator[int]:
        return lattice.iter_masks(self.bits)

    def masks(self) -> list[int]:
        return list(self)

    def sets(self) -> list[tuple[int, ...]]:
        """Members as label tuples in canonical (size, mask) order."""
        return [labels_of(m) for m in sorted(self, key=canonical_key)]

    def add(self, mask: int) -> SetFamily:
        return SetFamily.from_masks(self.n, [mask]) | self

    def _same(self, other: SetFamily) -> None:
        if not isinstance(other, SetFamily):
            raise TypeError(f"expected SetFamily, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"ground sets differ: n={self.n} vs n={other.n}")

    def __or__(self, other: SetFamily) -> SetFamily:
        self._same(other)
        return SetFamily(self.n, self.bits | other.bits)

    def __and__(self, other: SetFamily) -> SetFamily:
        self._same(other)
        return SetFamily(self.n, self.bits & other.bits)

    def __sub__(self, other: SetFamily) -> SetFamily:
        self._same(other)
        return SetFamily(self.n, self.bits & ~other.bits)

    def issubset(self, other: SetFamily) -> bool:
        self._same(other)
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.sets())
        return f"SetFamily(n={self.n}, [{body}])"


@dataclass(frozen=True)
class FamilySequence:
    """An ordered sequence of s >= 2 families on a common ground set."""

    families: tuple[SetFamily, ...]

    def __post_init__(self) -> None:
        fams = tuple(self.families)
        object.__setattr__(self, "families", fams)
        if len(fams) < 2:
            raise ValueError("a family sequence needs s >= 2 families")
        if len({f.n for f in fams}) != 1:
            raise ValueError("all families must share one ground set")

    @classmethod
    def of(cls, *families: SetFamily) -> FamilySequence:
        return cls(tuple(families))

    @classmethod
    def diagonal(cls, family: SetFamily, s: int) -> FamilySequence:
        return cls((family,) * s)

    @property
    def n(self) -> int:
        return self.families[0].n

    @property
    def s(self) -> int:
        return len(self.families)

    def __len__(self) -> int:
        return len(self.families)

    def __iter__(self) -> Iterator[SetFamily]:
        return iter(self.families)

    def __getitem__(self, i: int) -> SetFamily:
        return self.families[i]

    def replace(self, i: int, family: SetFamily) -> FamilySequence:
        fams = list(self.families)
        fams[i] = family
        return FamilySequence(tuple(fams))

    def sizes(self) -> list[int]:
        return [f.size() for f in self.families]


# ------------------------------------------------------------------ complements

def family_complement(f: SetFamily) -> SetFamily:
    """P([n]) minus the family."""
    return SetFamily(f.n, lattice.all_bits(f.n) & ~f.bits)


def pointwise_complement(f: SetFamily) -> SetFamily:
    """Replace every member A by [n] - A."""
    return SetFamily(f.n, lattice.pwcomp_bits(f.n, f.bits))


def family_dual(f: SetFamily) -> SetFamily:
    """Pointwise complement of the family complement: {A : [n] - A not in F}."""
    return pointwise_complement(family_complement(f))


def up_closure(f: SetFamily) -> SetFamily:
    return SetFamily(f.n, lattice.up_bits(f.n, f.bits))


def is_increasing(f: SetFamily) -> bool:
    return lattice.up_bits(f.n, f.bits) == f.bits


def minimal_members(f: SetFamily) -> SetFamily:
    return SetFamily(f.n, lattice.minimal_bits(f.n, f.bits))


# ------------------------------------------------------------------ disjointness

def is_intersecting(f: SetFamily) -> bool:
    """Every two members, a member with itself included, share an element.

    B is disjoint from A iff B lies inside [n] - A, so F is intersecting iff
    no complement of a member lands in the up-closure of F.
    """
    return lattice.pwcomp_bits(f.n, f.bits) & lattice.up_bits(f.n, f.bits) == 0


def disjoint_tables(f: SetFamily, k: int) -> list[int]:
    """``tables[j]`` marks every T containing j pairwise disjoint members of F.

    ``tables[0]`` is all of P([n]).  Each level is the increasing disjoint
    occurrence of F with the previous level.
    """
    n = f.n
    tables = [lattice.all_bits(n)]
    up = lattice.up_bits(n, f.bits)
    if k >= 1:
        tables.append(up)
    mins = list(lattice.iter_masks(lattice.minimal_bits(n, f.bits)))
    for _ in range(2, k + 1):
        prev = tables[-1]
        nxt = 0
        for m in mins:
            nxt |= (prev & lattice.disjoint_from(n, m)) << m
        tables.append(nxt)
    return tables


def find_pairwise_disjoint(f: SetFamily, k: int, within: int | None = None) -> tuple[int, ...] | None:
    """A tuple of k pairwise disjoint members inside ``within``, or None.

    Members are searched in ascending mask order; the witness is sorted.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    free = lattice.full_mask(f.n) if within is None else within
    if 0 in f:
        # ∅ may be repeated, so pad a greedy disjoint selection with ∅
        picked: list[int] = []
        used = 0
        for m in f:
            if len(picked) == k - 1:
                break
            if m and m & used == 0 and m & ~free == 0:
                picked.append(m)
                used |= m
        return tuple(sorted([0] * (k - len(picked)) + picked))
    members = [m for m in f if m & ~free == 0]
    found = kernels.active.disjoint_search(members, f.n, free, k)
    return None if found is None else tuple(sorted(found))


def contains_k_pairwise_disjoint(f: SetFamily, k: int) -> bool:
    return find_pairwise_disjoint(f, k) is not None


# ------------------------------------------------------------------ saturation

@dataclass(frozen=True)
class SaturationReport:
    saturated: bool
    reason: str | None = None  # "contains_disjoint" or "not_maximal"
    witness: tuple[int, ...] | None = None
    addable: int | None = None

    def __bool__(self) -> bool:
        return self.saturated


def _check_s(s: int) -> int:
    if s < 2:
        raise ValueError(f"s must be >= 2, got {s}")
    return s


def is_s_saturated(f: SetFamily, s: int) -> SaturationReport:
    """Whether F has no s pairwise disjoint members and is maximal with that property.

    For a nonempty A outside F, adding A creates s disjoint members iff
    [n] - A already holds s - 1 of them.  Adding ∅ always does (s >= 2).
    """
    _check_s(s)
    n = f.n
    tables = disjoint_tables(f, s)
    if tables[s] >> lattice.full_mask(n) & 1:
        return SaturationReport(False, "contains_disjoint", witness=find_pairwise_disjoint(f, s))
    outside = lattice.all_bits(n) & ~f.bits & ~1
    bad = outside & ~lattice.pwcomp_bits(n, tables[s - 1])
    if bad:
        return SaturationReport(False, "not_maximal", addable=(bad & -bad).bit_length() - 1)
    return SaturationReport(True)


def default_order(n: int) -> list[int]:
    """Candidate order: descending cardinality, ties by ascending mask."""
    return sorted(range(1 << check_n(n)), key=lambda m: (-m.bit_count(), m))


def random_order(n: int, rng: random.Random | int | None = None) -> list[int]:
    """A uniformly random permutation of all subset masks."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    order = list(range(1 << check_n(n)))
    rng.shuffle(order)
    return order


def saturate(f: SetFamily, s: int, order: Sequence[int] | None = None) -> SetFamily:
    """Greedily extend F to an s-saturated family.

    Candidates are scanned once in ``order`` (default: ``default_order``);
    each is added when the family stays free of s pairwise disjoint sets.
    One pass suffices because that property only gets harder to keep.
    """
    _check_s(s)
    n = f.n
    if contains_k_pairwise_disjoint(f, s):
        raise ValueError(f"input already contains {s} pairwise disjoint sets")
    order = default_order(n) if order is None else order
    full = lattice.full_mask(n)
    tables = disjoint_tables(f, s - 1)
    bits = f.bits
    for a in order:
        if a == 0 or bits >> a & 1:
            continue
        if tables[s - 1] >> (full ^ a) & 1:
            continue
        bits |= 1 << a
        z = lattice.disjoint_from(n, a)
        for j in range(s - 1, 0, -1):
            tables[j] |= (tables[j - 1] & z) << a
    return SetFamily(n, bits)


__all__ = [
    "N_MAX_CORE",
    "FamilySequence",
    "SaturationReport",
    "SetFamily",
    "canonical_key",
    "contains_k_pairwise_disjoint",
    "default_order",
    "disjoint_tables",
    "family_complement",
    "family_dual",
    "find_pairwise_disjoint",
    "is_increasing",
    "is_intersecting",
    "is_s_saturated",
    "labels_of",
    "mask_of",
    "minimal_members",
    "pointwise_complement",
    "random_order",
    "saturate",
    "up_closure",
]
