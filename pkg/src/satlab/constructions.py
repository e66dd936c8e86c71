"""Extremal constructions: dictators, block partitions, the cross-extremal class, lifting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from satlab import lattice
from satlab.cross import is_cross_saturated
from satlab.family import (
    FamilySequence,
    SetFamily,
    family_dual,
    is_increasing,
    is_intersecting,
    is_s_saturated,
)
from satlab.lattice import check_n


def dictator_family(n: int, element: int) -> SetFamily:
    """All subsets of [n] containing ``element``."""
    n = check_n(n)
    if not 1 <= element <= n:
        raise ValueError(f"element {element} is not in [{n}]")
    m = 1 << (element - 1)
    return SetFamily(n, lattice.cylinder_bits(n, m, m))


BlockChoice = Union[int, SetFamily]


@dataclass(frozen=True)
class PartitionSpec:
    """Blocks I_1..I_{s-1} partitioning [n], each with a maximal intersecting family.

    A choice is either a dictator element inside the block or an explicit
    family on [n] whose members are subsets of the block.  ``choices=None``
    takes the dictator on each block's smallest element.
    """

    n: int
    blocks: tuple[int, ...]
    choices: tuple[BlockChoice, ...] | None = None

    @property
    def s(self) -> int:
        return len(self.blocks) + 1

    def block_families(self) -> list[SetFamily]:
        n = check_n(self.n)
        if not self.blocks:
            raise ValueError("need at least one block")
        covered = 0
        for b in self.blocks:
            if b == 0 or b & covered or b >> n:
                raise ValueError("blocks must be nonempty, disjoint subsets of [n]")
            covered |= b
        if covered != lattice.full_mask(n):
            raise ValueError("blocks do not cover [n]")
        choices = self.choices or tuple((b & -b).bit_length() for b in self.blocks)
        if len(choices) != len(self.blocks):
            raise ValueError("one choice per block is required")
        out = []
        for b, c in zip(self.blocks, choices):
            if isinstance(c, SetFamily):
                fam = c
                if fam.n != n or any(m & ~b for m in fam):
                    raise ValueError("block family must consist of subsets of its block")
            else:
                if not b >> (c - 1) & 1:
                    raise ValueError(f"dictator element {c} is outside its block")
                e = 1 << (c - 1)
                fam = SetFamily.from_masks(n, [m | e for m in _submasks(b & ~e)])
            if not is_intersecting(fam) or fam.size() != 1 << (b.bit_count() - 1):
                raise ValueError("block family is not maximal intersecting within its block")
            out.append(fam)
        return out


def _submasks(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def set_partitions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All partitions of [n] into exactly k blocks, blocks ordered by least element."""
    n = check_n(n)

    def rec(i: int, blocks: list[int]) -> Iterator[tuple[int, ...]]:
        if i == n:
            if len(blocks) == k:
                yield tuple(blocks)
            return
        if len(blocks) + (n - i) < k:
            return
        bit = 1 << i
        for j in range(len(blocks)):
            blocks[j] |= bit
            yield from rec(i + 1, blocks)
            blocks[j] ^= bit
        if len(blocks) < k:
            blocks.append(bit)
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(0, [])


def conjectured_size(n: int, s: int) -> Fraction:
    """(1 - 2^-(s-1)) 2^n."""
    return Fraction(((1 << (s - 1)) - 1) << n, 1 << (s - 1))


def partition_construction(spec: PartitionSpec, check: bool = True) -> SetFamily:
    """{A : A & I_i is in F_i for some block i}.

    With ``check`` the result is verified to be s-saturated and of size
    (1 - 2^-(s-1)) 2^n.
    """
    n = check_n(spec.n)
    bits = 0
    for block, fam in zip(spec.blocks, spec.block_families()):
        for m in fam:
            bits |= lattice.cylinder_bits(n, block, m)
    out = SetFamily(n, bits)
    if check:
        s = spec.s
        if out.size() << (s - 1) != ((1 << (s - 1)) - 1) << n:
            raise AssertionError(f"partition construction has size {out.size()}")
        if not is_s_saturated(out, s):
            raise AssertionError("partition construction is not saturated")
    return out


def intersecting_prefix_family(n: int, s: int) -> SetFamily:
    """All subsets meeting [s-1] (requires s - 1 <= n)."""
    if not 1 <= s - 1 <= n:
        raise ValueError("needs 1 <= s - 1 <= n")
    blocks = tuple(1 << i for i in range(s - 2)) + (lattice.full_mask(n) & ~((1 << (s - 2)) - 1),)
    return partition_construction(PartitionSpec(n, blocks))


def cross_extremal(f1: SetFamily, s: int, check: bool = True) -> FamilySequence:
    """(F1, dual(F1), P, ..., P) for an increasing F1."""
    if s < 2:
        raise ValueError("s must be >= 2")
    if not is_increasing(f1):
        raise ValueError("cross_extremal needs an increasing first family")
    full = SetFamily.power_set(f1.n)
    seq = FamilySequence((f1, family_dual(f1)) + (full,) * (s - 2))
    if check:
        if not is_cross_saturated(seq):
            raise AssertionError("cross-extremal sequence is not cross saturated")
        if sum(seq.sizes()) != (s - 1) << f1.n:
            raise AssertionError("cross-extremal sequence does not have size (s-1)2^n")
    return seq


def lift(f: SetFamily, s: int, check: bool = True) -> SetFamily:
    """F together with every subset of [n+1] containing n+1, on ground set [n+1].

    Maps s-saturated families to (s+1)-saturated ones with |G| = |F| + 2^n.
    """
    n = f.n
    if check and not is_s_saturated(f, s):
        raise ValueError(f"input is not {s}-saturated")
    g = SetFamily(n + 1, f.bits | (lattice.all_bits(n) << (1 << n)))
    if check:
        if g.size() != f.size() + (1 << n):
            raise AssertionError("lifted family has the wrong size")
        if not is_s_saturated(g, s + 1):
            raise AssertionError(f"lifted family is not {s + 1}-saturated")
    return g


def lift_bound_transfer(n: int, s: int) -> bool:
    """(1 - 2^-s) 2^(n+1) - 2^n equals (1 - 2^-(s-1)) 2^n, in exact arithmetic."""
    lifted = (1 - Fraction(1, 1 << s)) * (1 << (n + 1))
    base = (1 - Fraction(1, 1 << (s - 1))) * (1 << n)
    return lifted - (1 << n) == base


def all_partition_constructions(n: int, s: int) -> Iterator[tuple[tuple[int, ...], SetFamily]]:
    """Every block partition of [n] into s - 1 blocks with dictator choices on each block."""
    for blocks in set_partitions(n, s - 1):
        for choice in _dictator_choices(blocks):
            yield blocks, partition_construction(PartitionSpec(n, blocks, choice))


def _dictator_choices(blocks: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not blocks:
        yield ()
        return
    head, rest = blocks[0], blocks[1:]
    for e in range(head.bit_length()):
        if head >> e & 1:
            for tail in _dictator_choices(rest):
                yield (e + 1,) + tail
