"""Cylinder sets, disjoint occurrence (the box operator) and correlation checks."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from satlab import kernels, lattice
from satlab.family import SetFamily, is_increasing, pointwise_complement
from satlab.lattice import check_n

N_MAX_BOX_GENERAL = 14


def cylinder(n: int, index: int, base: int) -> SetFamily:
    """All S agreeing with ``base`` on the coordinates in ``index``."""
    n = check_n(n)
    limit = 1 << n
    if not (0 <= index < limit and 0 <= base < limit):
        raise ValueError("index and base must be subsets of [n]")
    return SetFamily(n, lattice.cylinder_bits(n, index, base))


def cylinder_witnesses(f: SetFamily, base: int) -> SetFamily:
    """Index sets I whose cylinder around ``base`` lies inside F.

    The result is upward closed: fixing more coordinates shrinks a cylinder.
    """
    n = f.n
    outside = lattice.all_bits(n) & ~f.bits
    bits = 0
    for index in range(1 << n):
        if lattice.cylinder_bits(n, index, base) & outside == 0:
            bits |= 1 << index
    return SetFamily(n, bits)


def _check_pair(a: SetFamily, b: SetFamily) -> int:
    if a.n != b.n:
        raise ValueError(f"ground sets differ: n={a.n} vs n={b.n}")
    return a.n


def box_general(a: SetFamily, b: SetFamily, threads: int = 1) -> SetFamily:
    """Disjoint occurrence of arbitrary families.

    S is a member iff disjoint I, J exist with C(I, S) inside A and C(J, S)
    inside B.  Work is split over contiguous S-ranges; the result does not
    depend on ``threads``.
    """
    n = _check_pair(a, b)
    if n > N_MAX_BOX_GENERAL:
        raise ValueError(f"general box is capped at n <= {N_MAX_BOX_GENERAL}, got n={n}")
    ta = lattice.table_bytes(n, a.bits)
    tb = lattice.table_bytes(n, b.bits)
    size = 1 << n
    kern = kernels.active
    if threads <= 1 or size < 64:
        return SetFamily(n, lattice.bits_from_table(kern.box_general_table(ta, tb, n)))
    step = -(-size // threads)
    ranges = [(lo, min(size, lo + step)) for lo in range(0, size, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda r: kern.box_general_table(ta, tb, n, r[0], r[1]), ranges))
    return SetFamily(n, lattice.bits_from_table(b"".join(parts)))


def box_increasing(a: SetFamily, b: SetFamily) -> SetFamily:
    """Sets containing a disjoint union of a member of A and a member of B."""
    n = _check_pair(a, b)
    if not is_increasing(a) or not is_increasing(b):
        raise ValueError("box_increasing needs increasing families")
    return SetFamily(n, lattice.box_up_bits(n, a.bits, b.bits))


def box(a: SetFamily, b: SetFamily) -> SetFamily:
    """Increasing fast path when possible, general definition otherwise."""
    if is_increasing(a) and is_increasing(b):
        return box_increasing(a, b)
    return box_general(a, b)


def box_fold(families: Sequence[SetFamily]) -> SetFamily:
    """Left fold of the box operator; a single family is returned unchanged."""
    if not families:
        raise ValueError("box_fold needs at least one family")
    return reduce(box, families)


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: int
    rhs: int
    holds: bool
    box_size: int

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "holds": self.holds, "box_size": self.box_size}


def talagrand_check(a: SetFamily, b: SetFamily, boxed: SetFamily | None = None) -> InequalityReport:
    """|A box B| <= |pwcomp(A) & B|."""
    boxed = box(a, b) if boxed is None else boxed
    lhs = boxed.size()
    rhs = (pointwise_complement(a) & b).size()
    return InequalityReport("talagrand", lhs, rhs, lhs <= rhs, lhs)


def bkr_check(a: SetFamily, b: SetFamily, boxed: SetFamily | None = None) -> InequalityReport:
    """2**n * |A box B| <= |A| * |B|."""
    boxed = box(a, b) if boxed is None else boxed
    lhs = (1 << a.n) * boxed.size()
    rhs = a.size() * b.size()
    return InequalityReport("bkr", lhs, rhs, lhs <= rhs, boxed.size())
