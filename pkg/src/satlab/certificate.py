"""Polynomial independence certificate for cross-saturated sequences.

Functions on {0,1}^n are stored as evaluation vectors: entry ``m`` is the
value at the point whose coordinates are the bits of mask ``m``.  For every
family index i and every A in dual(F_i) a signed product polynomial Q_{i,A}
is built from a disjoint split A = B | C; the stacked vectors are shown to
have full row rank by exact integer elimination, which bounds
sum |comp F_i| by 2^n.

Family indices are 0-based in this API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from satlab.cross import ClaimViolation, find_transversal, is_cross_saturated
from satlab.family import FamilySequence, family_complement, family_dual
from satlab.lattice import check_n

N_MAX_ALG = 8


@dataclass(frozen=True)
class EvalVector:
    n: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != 1 << self.n:
            raise ValueError(f"an evaluation vector on n={self.n} needs {1 << self.n} entries")

    def __len__(self) -> int:
        return len(self.values)


def eval_PS(n: int, subset: int) -> EvalVector:
    """The monomial prod_{i in S} x_i: 1 exactly at points containing S."""
    n = check_n(n)
    return EvalVector(n, tuple(int(m & subset == subset) for m in range(1 << n)))


def inner_product(f: EvalVector, g: EvalVector) -> int:
    """Sum over the cube of f(x) g(x)."""
    if f.n != g.n:
        raise ValueError("vectors live on different cubes")
    return sum(a * b for a, b in zip(f.values, g.values))


def to_monomial_basis(v: EvalVector) -> list[int]:
    """Coefficients on the P_S basis (Moebius inversion over subsets)."""
    coef = list(v.values)
    for i in range(v.n):
        bit = 1 << i
        for m in range(1 << v.n):
            if m & bit:
                coef[m] -= coef[m ^ bit]
    return coef


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on integers.

    Pivots with the smallest absolute value are preferred to keep entries
    small; every division is exact.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank, prev = 0, 1
    for c in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            v = m[r][c]
            if v and (piv is None or abs(v) < abs(m[piv][c])):
                piv = r
                if abs(v) == 1:
                    break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        p = prow[c]
        for r in range(rank + 1, len(m)):
            row = m[r]
            a = row[c]
            if a == 0:
                if p != prev:
                    for k in range(c + 1, ncols):
                        if row[k]:
                            row[k] = row[k] * p // prev
                continue
            for k in range(c, ncols):
                row[k] = (p * row[k] - a * prow[k]) // prev
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def basis_independence_selftest(n: int) -> bool:
    """The 2^n monomials P_S are linearly independent (exact rank 2^n)."""
    n = check_n(n, N_MAX_ALG)
    rows = [eval_PS(n, s).values for s in range(1 << n)]
    return exact_rank(rows) == 1 << n


@dataclass(frozen=True)
class Decomposition:
    """A = B | C with parts (family index, member); B-parts come from
    families before ``index``, C-parts from families after it.  Parts equal
    to ∅ are omitted."""

    index: int
    target: int
    parts_B: tuple[tuple[int, int], ...]
    parts_C: tuple[tuple[int, int], ...]

    @property
    def B(self) -> int:
        out = 0
        for _, m in self.parts_B:
            out |= m
        return out

    @property
    def C(self) -> int:
        out = 0
        for _, m in self.parts_C:
            out |= m
        return out

    def validate(self, seq: FamilySequence) -> None:
        used = 0
        seen = set()
        for j, m in self.parts_B + self.parts_C:
            if j in seen or j == self.index:
                raise ValueError(f"family {j} used twice or is the excluded index")
            seen.add(j)
            if m & used:
                raise ValueError("parts are not pairwise disjoint")
            used |= m
            if m not in seq[j]:
                raise ValueError(f"part {m} is not a member of family {j}")
        if any(j >= self.index for j, _ in self.parts_B) or any(j <= self.index for j, _ in self.parts_C):
            raise ValueError("parts on the wrong side of the index")
        if used != self.target:
            raise ValueError("parts do not cover the target exactly")
        for j in range(seq.s):
            if j != self.index and j not in seen and 0 not in seq[j]:
                raise ValueError(f"family {j} has no part and does not contain the empty set")


def find_decomposition(seq: FamilySequence, i: int, target: int, check: bool = True) -> Decomposition:
    """Split ``target`` into disjoint members, one per family other than i.

    Families are visited in ascending index order, each taking its smallest
    member that still leaves room for the rest; whatever of ``target`` stays
    uncovered is merged into the first part (families are increasing).
    """
    if check and not is_cross_saturated(seq):
        raise ValueError("sequence is not cross saturated")
    others = [j for j in range(seq.s) if j != i]
    picks = find_transversal([seq[j] for j in others], target)
    if picks is None:
        raise ValueError(f"no decomposition of mask {target} for index {i}")
    parts = list(zip(others, picks))
    leftover = target
    for _, m in parts:
        leftover &= ~m
    if leftover:
        for k, (j, m) in enumerate(parts):
            if (m | leftover) in seq[j]:
                parts[k] = (j, m | leftover)
                break
        else:
            raise ValueError(f"no decomposition of mask {target} for index {i}")
    parts = [(j, m) for j, m in parts if m]
    d = Decomposition(i, target, tuple(p for p in parts if p[0] < i), tuple(p for p in parts if p[0] > i))
    d.validate(seq)
    return d


def build_Q(n: int, d: Decomposition) -> EvalVector:
    """prod_{j in B} x_j * prod_{j in C} (x_j - 1) evaluated on the cube.

    Nonzero exactly where x agrees with B on A = B | C, with sign (-1)^|C|.
    """
    b, a = d.B, d.target
    sign = -1 if d.C.bit_count() % 2 else 1
    return EvalVector(n, tuple(sign if m & a == b else 0 for m in range(1 << n)))


@dataclass
class CertificateReport:
    n: int
    s: int
    block_sizes: list[int]
    comp_sizes: list[int]
    block_ranks: list[int]
    total_rank: int
    cross_orthogonal: bool
    disjointness_reason: bool
    leading_coefficients: bool
    sizes_sum: int
    bound_confirmed: bool
    failures: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n": self.n, "s": self.s,
            "block_sizes": self.block_sizes, "comp_sizes": self.comp_sizes,
            "block_ranks": self.block_ranks, "total_rank": self.total_rank,
            "cross_orthogonal": self.cross_orthogonal,
            "disjointness_reason": self.disjointness_reason,
            "leading_coefficients": self.leading_coefficients,
            "sizes_sum": self.sizes_sum, "bound": (self.s - 1) << self.n,
            "bound_confirmed": self.bound_confirmed, "failures": self.failures,
        }


def independence_certificate(seq: FamilySequence, check: bool = True,
                             check_leading: bool | None = None) -> CertificateReport:
    """Build every Q_{i,A} and verify orthogonality across blocks and full rank.

    ``check_leading`` also expands each Q in the monomial basis and checks the
    coefficient on P_A is 1 with support inside the subsets of A (default:
    on for n <= 4).
    """
    n, s = seq.n, seq.s
    check_n(n, N_MAX_ALG)
    if check and not is_cross_saturated(seq):
        raise ValueError("sequence is not cross saturated")
    if check_leading is None:
        check_leading = n <= 4
    failures: list[str] = []
    blocks: list[list[tuple[int, Decomposition, EvalVector]]] = []
    for i in range(s):
        block = []
        for a in family_dual(seq[i]):
            d = find_decomposition(seq, i, a, check=False)
            block.append((a, d, build_Q(n, d)))
        blocks.append(block)

    leading_ok = True
    if check_leading:
        for i, block in enumerate(blocks):
            for a, _, q in block:
                coef = to_monomial_basis(q)
                if coef[a] != 1 or any(c and (m & ~a) for m, c in enumerate(coef)):
                    leading_ok = False
                    failures.append(f"Q_{i},{a}: leading coefficient check failed")

    reason_ok = True
    for i in range(s):
        for j in range(i + 1, s):
            for a, d, _ in blocks[i]:
                for a2, d2, _ in blocks[j]:
                    # an empty intersection would give a disjoint transversal
                    if d2.B & d.C == 0:
                        reason_ok = False
                        failures.append(f"B' & C empty for (i={i}, A={a}, j={j}, A'={a2})")

    rows = [q.values for block in blocks for _, _, q in block]
    labels = [(i, a) for i, block in enumerate(blocks) for a, _, _ in block]
    orth_ok = True
    if rows:
        mat = np.array(rows, dtype=np.int64)
        gram = mat @ mat.T
        owner = np.array([i for i, _ in labels])
        cross = (owner[:, None] != owner[None, :]) & (gram != 0)
        if cross.any():
            orth_ok = False
            for r, c in zip(*np.nonzero(np.triu(cross))):
                failures.append(f"<Q_{labels[r]}, Q_{labels[c]}> = {gram[r, c]}")

    block_ranks = [exact_rank([q.values for _, _, q in block]) for block in blocks]
    total_rank = exact_rank(rows)
    comp_sizes = [family_complement(f).size() for f in seq]
    block_sizes = [len(b) for b in blocks]
    for i in range(s):
        if block_ranks[i] != block_sizes[i]:
            failures.append(f"block {i} has rank {block_ranks[i]} < {block_sizes[i]}")
    sizes_sum = sum(seq.sizes())
    bound_confirmed = (
        total_rank == sum(comp_sizes) == len(rows)
        and total_rank <= 1 << n
        and sizes_sum == (s << n) - sum(comp_sizes)
        and sizes_sum >= (s - 1) << n
    )
    return CertificateReport(n, s, block_sizes, comp_sizes, block_ranks, total_rank,
                             orth_ok, reason_ok, leading_ok, sizes_sum,
                             bound_confirmed and orth_ok and reason_ok and leading_ok, failures)


def certify(seq: FamilySequence) -> CertificateReport:
    """``independence_certificate`` that raises on any failed sub-check."""
    rep = independence_certificate(seq)
    if not rep.bound_confirmed:
        raise ClaimViolation("; ".join(rep.failures) or "bound not confirmed")
    return rep
