"""Pure-Python implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is unavailable or ``SATLAB_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def disjoint_search(members, n, free, k):
    """Find ``k`` pairwise disjoint masks from ``members`` inside ``free``.

    ``members`` must be nonempty masks.  Branches on the lowest free element:
    it is either covered by a member whose lowest element it is, or left
    unused.  Failures are memoised on ``(free, k)``.
    """
    if k <= 0:
        return []
    if k > n:
        return None
    by_low = [[] for _ in range(n)]
    for m in sorted(members):
        by_low[(m & -m).bit_length() - 1].append(m)
    failed = set()

    def go(free, k):
        if k == 0:
            return []
        if free.bit_count() < k or (free, k) in failed:
            return None
        low = free & -free
        for m in by_low[low.bit_length() - 1]:
            if m & ~free == 0:
                rest = go(free ^ m, k - 1)
                if rest is not None:
                    return [m] + rest
        rest = go(free ^ low, k)
        if rest is not None:
            return rest
        failed.add((free, k))
        return None

    return go(free, k)


def _tern(n):
    t = np.zeros(1 << n, dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    for j in range(n):
        t += ((masks >> j) & 1) * 3 ** j
    return t


def _witness_table(table, n, tern):
    """For every pattern (I, S & I) in base 3, whether the cylinder lies in the family.

    Digit j of a pattern is 0/1 for a fixed coordinate and 2 for a free one.
    A pattern with a free coordinate j is the AND of its two refinements.
    """
    w = np.zeros(3 ** n, dtype=bool)
    w[tern] = np.frombuffer(table, dtype=np.uint8).astype(bool)
    cube = w.reshape((3,) * n) if n else w
    for axis in range(n):
        idx0 = [slice(None)] * n
        idx1 = list(idx0)
        idx2 = list(idx0)
        idx0[axis], idx1[axis], idx2[axis] = 0, 1, 2
        cube[tuple(idx2)] = cube[tuple(idx0)] & cube[tuple(idx1)]
    return cube.reshape(-1)


def box_general_table(a, b, n, lo=0, hi=None):
    """Membership table of A box B for the S-range [lo, hi).

    S is in A box B iff some I has C(I, S) inside A and C([n] - I, S) inside
    B; witnesses are upward closed, so checking complementary pairs suffices.
    """
    size = 1 << n
    hi = size if hi is None else hi
    full = size - 1
    tern = _tern(n)
    wa = _witness_table(a, n, tern)
    wb = _witness_table(b, n, tern)
    index = np.arange(size, dtype=np.int64)
    comp = full ^ index
    free_a = 2 * tern[comp]
    free_b = 2 * tern[index]
    out = np.zeros(hi - lo, dtype=np.uint8)
    chunk = max(1, (1 << 20) // size)
    for start in range(lo, hi, chunk):
        stop = min(hi, start + chunk)
        s = np.arange(start, stop, dtype=np.int64)[:, None]
        hit = wa[tern[s & index] + free_a] & wb[tern[s & comp] + free_b]
        out[start - lo: stop - lo] = hit.any(axis=1)
    return out.tobytes()


def _helpers(n):
    size = 1 << n
    everything = (1 << size) - 1
    clear = []
    for i in range(n):
        w = 1 << i
        clear.append((everything // ((1 << (2 * w)) - 1)) * ((1 << w) - 1))
    disjoint = [everything] * size
    for m in range(1, size):
        low = (m & -m).bit_length() - 1
        disjoint[m] = disjoint[m & (m - 1)] & clear[low]
    return everything, clear, disjoint


def _pwcomp(bits, n, clear):
    for i in range(n):
        w = 1 << i
        bits = ((bits & clear[i]) << w) | ((bits >> w) & clear[i])
    return bits


def descending_order(n):
    """Nonempty masks by descending size, ties by ascending mask."""
    return sorted(range(1, 1 << n), key=lambda m: (-m.bit_count(), m))


def _subset_tables(n):
    size = 1 << n
    up = [0] * size
    down = [0] * size
    for x in range(size):
        for y in range(size):
            if x & y == x:
                up[x] |= 1 << y
            if x & y == y:
                down[x] |= 1 << y
    return up, down


def antichain_branch(n, s, start, incumbent):
    """Search every increasing family whose largest minimal set is ``order[start]``.

    ``start == -1`` evaluates only the empty family.  Returns
    ``(best, witnesses, examined)``: the smallest saturated size found that
    does not exceed ``incumbent`` (or -1), all families of that size in
    discovery order, and the number of families evaluated.
    """
    size = 1 << n
    everything, clear, disjoint = _helpers(n)
    upset, downset = _subset_tables(n)
    order = descending_order(n)
    full_bit = 1 << (size - 1)
    nonempty = everything & ~1
    state = {"best": incumbent, "found": [], "examined": 0}

    def evaluate(u, tables):
        state["examined"] += 1
        if (~u & nonempty) & ~_pwcomp(tables[s - 1], n, clear):
            return
        c = u.bit_count()
        if c < state["best"]:
            state["best"], state["found"] = c, [u]
        elif c == state["best"]:
            state["found"].append(u)

    def extend(tables, x):
        new = list(tables)
        z = disjoint[x]
        for j in range(s, 0, -1):
            new[j] = tables[j] | ((tables[j - 1] & z) << x)
        return new

    def dfs(pos, u, blocked, tables):
        evaluate(u, tables)
        for j in range(pos, len(order)):
            x = order[j]
            if blocked >> x & 1:
                continue
            nu = u | upset[x]
            if nu.bit_count() > state["best"]:
                continue
            nt = extend(tables, x)
            if nt[s] & full_bit:
                continue
            dfs(j + 1, nu, blocked | downset[x], nt)

    root = [everything] + [0] * s
    if start < 0:
        evaluate(0, root)
    else:
        x = order[start]
        u = upset[x]
        t = extend(root, x)
        if u.bit_count() <= state["best"] and not t[s] & full_bit:
            dfs(start + 1, u, downset[x], t)
    if not state["found"]:
        return -1, [], state["examined"]
    return state["best"], state["found"], state["examined"]


def raw_range(n, s, lo, hi):
    """Test every family bitvector in ``[lo, hi)`` for s-saturation.

    Returns ``(best, witnesses, examined, saturated, non_increasing)``.
    """
    size = 1 << n
    everything, clear, disjoint = _helpers(n)
    full_bit = 1 << (size - 1)
    nonempty = everything & ~1
    best, found, saturated, nonincr = -1, [], 0, 0
    for f in range(lo, hi):
        if f & 1:
            continue
        up = f
        for i in range(n):
            up |= (up & clear[i]) << (1 << i)
        strict = 0
        for i in range(n):
            strict |= (up & clear[i]) << (1 << i)
        minimal = f & ~strict
        mins = []
        m = minimal
        while m:
            low = m & -m
            mins.append(low.bit_length() - 1)
            m ^= low
        prev, d = everything, up
        for _ in range(s - 1):
            nxt = 0
            for x in mins:
                nxt |= (d & disjoint[x]) << x
            prev, d = d, nxt
        # prev = D_{s-1}, d = D_s
        if d & full_bit:
            continue
        if (~f & nonempty) & ~_pwcomp(prev, n, clear):
            continue
        saturated += 1
        if up != f:
            nonincr += 1
        c = f.bit_count()
        if best < 0 or c < best:
            best, found = c, [f]
        elif c == best:
            found.append(f)
    return best, found, hi - lo, saturated, nonincr
