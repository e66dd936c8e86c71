# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Mirrors ``satlab._pykernels`` function for function.  Family bitvectors for
the searches fit a single 64-bit word, so those kernels require n <= 6.
"""

from libc.stdlib cimport malloc, calloc, realloc, free
from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.string cimport memset

NAME = "compiled"
WORD_N_MAX = 6


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int popcount64(uint64_t x) noexcept nogil:
    return __builtin_popcountll(x)


# ---------------------------------------------------------------- disjoint

cdef struct DSearch:
    int n
    int *low_start
    int *low_len
    int *members
    uint8_t *fail
    int *path


cdef int _dsearch(DSearch *d, unsigned int freem, int k, int depth) noexcept nogil:
    cdef int e, idx, m
    cdef size_t key
    if k == 0:
        return 1
    if __builtin_popcountll(freem) < k:
        return 0
    key = (<size_t>k << d.n) | freem
    if d.fail[key]:
        return 0
    e = __builtin_ctzll(freem)
    for idx in range(d.low_start[e], d.low_start[e] + d.low_len[e]):
        m = d.members[idx]
        if (m & ~freem) == 0:
            d.path[depth] = m
            if _dsearch(d, freem ^ m, k - 1, depth + 1):
                return 1
    if _dsearch(d, freem ^ (1u << e), k, depth):
        return 1
    d.fail[key] = 1
    return 0


def disjoint_search(members, int n, unsigned int free_mask, int k):
    cdef DSearch d
    cdef int i, count, found
    if k <= 0:
        return []
    if k > n:
        return None
    ordered = sorted(members)
    count = len(ordered)
    d.n = n
    d.members = <int *> malloc(max(count, 1) * sizeof(int))
    d.low_start = <int *> calloc(n, sizeof(int))
    d.low_len = <int *> calloc(n, sizeof(int))
    d.path = <int *> malloc((k + 1) * sizeof(int))
    d.fail = <uint8_t *> calloc(<size_t>(k + 1) << n, 1)
    try:
        if not (d.members and d.low_start and d.low_len and d.path and d.fail):
            raise MemoryError()
        by_low = [[] for _ in range(n)]
        for m in ordered:
            by_low[((m & -m).bit_length()) - 1].append(m)
        idx = 0
        for e in range(n):
            d.low_start[e] = idx
            d.low_len[e] = len(by_low[e])
            for m in by_low[e]:
                d.members[idx] = m
                idx += 1
        with nogil:
            found = _dsearch(&d, free_mask, k, 0)
        if not found:
            return None
        return [d.path[i] for i in range(k)]
    finally:
        free(d.members)
        free(d.low_start)
        free(d.low_len)
        free(d.path)
        free(d.fail)


# ---------------------------------------------------------------- general box

cdef void _witness_table(const uint8_t[:] table, int n, int64_t *tern, uint8_t *w) noexcept nogil:
    cdef int64_t total = 1, p, j, digit, pw
    cdef size_t size = 1 << n, m
    for j in range(n):
        total *= 3
    memset(w, 0, total)
    for m in range(size):
        w[tern[m]] = table[m]
    for p in range(total):
        # lowest free digit decides the refinement
        pw = 1
        digit = p
        while digit:
            if digit % 3 == 2:
                w[p] = w[p - 2 * pw] & w[p - pw]
                break
            digit //= 3
            pw *= 3


def box_general_table(const uint8_t[:] a, const uint8_t[:] b, int n, lo=0, hi=None):
    cdef size_t size = 1 << n
    cdef size_t full = size - 1
    cdef int64_t total = 1
    cdef int j
    cdef size_t s, i, start = lo, stop = size if hi is None else hi
    cdef int64_t *tern
    cdef uint8_t *wa
    cdef uint8_t *wb
    cdef uint8_t hit
    if a.shape[0] != size or b.shape[0] != size:
        raise ValueError("tables must have 2**n entries")
    for j in range(n):
        total *= 3
    tern = <int64_t *> malloc(size * sizeof(int64_t))
    wa = <uint8_t *> malloc(total)
    wb = <uint8_t *> malloc(total)
    out = bytearray(stop - start)
    cdef uint8_t[:] view = out
    try:
        if not (tern and wa and wb):
            raise MemoryError()
        with nogil:
            tern[0] = 0
            for s in range(1, size):
                tern[s] = tern[s & (s - 1)] + _pow3(__builtin_ctzll(s))
            _witness_table(a, n, tern, wa)
            _witness_table(b, n, tern, wb)
            for s in range(start, stop):
                hit = 0
                for i in range(size):
                    if wa[tern[s & i] + 2 * tern[full ^ i]] and wb[tern[s & (full ^ i)] + 2 * tern[i]]:
                        hit = 1
                        break
                view[s - start] = hit
        return bytes(out)
    finally:
        free(tern)
        free(wa)
        free(wb)


cdef inline int64_t _pow3(int j) noexcept nogil:
    cdef int64_t r = 1
    while j > 0:
        r *= 3
        j -= 1
    return r


# ---------------------------------------------------------------- word searches

cdef struct Word:
    int n
    int s
    uint64_t everything
    uint64_t full_bit
    uint64_t nonempty
    uint64_t clear[6]
    uint64_t disjoint[64]
    uint64_t upset[64]
    uint64_t downset[64]
    int order[64]
    int norder


cdef void _word_init(Word *w, int n, int s) noexcept nogil:
    cdef int i, x, y, size = 1 << n, width, k, c
    cdef uint64_t pattern
    w.n = n
    w.s = s
    w.everything = (<uint64_t>0xFFFFFFFFFFFFFFFF) if size == 64 else ((<uint64_t>1 << size) - 1)
    w.full_bit = <uint64_t>1 << (size - 1)
    w.nonempty = w.everything & ~(<uint64_t>1)
    for i in range(n):
        width = 1 << i
        pattern = 0
        for x in range(size):
            if not (x >> i) & 1:
                pattern |= <uint64_t>1 << x
        w.clear[i] = pattern
    for x in range(size):
        w.disjoint[x] = w.everything
        for i in range(n):
            if (x >> i) & 1:
                w.disjoint[x] &= w.clear[i]
        w.upset[x] = 0
        w.downset[x] = 0
        for y in range(size):
            if (x & y) == x:
                w.upset[x] |= <uint64_t>1 << y
            if (x & y) == y:
                w.downset[x] |= <uint64_t>1 << y
    # nonempty masks by descending size, ties by ascending mask
    k = 0
    for c in range(n, 0, -1):
        for x in range(1, size):
            if __builtin_popcountll(x) == c:
                w.order[k] = x
                k += 1
    w.norder = k


cdef inline uint64_t _pwcomp(Word *w, uint64_t bits) noexcept nogil:
    cdef int i, width
    for i in range(w.n):
        width = 1 << i
        bits = ((bits & w.clear[i]) << width) | ((bits >> width) & w.clear[i])
    return bits


cdef struct Found:
    int best
    uint64_t *items
    size_t count
    size_t cap
    uint64_t examined
    int oom


cdef inline void _record(Found *f, uint64_t u, int c) noexcept nogil:
    cdef uint64_t *grown
    if c < f.best:
        f.best = c
        f.count = 0
    if c == f.best:
        if f.count == f.cap:
            f.cap = f.cap * 2 if f.cap else 64
            grown = <uint64_t *> realloc(f.items, f.cap * sizeof(uint64_t))
            if grown == NULL:
                f.oom = 1
                return
            f.items = grown
        f.items[f.count] = u
        f.count += 1


cdef void _evaluate(Word *w, Found *f, uint64_t u, uint64_t *tables) noexcept nogil:
    f.examined += 1
    if (~u & w.nonempty) & ~_pwcomp(w, tables[w.s - 1]):
        return
    _record(f, u, popcount64(u))


cdef void _extend(Word *w, uint64_t *src, uint64_t *dst, int x) noexcept nogil:
    cdef int j
    cdef uint64_t z = w.disjoint[x]
    dst[0] = src[0]
    for j in range(w.s, 0, -1):
        dst[j] = src[j] | ((src[j - 1] & z) << x)


cdef void _dfs(Word *w, Found *f, int pos, uint64_t u, uint64_t blocked, uint64_t *tables) noexcept nogil:
    cdef int j, x
    cdef uint64_t nu
    cdef uint64_t nt[66]
    _evaluate(w, f, u, tables)
    for j in range(pos, w.norder):
        x = w.order[j]
        if (blocked >> x) & 1:
            continue
        nu = u | w.upset[x]
        if popcount64(nu) > f.best:
            continue
        _extend(w, tables, nt, x)
        if nt[w.s] & w.full_bit:
            continue
        _dfs(w, f, j + 1, nu, blocked | w.downset[x], nt)


cdef object _collect(Found *f):
    if f.oom:
        raise MemoryError()
    if f.count == 0:
        return -1, []
    return f.best, [f.items[i] for i in range(f.count)]


def antichain_branch(int n, int s, int start, int incumbent):
    cdef Word w
    cdef Found f
    cdef uint64_t root[66]
    cdef uint64_t t[66]
    cdef int j, x
    cdef uint64_t u
    if n < 1 or n > WORD_N_MAX:
        raise ValueError("compiled antichain search needs 1 <= n <= 6")
    if s < 2 or s > 64:
        raise ValueError("s out of range")
    f.best = incumbent
    f.items = NULL
    f.count = 0
    f.cap = 0
    f.examined = 0
    f.oom = 0
    try:
        with nogil:
            _word_init(&w, n, s)
            root[0] = w.everything
            for j in range(1, s + 1):
                root[j] = 0
            if start < 0:
                _evaluate(&w, &f, 0, root)
            else:
                x = w.order[start]
                u = w.upset[x]
                _extend(&w, root, t, x)
                if popcount64(u) <= f.best and not (t[s] & w.full_bit):
                    _dfs(&w, &f, start + 1, u, w.downset[x], t)
        best, items = _collect(&f)
        return best, items, f.examined
    finally:
        free(f.items)


def raw_range(int n, int s, uint64_t lo, uint64_t hi):
    cdef Word w
    cdef Found f
    cdef uint64_t fam, up, strict, minimal, prev, d, nxt, m, low
    cdef uint64_t saturated = 0, nonincr = 0
    cdef int i, j, cnt, x
    cdef int mins[64]
    if n < 1 or n > 5:
        raise ValueError("compiled raw search needs 1 <= n <= 5")
    f.best = 1 << 30
    f.items = NULL
    f.count = 0
    f.cap = 0
    f.examined = 0
    f.oom = 0
    try:
        with nogil:
            _word_init(&w, n, s)
            fam = lo
            while fam < hi:
                if fam & 1:
                    fam += 1
                    continue
                up = fam
                for i in range(n):
                    up |= (up & w.clear[i]) << (1 << i)
                strict = 0
                for i in range(n):
                    strict |= (up & w.clear[i]) << (1 << i)
                minimal = fam & ~strict
                cnt = 0
                m = minimal
                while m:
                    mins[cnt] = __builtin_ctzll(m)
                    cnt += 1
                    m &= m - 1
                prev = w.everything
                d = up
                for j in range(s - 1):
                    nxt = 0
                    for i in range(cnt):
                        x = mins[i]
                        nxt |= (d & w.disjoint[x]) << x
                    prev = d
                    d = nxt
                if not (d & w.full_bit) and not ((~fam & w.nonempty) & ~_pwcomp(&w, prev)):
                    saturated += 1
                    if up != fam:
                        nonincr += 1
                    _record(&f, fam, popcount64(fam))
                fam += 1
        best, items = _collect(&f)
        return best, items, hi - lo, saturated, nonincr
    finally:
        free(f.items)
