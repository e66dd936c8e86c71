"""Time each hot kernel on the compiled and pure-Python backends.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import timeit

from satlab import kernels, lattice
from satlab.family import SetFamily, saturate


def cases():
    rng = random.Random(0)
    n = 6
    fam = saturate(SetFamily.empty(n), 4)
    members = [m for m in fam if m]
    ta = lattice.table_bytes(8, rng.getrandbits(256))
    tb = lattice.table_bytes(8, rng.getrandbits(256))
    return [
        ("disjoint_search n=6 k=4", lambda k: k.disjoint_search(members, n, lattice.full_mask(n), 4)),
        ("box_general_table n=8", lambda k: k.box_general_table(ta, tb, 8)),
        ("antichain search n=5 s=3", lambda k: [k.antichain_branch(5, 3, t, 24) for t in range(-1, 31)]),
        ("antichain search n=6 s=3", lambda k: [k.antichain_branch(6, 3, t, 48) for t in range(-1, 63)]),
        ("raw_range n=4 s=3", lambda k: k.raw_range(4, 3, 0, 1 << 16)),
    ]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available()
    table = cases()
    print(f"{'kernel':28}" + "".join(f"{k.NAME:>14}" for k in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in table:
        times = []
        for k in backends:
            times.append(min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)))
        row = f"{name:28}" + "".join(f"{t * 1e3:12.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[1] / times[0]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
