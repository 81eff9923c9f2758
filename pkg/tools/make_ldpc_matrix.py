#!/usr/bin/env python3
"""Expand the (648, 486) rate-3/4 quasi-cyclic LDPC prototype into the
sparse-text parity file bundled with the package.

Prototype: the IEEE 802.11n rate-3/4 base matrix with lifting factor Z=27
(6 x 24 blocks; entries are cyclic-shift exponents, -1 marks an all-zero
block).  Output line format: check index followed by its variable indices.
"""

import os

Z = 27

BASE = [
    [16, 17, 22, 24, 9, 3, 14, -1, 4, 2, 7, -1, 26, -1, 2, -1, 21, -1, 1, 0, -1, -1, -1, -1],
    [25, 12, 12, 3, 3, 26, 6, 21, -1, 15, 22, -1, 15, -1, 4, -1, -1, 16, -1, 0, 0, -1, -1, -1],
    [25, 18, 26, 16, 22, 23, 9, -1, 0, -1, 4, -1, 4, -1, 8, 23, 11, -1, -1, -1, 0, 0, -1, -1],
    [9, 7, 0, 1, 17, -1, -1, 7, 3, -1, 3, 23, -1, 16, -1, -1, 21, -1, 0, -1, -1, 0, 0, -1],
    [24, 5, 26, 7, 1, -1, -1, 15, 24, 15, -1, 8, -1, 13, -1, 13, -1, 11, -1, -1, -1, -1, 0, 0],
    [2, 2, 19, 14, 24, 1, 15, 19, -1, 21, -1, 2, -1, 24, -1, 3, -1, 2, 1, -1, -1, -1, -1, 0],
]


def expand(base, z):
    rows = len(base) * z
    adjacency = [[] for _ in range(rows)]
    for bi, brow in enumerate(base):
        for bj, shift in enumerate(brow):
            if shift < 0:
                continue
            for r in range(z):
                adjacency[bi * z + r].append(bj * z + (r + shift) % z)
    return adjacency


def main():
    adjacency = expand(BASE, Z)
    n = len(BASE[0]) * Z
    k = n - len(adjacency)
    out = os.path.join(os.path.dirname(__file__), "..", "src", "cauchymimo", "data",
                       "ldpc_n648_k486.txt")
    out = os.path.normpath(out)
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(f"# quasi-cyclic LDPC parity matrix, n={n} k={k} rate=3/4 Z={Z}\n")
        fh.write("# line format: <check index> <variable index>...\n")
        for c, vs in enumerate(adjacency):
            fh.write(f"{c} " + " ".join(str(v) for v in sorted(vs)) + "\n")
    print(f"wrote {out}: {len(adjacency)} checks, {n} variables")


if __name__ == "__main__":
    main()
