"""Writes crystal graph files for A2odd rank 3 (one-row crystals B_l).

Usage: make_a2odd_graphs.py OUTDIR [MAX_L]

Coordinates are (x1, x2, x3, x3b, x2b, x1b). Color i < n moves one unit
along i -> i+1 or (i+1)b -> ib, color n moves n -> nb, and color 0 is
color 1 conjugated by the swap of 1 and 1b.
"""

import itertools
import pathlib
import sys

N = 3
LETTERS = ["1", "2", "3", "3b", "2b", "1b"]


def plain(a):
    return a - 1


def barred(a):
    return 2 * N - a


def f(i, x):
    x = list(x)
    if i == 0:
        y = f(1, swap01(x))
        return None if y is None else swap01(y)
    if i == N:
        if x[plain(N)] == 0:
            return None
        x[plain(N)] -= 1
        x[barred(N)] += 1
        return tuple(x)
    if x[barred(i + 1)] > x[plain(i + 1)]:
        x[barred(i + 1)] -= 1
        x[barred(i)] += 1
        return tuple(x)
    if x[plain(i)] == 0:
        return None
    x[plain(i)] -= 1
    x[plain(i + 1)] += 1
    return tuple(x)


def swap01(x):
    x = list(x)
    x[plain(1)], x[barred(1)] = x[barred(1)], x[plain(1)]
    return tuple(x)


def elements(l):
    for cut in itertools.combinations(range(l + 2 * N - 1), 2 * N - 1):
        prev, x = -1, []
        for c in cut:
            x.append(c - prev - 1)
            prev = c
        x.append(l + 2 * N - 2 - prev)
        yield tuple(x)


def text(x):
    return "".join(LETTERS[s] * v for s, v in enumerate(x))


def main():
    out = pathlib.Path(sys.argv[1])
    max_l = int(sys.argv[2]) if len(sys.argv) > 2 else 3
    out.mkdir(parents=True, exist_ok=True)
    for l in range(1, max_l + 1):
        lines = [f"A2odd {N} {l}"]
        for x in sorted(elements(l), reverse=True):
            for i in range(N + 1):
                y = f(i, x)
                if y is not None:
                    lines.append(f"{text(x)} {i} {text(y)}")
        (out / f"B{l}.graph").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
