"""Writes fixtures/test_functions.json: the first 20 weak* test functions."""
import json
import sys
from fractions import Fraction as F


def family():
    yield [(F(0), F(0)), (F(1), F(1))]
    level = 1
    while True:
        h = F(1, 2**level)
        for j in range(2**level + 1):
            c = j * h
            pts = {F(0): F(0), F(1): F(0)}
            for x in (c - h, c + h):
                if 0 <= x <= 1:
                    pts[x] = F(0)
            pts[c] = F(1)
            yield sorted(pts.items())
        level += 1


def minimal(nodes):
    out = []
    for x, y in nodes:
        if len(out) >= 2:
            (x0, y0), (x1, y1) = out[-2], out[-1]
            if (y1 - y0) * (x - x1) == (y - y1) * (x1 - x0):
                out.pop()
        out.append((x, y))
    return out


def fmt(q):
    return f"{q.numerator}/{q.denominator}"


def main(path):
    funcs = []
    for i, nodes in zip(range(1, 21), family()):
        nodes = minimal(nodes)
        funcs.append({"index": i,
                      "breakpoints": [fmt(x) for x, _ in nodes],
                      "values": [fmt(y) for _, y in nodes]})
    with open(path, "w") as fh:
        json.dump({"functions": funcs}, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures/test_functions.json")
