#!/usr/bin/env python3
"""Summarize scaling from a results CSV.

Reads the CSV emitted by `aqpe-cli train` / `aqpe-cli sql` (columns
scenario,optimizer,n,seed,ln_vh,...), averages ln V over seeds per (scenario,
optimizer, n), fits one least-squares line per (scenario, optimizer) group in
(ln n, ln V), and prints the fitted exponents next to an ASCII log-log chart.

Usage: tools/plot_scaling.py results.csv [more.csv ...]
"""

import csv
import math
import sys
from collections import defaultdict


def load_rows(paths):
    rows = []
    for path in paths:
        with open(path, newline="", encoding="utf-8") as fh:
            for rec in csv.DictReader(fh):
                rows.append(
                    (
                        rec["scenario"],
                        rec["optimizer"],
                        int(rec["n"]),
                        float(rec["ln_vh"]),
                    )
                )
    return rows


def group_means(rows):
    acc = defaultdict(list)
    for scenario, optimizer, n, ln_vh in rows:
        acc[(scenario, optimizer, n)].append(ln_vh)
    means = defaultdict(dict)
    for (scenario, optimizer, n), vals in acc.items():
        means[(scenario, optimizer)][n] = sum(vals) / len(vals)
    return means


def ols_slope(points):
    xs = [math.log(n) for n, _ in points]
    ys = [y for _, y in points]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx if sxx > 0 else float("nan")


def ascii_chart(series, width=64, height=20):
    """series: {label: [(ln n, ln V), ...]} drawn in one shared frame."""
    pts = [(x, y) for data in series.values() for x, y in data]
    if not pts:
        return []
    x0, x1 = min(x for x, _ in pts), max(x for x, _ in pts)
    y0, y1 = min(y for _, y in pts), max(y for _, y in pts)
    xr = (x1 - x0) or 1.0
    yr = (y1 - y0) or 1.0
    cells = [[" "] * width for _ in range(height)]
    marks = "ox+*#@%&"
    for mark, (label, data) in zip(marks, sorted(series.items())):
        for x, y in data:
            col = round((x - x0) / xr * (width - 1))
            row = round((y1 - y) / yr * (height - 1))
            cells[row][col] = mark
    lines = ["ln V"]
    lines += ["  |" + "".join(r) for r in cells]
    lines.append("  +" + "-" * width + "  ln n")
    for mark, label in zip(marks, sorted(series)):
        lines.append(f"    {mark} = {label[0]}/{label[1]}")
    return lines


def main(argv):
    if len(argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    means = group_means(load_rows(argv[1:]))
    series = {}
    print(f"{'scenario':<18} {'optimizer':<14} {'points':>6} {'exponent':>9}")
    for (scenario, optimizer), by_n in sorted(means.items()):
        points = sorted(by_n.items())
        if len(points) >= 2:
            slope = ols_slope(points)
            print(f"{scenario:<18} {optimizer:<14} {len(points):>6} {-slope:>9.4f}")
        else:
            print(f"{scenario:<18} {optimizer:<14} {len(points):>6} {'n/a':>9}")
        series[(scenario, optimizer)] = [(math.log(n), v) for n, v in points]
    print()
    for line in ascii_chart(series):
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
