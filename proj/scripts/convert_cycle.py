#!/usr/bin/env python3
"""Convert a published speed-time table into the evac cycle CSV format.

Accepts whitespace-, tab- or comma-separated text with one sample per line:
time in seconds and speed in mph (default) or km/h. Non-numeric lines are
skipped, so the header blocks found in most published cycle files pass
through. Nothing is downloaded unless --url is given; no cycle files are
bundled with the repository.

    scripts/convert_cycle.py udds.txt -o data/cycles/udds.csv
    scripts/convert_cycle.py --url <address of a cycle table> -o cycle.csv --units kmh
"""

import argparse
import re
import sys
import urllib.request

MPH_TO_KMH = 1.609344


def read_source(args):
    if args.url:
        with urllib.request.urlopen(args.url, timeout=30) as resp:
            return resp.read().decode("utf-8", errors="replace")
    with open(args.input, encoding="utf-8", errors="replace") as fh:
        return fh.read()


def parse(text, units):
    rows = []
    for line in text.splitlines():
        fields = [f for f in re.split(r"[\s,;]+", line.strip()) if f]
        if len(fields) < 2:
            continue
        try:
            t, v = float(fields[0]), float(fields[1])
        except ValueError:
            continue
        rows.append((t, v * MPH_TO_KMH if units == "mph" else v))
    return rows


def resample(rows):
    """Linear interpolation onto whole seconds starting at the first sample."""
    if len(rows) < 2:
        raise SystemExit("need at least two samples")
    rows.sort()
    t0, t_end = rows[0][0], rows[-1][0]
    out, j = [], 0
    n = int(round(t_end - t0))
    for k in range(n + 1):
        t = t0 + k
        while j + 1 < len(rows) - 1 and rows[j + 1][0] <= t:
            j += 1
        (ta, va), (tb, vb) = rows[j], rows[min(j + 1, len(rows) - 1)]
        w = 0.0 if tb == ta else min(max((t - ta) / (tb - ta), 0.0), 1.0)
        out.append((k, max(0.0, va + w * (vb - va))))
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("input", nargs="?", help="local text file")
    p.add_argument("--url", help="download the table from this address instead")
    p.add_argument("--units", choices=["mph", "kmh"], default="mph", help="speed units of the source")
    p.add_argument("-o", "--output", help="output CSV (default: stdout)")
    args = p.parse_args()
    if not args.input and not args.url:
        p.error("give an input file or --url")

    rows = resample(parse(read_source(args), args.units))
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    with out:
        out.write("time_s,speed_kmh\n")
        for t, v in rows:
            out.write(f"{t},{v:.2f}\n")


if __name__ == "__main__":
    main()
