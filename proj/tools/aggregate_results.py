#!/usr/bin/env python3
# Copyright 2026 sbrtune authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Recompute medians.csv from a results.csv, independently of the C++ code.

Usage: aggregate_results.py RESULTS_CSV [MEDIANS_CSV]

Prints the re-aggregated medians in medians.csv format. When MEDIANS_CSV is
given, also compares against it and exits non-zero on any mismatch beyond
1e-9 (values are re-parsed, so formatting differences are tolerated).
"""

import csv
import statistics
import sys

METRICS = ["pd", "pf", "prec", "f", "g", "ifa"]


def fmt(x):
    # mirror the report formatting: fixed six decimals, trailing zeros trimmed
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return s if s else "0"


def aggregate(results_path):
    groups = {}  # (project, filter, treatment) -> {metric: [values]}
    order = []
    with open(results_path, newline="") as f:
        for row in csv.DictReader(f):
            key = (row["project"], row["filter"], row["treatment"])
            if key not in groups:
                groups[key] = {m: [] for m in METRICS}
                order.append(key)
            for m in METRICS:
                groups[key][m].append(float(row[m]))
    return [(key, {m: statistics.median(groups[key][m]) for m in METRICS})
            for key in order]


def main():
    if len(sys.argv) not in (2, 3):
        sys.exit(__doc__.strip())
    rows = aggregate(sys.argv[1])

    print("project,filter,treatment," + ",".join(METRICS))
    for (project, filt, treatment), med in rows:
        cells = [project, filt, treatment] + [fmt(med[m]) for m in METRICS]
        print(",".join(cells))

    if len(sys.argv) == 3:
        with open(sys.argv[2], newline="") as f:
            want = {(r["project"], r["filter"], r["treatment"]):
                    {m: float(r[m]) for m in METRICS}
                    for r in csv.DictReader(f)}
        bad = 0
        for key, med in rows:
            for m in METRICS:
                if abs(med[m] - want[key][m]) > 1e-9:
                    print(f"MISMATCH {key} {m}: {med[m]} != {want[key][m]}",
                          file=sys.stderr)
                    bad += 1
        if len(want) != len(rows):
            print(f"MISMATCH: {len(rows)} groups vs {len(want)}",
                  file=sys.stderr)
            bad += 1
        if bad:
            sys.exit(1)
        print(f"OK: {len(rows)} median rows match", file=sys.stderr)


if __name__ == "__main__":
    main()
