#!/usr/bin/env python3
"""Fetch the ionosphere and credit-approval tables from the UCI archive and
convert them to the numeric CSV schema used by the pcn tools.

Usage: python3 fetch_uci.py [output_dir]

Produces ionosphere.csv and credit_approval.csv next to the bundled files.
Requires outbound network access to archive.ics.uci.edu.

Preprocessing, chosen to keep every column numeric:
  ionosphere: the second attribute is the constant 0 and is dropped
    (a constant column carries no information and cannot be standardized),
    leaving 33 features; labels are the g/b column.
  credit approval: rows with any missing field ('?') are dropped; the six
    continuous attributes are kept as-is; binary categoricals map to {0,1};
    categoricals with more than two levels are one-hot encoded. The class
    column (+/-) becomes approved/denied.
"""

import csv
import io
import sys
import urllib.request

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"


def fetch(path):
    url = f"{BASE}/{path}"
    print(f"fetching {url}")
    with urllib.request.urlopen(url, timeout=60) as resp:
        return resp.read().decode("utf-8")


def write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows, {len(header) - 1} features)")


def ionosphere(outdir):
    text = fetch("ionosphere/ionosphere.data")
    rows = []
    for line in text.strip().splitlines():
        parts = line.split(",")
        values = parts[:-1]
        label = "good" if parts[-1] == "g" else "bad"
        del values[1]  # constant zero attribute
        rows.append(values + [label])
    header = [f"pulse_{i:02d}" for i in range(len(rows[0]) - 1)] + ["class"]
    write_rows(f"{outdir}/ionosphere.csv", header, rows)


def credit_approval(outdir):
    text = fetch("credit-screening/crx.data")
    raw = [line.split(",") for line in text.strip().splitlines()]
    complete = [row for row in raw if "?" not in row]
    dropped = len(raw) - len(complete)
    if dropped:
        print(f"dropped {dropped} rows with missing fields")

    continuous = {1, 2, 7, 10, 13, 14}
    n_attrs = 15
    levels = {}
    for col in range(n_attrs):
        if col in continuous:
            continue
        levels[col] = sorted({row[col] for row in complete})

    header = []
    for col in range(n_attrs):
        name = f"a{col + 1:02d}"
        if col in continuous:
            header.append(name)
        elif len(levels[col]) <= 2:
            header.append(f"{name}_{levels[col][-1]}")
        else:
            header.extend(f"{name}_{lvl}" for lvl in levels[col])
    header.append("class")

    rows = []
    for row in complete:
        out = []
        for col in range(n_attrs):
            if col in continuous:
                out.append(row[col])
            elif len(levels[col]) <= 2:
                out.append("1" if row[col] == levels[col][-1] else "0")
            else:
                out.extend("1" if row[col] == lvl else "0" for lvl in levels[col])
        out.append("approved" if row[15] == "+" else "denied")
        rows.append(out)
    write_rows(f"{outdir}/credit_approval.csv", header, rows)


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "."
    ionosphere(outdir)
    credit_approval(outdir)


if __name__ == "__main__":
    main()
