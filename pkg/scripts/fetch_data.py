#!/usr/bin/env python3
"""Download the index price snapshot used by the data-dependent tests.

Writes three CSVs under data/ with a ``Date,Close`` header:

* ``sp500.csv``   S&P 500 daily closes, 1961-01-01 .. 2022-12-31
* ``djia.csv``    Dow Jones Industrial Average, 1992-01-01 .. 2022-12-31
* ``ftse100.csv`` FTSE 100, 1992-01-01 .. 2022-12-31

The default source is Stooq, which serves full daily index histories as
plain CSV without authentication.  Any other vendor works as long as the
columns and date windows match; see data/README.md for the contract.

Run on a machine with network access:

    python3 scripts/fetch_data.py [--dest data/]
"""

import argparse
import csv
import io
import sys
import urllib.request
from pathlib import Path

STOOQ_URL = "https://stooq.com/q/d/l/?s={symbol}&d1={d1}&d2={d2}&i=d"

# (output file, stooq symbol, first date, last date, minimum row count)
SERIES = [
    ("sp500.csv", "^spx", "1961-01-01", "2022-12-31", 15000),
    ("djia.csv", "^dji", "1992-01-01", "2022-12-31", 7500),
    ("ftse100.csv", "^ukx", "1992-01-01", "2022-12-31", 7500),
]


def fetch_stooq(symbol: str, start: str, end: str) -> list:
    """Return (date, close) rows for one symbol, ascending by date."""
    url = STOOQ_URL.format(symbol=symbol,
                           d1=start.replace("-", ""),
                           d2=end.replace("-", ""))
    with urllib.request.urlopen(url, timeout=60) as resp:
        text = resp.read().decode("utf-8")
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        date = (row.get("Date") or "").strip()
        close = (row.get("Close") or "").strip()
        if not date or not close:
            continue
        if start <= date <= end:
            rows.append((date, close))
    rows.sort()
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dest", default=Path(__file__).resolve().parents[1] / "data",
                    type=Path, help="output directory (default: repo data/)")
    args = ap.parse_args(argv)
    args.dest.mkdir(parents=True, exist_ok=True)

    status = 0
    for name, symbol, start, end, min_rows in SERIES:
        try:
            rows = fetch_stooq(symbol, start, end)
        except OSError as exc:
            print(f"error: {name}: {exc}", file=sys.stderr)
            status = 1
            continue
        if len(rows) < min_rows:
            print(f"error: {name}: only {len(rows)} rows (expected >= {min_rows}); "
                  "source truncated or rate-limited, retry later", file=sys.stderr)
            status = 1
            continue
        out = args.dest / name
        with open(out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["Date", "Close"])
            writer.writerows(rows)
        print(f"wrote {out} ({len(rows)} rows, {rows[0][0]} .. {rows[-1][0]})")
    return status


if __name__ == "__main__":
    sys.exit(main())
