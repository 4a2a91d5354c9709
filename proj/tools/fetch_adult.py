#!/usr/bin/env python3
# Copyright 2026 The kanon Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds data/adult.csv from the UCI ADULT census-income files.

Joins adult.data and adult.test, normalizes the income label ("<=50K." ->
"<=50K"), drops fnlwgt and education-num, and keeps '?' as the missing marker.

Usage:
  fetch_adult.py                      # download from the UCI archive
  fetch_adult.py --source DIR         # use local adult.data / adult.test
"""

import argparse
import csv
import io
import pathlib
import sys
import urllib.request
import zipfile

UCI_ZIP = "https://archive.ics.uci.edu/static/public/2/adult.zip"

RAW_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]
DROPPED = {"fnlwgt", "education-num"}


def read_lines(text):
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("|"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(RAW_COLUMNS):
            continue
        yield cells


def load_sources(source):
    if source:
        root = pathlib.Path(source)
        return [(root / n).read_text() for n in ("adult.data", "adult.test")]
    with urllib.request.urlopen(UCI_ZIP, timeout=120) as resp:
        archive = zipfile.ZipFile(io.BytesIO(resp.read()))
    return [archive.read(n).decode() for n in ("adult.data", "adult.test")]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--source", help="directory holding adult.data and adult.test")
    parser.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "adult.csv"))
    args = parser.parse_args()

    keep = [i for i, c in enumerate(RAW_COLUMNS) if c not in DROPPED]
    rows = []
    for text in load_sources(args.source):
        for cells in read_lines(text):
            cells[-1] = cells[-1].rstrip(".")
            rows.append([cells[i] for i in keep])

    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow([RAW_COLUMNS[i] for i in keep])
        writer.writerows(rows)
    print(f"wrote {len(rows)} records to {out}", file=sys.stderr)


if __name__ == "__main__":
    main()
