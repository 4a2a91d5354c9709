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
"""Generates the synthetic 200-row test fixture with the ADULT column layout.

Values are drawn from fixed category lists with a seeded RNG; no ADULT
records are copied. Rerunning reproduces tests/data/adult_fixture.csv.
"""

import argparse
import csv
import pathlib
import random

SEED = 20260101
ROWS = 200

COLUMNS = [
    "age", "workclass", "education", "marital-status", "occupation",
    "relationship", "race", "sex", "capital-gain", "capital-loss",
    "hours-per-week", "native-country", "income",
]

WORKCLASS = [("Private", 70), ("Self-emp-not-inc", 8), ("Local-gov", 6), ("State-gov", 4),
             ("Self-emp-inc", 4), ("Federal-gov", 3), ("?", 5)]
EDUCATION = [("HS-grad", 32), ("Some-college", 22), ("Bachelors", 16), ("Masters", 6),
             ("Assoc-voc", 4), ("11th", 4), ("Assoc-acdm", 3), ("10th", 3), ("Doctorate", 2),
             ("Prof-school", 2), ("9th", 2)]
MARITAL = [("Married-civ-spouse", 46), ("Never-married", 33), ("Divorced", 13),
           ("Separated", 3), ("Widowed", 3), ("Married-spouse-absent", 2)]
OCCUPATION = [("Prof-specialty", 12), ("Craft-repair", 12), ("Exec-managerial", 12),
              ("Adm-clerical", 11), ("Sales", 11), ("Other-service", 10),
              ("Machine-op-inspct", 6), ("Transport-moving", 5), ("Handlers-cleaners", 4),
              ("Farming-fishing", 3), ("Tech-support", 3), ("Protective-serv", 2), ("?", 6)]
RELATIONSHIP = [("Husband", 40), ("Not-in-family", 26), ("Own-child", 15), ("Unmarried", 10),
                ("Wife", 5), ("Other-relative", 4)]
RACE = [("White", 85), ("Black", 10), ("Asian-Pac-Islander", 3), ("Amer-Indian-Eskimo", 1),
        ("Other", 1)]
COUNTRY = [("United-States", 88), ("Mexico", 3), ("Philippines", 1), ("Germany", 1),
           ("Canada", 1), ("India", 1), ("England", 1), ("?", 2), ("Cuba", 1), ("Jamaica", 1)]


def pick(rng, weighted):
    values, weights = zip(*weighted)
    return rng.choices(values, weights=weights)[0]


def make_row(rng):
    age = min(90, max(17, int(rng.gauss(38.5, 13.5))))
    gain = rng.choice([0] * 23 + [2174, 5178, 7688, 15024])
    loss = rng.choice([0] * 24 + [1902, 1887, 1977])
    hours = min(99, max(1, int(rng.gauss(40, 12))))
    row = {
        "age": age,
        "workclass": pick(rng, WORKCLASS),
        "education": pick(rng, EDUCATION),
        "marital-status": pick(rng, MARITAL),
        "occupation": pick(rng, OCCUPATION),
        "relationship": pick(rng, RELATIONSHIP),
        "race": pick(rng, RACE),
        "sex": rng.choice(["Male", "Male", "Female"]),
        "capital-gain": gain,
        "capital-loss": loss,
        "hours-per-week": hours,
        "native-country": pick(rng, COUNTRY),
        "income": ">50K" if rng.random() < 0.24 else "<=50K",
    }
    if row["workclass"] == "?":
        row["occupation"] = "?"
    return row


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    default_out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "adult_fixture.csv"
    parser.add_argument("--out", default=str(default_out))
    args = parser.parse_args()
    rng = random.Random(SEED)
    out = pathlib.Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        for _ in range(ROWS):
            writer.writerow(make_row(rng))


if __name__ == "__main__":
    main()
