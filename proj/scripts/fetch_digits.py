#!/usr/bin/env python3
"""Export scikit-learn's bundled digits dataset to data/digits.csv.

The full dataset (1797 rows, 64 features, labels 0-9) is what the acceptance
suite runs against. Pass --rows to produce a smaller fixture.
"""
import argparse
import csv
import pathlib

from sklearn.datasets import load_digits


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=0, help="keep only the first N rows")
    parser.add_argument(
        "--out",
        type=pathlib.Path,
        default=pathlib.Path(__file__).resolve().parent.parent / "data" / "digits.csv",
    )
    args = parser.parse_args()

    digits = load_digits()
    X, y = digits.data, digits.target
    if args.rows:
        X, y = X[: args.rows], y[: args.rows]

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([f"p{i}" for i in range(X.shape[1])] + ["label"])
        for row, label in zip(X, y):
            writer.writerow([format(v, "g") for v in row] + [int(label)])
    print(f"wrote {args.out} ({X.shape[0]} rows, {X.shape[1]} features)")


if __name__ == "__main__":
    main()
