#!/usr/bin/env python3
"""Writes the bundled datasets and schemas under data/.

example.csv is synthetic (fixed seed). breast_cancer.csv and wine.csv are the
UCI Wisconsin diagnostic breast cancer and wine recognition data as shipped
with scikit-learn.
"""
import argparse
import pathlib

import numpy as np
import pandas as pd
from sklearn import datasets

EDUCATION = ["primary", "secondary", "bachelor", "master", "doctorate"]
RATING = ["poor", "fair", "good", "excellent"]


def example(n=200, seed=7):
    rng = np.random.default_rng(seed)
    age = rng.integers(18, 81, n)
    education = rng.choice(len(EDUCATION), n, p=[0.15, 0.35, 0.3, 0.15, 0.05])
    income = np.round(np.exp(rng.normal(3.3 + 0.15 * education, 0.35)), 2)
    region = rng.choice(["north", "south", "east", "west"], n)
    hours = rng.integers(10, 61, n)

    logit = -(age - 45) / 8.0 + 0.8 * (education < 2) - 0.5
    churn = np.where(rng.random(n) < 1 / (1 + np.exp(-logit)), "yes", "no")
    spend = np.round(50 + 0.8 * hours + 20 * (region == "west") + rng.normal(0, 8, n), 1)
    rating_raw = (income - income.mean()) / income.std() + rng.normal(0, 0.7, n)
    rating = np.digitize(rating_raw, [-0.8, 0.2, 1.0])
    score = np.round(0.5 * age + rng.normal(0, 5, n), 2)

    return pd.DataFrame({
        "age": age,
        "income": income,
        "education": [EDUCATION[i] for i in education],
        "region": region,
        "hours": hours,
        "churn": churn,
        "spend": spend,
        "rating": [RATING[i] for i in rating],
        "score": score,
    })


def schema(path, rows, positive=None):
    with open(path, "w") as f:
        for name, kind, role, *ordering in rows:
            f.write("\t".join([name, kind, role, *ordering]) + "\n")
        if positive:
            f.write("positive\t%s\t%s\n" % positive)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data")
    out = pathlib.Path(parser.parse_args().out)
    out.mkdir(parents=True, exist_ok=True)

    example().to_csv(out / "example.csv", index=False)
    attrs = [
        ("age", "numeric", "attribute"),
        ("income", "numeric", "attribute"),
        ("education", "ordinal", "attribute", ",".join(EDUCATION)),
        ("region", "nominal", "attribute"),
        ("hours", "numeric", "attribute"),
    ]
    rating = ",".join(RATING)

    def targets(**roles):
        return [
            ("churn", "nominal", roles.get("churn", "ignore")),
            ("spend", "numeric", roles.get("spend", "ignore")),
            ("rating", "ordinal", roles.get("rating", "ignore"), rating),
            ("score", "numeric", roles.get("score", "ignore")),
        ]

    schema(out / "example_wracc.schema", attrs + targets(churn="target"), ("churn", "yes"))
    schema(out / "example_kl.schema", attrs + targets(churn="target", rating="target"))
    schema(out / "example_zscore.schema", attrs + targets(spend="target"))
    schema(out / "example_qr.schema", attrs + targets(spend="target", rating="target"))
    schema(out / "example_nominal_target.schema", attrs + targets(churn="target"))

    bc = datasets.load_breast_cancer(as_frame=True).frame
    bc.columns = [c.replace(" ", "_") for c in bc.columns]
    bc["diagnosis"] = np.where(bc.pop("target") == 0, "malignant", "benign")
    bc.to_csv(out / "breast_cancer.csv", index=False)
    rows = [(c, "numeric", "attribute") for c in bc.columns if c != "diagnosis"]
    schema(out / "breast_cancer.schema", rows + [("diagnosis", "nominal", "target")], ("diagnosis", "malignant"))
    schema(out / "breast_cancer_kl.schema", rows + [("diagnosis", "nominal", "target")])

    wine = datasets.load_wine(as_frame=True).frame
    wine.columns = [c.replace("/", "_") for c in wine.columns]
    wine["cultivar"] = ["c%d" % t for t in wine.pop("target")]
    wine.to_csv(out / "wine.csv", index=False)
    rows = [(c, "numeric", "attribute") for c in wine.columns if c != "cultivar"]
    schema(out / "wine.schema", rows + [("cultivar", "nominal", "target")])


if __name__ == "__main__":
    main()
