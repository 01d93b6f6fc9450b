#!/usr/bin/env python3
"""Fetch the five benchmark datasets and normalize them to headered CSVs.

Each dataset is downloaded from the UCI machine learning repository and
rewritten as a plain RFC-4180 CSV under data/.  Missing-value markers ("?")
are kept verbatim; the CLI drops incomplete rows itself.

The Wisconsin Diagnostic Breast Cancer data also ships inside scikit-learn,
so `--wdbc-from-sklearn` reconstructs data/wdbc.csv without network access.
Both paths canonicalize floats through repr() and produce identical bytes.

After a successful fetch the SHA-256 of each file is compared against
data/MANIFEST.sha256 when an entry exists; use --record to (re)write the
manifest from freshly fetched files.
"""

import argparse
import hashlib
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

UCI = "https://archive.ics.uci.edu"

WDBC_FEATURES = [
    "radius", "texture", "perimeter", "area", "smoothness", "compactness",
    "concavity", "concave_points", "symmetry", "fractal_dimension",
]
WDBC_GROUPS = ["mean", "se", "worst"]

HEART_COLUMNS = [
    "age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
    "exang", "oldpeak", "slope", "ca", "thal", "num",
]


def fnum(text: str) -> str:
    return repr(float(text))


def fetch(url: str) -> bytes:
    print(f"  GET {url}")
    with urllib.request.urlopen(url, timeout=60) as r:
        return r.read()


def write_csv(name: str, header: list, rows: list) -> Path:
    path = DATA_DIR / name
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")
    print(f"  wrote {path} ({len(rows)} rows)")
    return path


def wdbc_header() -> list:
    return [f"{g}_{f}" for g in WDBC_GROUPS for f in WDBC_FEATURES] + ["diagnosis"]


def wdbc_from_sklearn() -> Path:
    from sklearn.datasets import load_breast_cancer

    ds = load_breast_cancer()
    rows = []
    for x, y in zip(ds.data, ds.target):
        # sklearn target: 0 = malignant, 1 = benign
        rows.append([repr(float(v)) for v in x] + ["M" if y == 0 else "B"])
    return write_csv("wdbc.csv", wdbc_header(), rows)


def wdbc_from_uci() -> Path:
    raw = fetch(f"{UCI}/static/public/17/breast+cancer+wisconsin+diagnostic.zip")
    with zipfile.ZipFile(io.BytesIO(raw)) as z:
        text = z.read("wdbc.data").decode()
    rows = []
    for line in text.strip().splitlines():
        cells = line.split(",")  # id, diagnosis, 30 features
        rows.append([fnum(c) for c in cells[2:]] + [cells[1]])
    return write_csv("wdbc.csv", wdbc_header(), rows)


def heart_from_uci() -> Path:
    raw = fetch(f"{UCI}/ml/machine-learning-databases/heart-disease/processed.cleveland.data")
    rows = [line.split(",") for line in raw.decode().strip().splitlines()]
    return write_csv("heart_disease.csv", HEART_COLUMNS, rows)


def parkinsons_from_uci() -> Path:
    raw = fetch(f"{UCI}/ml/machine-learning-databases/parkinsons/parkinsons.data")
    lines = [l for l in raw.decode().strip().splitlines() if l.strip()]
    header = [c.replace(":", "_").replace("(", "_").replace(")", "").replace("%", "pct")
              for c in lines[0].split(",")]
    rows = [line.split(",") for line in lines[1:]]
    return write_csv("parkinsons.csv", header, rows)


def diabetes_from_uci() -> Path:
    raw = fetch(f"{UCI}/static/public/529/early+stage+diabetes+risk+prediction+dataset.zip")
    with zipfile.ZipFile(io.BytesIO(raw)) as z:
        name = next(n for n in z.namelist() if n.endswith(".csv"))
        text = z.read(name).decode()
    lines = [l.strip() for l in text.strip().splitlines() if l.strip()]
    header = [c.strip().replace(" ", "_") for c in lines[0].split(",")]
    rows = [[c.strip() for c in line.split(",")] for line in lines[1:]]
    return write_csv("diabetes.csv", header, rows)


def thyroid_from_uci() -> Path:
    raw = fetch(f"{UCI}/ml/machine-learning-databases/thyroid-disease/ann-train.data")
    header = [f"b{i}" for i in range(1, 22)] + ["class"]
    rows = []
    for line in raw.decode().strip().splitlines():
        cells = line.split()
        if len(cells) >= 22:
            rows.append(cells[:22])
    return write_csv("thyroid_ann_train.csv", header, rows)


FETCHERS = {
    "wdbc": wdbc_from_uci,
    "heart_disease": heart_from_uci,
    "parkinsons": parkinsons_from_uci,
    "diabetes": diabetes_from_uci,
    "thyroid_ann_train": thyroid_from_uci,
}


def sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def check_manifest(paths: list, record: bool) -> int:
    manifest = DATA_DIR / "MANIFEST.sha256"
    known = {}
    if manifest.exists():
        for line in manifest.read_text().splitlines():
            if line.strip():
                digest, name = line.split()
                known[name] = digest
    bad = 0
    for p in paths:
        digest = sha256(p)
        if record or p.name not in known:
            known[p.name] = digest
        elif known[p.name] != digest:
            print(f"  CHECKSUM MISMATCH {p.name}: {digest} != {known[p.name]}")
            bad += 1
    with open(manifest, "w") as f:
        for name in sorted(known):
            f.write(f"{known[name]}  {name}\n")
    return bad


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("datasets", nargs="*", default=[], help="subset to fetch (default: all)")
    ap.add_argument("--wdbc-from-sklearn", action="store_true",
                    help="build wdbc.csv from the copy bundled with scikit-learn")
    ap.add_argument("--record", action="store_true", help="rewrite MANIFEST.sha256 entries")
    args = ap.parse_args()

    DATA_DIR.mkdir(exist_ok=True)
    wanted = args.datasets or list(FETCHERS)
    done, failed = [], []
    for name in wanted:
        if name not in FETCHERS:
            print(f"unknown dataset {name!r}; choices: {', '.join(FETCHERS)}")
            return 1
        print(f"{name}:")
        try:
            if name == "wdbc" and args.wdbc_from_sklearn:
                done.append(wdbc_from_sklearn())
            else:
                done.append(FETCHERS[name]())
        except Exception as e:
            print(f"  FAILED: {e}")
            failed.append(name)
    bad = check_manifest(done, args.record)
    if failed:
        print(f"unavailable: {', '.join(failed)}")
    return 1 if (failed or bad) else 0


if __name__ == "__main__":
    sys.exit(main())
