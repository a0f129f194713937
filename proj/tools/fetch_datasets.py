#!/usr/bin/env python3
# Copyright 2026 The CLEMS Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Rebuilds Mulan-format ARFF + XML files for the benchmark datasets.

The scikit-multilearn 0.0.1 source distribution on PyPI ships pickled
train/test dumps of several Mulan datasets. This script downloads that
tarball (or reads a local copy), concatenates train and test, and writes
`<name>.arff` and `<name>.xml` with features first and labels last.
Attribute names are not part of the dumps, so generic names are used.

birds and CAL500 are not in that archive; drop the original Mulan files
into the output directory by hand if you have them.
"""

import argparse
import bz2
import hashlib
import io
import pickle
import tarfile
import urllib.request
from pathlib import Path

URL = ("https://files.pythonhosted.org/packages/0e/5a/"
       "4bc646ce33f2b6a6130e09efb5e2530d9661a5c4c51e4e17821b459016b2/"
       "scikit-multilearn-0.0.1.tar.gz")
SHA256 = "ac30a342595481f46db77f5334c3a1e2d8261f4adbd104e3444f801c3c89b6a0"

# name -> write sparse rows
DATASETS = {
    "emotions": False,
    "scene": False,
    "yeast": False,
    "medical": True,
    "enron": True,
}


def load_dump(tar, name, part):
    member = f"scikit-multilearn-0.0.1/skmultilearn/data/{name}-{part}.dump.bz2"
    raw = tar.extractfile(member).read()
    d = pickle.loads(bz2.decompress(raw), encoding="latin1")
    X, y = d["X"], d["y"]
    if hasattr(X, "todense"):
        X = X.todense()
    if hasattr(y, "todense"):
        y = y.todense()
    return [list(r) for r in X.tolist()], [list(r) for r in y.tolist()]


def fmt(v):
    if isinstance(v, float) and v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def write_dataset(out, name, X, Y, sparse):
    d, k = len(X[0]), len(Y[0])
    with open(out / f"{name}.arff", "w") as f:
        f.write(f"@relation {name}\n\n")
        for i in range(d):
            f.write(f"@attribute feature_{i} numeric\n")
        for j in range(k):
            f.write(f"@attribute label_{j} {{0,1}}\n")
        f.write("\n@data\n")
        for x, y in zip(X, Y):
            row = list(x) + [int(v) for v in y]
            if sparse:
                items = [f"{i} {fmt(v)}" for i, v in enumerate(row) if v != 0]
                f.write("{" + ",".join(items) + "}\n")
            else:
                f.write(",".join(fmt(v) for v in row) + "\n")
    with open(out / f"{name}.xml", "w") as f:
        f.write('<?xml version="1.0" encoding="utf-8"?>\n')
        f.write('<labels xmlns="http://mulan.sourceforge.net/labels">\n')
        for j in range(k):
            f.write(f'<label name="label_{j}"></label>\n')
        f.write("</labels>\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--tarball", help="local copy of the sdist (skips download)")
    args = ap.parse_args()

    if args.tarball:
        blob = Path(args.tarball).read_bytes()
    else:
        with urllib.request.urlopen(URL) as r:
            blob = r.read()
    digest = hashlib.sha256(blob).hexdigest()
    if digest != SHA256:
        raise SystemExit(f"checksum mismatch: {digest}")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
        for name, sparse in DATASETS.items():
            Xtr, Ytr = load_dump(tar, name, "train")
            Xte, Yte = load_dump(tar, name, "test")
            X, Y = Xtr + Xte, Ytr + Yte
            write_dataset(out, name, X, Y, sparse)
            distinct = len({tuple(y) for y in Y})
            print(f"{name}: N={len(X)} d={len(X[0])} K={len(Y[0])} distinct={distinct}")


if __name__ == "__main__":
    main()
