#!/usr/bin/env python3
# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the 5000-image MNIST subset bundled with mlxtend as IDX files.

The subset holds 500 images per digit, taken from the official MNIST
training set. Output layout matches the official files:

  <out>/mnist5k-images-idx3-ubyte   magic 0x00000803, n, 28, 28, pixels
  <out>/mnist5k-labels-idx1-ubyte   magic 0x00000801, n, labels

Usage: make_mnist5k.py [--wheel path/to/mlxtend.whl] [--out data/mnist5k]
"""

import argparse
import gzip
import io
import pathlib
import struct
import zipfile

CSV_MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def read_csv_bytes(wheel):
    if wheel:
        with zipfile.ZipFile(wheel) as z:
            return gzip.decompress(z.read(CSV_MEMBER))
    import mlxtend  # noqa: F401  (installed package route)
    path = pathlib.Path(mlxtend.__file__).parent / "data" / "data" / "mnist_5k.csv.gz"
    return gzip.decompress(path.read_bytes())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--wheel", default=None)
    parser.add_argument("--out", default="data/mnist5k")
    args = parser.parse_args()

    rows = read_csv_bytes(args.wheel).decode().splitlines()
    images = io.BytesIO()
    labels = io.BytesIO()
    for row in rows:
        values = [int(float(v)) for v in row.split(",")]
        pixels, label = values[:-1], values[-1]
        assert len(pixels) == 784 and 0 <= label <= 9
        images.write(bytes(pixels))
        labels.write(bytes([label]))

    n = len(rows)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "mnist5k-images-idx3-ubyte").write_bytes(
        struct.pack(">IIII", 0x803, n, 28, 28) + images.getvalue())
    (out / "mnist5k-labels-idx1-ubyte").write_bytes(
        struct.pack(">II", 0x801, n) + labels.getvalue())
    print(f"wrote {n} images to {out}")


if __name__ == "__main__":
    main()
