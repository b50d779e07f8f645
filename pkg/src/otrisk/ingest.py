"""Dataset loading: delimited text tables and IDX binary image archives."""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .measures import EmpiricalMeasure

IDX_IMAGES = 0x00000803
IDX_LABELS = 0x00000801


class DataFormatError(ValueError):
    """Malformed or inconsistent input file."""


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix with one integer label per row."""

    features: np.ndarray
    labels: np.ndarray
    source: str = ""
    fmt: str = ""

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.features, dtype=float))
        y = np.asarray(self.labels).astype(np.int64).ravel()
        if X.shape[0] != y.shape[0]:
            raise DataFormatError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if not np.all(np.isfinite(X)):
            raise DataFormatError("features must be finite")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)

    def __len__(self):
        return self.labels.shape[0]

    @property
    def classes(self):
        return sorted(set(self.labels.tolist()))

    def to_delimited(self, path, delimiter=",", header=True):
        """Write features then the label in the last column; floats round-trip via ``repr``."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, delimiter=delimiter)
            if header:
                w.writerow([f"x{k}" for k in range(self.features.shape[1])] + ["label"])
            for row, lab in zip(self.features, self.labels):
                w.writerow([repr(float(v)) for v in row] + [int(lab)])


def load_delimited(path, label_column=-1, delimiter=",", header=False) -> LabeledDataset:
    """Read a numeric table whose ``label_column`` holds integer class labels.

    Blank lines are skipped. Errors name the offending line.

    Parameters
    ----------
    path : str or Path
    label_column : int or None
        Column index of the label (negative counts from the end). ``None``
        reads an unlabeled point set and labels every row 0.
    delimiter : str
    header : bool
        Skip the first non-blank line.
    """
    rows, labels = [], []
    width = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        skipped = not header
        for cells in reader:
            line = reader.line_num
            if not cells or all(not c.strip() for c in cells):
                continue
            if not skipped:
                skipped = True
                continue
            if width is None:
                width = len(cells)
                if label_column is not None and not -width <= label_column < width:
                    raise DataFormatError(f"line {line}: no label column {label_column} in {width} fields")
            elif len(cells) != width:
                raise DataFormatError(f"line {line}: expected {width} fields, found {len(cells)}")
            try:
                vals = [float(c) for c in cells]
            except ValueError:
                bad = next(c for c in cells if not _is_float(c))
                raise DataFormatError(f"line {line}: non-numeric field {bad!r}") from None
            if label_column is None:
                labels.append(0)
            else:
                lab = vals.pop(label_column)
                if not (math.isfinite(lab) and lab == int(lab)):
                    raise DataFormatError(f"line {line}: label {lab!r} is not an integer")
                labels.append(int(lab))
            if not all(math.isfinite(v) for v in vals):
                raise DataFormatError(f"line {line}: non-finite feature")
            rows.append(vals)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    if not rows[0]:
        raise DataFormatError(f"{path}: rows carry no features")
    return LabeledDataset(np.asarray(rows, dtype=float), np.asarray(labels), str(path), "delimited")


def _is_float(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def _read_idx(path, magic, ndim):
    data = Path(path).read_bytes()
    head = 4 + 4 * ndim
    if len(data) < 4:
        raise DataFormatError(f"{path}: truncated header")
    got = struct.unpack(">I", data[:4])[0]
    if got != magic:
        raise DataFormatError(f"{path}: magic 0x{got:08x}, expected 0x{magic:08x}")
    if len(data) < head:
        raise DataFormatError(f"{path}: truncated header")
    dims = struct.unpack(f">{ndim}I", data[4:head])
    count = int(np.prod(dims))
    if len(data) - head < count:
        raise DataFormatError(f"{path}: truncated payload ({len(data) - head} of {count} bytes)")
    return dims, np.frombuffer(data, dtype=np.uint8, count=count, offset=head)


def load_idx_images(images_path, labels_path) -> LabeledDataset:
    """Read an IDX image archive and its label file; pixels are scaled to ``[0, 1]``."""
    (n, r, c), pix = _read_idx(images_path, IDX_IMAGES, 3)
    (m,), lab = _read_idx(labels_path, IDX_LABELS, 1)
    if n != m:
        raise DataFormatError(f"{n} images but {m} labels")
    X = pix.reshape(n, r * c).astype(float) / 255.0
    return LabeledDataset(X, lab.astype(np.int64), str(images_path), "idx")


def write_idx(images_path, labels_path, images, labels):
    """Write uint8 images ``(n, rows, cols)`` and labels in IDX layout."""
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    n, r, c = images.shape
    Path(images_path).write_bytes(struct.pack(">4I", IDX_IMAGES, n, r, c) + images.tobytes())
    Path(labels_path).write_bytes(struct.pack(">2I", IDX_LABELS, len(labels)) + labels.tobytes())


def class_pair(ds: LabeledDataset, a: int, b: int, n_per_class=None, seed=0):
    """Uniform-weight measures for classes ``a`` and ``b`` with equal counts.

    ``n_per_class=None`` takes every example of the smaller class. The
    subset is a seeded shuffle, so one seed always yields the same rows.
    """
    if a == b:
        raise ValueError("the two classes must differ")
    rng = np.random.default_rng(seed)
    idx = {}
    for lab in (a, b):
        rows = np.nonzero(ds.labels == lab)[0]
        if rows.size == 0:
            raise ValueError(f"label {lab} does not occur in the dataset")
        idx[lab] = rows
    n = min(idx[a].size, idx[b].size) if n_per_class is None else int(n_per_class)
    out = []
    for lab in (a, b):
        rows = idx[lab]
        if n > rows.size:
            raise ValueError(f"label {lab} has {rows.size} examples, {n} requested")
        take = rows if n == rows.size else np.sort(rng.permutation(rows)[:n])
        out.append(EmpiricalMeasure(ds.features[take]))
    return tuple(out)
