"""Seeded train/test split and a standard scaler fitted on training rows only."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

# recorded in run provenance
SHUFFLE_ALGORITHM = "numpy.random.default_rng(seed).permutation (PCG64)"


class SplitError(ValueError):
    pass


class ScalerError(ValueError):
    pass


@dataclass(frozen=True)
class SplitDataset:
    X_train: np.ndarray
    y_train: np.ndarray
    X_test: np.ndarray
    y_test: np.ndarray
    train_index: np.ndarray
    test_index: np.ndarray
    seed: int
    ratio: float


def split_indices(n, ratio=0.8, seed=0):
    """Shuffle ``range(n)`` and cut after ``floor(ratio * n)`` rows."""
    if not 0.0 < ratio < 1.0:
        raise SplitError(f"ratio must lie in (0, 1), got {ratio}")
    if n < 2:
        raise SplitError(f"need at least 2 rows to split, got {n}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = math.floor(ratio * n)
    return perm[:n_train], perm[n_train:]


def train_test_split(X, y, ratio=0.8, seed=0) -> SplitDataset:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if len(X) != len(y):
        raise SplitError(f"{len(X)} feature rows but {len(y)} labels")
    tr, te = split_indices(len(X), ratio, seed)
    return SplitDataset(X[tr], y[tr], X[te], y[te], tr, te, seed, ratio)


def write_split_csv(split: SplitDataset, stream: TextIO):
    """Two columns, ``row_index,partition``, in row-index order."""
    part = {}
    for i in split.train_index:
        part[int(i)] = "train"
    for i in split.test_index:
        part[int(i)] = "test"
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["row_index", "partition"])
    for i in sorted(part):
        w.writerow([i, part[i]])


def read_split_csv(stream: TextIO):
    """Return ``(train_index, test_index)`` in file order."""
    train, test = [], []
    for row in csv.DictReader(stream):
        (train if row["partition"] == "train" else test).append(int(row["row_index"]))
    return np.array(train, dtype=int), np.array(test, dtype=int)


@dataclass(frozen=True)
class ScalerParams:
    means: np.ndarray
    stds: np.ndarray
    column_names: tuple
    exempt: tuple = field(default=())

    def __post_init__(self):
        if not len(self.means) == len(self.stds) == len(self.column_names):
            raise ScalerError("means, stds and column names differ in length")
        if np.any(self.stds < 0):
            raise ScalerError("negative standard deviation")

    @property
    def constant(self):
        """Boolean mask of zero-variance columns."""
        return self.stds == 0

    def __len__(self):
        return len(self.means)


def fit_scaler(train, column_names=None, exempt=()) -> ScalerParams:
    """Per-column mean and population std (divisor n).

    Columns named in ``exempt`` get mean 0 and std 1 so ``transform`` leaves them as is.
    """
    train = np.asarray(train, dtype=float)
    if train.ndim != 2 or train.shape[0] == 0:
        raise ScalerError("cannot fit a scaler on an empty matrix")
    if column_names is None:
        column_names = [f"x{j}" for j in range(train.shape[1])]
    column_names = tuple(column_names)
    if len(column_names) != train.shape[1]:
        raise ScalerError(f"{len(column_names)} names for {train.shape[1]} columns")
    unknown = set(exempt) - set(column_names)
    if unknown:
        raise ScalerError(f"exempt columns not in matrix: {sorted(unknown)}")

    means = train.mean(axis=0)
    stds = np.sqrt(((train - means) ** 2).mean(axis=0))
    for j, name in enumerate(column_names):
        if name in exempt:
            means[j], stds[j] = 0.0, 1.0
    exempt = tuple(n for n in column_names if n in exempt)
    return ScalerParams(means, stds, column_names, exempt)


def transform(scaler: ScalerParams, X):
    """``(x - mean) / std`` per column; zero-variance columns map to 0."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(scaler):
        raise ScalerError(f"matrix has {X.shape[-1]} columns, scaler has {len(scaler)}")
    safe = np.where(scaler.constant, 1.0, scaler.stds)
    out = (X - scaler.means) / safe
    out[:, scaler.constant] = 0.0
    return out


def inverse_transform(scaler: ScalerParams, Z):
    Z = np.asarray(Z, dtype=float)
    return Z * scaler.stds + scaler.means


def write_scaler_csv(scaler: ScalerParams, stream: TextIO):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["column_name", "mean", "std"])
    for name, mu, sd in zip(scaler.column_names, scaler.means, scaler.stds):
        w.writerow([name, repr(float(mu)), repr(float(sd))])


def read_scaler_csv(stream: TextIO) -> ScalerParams:
    rows = list(csv.DictReader(stream))
    return ScalerParams(
        np.array([float(r["mean"]) for r in rows]),
        np.array([float(r["std"]) for r in rows]),
        tuple(r["column_name"] for r in rows),
    )
