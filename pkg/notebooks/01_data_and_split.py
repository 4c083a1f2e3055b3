"""Walk through ingestion, the seeded split and train-only scaling on synthetic data."""

import io

import numpy as np

from floodml import preprocess as pp
from floodml.dataset import load_dataset
from floodml.synthetic import SyntheticSpec, generate_synthetic

# 34 stations over a decade, with a few missing daily readings
spec = SyntheticSpec(stations=34, start_year=2011, end_year=2020, missing_rate=0.01, flood_noise=150)
rain_csv, flood_csv = generate_synthetic(spec, seed=7)
print(rain_csv.splitlines()[0][:80], "...")

data, stats = load_dataset(io.StringIO(rain_csv), io.StringIO(flood_csv))
print("rows:", len(data.rows), "stations:", len(data.station_names))
print("imputed cells:", stats["imputed_cells"])

X, y, names = data.feature_matrix()
print("features:", names)
print("flood rate: %.3f" % y.mean())

# 80:20 split, floor(0.8 * 340) = 272 rows for training
split = pp.train_test_split(X, y, 0.8, seed=0)
print("train/test:", len(split.y_train), len(split.y_test))

# scaler sees only the training rows
sc = pp.fit_scaler(split.X_train, names)
Xtr = pp.transform(sc, split.X_train)
Xte = pp.transform(sc, split.X_test)
print("train means ~0:", np.allclose(Xtr.mean(axis=0), 0))
print("train stds  ~1:", np.allclose(Xtr.std(axis=0), 1))
print("test means (not centred):", np.round(Xte.mean(axis=0)[:4], 3))
