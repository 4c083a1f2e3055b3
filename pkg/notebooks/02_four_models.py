"""Fit the four classifiers on one split and compare their reports and ROC curves."""

import io

from floodml import metrics as mt
from floodml import preprocess as pp
from floodml.dataset import load_dataset
from floodml.models import MODEL_LABELS, MODEL_ORDER, make_model
from floodml.synthetic import SyntheticSpec, generate_synthetic

spec = SyntheticSpec(stations=34, start_year=2011, end_year=2020, flood_noise=250)
data, _ = load_dataset(*map(io.StringIO, generate_synthetic(spec, seed=11)))
X, y, names = data.feature_matrix()

split = pp.train_test_split(X, y, 0.8, seed=1)
sc = pp.fit_scaler(split.X_train, names)
Xtr, Xte = pp.transform(sc, split.X_train), pp.transform(sc, split.X_test)

curves = []
for kind in MODEL_ORDER:
    model = make_model(kind).fit(Xtr, split.y_train)
    pred = model.predict(Xte)
    rep = mt.classification_report(split.y_test, pred)
    curve = mt.roc_curve(split.y_test, model.score(Xte))
    curves.append((MODEL_LABELS[kind], curve))
    print(MODEL_LABELS[kind])
    print(rep.format())
    print("AUC %.3f\n" % curve.auc)

# one SVG with all four curves
svg = mt.roc_svg(curves)
print("svg bytes:", len(svg))
