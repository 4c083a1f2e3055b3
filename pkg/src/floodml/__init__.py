"""From-scratch binary classifiers and a reproducible rainfall/flood prediction pipeline."""

from .dataset import LabeledDataset, load_dataset
from .metrics import classification_report, confusion, roc_curve
from .models import (
    DecisionTree,
    KNearestNeighbors,
    LogisticRegression,
    SupportVectorClassifier,
    load_model,
)
from .pipeline import RunConfig, compare_runs, read_config, run_pipeline
from .preprocess import fit_scaler, train_test_split, transform
from .synthetic import SyntheticSpec, generate_synthetic

__version__ = "0.1.0"
