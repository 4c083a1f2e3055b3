from .base import Classifier, DegenerateFitError, NotFittedError, load_model
from .knn import KNearestNeighbors, euclidean_distance
from .logistic import LogisticRegression, log_loss, log_loss_gradient, sigmoid
from .svc import SupportVectorClassifier, kernel_eval, kernel_matrix
from .tree import DecisionTree, TreeNode, best_split, entropy, information_gain

# report order follows the results tables
MODEL_ORDER = ("logistic", "svc", "knn", "tree")
MODEL_LABELS = {
    "logistic": "Binary Logistic Regression",
    "svc": "Support Vector Classifier (SVC)",
    "knn": "K-Nearest Neighbors (KNN)",
    "tree": "Decision Tree Classifier (DTC)",
}
MODEL_CLASSES = {
    "logistic": LogisticRegression,
    "svc": SupportVectorClassifier,
    "knn": KNearestNeighbors,
    "tree": DecisionTree,
}


def make_model(kind, **params):
    return MODEL_CLASSES[kind](**params)


__all__ = [
    "Classifier", "DegenerateFitError", "NotFittedError", "load_model",
    "KNearestNeighbors", "euclidean_distance",
    "LogisticRegression", "log_loss", "log_loss_gradient", "sigmoid",
    "SupportVectorClassifier", "kernel_eval", "kernel_matrix",
    "DecisionTree", "TreeNode", "best_split", "entropy", "information_gain",
    "MODEL_ORDER", "MODEL_LABELS", "MODEL_CLASSES", "make_model",
]
