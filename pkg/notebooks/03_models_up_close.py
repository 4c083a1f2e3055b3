"""Small hand-checkable cases for each model."""

import numpy as np

from floodml.models import (DecisionTree, KNearestNeighbors, LogisticRegression,
                            SupportVectorClassifier, load_model)
from floodml.models.logistic import sigmoid
from floodml.models.tree import entropy, information_gain

# sigmoid at 0 and 1
print(sigmoid(np.array([0.0, 1.0])))

# a separable 1-D problem for logistic regression
X = np.array([[-2.0], [-1.0], [1.0], [2.0]])
y = np.array([0, 0, 1, 1])
lr = LogisticRegression().fit(X, y)
print("logistic:", lr.intercept_, lr.coef_, "iters", lr.n_iter_, "loss %.4f" % lr.loss_)

# two points, linear kernel: alpha = 0.5 each, b = 0
svc = SupportVectorClassifier(kernel="linear").fit(np.array([[-1.0], [1.0]]), np.array([0, 1]))
print("svc alpha:", svc.alpha_, "b:", svc.intercept_)
print("svc decision at 0 and 1:", svc.decision_function(np.array([[0.0], [1.0]])))

# XOR needs the RBF kernel
xor = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
svc = SupportVectorClassifier(C=10.0, gamma=1.0).fit(xor, np.array([0, 0, 1, 1]))
print("xor predictions:", svc.predict(xor))

# k=3 on a line
knn = KNearestNeighbors(k=3).fit(np.array([[0.0], [1.0], [2.0], [10.0]]), np.array([0, 0, 1, 1]))
print("knn at 1.5:", knn.predict(np.array([[1.5]])), knn.score(np.array([[1.5]])))

# entropy of {1,0,0,0} and the gain of splitting it cleanly
print("H = %.4f" % entropy(np.array([1, 0, 0, 0])))
print("IG = %.4f" % information_gain(np.array([1, 0, 0, 0]),
                                     [np.array([1, 0]), np.array([0, 0])]))

# greedy splitting stalls on XOR: no single threshold has positive gain
tree = DecisionTree(max_depth=2).fit(xor, np.array([0, 0, 1, 1]))
print("xor tree depth:", tree.root_.depth())

tree = DecisionTree(max_depth=2).fit(X, y)
print("1-D tree threshold:", tree.root_.threshold, "predictions:", tree.predict(X))

# models serialise to JSON text and reload bit-exact
again = load_model(tree.to_text())
print("reload matches:", np.array_equal(again.predict(X), tree.predict(X)))
