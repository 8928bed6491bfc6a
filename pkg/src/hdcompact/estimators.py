"""scikit-learn wrappers around the chart machinery.

Inputs are batches of square matrices with shape (m, n, n); a single matrix
is accepted as a batch of one.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_matrix_batch
from .boundary_chart import DEFAULT_EPS_BREAK, BoundaryChartPoint, chart_decompose, chart_reconstruct
from .decompositions import normalized_svd
from .face_lattice import enumerate_faces


def _check_dim(est, X) -> np.ndarray:
    X = check_matrix_batch(X)
    if X.shape[1] != est.n_:
        raise ValueError(f"estimator was fitted on {est.n_}x{est.n_} matrices, got {X.shape[1]}x{X.shape[2]}")
    return X


class KAKTransformer(TransformerMixin, BaseEstimator):
    """Singular-value ratio profile of each matrix.

    ``transform`` returns the n-1 successive ratios ``s[j+1] / s[j]`` of the
    Cartan factor (their logarithms when ``log=True``), i.e. the coweight
    coordinates of the matrix.
    """

    def __init__(self, log: bool = True, method: str = "lapack"):
        self.log = log
        self.method = method

    def fit(self, X, y=None):
        X = check_matrix_batch(X)
        self.n_ = X.shape[1]
        self.n_features_out_ = self.n_ - 1
        return self

    def transform(self, X):
        check_is_fitted(self, "n_")
        X = _check_dim(self, X)
        out = np.empty((X.shape[0], self.n_ - 1))
        for idx, g in enumerate(X):
            _, s, _ = normalized_svd(g, self.method)
            out[idx] = np.log(s[1:]) - np.log(s[:-1])
        return out if self.log else np.exp(out)


class BoundaryChartEncoder(TransformerMixin, BaseEstimator):
    """Encode matrices as boundary chart points and decode them back."""

    def __init__(self, eps_break: float = DEFAULT_EPS_BREAK):
        self.eps_break = eps_break

    def fit(self, X, y=None):
        if not 0 < self.eps_break < 1:
            raise ValueError("eps_break must lie in (0, 1)")
        X = check_matrix_batch(X)
        self.n_ = X.shape[1]
        return self

    def transform(self, X) -> list[BoundaryChartPoint]:
        check_is_fitted(self, "n_")
        X = _check_dim(self, X)
        return [chart_decompose(g, self.eps_break) for g in X]

    def inverse_transform(self, points) -> np.ndarray:
        check_is_fitted(self, "n_")
        if isinstance(points, BoundaryChartPoint):
            points = [points]
        return np.stack([chart_reconstruct(p) for p in points])


class BoundaryFaceClassifier(ClassifierMixin, BaseEstimator):
    """Label each matrix with the boundary face its chart is attached to.

    ``faces_`` lists every face of SL(n) (interior first); ``predict``
    returns the index of the face whose breaks are the singular-value gaps
    below ``eps_break``.
    """

    def __init__(self, eps_break: float = DEFAULT_EPS_BREAK):
        self.eps_break = eps_break

    def fit(self, X, y=None):
        X = check_matrix_batch(X)
        self.n_ = X.shape[1]
        self.faces_ = enumerate_faces(self.n_)
        self.classes_ = np.arange(len(self.faces_))
        self._index = {f.breaks: i for i, f in enumerate(self.faces_)}
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "faces_")
        X = _check_dim(self, X)
        return np.array([self._index[chart_decompose(g, self.eps_break).breaks] for g in X])

    def face_of(self, label: int):
        check_is_fitted(self, "faces_")
        return self.faces_[int(label)]


__all__ = ["KAKTransformer", "BoundaryChartEncoder", "BoundaryFaceClassifier"]
