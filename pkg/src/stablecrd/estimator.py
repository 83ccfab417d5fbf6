"""scikit-learn style front end: fit on a CRD, predict stability of rows.

Each row of ``X`` is a configuration (molecule counts in species order).
``predict`` returns 1 for o-stable rows and 0 for o-unstable ones, so the
estimators plug into ``score``, ``cross_val_score``-free comparisons and
the usual ``get_params``/``set_params``/``clone`` machinery.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .errors import DimensionError, ZeroConfigurationError
from .minu import DEFAULT_ELEMENT_CAP, check_o_stable, gen_min_unstable
from .model import Configuration, Crd
from .oracle import DEFAULT_CAP, is_t_stable, oracle_is_o_stable


def check_crd(crd):
    if not isinstance(crd, Crd):
        raise TypeError(f"expected a Crd, got {type(crd).__name__}")
    return crd


def check_configurations(X, species):
    """Validate ``X`` as a 2-D array of nonnegative, nonzero count rows.

    DataFrames are reordered by column name to match ``species``.
    """
    if hasattr(X, "columns"):
        missing = [s for s in species if s not in X.columns]
        if missing:
            raise DimensionError(f"missing species columns: {missing}")
        X = X[list(species)]
    X = check_array(X, dtype=np.int64)
    if X.shape[1] != len(species):
        raise DimensionError(f"X has {X.shape[1]} columns, CRD has {len(species)} species")
    if (X < 0).any():
        raise ValueError("molecule counts must be nonnegative")
    if (X.sum(axis=1) == 0).any():
        raise ZeroConfigurationError("X contains the zero configuration")
    return X


def _rows(X):
    return [Configuration._trusted(tuple(int(v) for v in row)) for row in X]


class MinUnstableClassifier(ClassifierMixin, BaseEstimator):
    """Classify configurations via the precomputed min(U) of a CRD.

    ``fit`` runs the min(U) generation once; ``predict`` then costs one
    dominance query per row.

    Parameters
    ----------
    index : {"auto", "naive", "tree"}
        Dominance index backend.
    size_cap, element_cap : int or None
        Generation limits. A truncated result still certifies instability,
        and stability for rows no larger than the completed size.
    """

    def __init__(self, index="auto", size_cap=None, element_cap=DEFAULT_ELEMENT_CAP):
        self.index = index
        self.size_cap = size_cap
        self.element_cap = element_cap

    def fit(self, X, y=None):
        crd = check_crd(X)
        self.crd_ = crd
        self.result_ = gen_min_unstable(crd, self.size_cap, self.element_cap, self.index)
        self.min_unstable_ = np.array(
            [c.counts for c in self.result_.canonical_list()], dtype=np.int64
        ).reshape(-1, crd.dim)
        self.feature_names_in_ = np.array(crd.species.names, dtype=object)
        self.n_features_in_ = crd.dim
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        X = check_configurations(X, self.crd_.species.names)
        return np.array([int(check_o_stable(self.result_, c)) for c in _rows(X)])


class OracleStabilityClassifier(ClassifierMixin, BaseEstimator):
    """Same interface, answered by exhaustive reachability (``mode="o"``)
    or the local t-stability test (``mode="t"``)."""

    def __init__(self, mode="o", cap=DEFAULT_CAP):
        self.mode = mode
        self.cap = cap

    def fit(self, X, y=None):
        if self.mode not in ("o", "t"):
            raise ValueError("mode must be 'o' or 't'")
        crd = check_crd(X)
        self.crd_ = crd
        self.feature_names_in_ = np.array(crd.species.names, dtype=object)
        self.n_features_in_ = crd.dim
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "crd_")
        X = check_configurations(X, self.crd_.species.names)
        if self.mode == "t":
            return np.array([int(is_t_stable(self.crd_, c).stable) for c in _rows(X)])
        return np.array([int(oracle_is_o_stable(self.crd_, c, self.cap).stable) for c in _rows(X)])
