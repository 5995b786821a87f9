"""scikit-learn style wrapper around the decoders."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .codes import build_from_id
from .decoder import DecodeResult, decode, prepare


class GkpDecoder(TransformerMixin, BaseEstimator):
    """Decoder for one code and scheme.

    ``fit`` builds the code and precomputes the decoding matrices; the noise
    passed to it is only used to check the feature count.  Rows of ``X`` are
    noise vectors (q_1..q_n, p_1..p_n).

    Args:
        code: Catalog id such as ``rep3``, ``513`` or ``unbiased-gkp-rep:2``.
        scheme: ``I``, ``II`` or ``III``.
        aux_alpha: Auxiliary lattice alpha; None uses the scheme default.
        logical_alpha: Logical lattice alpha.
        reduce_generators: Shorten the scheme III generator rows first.
    """

    def __init__(self, code="rep3", scheme="III", aux_alpha=None, logical_alpha=2.0, reduce_generators=False):
        self.code = code
        self.scheme = scheme
        self.aux_alpha = aux_alpha
        self.logical_alpha = logical_alpha
        self.reduce_generators = reduce_generators

    def fit(self, X=None, y=None):
        """Build the code; validate ``X`` against its mode count when given."""
        code = build_from_id(
            self.code, self.scheme, aux_alpha=self.aux_alpha,
            logical_alpha=self.logical_alpha, reduce_generators=self.reduce_generators,
        )
        self.code_ = code
        self.plan_ = prepare(code)
        self.n_features_in_ = 2 * code.n
        if X is not None:
            self._validate(X)
        return self

    def _validate(self, X) -> np.ndarray:
        x = check_array(X, dtype=float)
        if x.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {x.shape[1]} features, but {type(self).__name__} expects {self.n_features_in_}"
            )
        return x

    def decode(self, X) -> DecodeResult:
        """Full decode result for every row of ``X``."""
        check_is_fitted(self, "plan_")
        return decode(self._validate(X), self.code_, self.plan_)

    def transform(self, X) -> np.ndarray:
        """Final logical residual, shape (n_samples, 2k)."""
        return self.decode(X).xi_final_logical

    def predict(self, X) -> np.ndarray:
        """True where the sample ends in a logical error."""
        return self.decode(X).logical_error

    def score(self, X, y=None) -> float:
        """Fraction of samples decoded without a logical error."""
        return float(1.0 - np.mean(self.predict(X)))
