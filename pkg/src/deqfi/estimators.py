"""scikit-learn style wrappers around the functional API.

Inputs are stacks of density matrices (``X.shape == (samples, d, d)``) or
lists of :class:`~deqfi.channels.KrausChannel`. Nothing is learned; ``fit``
only validates and records the input dimension so that the objects compose
with ``sklearn.pipeline``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .channels import KrausChannel, apply
from .classify import hierarchy_report
from .core import DEFAULT_TOL, check_density, hamiltonian, l1_coherence, n_qubits_of
from .fisher import dephasing_qfi, pe_qfi


def check_states(X, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a stack of density matrices of one dimension."""
    X = np.asarray(X, dtype=complex)
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3 or X.shape[1] != X.shape[2] or X.shape[0] == 0:
        raise ValueError(f"expected an array of shape (samples, d, d), got {X.shape}")
    n_qubits_of(X.shape[1])
    return np.stack([check_density(rho, tol) for rho in X])


def check_channels(channels) -> list[KrausChannel]:
    channels = list(channels)
    if not channels or not all(isinstance(c, KrausChannel) for c in channels):
        raise ValueError("expected a non-empty sequence of KrausChannel")
    return channels


def _check_fitted(est):
    if not hasattr(est, "n_qubits_"):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


class ResourceProfiler(TransformerMixin, BaseEstimator):
    """Maps states to ``[dephasing QFI, phase-estimation QFI, l1 coherence]`` features."""

    def __init__(self, theta: float = 0.5, epsilon: float = 1.0, tol: float = DEFAULT_TOL):
        self.theta = theta
        self.epsilon = epsilon
        self.tol = tol

    def fit(self, X, y=None):
        X = check_states(X, self.tol)
        if not self.theta > 0:
            raise ValueError("theta must be positive")
        self.n_qubits_ = n_qubits_of(X.shape[1])
        return self

    def transform(self, X):
        _check_fitted(self)
        X = check_states(X, self.tol)
        if X.shape[1] != 1 << self.n_qubits_:
            raise ValueError("state dimension differs from the fitted one")
        h = hamiltonian(self.n_qubits_, self.epsilon)
        return np.array(
            [[dephasing_qfi(rho, self.theta, self.tol), pe_qfi(rho, h, self.tol), l1_coherence(rho)] for rho in X]
        )

    def get_feature_names_out(self, input_features=None):
        return np.array(["dephasing_qfi", "pe_qfi", "l1_coherence"], dtype=object)


class ChannelTransformer(TransformerMixin, BaseEstimator):
    """Applies a fixed channel to every state in ``X``."""

    def __init__(self, channel: KrausChannel | None = None, tol: float = DEFAULT_TOL):
        self.channel = channel
        self.tol = tol

    def fit(self, X, y=None):
        if not isinstance(self.channel, KrausChannel):
            raise ValueError("channel must be a KrausChannel")
        X = check_states(X, self.tol)
        if X.shape[1] != self.channel.dim:
            raise ValueError("state dimension differs from the channel dimension")
        self.n_qubits_ = self.channel.n_qubits
        return self

    def transform(self, X):
        _check_fitted(self)
        return np.stack([apply(self.channel, rho, self.tol) for rho in check_states(X, self.tol)])


class OperationClassifier(ClassifierMixin, BaseEstimator):
    """Predicts the hierarchy region label of each channel."""

    def __init__(self, tol: float = DEFAULT_TOL):
        self.tol = tol

    def fit(self, X, y=None):
        X = check_channels(X)
        self.n_qubits_ = X[0].n_qubits
        self.classes_ = np.array(sorted(set(y))) if y is not None else np.array([], dtype=object)
        return self

    def predict(self, X):
        _check_fitted(self)
        return np.array([hierarchy_report(c, self.tol)["region"] for c in check_channels(X)], dtype=object)
