"""CPTP maps in Kraus form, their Choi matrices, and the named channels used throughout.

Choi layout: block ``(x, y)`` of ``J`` is ``E(|x><y|)``, i.e.
``J[x * d + i, y * d + j] = <i|E(|x><y|)|j>``.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .core import DEFAULT_TOL, check_density, check_matrix, hamming_distance_matrix, n_qubits_of


class KrausChannel:
    """A channel given by an explicit list of Kraus operators."""

    __slots__ = ("kraus",)

    def __init__(self, kraus):
        ops = tuple(check_matrix(k, "Kraus operator") for k in kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        if any(k.shape != (d, d) for k in ops):
            raise ValueError("Kraus operators must share one square shape")
        n_qubits_of(d)
        self.kraus = ops

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def n_qubits(self) -> int:
        return n_qubits_of(self.dim)

    def __len__(self) -> int:
        return len(self.kraus)

    def __call__(self, rho):
        return apply(self, rho)

    def __repr__(self) -> str:
        return f"KrausChannel(n_qubits={self.n_qubits}, num_kraus={len(self)})"


def identity_channel(n: int) -> KrausChannel:
    return KrausChannel([np.eye(1 << n)])


def unitary_channel(u) -> KrausChannel:
    u = check_matrix(u, "unitary")
    if not np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-10):
        raise ValueError("matrix is not unitary")
    return KrausChannel([u])


def apply_to_operator(ch: KrausChannel, op) -> np.ndarray:
    """``sum_l K_l op K_l^dagger`` for an arbitrary operator ``op``."""
    op = check_matrix(op, "operator")
    if op.shape[0] != ch.dim:
        raise ValueError(f"operator dimension {op.shape[0]} does not match channel dimension {ch.dim}")
    return sum(k @ op @ k.conj().T for k in ch.kraus)


def apply(ch: KrausChannel, rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    rho = check_density(rho, tol)
    out = apply_to_operator(ch, rho)
    return (out + out.conj().T) / 2


def compose(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """The channel ``a`` after ``b``."""
    if a.dim != b.dim:
        raise ValueError("cannot compose channels of different dimension")
    return KrausChannel([ka @ kb for ka in a.kraus for kb in b.kraus])


def mix(channels: Sequence[KrausChannel], probs: Sequence[float]) -> KrausChannel:
    """Convex combination, realised by concatenating ``sqrt(p)``-weighted Kraus lists."""
    probs = np.asarray(probs, dtype=float)
    if len(channels) != len(probs) or np.any(probs < 0) or abs(probs.sum() - 1) > 1e-12:
        raise ValueError("mixing weights must be a probability vector matching the channels")
    return KrausChannel(
        [math.sqrt(p) * k for ch, p in zip(channels, probs) if p > 0 for k in ch.kraus]
    )


def choi_of(ch: KrausChannel) -> np.ndarray:
    vecs = np.stack([k.T.reshape(-1) for k in ch.kraus], axis=1)
    return vecs @ vecs.conj().T


def choi_entry(choi, i: int, j: int, x: int, y: int) -> complex:
    """``<i|E(|x><y|)|j>`` read from a Choi matrix."""
    d = math.isqrt(choi.shape[0])
    return complex(choi[x * d + i, y * d + j])


def canonical_kraus(ch: KrausChannel, cutoff: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Kraus operators from the Choi eigenvectors; independent of the given decomposition."""
    w, v = np.linalg.eigh(choi_of(ch))
    d = ch.dim
    return [math.sqrt(lam) * v[:, a].reshape(d, d).T for a, lam in enumerate(w) if lam > cutoff]


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = DEFAULT_TOL) -> bool:
    if a.dim != b.dim:
        raise ValueError("channels act on different dimensions")
    return channel_distance(a, b) <= tol


def channel_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Frobenius distance between Choi matrices."""
    return float(np.linalg.norm(choi_of(a) - choi_of(b)))


def validate_cptp(ch: KrausChannel, tol: float = DEFAULT_TOL) -> bool:
    d = ch.dim
    tp = sum(k.conj().T @ k for k in ch.kraus)
    if np.abs(tp - np.eye(d)).max() > tol:
        return False
    return bool(np.linalg.eigvalsh(choi_of(ch))[0] >= -tol)


# --- phase damping and complete dephasing -------------------------------------------


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not theta >= 0:
        raise ValueError(f"dephasing strength must be non-negative, got {theta}")
    return theta


def pd_channel_apply(n: int, theta: float, rho) -> np.ndarray:
    """Scale each entry ``rho[x, y]`` by ``exp(-h(x, y) * theta)``."""
    theta = _check_theta(theta)
    rho = check_matrix(rho, "rho")
    if rho.shape[0] != 1 << n:
        raise ValueError(f"state dimension {rho.shape[0]} does not match {n} qubits")
    return np.exp(-theta * hamming_distance_matrix(n)) * rho


def pd_derivative(n: int, theta: float, rho) -> np.ndarray:
    """Derivative of :func:`pd_channel_apply` with respect to ``theta``."""
    theta = _check_theta(theta)
    rho = check_matrix(rho, "rho")
    if rho.shape[0] != 1 << n:
        raise ValueError(f"state dimension {rho.shape[0]} does not match {n} qubits")
    h = hamming_distance_matrix(n)
    return -h * np.exp(-theta * h) * rho


def pd_channel(n: int, theta: float) -> KrausChannel:
    """Product of single-qubit phase-damping channels, one diagonal Kraus pair per qubit."""
    theta = _check_theta(theta)
    e = math.exp(-theta)
    single = [np.diag([1.0, e]), np.diag([0.0, math.sqrt(max(0.0, 1 - e * e))])]
    ops = [np.eye(1)]
    for _ in range(n):
        ops = [np.kron(k, a) for a in ops for k in single]
    return KrausChannel([k for k in ops if np.any(k)])


def cd_channel(n: int) -> KrausChannel:
    """Complete dephasing: projectors onto each computational basis state."""
    d = 1 << n
    ops = []
    for i in range(d):
        p = np.zeros((d, d))
        p[i, i] = 1
        ops.append(p)
    return KrausChannel(ops)


# --- named channels -----------------------------------------------------------------

PAPER_CHANNELS = ("W", "R", "N", "Z", "U_sio", "V_swap", "U_phase")


def _ketbra(d: int, terms) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    for coeff, i, j in terms:
        m[i, j] += coeff
    return m


def _identity_minus(d: int, idx) -> np.ndarray:
    m = np.eye(d, dtype=complex)
    for i in idx:
        m[i, i] = 0
    return m


def _channel_w(d: int) -> list[np.ndarray]:
    a, b = 1 / 2, 1 / (2 * math.sqrt(2))
    return [
        _ketbra(d, [(a, 0, 1), (b, 1, 0), (b, 2, 0)]),
        _ketbra(d, [(a, 1, 1), (b, 0, 0), (b, 3, 0)]),
        _ketbra(d, [(a, 2, 1), (b, 0, 0), (-b, 3, 0)]),
        _ketbra(d, [(a, 3, 1), (b, 1, 0), (-b, 2, 0)]),
        _identity_minus(d, [0, 1]),
    ]


def _channel_r(d: int) -> list[np.ndarray]:
    s = 1 / math.sqrt(2)
    return [
        _ketbra(d, [(s, 0, 0), (0.5, 2, 1), (0.5, 3, 6)]),
        _ketbra(d, [(s, 6, 0), (0.5, 2, 1), (-0.5, 3, 6)]),
        _ketbra(d, [(0.5, 1, 1), (0.5, 6, 6), (s, 7, 7)]),
        _ketbra(d, [(0.5, 4, 1), (-0.5, 3, 6), (s, 7, 7)]),
        _identity_minus(d, [0, 1, 6, 7]),
    ]


def _channel_n(d: int) -> list[np.ndarray]:
    a = 1 / (2 * math.sqrt(3))
    r2, r6 = 1 / math.sqrt(2), 1 / math.sqrt(6)
    c3 = math.sqrt(6) / 3
    return [
        _ketbra(d, [(0.5, 0, 1), (a, 1, 0), (-a, 2, 0), (a, 3, 0)]),
        _ketbra(d, [(a, 0, 0), (r2, 0, 2), (r6, 0, 3), (0.5, 1, 1), (a, 2, 0), (a, 3, 0)]),
        _ketbra(d, [(a, 0, 0), (-r2, 0, 2), (r6, 0, 3), (a, 1, 0), (0.5, 2, 1), (-a, 3, 0)]),
        _ketbra(d, [(a, 0, 0), (-c3, 0, 3), (-a, 1, 0), (-a, 2, 0), (0.5, 3, 1)]),
        _identity_minus(d, [0, 1, 2, 3]),
    ]


def _channel_z() -> list[np.ndarray]:
    return [
        0.5 * np.array([[1, 0], [0, 1]]),
        0.5 * np.array([[0, 1], [1, 0]]),
        0.5 * np.array([[1, 1], [0, 0]]),
        0.5 * np.array([[0, 0], [1, -1]]),
    ]


def paper_channel(name: str, n: int | None = None, phi: float = 0.0) -> KrausChannel:
    """Named channels: ``W``, ``R``, ``N``, ``Z``, ``U_sio``, ``V_swap``, ``U_phase``.

    ``W``, ``N`` and ``U_sio`` act on ``n >= 2`` qubits (default 2), ``R`` on
    ``n >= 3`` (default 3); ``V_swap`` is two-qubit, ``Z`` and ``U_phase``
    single-qubit. Identically zero Kraus operators are dropped.
    """
    min_n = {"W": 2, "N": 2, "U_sio": 2, "R": 3}
    fixed_n = {"V_swap": 2, "Z": 1, "U_phase": 1}
    if name in min_n:
        n = min_n[name] if n is None else n
        if n < min_n[name]:
            raise ValueError(f"channel {name} needs at least {min_n[name]} qubits, got {n}")
    elif name in fixed_n:
        if n is not None and n != fixed_n[name]:
            raise ValueError(f"channel {name} is defined on {fixed_n[name]} qubit(s) only")
        n = fixed_n[name]
    else:
        raise ValueError(f"unknown channel {name!r}; choose from {', '.join(PAPER_CHANNELS)}")
    d = 1 << n
    if name == "W":
        ops = _channel_w(d)
    elif name == "R":
        ops = _channel_r(d)
    elif name == "N":
        ops = _channel_n(d)
    elif name == "Z":
        ops = _channel_z()
    elif name == "U_sio":
        u = np.eye(d, dtype=complex)
        u[2:4, 2:4] = [[0, 1], [1, 0]]
        ops = [u]
    elif name == "V_swap":
        ops = [np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])]
    else:
        ops = [np.diag([1.0, np.exp(-1j * phi)])]
    return KrausChannel([k for k in ops if np.any(k)])
