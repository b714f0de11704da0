"""Seeded random states and channels for property tests and scenarios."""

from __future__ import annotations

import math

import numpy as np

from .channels import KrausChannel, compose, mix, paper_channel, pd_channel
from .core import BlochVector, popcount
from .hamming import enumerate_hdf
from .transform import _extreme_kraus, hdp_unitary, random_shp


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _ginibre(rng, rows: int, cols: int) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_density(n: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Random ``n``-qubit density matrix ``G G^dagger / tr`` from a Ginibre matrix."""
    rng = _rng(seed)
    d = 1 << n
    g = _ginibre(rng, d, rank or d)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure(n: int, seed=None) -> np.ndarray:
    """Haar-random state vector."""
    v = _ginibre(_rng(seed), 1 << n, 1)[:, 0]
    return v / np.linalg.norm(v)


def random_diagonal_density(n: int, seed=None) -> np.ndarray:
    p = _rng(seed).dirichlet(np.ones(1 << n))
    return np.diag(p).astype(complex)


def random_bloch(seed=None) -> BlochVector:
    """Uniform point in the Bloch ball."""
    rng = _rng(seed)
    v = rng.normal(size=3)
    v *= rng.random() ** (1 / 3) / np.linalg.norm(v)
    return BlochVector(*map(float, v))


def random_channel(n: int, num_kraus: int = 2, seed=None) -> KrausChannel:
    """Channel from a Haar-random isometry ``C^d -> C^(num_kraus * d)``."""
    rng = _rng(seed)
    d = 1 << n
    q, r = np.linalg.qr(_ginibre(rng, num_kraus * d, d))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return KrausChannel([q[l * d:(l + 1) * d] for l in range(num_kraus)])


def phase_twirl(ch: KrausChannel) -> KrausChannel:
    """Average of ``Z_S^dagger E(Z_S . Z_S) Z_S`` over all Pauli-Z strings ``Z_S``.

    The result satisfies ``x_m ^ y_m == i_m ^ j_m`` on every qubit for every
    non-zero Choi entry, which implies the HDP condition.
    """
    d = ch.dim
    idx = np.arange(d)
    ops = []
    scale = 1 / math.sqrt(d)
    for s in range(d):
        z = np.array([(-1) ** popcount(s & x) for x in idx], dtype=float)
        ops.extend(scale * (z[:, None] * k * z[None, :]) for k in ch.kraus)
    return KrausChannel(ops)


def random_hdf_unitary(n: int, seed=None) -> KrausChannel:
    rng = _rng(seed)
    funcs = enumerate_hdf(n)
    return hdp_unitary(funcs[rng.integers(len(funcs))], rng.uniform(0, 2 * math.pi, 1 << n))


def random_extreme_1q(seed=None) -> KrausChannel:
    """Two-Kraus single-qubit HDP channel with random angles and phases."""
    rng = _rng(seed)
    t0, t1 = rng.uniform(0, math.pi / 2, 2)
    phi, phi_t = rng.uniform(0, 2 * math.pi, 2)
    return _extreme_kraus(t0, t1, phi, phi_t)


HDP_FAMILIES = ("shp", "twirl", "unitary", "pd", "extreme", "named", "mixture")


def random_hdp_channel(n: int, seed=None, family: str | None = None) -> KrausChannel:
    """Random channel from the implemented HDP generators.

    Families: random SHP, phase-twirled Haar channels, HDF unitaries, phase
    damping, tensor products of single-qubit extreme channels, the named
    ``W`` and ``R`` channels, and compositions/mixtures of these.
    """
    rng = _rng(seed)
    if family is None:
        family = HDP_FAMILIES[rng.integers(len(HDP_FAMILIES))]
    if family == "shp":
        return random_shp(n, int(rng.integers(1, 4)), rng)
    if family == "twirl":
        base = phase_twirl(random_channel(n, int(rng.integers(1, 3)), rng))
        return compose(random_hdf_unitary(n, rng), base)
    if family == "unitary":
        return random_hdf_unitary(n, rng)
    if family == "pd":
        return compose(random_hdf_unitary(n, rng), pd_channel(n, float(rng.uniform(0, 2))))
    if family == "extreme":
        ops = [np.eye(1)]
        for _ in range(n):
            ops = [np.kron(k, a) for a in ops for k in random_extreme_1q(rng).kraus]
        return KrausChannel(ops)
    if family == "named":
        names = [c for c, m in (("W", 2), ("R", 3)) if n >= m]
        if not names:
            return random_extreme_1q(rng)
        base = paper_channel(names[rng.integers(len(names))], n)
        return compose(random_hdf_unitary(n, rng), compose(base, random_hdf_unitary(n, rng)))
    if family == "mixture":
        parts = [random_hdp_channel(n, rng, f) for f in ("shp", "twirl", "pd")]
        return mix(parts, rng.dirichlet(np.ones(len(parts))))
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(HDP_FAMILIES)}")


def c1c2_mixture(n: int, seed=None):
    """Mixture of ``cos(zeta)|x> + sin(zeta) e^{i phi_x}|~x>`` over ``x < ~x`` (bitwise complement).

    Returns ``(rho, zeta, phases, weights)``.
    """
    rng = _rng(seed)
    d = 1 << n
    reps = [x for x in range(d) if x < (d - 1) ^ x]
    zeta = float(rng.uniform(0.1, math.pi / 2 - 0.1))
    phases = rng.uniform(0, 2 * math.pi, len(reps))
    weights = rng.dirichlet(np.ones(len(reps)))
    rho = np.zeros((d, d), dtype=complex)
    for x, ph, w in zip(reps, phases, weights):
        v = np.zeros(d, dtype=complex)
        v[x] = math.cos(zeta)
        v[(d - 1) ^ x] = math.sin(zeta) * np.exp(1j * ph)
        rho += w * np.outer(v, v.conj())
    return rho, zeta, phases, weights


def seeds(seed, count: int):
    """``count`` independent child generators of ``seed``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]

