"""State-transformation constructions under Hamming-distance-preserving operations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import KrausChannel, apply, choi_of, compose, pd_channel
from .core import (
    DEFAULT_TOL,
    BlochVector,
    bloch_from_density,
    check_density,
    density_from_bloch,
    n_qubits_of,
    popcount,
    psd_sqrt,
)
from .hamming import HDFunction, enumerate_hdf, is_hdf

# --- single-qubit HDP cone ----------------------------------------------------------


@dataclass(frozen=True)
class ConeQuery:
    source: BlochVector
    target: BlochVector

    def __post_init__(self):
        object.__setattr__(self, "source", BlochVector(*map(float, self.source)).check())
        object.__setattr__(self, "target", BlochVector(*map(float, self.target)).check())


def max_cone_radius(source, z_target: float) -> float:
    """Largest transverse radius reachable at height ``z_target`` from ``source``."""
    b = BlochVector(*map(float, source))
    r, z = b.r, b.z
    if abs(z_target) < abs(z):
        return r
    denom = 1 - z * z
    if denom <= 0:
        return 0.0
    return r * math.sqrt(max(0.0, 1 - z_target * z_target) / denom)


def hdp_cone_contains(q: ConeQuery, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``q.target`` lies in the HDP cone of ``q.source``; azimuths are irrelevant."""
    return q.target.r <= max_cone_radius(q.source, q.target.z) + tol


def extreme_cone_angles(z: float, z_target: float) -> tuple[float, float]:
    """Angles ``(theta0, theta1)`` of the two-Kraus extreme channel sending height ``z`` to ``z_target``.

    Populations obey ``p(0|0) = cos^2 theta0`` and ``p(1|1) = cos^2 theta1``.
    """
    if abs(z_target) < abs(z):
        c0 = c1 = z_target / z
    elif z_target == 0:
        c0 = c1 = 1.0
    else:
        c0 = (z + z_target**2) / (z_target * (1 + z)) if 1 + z > 0 else None
        c1 = (z - z_target**2) / (z_target * (1 - z)) if 1 - z > 0 else None
        # at a pole one population is empty and its angle is free
        c0 = c1 if c0 is None else c0
        c1 = c0 if c1 is None else c1
    c0, c1 = (min(1.0, max(-1.0, c)) for c in (c0, c1))
    return math.acos(c0) / 2, math.acos(c1) / 2


def _extreme_kraus(theta0, theta1, phi, phi_target):
    u = np.exp(-1j * (phi - phi_target))
    v = np.exp(-1j * (phi + phi_target))
    k1 = np.array([[math.cos(theta0), 0], [0, u * math.cos(theta1)]])
    k2 = np.array([[0, v * math.sin(theta1)], [math.sin(theta0), 0]])
    return KrausChannel([k1, k2])


def extreme_cone_channel(q: ConeQuery, tol: float = DEFAULT_TOL) -> KrausChannel:
    """Two-Kraus HDP channel reaching the cone boundary above ``q.target``.

    The output has the target's height and azimuth and transverse radius
    ``max_cone_radius(q.source, q.target.z)``, so it equals the target when
    the target is on the boundary and dominates it otherwise.
    """
    if not hdp_cone_contains(q, tol):
        raise ValueError("target lies outside the HDP cone of the source")
    t0, t1 = extreme_cone_angles(q.source.z, q.target.z)
    phi_t = q.target.phi if q.target.r > 0 else q.source.phi
    return _extreme_kraus(t0, t1, q.source.phi, phi_t)


def cone_transform(q: ConeQuery, tol: float = DEFAULT_TOL) -> KrausChannel:
    """HDP channel mapping the source exactly onto the target: extreme channel, then phase damping."""
    ch = extreme_cone_channel(q, tol)
    reached = max_cone_radius(q.source, q.target.z)
    if q.target.r >= reached or reached == 0:
        return ch
    if q.target.r <= 0:
        return compose(_full_dephasing_1q(), ch)
    return compose(pd_channel(1, math.log(reached / q.target.r)), ch)


def _full_dephasing_1q() -> KrausChannel:
    return KrausChannel([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def cone_boundary(source, z_grid) -> list[tuple[float, float]]:
    """``(z', r'_max)`` pairs traced by applying the extreme channel to ``source``."""
    b = BlochVector(*map(float, source)).check()
    rho = density_from_bloch(b)
    rows = []
    for zt in z_grid:
        zt = float(zt)
        t0, t1 = extreme_cone_angles(b.z, zt)
        out = bloch_from_density(apply(_extreme_kraus(t0, t1, b.phi, b.phi), rho))
        rows.append((zt, out.r))
    return rows


def cone_radius_by_search(source, z_target: float, num: int = 2001) -> float:
    """Largest off-diagonal bound ``r cos(theta0 - theta1)`` over a grid of population angles.

    Independent of :func:`max_cone_radius`: scans ``theta0``, solves the
    height constraint for ``theta1`` and keeps the best bound. Returns ``-1``
    when no grid point reaches height ``z_target``.
    """
    b = BlochVector(*map(float, source))
    r, z = b.r, b.z
    c0 = np.cos(np.linspace(0, math.pi, num))
    if 1 - z > 0:
        c1 = ((1 + z) * c0 - 2 * z_target) / (1 - z)
    else:
        c1 = np.where(np.abs(c0 - z_target) <= 1e-12, c0, np.inf)
    ok = np.abs(c1) <= 1 + 1e-12
    if not ok.any():
        return -1.0
    t0 = np.arccos(c0[ok]) / 2
    t1 = np.arccos(np.clip(c1[ok], -1, 1)) / 2
    return float(r * np.cos(t0 - t1).max())


# --- off-diagonal bound -------------------------------------------------------------


def conditional_probabilities(ch: KrausChannel) -> np.ndarray:
    """``p[i, x] = <i|E(|x><x|)|i>`` read from the Choi diagonal."""
    d = ch.dim
    diag = np.real(np.diag(choi_of(ch))).reshape(d, d)  # index [x, i]
    return diag.T.copy()


def hdp_offdiag_bound(rho, i: int, j: int, p, tol: float = DEFAULT_TOL) -> float:
    """Upper bound on ``|<i|E(rho)|j>|`` over HDP channels with transition table ``p[i, x]``.

    Sums ``|rho[x, y]| sqrt(p[i, x] p[j, y])`` over pairs with ``h(x, y) = h(i, j)``.
    For ``i == j`` the value ``sum_x rho[x, x] p[i, x]`` is exact.
    """
    rho = check_density(rho, tol)
    p = np.asarray(p, dtype=float)
    d = rho.shape[0]
    if p.shape != (d, d) or np.any(p < -tol) or np.abs(p.sum(axis=0) - 1).max() > tol:
        raise ValueError("p must be a column-stochastic d x d table")
    p = np.clip(p, 0, None)
    if i == j:
        return float(np.sum(np.real(np.diag(rho)) * p[i]))
    hij = popcount(i ^ j)
    total = 0.0
    for x in range(d):
        for y in range(d):
            if popcount(x ^ y) == hij:
                total += abs(rho[x, y]) * math.sqrt(p[i, x] * p[j, y])
    return total


def counterexample_state() -> np.ndarray:
    """Two-qubit state whose ``<0|.|1>`` coherence the off-diagonal bound overestimates."""
    s = 1 / math.sqrt(2)
    return np.array([[1, s, s, 0], [s, 1, 0, 0], [s, 0, 1, 0], [0, 0, 0, 1]], dtype=complex) / 4


# --- golden states and free unitaries -----------------------------------------------


def golden_transform(target, phases=None, tol: float = DEFAULT_TOL) -> KrausChannel:
    """SHP channel sending the uniform superposition with ``phases`` to the pure state ``target``.

    Kraus operator ``K_z`` maps ``|x ^ z>`` to ``target[x] exp(i eta[x ^ z]) |x>``.
    """
    a = np.asarray(target, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(a) - 1) > tol:
        raise ValueError("target state is not normalized")
    d = a.size
    n_qubits_of(d)
    eta = np.zeros(d) if phases is None else np.asarray(phases, dtype=float)
    if eta.shape != (d,):
        raise ValueError(f"expected {d} source phases")
    ops = []
    for z in range(d):
        k = np.zeros((d, d), dtype=complex)
        for x in range(d):
            k[x, x ^ z] = a[x] * np.exp(1j * eta[x ^ z])
        ops.append(k)
    return KrausChannel(ops)


def hdp_unitary(f, omega=None) -> KrausChannel:
    """Unitary ``sum_x exp(-i omega_x) |f(x)><x|`` for a Hamming-distance-preserving ``f``."""
    if not isinstance(f, HDFunction):
        table = list(f)
        n = n_qubits_of(len(table))
        if not is_hdf(table, n):
            raise ValueError("permutation is not Hamming-distance preserving")
        f = HDFunction.from_table(table, n)
    d = 1 << f.n
    omega = np.zeros(d) if omega is None else np.asarray(omega, dtype=float)
    u = np.zeros((d, d), dtype=complex)
    for x in range(d):
        u[f.table[x], x] = np.exp(-1j * omega[x])
    return KrausChannel([u])


# --- coherence merging --------------------------------------------------------------


def check_c1_c2(rho, tol: float = DEFAULT_TOL):
    """Detect states whose coherences share one Hamming distance and have disjoint supports.

    Returns ``(c, pairing)`` where ``pairing`` maps each ``x`` to its partner
    ``y(x) > x``, or ``None`` when either condition fails or ``rho`` is diagonal.
    """
    rho = check_density(rho, tol)
    d = rho.shape[0]
    pairs = [(x, y) for x in range(d) for y in range(x + 1, d) if abs(rho[x, y]) > tol]
    if not pairs:
        return None
    dists = {popcount(x ^ y) for x, y in pairs}
    if len(dists) != 1:
        return None
    used = [v for pair in pairs for v in pair]
    if len(used) != len(set(used)):
        return None
    return dists.pop(), dict(pairs)


@dataclass
class MergeSpec:
    """Input to :func:`merge_channel`.

    The probability dicts are keyed by the smaller index ``x`` of each pair:
    ``p_ix[x] = p(i|x)``, ``p_jx[x] = p(j|x)``, ``p_jy[x] = p(j|y(x))``,
    ``p_iy[x] = p(i|y(x))``.
    """

    rho: np.ndarray
    i: int
    j: int
    pairing: dict[int, int]
    p_ix: dict[int, float] = field(default_factory=dict)
    p_jy: dict[int, float] = field(default_factory=dict)
    p_jx: dict[int, float] = field(default_factory=dict)
    p_iy: dict[int, float] = field(default_factory=dict)

    @classmethod
    def optimal(cls, rho, i: int, j: int, tol: float = DEFAULT_TOL) -> "MergeSpec":
        """All weight of each pair routed onto ``(i, j)``: ``p(i|x) = p(j|y(x)) = 1``."""
        found = check_c1_c2(rho, tol)
        if found is None:
            raise ValueError("state does not satisfy the merge conditions")
        _, pairing = found
        ones = {x: 1.0 for x in pairing}
        zeros = {x: 0.0 for x in pairing}
        return cls(np.asarray(rho, dtype=complex), i, j, pairing, dict(ones), dict(ones), dict(zeros), dict(zeros))


def merge_channel(spec: MergeSpec, tol: float = DEFAULT_TOL) -> KrausChannel:
    """HDP channel that gathers the coherences of a mergeable state onto ``|i><j|``.

    The merged entry is ``sum_x (sqrt(p(i|x) p(j|y)) + sqrt(p(j|x) p(i|y))) |rho[x, y]|``
    plus ``sqrt(r_i r_j) rho[i, j]`` from the completion ``K0``, where ``r`` is
    the diagonal residual. The extra term vanishes when ``rho[i, j] = 0`` or
    when the pair ``(i, j)`` is routed with full probability; with
    ``p(i|x) = p(j|y(x)) = 1`` the entry is ``sum_x |rho[x, y(x)]|``.
    """
    rho = check_density(spec.rho, tol)
    found = check_c1_c2(rho, tol)
    if found is None:
        raise ValueError("state violates the equal-distance or disjoint-support condition")
    c, pairing = found
    if pairing != dict(spec.pairing):
        raise ValueError("pairing does not match the support of the state's coherences")
    d = rho.shape[0]
    i, j = spec.i, spec.j
    if not (0 <= i < d and 0 <= j < d) or popcount(i ^ j) != c:
        raise ValueError(f"target pair ({i}, {j}) must sit at Hamming distance {c}")
    ops = []
    acc = np.zeros((d, d), dtype=complex)
    for x, y in pairing.items():
        pix, pjy = spec.p_ix.get(x, 0.0), spec.p_jy.get(x, 0.0)
        pjx, piy = spec.p_jx.get(x, 0.0), spec.p_iy.get(x, 0.0)
        if min(pix, pjy, pjx, piy) < 0 or pix + pjx > 1 + tol or pjy + piy > 1 + tol:
            raise ValueError(f"branch probabilities for pair ({x}, {y}) are not sub-stochastic")
        ph = np.exp(-1j * np.angle(rho[x, y]))
        k1 = np.zeros((d, d), dtype=complex)
        k1[i, x] = math.sqrt(pix) * ph
        k1[j, y] = math.sqrt(pjy)
        k2 = np.zeros((d, d), dtype=complex)
        k2[j, x] = math.sqrt(pjx) * ph
        k2[i, y] = math.sqrt(piy)
        for k in (k1, k2):
            if np.any(k):
                ops.append(k)
                acc += k.conj().T @ k
    try:
        k0 = psd_sqrt(np.eye(d) - acc, tol)
    except ValueError as exc:
        raise ValueError("completion operator is not positive semidefinite") from exc
    if np.any(np.abs(k0) > tol):
        ops.insert(0, k0)
    return KrausChannel(ops)


# --- random SHP channels ------------------------------------------------------------


def random_shp(n: int, num_kraus: int, seed=None) -> KrausChannel:
    """Random SHP channel: ``num_kraus`` generalized permutations along random HDFs.

    Coefficients are complex Gaussian, normalized so that ``sum_l |c_lx|^2 = 1``
    for every column ``x``.
    """
    if num_kraus < 1:
        raise ValueError("need at least one Kraus operator")
    rng = np.random.default_rng(seed)
    funcs = enumerate_hdf(n)
    d = 1 << n
    c = rng.normal(size=(num_kraus, d)) + 1j * rng.normal(size=(num_kraus, d))
    c /= np.linalg.norm(c, axis=0, keepdims=True)
    ops = []
    for l in range(num_kraus):
        f = funcs[rng.integers(len(funcs))]
        k = np.zeros((d, d), dtype=complex)
        for x in range(d):
            k[f.table[x], x] = c[l, x]
        ops.append(k)
    return KrausChannel(ops)
