"""Classical and quantum Fisher information for dephasing and phase estimation."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .channels import pd_channel_apply, pd_derivative
from .core import DEFAULT_TOL, check_density, check_hermitian, check_matrix, herm_eigen, n_qubits_of

# summands of the spectral formulas with p_i + p_k below this are dropped
SPECTRAL_CUTOFF = 1e-12


def _spectral_qfi(w, v, drho, cutoff: float = SPECTRAL_CUTOFF) -> float:
    """QFI from an eigensystem ``(w, v)`` of the state and the state derivative."""
    m = v.conj().T @ drho @ v
    s = w[:, None] + w[None, :]
    keep = s > cutoff
    return float(2 * np.sum(np.abs(m[keep]) ** 2 / s[keep]))


def qfi(rho, drho, tol: float = DEFAULT_TOL, cutoff: float = SPECTRAL_CUTOFF) -> float:
    """Quantum Fisher information of a one-parameter family at one point.

    Uses ``F = 2 sum_{i,k} |<psi_i|d rho|psi_k>|^2 / (p_i + p_k)`` over the
    eigensystem of ``rho``, dropping pairs with ``p_i + p_k <= cutoff``.

    Args:
        rho: State at the parameter value.
        drho: Derivative of the state; Hermitian and traceless within ``tol``.
    """
    rho = check_density(rho, tol)
    drho = check_hermitian(drho, tol, "derivative")
    if drho.shape != rho.shape:
        raise ValueError("state and derivative shapes differ")
    if abs(np.trace(drho)) > tol:
        raise ValueError("derivative of a normalized family must be traceless")
    w, v = herm_eigen(rho)
    return _spectral_qfi(w, v, drho, cutoff)


def dephasing_qfi(rho, theta: float, tol: float = DEFAULT_TOL) -> float:
    """QFI about the phase-damping strength for probe ``rho`` at ``theta > 0``."""
    if not theta > 0:
        raise ValueError("dephasing QFI is evaluated at theta > 0 only")
    rho = check_density(rho, tol)
    n = n_qubits_of(rho.shape[0])
    return qfi(pd_channel_apply(n, theta, rho), pd_derivative(n, theta, rho), tol)


def pe_qfi(rho, hamiltonian, tol: float = DEFAULT_TOL, cutoff: float = SPECTRAL_CUTOFF) -> float:
    """Phase-estimation QFI ``2 sum (p_i - p_k)^2 / (p_i + p_k) |<psi_i|H|psi_k>|^2``."""
    rho = check_density(rho, tol)
    h = check_hermitian(hamiltonian, tol, "Hamiltonian")
    if h.shape != rho.shape:
        raise ValueError("state and Hamiltonian dimensions differ")
    w, v = herm_eigen(rho)
    m = v.conj().T @ h @ v
    s = w[:, None] + w[None, :]
    keep = s > cutoff
    diff = (w[:, None] - w[None, :]) ** 2
    return float(2 * np.sum(diff[keep] / s[keep] * np.abs(m[keep]) ** 2))


def check_povm(elements: Sequence, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    elements = [check_hermitian(m, tol, "POVM element") for m in elements]
    if not elements:
        raise ValueError("empty POVM")
    d = elements[0].shape[0]
    for m in elements:
        if m.shape != (d, d):
            raise ValueError("POVM elements differ in shape")
        if np.linalg.eigvalsh((m + m.conj().T) / 2)[0] < -tol:
            raise ValueError("POVM element is not positive semidefinite")
    if np.abs(sum(elements) - np.eye(d)).max() > tol:
        raise ValueError("POVM elements do not sum to the identity")
    return elements


def classical_fi(povm: Sequence, rho, drho, tol: float = DEFAULT_TOL, p_tol: float = 1e-12) -> float:
    """Fisher information ``sum_x (d p_x)^2 / p_x`` of the outcome distribution of a POVM.

    Outcomes with ``p_x <= p_tol`` and ``|d p_x| <= p_tol`` are skipped; a
    vanishing probability with non-vanishing derivative is a singular point
    and raises ``ValueError``.
    """
    povm = check_povm(povm, tol)
    rho = check_density(rho, tol)
    drho = check_matrix(drho, "derivative")
    total = 0.0
    for m in povm:
        p = float(np.real(np.trace(rho @ m)))
        dp = float(np.real(np.trace(drho @ m)))
        if p <= p_tol:
            if abs(dp) > p_tol:
                raise ValueError("singular point: zero-probability outcome with non-zero derivative")
            continue
        total += dp * dp / p
    return total


def witness_povm(x: int, y: int, beta: float, n: int) -> list[np.ndarray]:
    """Three-outcome POVM detecting the coherence ``rho[x, y] = |rho[x, y]| exp(-i beta)``."""
    d = 1 << n
    if x == y:
        raise ValueError("witness POVM needs two distinct basis states")
    if not (0 <= x < d and 0 <= y < d):
        raise ValueError("basis index out of range")
    ph = np.exp(-1j * beta)
    m1 = np.zeros((d, d), dtype=complex)
    m1[x, x] = m1[y, y] = 0.5
    m2 = m1.copy()
    m1[x, y], m1[y, x] = ph / 2, ph.conjugate() / 2
    m2[x, y], m2[y, x] = -ph / 2, -ph.conjugate() / 2
    m3 = np.eye(d, dtype=complex)
    m3[x, x] = m3[y, y] = 0
    return [m1, m2, m3]


def witness_phase(rho, x: int, y: int) -> float:
    """The ``beta`` with ``rho[x, y] = |rho[x, y]| exp(-i beta)``."""
    return float(-np.angle(np.asarray(rho)[x, y]))


def uhlmann_fidelity(rho, sigma, clip: float = 1e-12) -> float:
    """Root fidelity ``tr sqrt(sqrt(rho) sigma sqrt(rho))``.

    Eigenvalues below ``clip`` (relative to the largest) are treated as zero so
    that rank-deficient states do not pick up square-root noise.
    """

    def _sqrt(a):
        w, v = np.linalg.eigh((a + a.conj().T) / 2)
        w = np.where(w > clip * max(w.max(), 1e-300), w, 0.0)
        return (v * np.sqrt(w)) @ v.conj().T

    s = _sqrt(np.asarray(rho, dtype=complex))
    inner = s @ np.asarray(sigma, dtype=complex) @ s
    w = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    w = np.where(w > clip * max(w.max(), 1e-300), w, 0.0)
    return float(np.sum(np.sqrt(w)))


def qfi_fidelity_oracle(family: Callable[[float], np.ndarray], theta: float, dtheta: float = 1e-4) -> float:
    """QFI estimated from the fidelity between neighbouring states of a family.

    Compares ``family(theta - dtheta)`` with ``family(theta + dtheta)``:
    ``F ~ 8 (1 - fid) / (2 dtheta)^2``. Intended only as an independent check
    of :func:`qfi`.
    """
    lo = check_density(family(theta - dtheta))
    hi = check_density(family(theta + dtheta))
    return 8 * (1 - uhlmann_fidelity(lo, hi)) / (2 * dtheta) ** 2


def pd_family(rho) -> Callable[[float], np.ndarray]:
    rho = check_density(rho)
    n = n_qubits_of(rho.shape[0])
    return lambda theta: pd_channel_apply(n, theta, rho)


def pe_family(rho, hamiltonian) -> Callable[[float], np.ndarray]:
    """``t -> exp(-iHt) rho exp(iHt)`` for a diagonal Hamiltonian."""
    rho = check_density(rho)
    energies = np.real(np.diag(np.asarray(hamiltonian)))

    def family(t):
        ph = np.exp(-1j * energies * t)
        return ph[:, None] * rho * ph.conj()[None, :]

    return family


def single_qubit_dephasing_qfi(r: float, z: float, theta: float) -> float:
    """Closed form for the Bloch vector ``(r, 0, z)``."""
    e = math.exp(-2 * theta)
    return r * r * e * (1 - z * z) / (1 - z * z - r * r * e)
