"""Dense matrix helpers and single/multi-qubit state representations.

Matrices are plain ``numpy`` complex arrays. Basis index ``x`` encodes an
n-bit string with bit ``m`` carried by ``2**m``; ``|3>`` is ``|11>`` on two
qubits.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


def popcount(x: int) -> int:
    return bin(int(x)).count("1")


def n_qubits_of(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension; raises if not a power of two."""
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def check_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate a square, finite matrix and return it as a complex array."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def check_hermitian(a, tol: float = DEFAULT_TOL, name: str = "matrix") -> np.ndarray:
    a = check_matrix(a, name)
    err = np.abs(a - a.conj().T).max() if a.size else 0.0
    if err > tol:
        raise ValueError(f"{name} is not Hermitian (max deviation {err:.3e})")
    return a


def check_density(rho, tol: float = DEFAULT_TOL, name: str = "rho") -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD and unit trace within ``tol``.

    The returned array is the Hermitian part of the input, so downstream
    eigen-solvers see an exactly Hermitian matrix.
    """
    rho = check_hermitian(rho, tol, name)
    n_qubits_of(rho.shape[0])
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    rho = (rho + rho.conj().T) / 2
    lam = np.linalg.eigvalsh(rho)[0]
    if lam < -tol:
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {lam:.3e})")
    return rho


def kron(*ops) -> np.ndarray:
    """Kronecker product of any number of matrices (left factor is most significant)."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def herm_eigen(a, tol: float = DEFAULT_TOL, max_sweeps: int = 64):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Args:
        a: Hermitian matrix (deviation from Hermiticity must be below ``tol``).
        tol: Hermiticity tolerance.
        max_sweeps: Upper bound on full sweeps over the off-diagonal pairs.

    Returns:
        ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and the
        eigenvectors as columns of a unitary matrix, so that
        ``a = V @ diag(w) @ V.conj().T``.
    """
    a = check_hermitian(a, tol)
    A = (a + a.conj().T) / 2
    d = A.shape[0]
    V = np.eye(d, dtype=complex)
    scale = np.linalg.norm(A)
    if d < 2 or scale == 0.0:
        return np.real(np.diag(A)).copy(), V
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= eps * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                mod = abs(apq)
                if mod <= eps * eps * scale:
                    continue
                phase = apq / mod
                tau = (A[q, q].real - A[p, p].real) / (2.0 * mod)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # diag(1, conj(phase)) makes A[p, q] real, then a real rotation zeroes it
                G = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ G
                A[idx, :] = G.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                V[:, idx] = V[:, idx] @ G
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def psd_sqrt(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Principal square root of a PSD matrix; raises if an eigenvalue is below ``-tol``."""
    w, v = herm_eigen(a, tol)
    if w.size and w[0] < -tol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


class BlochVector(NamedTuple):
    x: float
    y: float
    z: float

    @classmethod
    def from_polar(cls, r: float, phi: float, z: float) -> "BlochVector":
        return cls(r * math.cos(phi), r * math.sin(phi), z)

    @property
    def r(self) -> float:
        return math.hypot(self.x, self.y)

    @property
    def phi(self) -> float:
        return math.atan2(self.y, self.x)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x**2 + self.y**2 + self.z**2)

    def check(self, tol: float = DEFAULT_TOL) -> "BlochVector":
        if self.norm > 1 + tol:
            raise ValueError(f"Bloch vector {tuple(self)} lies outside the Bloch ball")
        return self


def density_from_bloch(b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Single-qubit density matrix ``[[1+z, r e^{-i phi}], [r e^{i phi}, 1-z]] / 2``."""
    b = BlochVector(*map(float, b)).check(tol)
    off = complex(b.x, -b.y)
    return 0.5 * np.array([[1 + b.z, off], [off.conjugate(), 1 - b.z]], dtype=complex)


def bloch_from_density(rho, tol: float = DEFAULT_TOL) -> BlochVector:
    rho = check_density(rho, tol)
    if rho.shape != (2, 2):
        raise ValueError("Bloch representation requires a single-qubit state")
    off = 2 * rho[0, 1]
    return BlochVector(off.real, -off.imag, (rho[0, 0] - rho[1, 1]).real)


def hamming_distance_matrix(n: int) -> np.ndarray:
    """``D[x, y] = h(x, y)`` for all n-bit strings."""
    idx = np.arange(1 << n)
    xor = idx[:, None] ^ idx[None, :]
    return np.vectorize(popcount, otypes=[int])(xor) if n else np.zeros((1, 1), int)


def hamming_mode(rho, h: int) -> np.ndarray:
    """The entries of ``rho`` whose row and column indices sit at Hamming distance ``h``."""
    rho = check_matrix(rho, "rho")
    n = n_qubits_of(rho.shape[0])
    if not 0 <= h <= n:
        raise ValueError(f"Hamming mode {h} out of range 0..{n}")
    return np.where(hamming_distance_matrix(n) == h, rho, 0)


def uniform_superposition_vector(n: int, phases: Sequence[float] | None = None) -> np.ndarray:
    d = 1 << n
    eta = np.zeros(d) if phases is None else np.asarray(phases, dtype=float)
    if eta.shape != (d,):
        raise ValueError(f"expected {d} phases, got {eta.size}")
    return np.exp(-1j * eta) / math.sqrt(d)


def uniform_superposition(n: int, phases: Sequence[float] | None = None) -> np.ndarray:
    """Pure state with amplitudes ``exp(-i eta_x) / sqrt(2**n)``."""
    psi = uniform_superposition_vector(n, phases)
    return np.outer(psi, psi.conj())


def pure(psi, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Projector onto a normalized state vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1) > tol:
        raise ValueError(f"state vector has norm {float(nrm):.12g}, expected 1")
    return np.outer(psi, psi.conj())


def basis_state(n: int, x: int) -> np.ndarray:
    v = np.zeros(1 << n, dtype=complex)
    v[x] = 1
    return v


def l1_coherence(rho) -> float:
    """Sum of the moduli of the off-diagonal entries."""
    rho = check_matrix(rho, "rho")
    a = np.abs(rho)
    return float(a.sum() - np.trace(a))


def hamiltonian(n: int, epsilon: float = 1.0) -> np.ndarray:
    """Non-interacting n-qubit Hamiltonian: ``epsilon`` times the excitation count of each basis state."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return np.diag([popcount(x) * epsilon for x in range(1 << n)]).astype(complex)
