"""Membership tests and certificates for the HDP, SHP, SIO and DIO operation classes.

HDP and DIO are decided exactly from the Choi matrix. SIO and SHP are
decided only for a given decomposition; non-membership is certified from the
operator span of the channel's Kraus operators, which is the same for every
decomposition. If a channel lies in a class whose Kraus operators must each
fit one support pattern, every such operator lies in the span and in some
pattern subspace, so the pattern intersections must together span the whole
Kraus span. When they do not, membership is ruled out.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    KrausChannel,
    apply,
    apply_to_operator,
    cd_channel,
    channel_distance,
    choi_of,
    compose,
)
from .core import DEFAULT_TOL, hamming_distance_matrix, l1_coherence, pure
from .hamming import MAX_ENUMERATION_QUBITS, enumerate_hdf, hdf_extensions

# n <= this uses all (2^n)! permutations as SIO support patterns
SIO_SPAN_MAX_QUBITS = 2
RANK_TOL = 1e-9


class Verdict(str, enum.Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    MEMBER_BY_DECOMPOSITION = "member_by_decomposition"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ClassVerdict:
    verdict: Verdict
    certificate: dict = field(default_factory=dict)

    @property
    def is_member(self) -> bool:
        return self.verdict in (Verdict.MEMBER, Verdict.MEMBER_BY_DECOMPOSITION)

    @property
    def is_non_member(self) -> bool:
        return self.verdict is Verdict.NON_MEMBER

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "certificate": self.certificate}


def _cplx(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _hdp_violations(ch: KrausChannel) -> tuple[np.ndarray, np.ndarray]:
    d = ch.dim
    h = hamming_distance_matrix(ch.n_qubits)
    idx = np.arange(d * d)
    ins, outs = idx // d, idx % d
    mask = h[np.ix_(ins, ins)] != h[np.ix_(outs, outs)]
    return choi_of(ch), mask


def _largest_entry(values: np.ndarray, d: int):
    """First (row-major) entry of maximal modulus, as ``(i, j, x, y)``."""
    mod = np.abs(values)
    top = mod.max()
    flat = int(np.argmax(mod.reshape(-1) >= top - 1e-12))
    row, col = divmod(flat, d * d)
    x, i = divmod(row, d)
    y, j = divmod(col, d)
    return (i, j, x, y), complex(values[row, col])


def is_hdp(ch: KrausChannel, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Exact HDP test: every Choi entry with ``h(i, j) != h(x, y)`` must vanish.

    A ``non_member`` certificate names the largest violating entry
    ``<i|E(|x><y|)|j>`` as ``entry = [i, j, x, y]``.
    """
    choi, mask = _hdp_violations(ch)
    bad = np.where(mask, choi, 0)
    worst = float(np.abs(bad).max()) if bad.size else 0.0
    if worst <= tol:
        return ClassVerdict(Verdict.MEMBER, {"max_violation": worst})
    entry, value = _largest_entry(bad, ch.dim)
    return ClassVerdict(
        Verdict.NON_MEMBER, {"entry": list(entry), "value": _cplx(value), "modulus": abs(value)}
    )


def recheck_hdp_certificate(ch: KrausChannel, certificate: dict, tol: float = DEFAULT_TOL) -> bool:
    """Recompute the certified entry by applying the channel to ``|x><y|``."""
    i, j, x, y = certificate["entry"]
    d = ch.dim
    op = np.zeros((d, d), dtype=complex)
    op[x, y] = 1
    value = apply_to_operator(ch, op)[i, j]
    h = hamming_distance_matrix(ch.n_qubits)
    return h[i, j] != h[x, y] and abs(value) > tol


def is_dio(ch: KrausChannel, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Exact DIO test: the channel commutes with complete dephasing."""
    delta = cd_channel(ch.n_qubits)
    left, right = compose(delta, ch), compose(ch, delta)
    dist = channel_distance(left, right)
    if dist <= tol:
        return ClassVerdict(Verdict.MEMBER, {"distance": dist})
    entry, value = _largest_entry(choi_of(left) - choi_of(right), ch.dim)
    return ClassVerdict(
        Verdict.NON_MEMBER, {"distance": dist, "entry": list(entry), "difference": _cplx(value)}
    )


def _support_map(k: np.ndarray, tol: float):
    """Column -> row map of a matrix with at most one non-zero per row and column, else ``None``."""
    nz = np.abs(k) > tol
    if np.any(nz.sum(axis=0) > 1) or np.any(nz.sum(axis=1) > 1):
        return None
    rows, cols = np.nonzero(nz)
    return {int(c): int(r) for r, c in zip(rows, cols)}


def is_sio_decomposition(ch: KrausChannel, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Checks whether every given Kraus operator has at most one non-zero entry per row and column."""
    maps = []
    for l, k in enumerate(ch.kraus):
        m = _support_map(k, tol)
        if m is None:
            return ClassVerdict(
                Verdict.INCONCLUSIVE,
                {"reason": "Kraus operator is not a generalized permutation", "kraus_index": l},
            )
        maps.append({str(x): y for x, y in sorted(m.items())})
    return ClassVerdict(Verdict.MEMBER_BY_DECOMPOSITION, {"support_maps": maps})


def is_shp_decomposition(ch: KrausChannel, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Checks whether every given Kraus operator is a generalized permutation along an HDF.

    Operators with empty columns are accepted when their partial support map
    extends to a Hamming-distance-preserving bijection.
    """
    n = ch.n_qubits
    if n > MAX_ENUMERATION_QUBITS:
        return ClassVerdict(Verdict.INCONCLUSIVE, {"reason": f"n > {MAX_ENUMERATION_QUBITS} not supported"})
    colsum = np.real(sum(np.abs(k) ** 2 for k in ch.kraus).sum(axis=0))
    if np.abs(colsum - 1).max() > tol:
        return ClassVerdict(Verdict.INCONCLUSIVE, {"reason": "column weights do not sum to one"})
    tables = []
    for l, k in enumerate(ch.kraus):
        m = _support_map(k, tol)
        ext = [] if m is None else hdf_extensions(m, n)
        if not ext:
            return ClassVerdict(
                Verdict.INCONCLUSIVE,
                {"reason": "Kraus operator is not supported on a Hamming-distance-preserving map",
                 "kraus_index": l},
            )
        tables.append(list(ext[0].table))
    return ClassVerdict(Verdict.MEMBER_BY_DECOMPOSITION, {"hdf_tables": tables})


# --- span certificates --------------------------------------------------------------


def _orthonormal_span(vectors: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    if vectors.shape[1] == 0:
        return vectors
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    return u[:, s > tol * max(1.0, s[0])]


def kraus_span_basis(ch: KrausChannel, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns, Choi vectorization) of the span of all Kraus decompositions."""
    w, v = np.linalg.eigh(choi_of(ch))
    return v[:, w > tol]


def _given_span_basis(ch: KrausChannel, tol: float = RANK_TOL) -> np.ndarray:
    return _orthonormal_span(np.stack([k.T.reshape(-1) for k in ch.kraus], axis=1), tol)


def _pattern_cover(basis: np.ndarray, patterns, d: int, tol: float = RANK_TOL):
    """Intersection dimension with each support pattern, and the rank of their sum."""
    dims, pieces = [], []
    for table in patterns:
        allowed = np.zeros(d * d, dtype=bool)
        allowed[np.arange(d) * d + np.asarray(table)] = True
        outside = basis[~allowed]
        if outside.shape[0] == 0:
            null = np.eye(basis.shape[1])
        else:
            _, s, vh = np.linalg.svd(outside)
            rank = int(np.sum(s > tol))
            null = vh[rank:].conj().T
        dims.append(int(null.shape[1]))
        if null.shape[1]:
            pieces.append(basis @ null)
    covered = _orthonormal_span(np.hstack(pieces), tol).shape[1] if pieces else 0
    return dims, covered


def _span_certifier(ch, patterns, labels, tol) -> ClassVerdict:
    basis = kraus_span_basis(ch, tol)
    dims, covered = _pattern_cover(basis, patterns, ch.dim, tol)
    cert = {
        "span_dim": int(basis.shape[1]),
        "covered_dim": int(covered),
        "pattern_dims": {label: k for label, k in zip(labels, dims) if k},
        "patterns_checked": len(dims),
    }
    if covered < basis.shape[1]:
        return ClassVerdict(Verdict.NON_MEMBER, cert)
    return ClassVerdict(Verdict.INCONCLUSIVE, cert)


def _hdf_patterns(n: int):
    funcs = enumerate_hdf(n)
    return [f.table for f in funcs], [",".join(map(str, f.table)) for f in funcs]


def _perm_patterns(n: int):
    perms = list(itertools.permutations(range(1 << n)))
    return perms, [",".join(map(str, p)) for p in perms]


def shp_nonmembership_certifier(ch: KrausChannel, tol: float = RANK_TOL) -> ClassVerdict:
    """Certifies ``ch`` outside SHP when HDF-pattern operators cannot span its Kraus space."""
    if ch.n_qubits > MAX_ENUMERATION_QUBITS:
        return ClassVerdict(Verdict.INCONCLUSIVE, {"reason": f"n > {MAX_ENUMERATION_QUBITS} not supported"})
    patterns, labels = _hdf_patterns(ch.n_qubits)
    return _span_certifier(ch, patterns, labels, tol)


def sio_nonmembership_by_span(ch: KrausChannel, tol: float = RANK_TOL) -> ClassVerdict:
    """Same span argument with every basis permutation as a pattern (small ``n`` only)."""
    if ch.n_qubits > SIO_SPAN_MAX_QUBITS:
        return ClassVerdict(
            Verdict.INCONCLUSIVE, {"reason": f"permutation patterns limited to n <= {SIO_SPAN_MAX_QUBITS}"}
        )
    patterns, labels = _perm_patterns(ch.n_qubits)
    return _span_certifier(ch, patterns, labels, tol)


def recheck_span_certificate(ch: KrausChannel, certificate: dict, kind: str, tol: float = RANK_TOL) -> bool:
    """Recompute a span certificate from the given Kraus list instead of the Choi eigenvectors."""
    if kind == "shp":
        patterns, _ = _hdf_patterns(ch.n_qubits)
    elif kind == "sio":
        patterns, _ = _perm_patterns(ch.n_qubits)
    else:
        raise ValueError("kind must be 'shp' or 'sio'")
    basis = _given_span_basis(ch, tol)
    _, covered = _pattern_cover(basis, patterns, ch.dim, tol)
    return (
        basis.shape[1] == certificate["span_dim"]
        and covered == certificate["covered_dim"]
        and covered < basis.shape[1]
    )


def sio_nonmembership_by_l1(ch: KrausChannel, rho, tol: float = DEFAULT_TOL) -> ClassVerdict:
    """Certifies ``ch`` outside SIO when it increases the l1 coherence of ``rho``."""
    before = l1_coherence(rho)
    after = l1_coherence(apply(ch, rho))
    cert = {"l1_in": before, "l1_out": after}
    if after > before + tol:
        return ClassVerdict(Verdict.NON_MEMBER, cert)
    return ClassVerdict(Verdict.INCONCLUSIVE, cert)


def single_qubit_shp_form(ch: KrausChannel) -> KrausChannel:
    """Split each single-qubit Kraus operator into its diagonal and anti-diagonal parts.

    For an HDP channel the result is the same channel written with
    generalized-permutation Kraus operators only.
    """
    if ch.dim != 2:
        raise ValueError("single-qubit channel required")
    ops = []
    for k in ch.kraus:
        ops.append(np.diag(np.diag(k)))
        ops.append(np.array([[0, k[0, 1]], [k[1, 0], 0]]))
    return KrausChannel([k for k in ops if np.any(k)])


def _l1_probes(d: int) -> list[np.ndarray]:
    probes = []
    for x, y in itertools.combinations(range(d), 2):
        v = np.zeros(d, dtype=complex)
        v[x] = v[y] = 1 / math.sqrt(2)
        probes.append(pure(v))
    probes.append(np.full((d, d), 1 / d, dtype=complex))
    return probes


def hierarchy_report(ch: KrausChannel, tol: float = DEFAULT_TOL) -> dict:
    """Run every classifier and name the region of the SHP/HDP/SIO/DIO diagram the channel provably occupies."""
    n = ch.n_qubits
    hdp = is_hdp(ch, tol)
    dio = is_dio(ch, tol)
    sio_dec = is_sio_decomposition(ch, tol)
    shp_dec = is_shp_decomposition(ch, tol)
    checks = {"hdp": hdp, "dio": dio, "sio_decomposition": sio_dec, "shp_decomposition": shp_dec}

    in_hdp = hdp.is_member
    in_sio = True if sio_dec.is_member else None
    in_shp = True if shp_dec.is_member else None

    if n == 1 and in_hdp and in_shp is None:
        # single qubit: HDP, SHP, SIO and DIO coincide
        form = single_qubit_shp_form(ch)
        checks["shp_single_qubit_form"] = is_shp_decomposition(form, tol)
        in_shp = in_sio = checks["shp_single_qubit_form"].is_member or None

    if in_sio is None:
        for rho in _l1_probes(ch.dim):
            v = sio_nonmembership_by_l1(ch, rho, tol)
            if v.is_non_member:
                v.certificate["probe"] = [[_cplx(z) for z in row] for row in rho]
                checks["sio_l1"] = v
                in_sio = False
                break
    if in_sio is None:
        checks["sio_span"] = sio_nonmembership_by_span(ch)
        if checks["sio_span"].is_non_member:
            in_sio = False
    if not dio.is_member:
        in_sio = False
    if in_shp is None:
        if not in_hdp or in_sio is False:
            in_shp = False
        else:
            checks["shp_span"] = shp_nonmembership_certifier(ch)
            if checks["shp_span"].is_non_member:
                in_shp = False

    return {
        "n_qubits": n,
        "region": _region(dio.is_member, in_hdp, in_sio, in_shp),
        "membership": {"DIO": dio.is_member, "HDP": in_hdp, "SIO": in_sio, "SHP": in_shp},
        "checks": {k: v.to_dict() for k, v in checks.items()},
    }


def _region(dio, hdp, sio, shp) -> str:
    if not dio:
        return "outside DIO"
    if shp:
        return "SHP"
    if hdp and sio is True:
        return "(SIO & HDP) - SHP" if shp is False else "SIO & HDP (SHP undetermined)"
    if hdp:
        return "HDP - SIO" if sio is False else "HDP (SIO undetermined)"
    if sio is True:
        return "SIO - HDP"
    if sio is False:
        return "DIO - (SIO | HDP)"
    return "DIO - HDP (SIO undetermined)"
