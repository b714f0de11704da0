"""JSON wire formats for channels, states and verdicts.

Complex numbers are ``[re, im]`` pairs; matrices are nested row lists.
Channel: ``{"n": int, "kraus": [matrix, ...]}``.
State: ``{"n": int, "rho": matrix}`` or ``{"n": int, "psi": [[re, im], ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import KrausChannel, choi_of, validate_cptp
from .core import DEFAULT_TOL, check_density, pure


class FormatError(ValueError):
    """Malformed or unphysical JSON payload."""


def complex_to_json(a) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [complex_to_json(v) for v in a]


def complex_from_json(obj, ndim: int) -> np.ndarray:
    """Parse nested ``[re, im]`` pairs into a complex array with ``ndim`` dimensions."""
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"expected nested [re, im] pairs: {exc}") from None
    if arr.ndim != ndim + 1 or arr.shape[-1] != 2:
        raise FormatError(f"expected a {ndim}-dimensional array of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FormatError("non-finite number in payload")
    return arr[..., 0] + 1j * arr[..., 1]


def _qubits(obj) -> int:
    n = obj.get("n") if isinstance(obj, dict) else None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError('field "n" must be a positive integer')
    return n


def channel_to_json(ch: KrausChannel) -> dict:
    return {"n": ch.n_qubits, "kraus": [complex_to_json(k) for k in ch.kraus]}


def channel_from_json(obj, tol: float = DEFAULT_TOL) -> KrausChannel:
    n = _qubits(obj)
    ops = obj.get("kraus")
    if not isinstance(ops, list) or not ops:
        raise FormatError('field "kraus" must be a non-empty list of matrices')
    mats = [complex_from_json(k, 2) for k in ops]
    d = 1 << n
    if any(m.shape != (d, d) for m in mats):
        raise FormatError(f"every Kraus operator must be {d} x {d} for n = {n}")
    ch = KrausChannel(mats)
    if not validate_cptp(ch, tol):
        raise FormatError("Kraus operators do not form a CPTP map")
    return ch


def choi_to_json(ch: KrausChannel) -> dict:
    return {"n": ch.n_qubits, "choi": complex_to_json(choi_of(ch))}


def state_to_json(rho) -> dict:
    rho = np.asarray(rho, dtype=complex)
    return {"n": rho.shape[0].bit_length() - 1, "rho": complex_to_json(rho)}


def state_from_json(obj, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Density matrix from a ``rho`` or ``psi`` payload, validated."""
    n = _qubits(obj)
    d = 1 << n
    if "rho" in obj:
        rho = complex_from_json(obj["rho"], 2)
        if rho.shape != (d, d):
            raise FormatError(f"rho must be {d} x {d} for n = {n}")
    elif "psi" in obj:
        psi = complex_from_json(obj["psi"], 1)
        if psi.shape != (d,):
            raise FormatError(f"psi must have {d} amplitudes for n = {n}")
        try:
            rho = pure(psi, tol)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    else:
        raise FormatError('state needs a "rho" or "psi" field')
    try:
        return check_density(rho, tol)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def vector_from_json(obj, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Normalized amplitude vector from a ``psi`` payload."""
    n = _qubits(obj)
    if "psi" not in obj:
        raise FormatError('pure state needs a "psi" field')
    psi = complex_from_json(obj["psi"], 1)
    if psi.shape != (1 << n,):
        raise FormatError(f"psi must have {1 << n} amplitudes for n = {n}")
    if abs(np.linalg.norm(psi) - 1) > tol:
        raise FormatError("psi is not normalized")
    return psi


def read_json(path) -> dict:
    try:
        with open(Path(path), encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from None


def load_channel(path, tol: float = DEFAULT_TOL) -> KrausChannel:
    return channel_from_json(read_json(path), tol)


def load_state(path, tol: float = DEFAULT_TOL) -> np.ndarray:
    return state_from_json(read_json(path), tol)


def dumps(obj) -> str:
    """Stable JSON text (sorted keys, fixed indentation)."""
    return json.dumps(obj, indent=2, sort_keys=True, default=_default)


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, (complex, np.complexfloating)):
        return [float(o.real), float(o.imag)]
    if isinstance(o, np.ndarray):
        return o.tolist() if not np.iscomplexobj(o) else complex_to_json(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")
