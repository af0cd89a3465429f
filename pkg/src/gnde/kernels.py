"""Hot numerical kernels: the layered spectral-filter forward map.

Two interchangeable backends compute identical arithmetic:

* a numba ``@njit`` path (default when numba is importable), and
* a pure-numpy fallback, selected by setting ``GNDE_BACKEND=numpy``.

The inner shift-matrix reduction uses Neumaier compensated summation per
output element, which makes the reduced value independent of node order
(up to double-rounding coincidences that are unobservably rare in
double precision).  Node relabeling then permutes forward outputs
bit-exactly, which is what the equivariance tests assert.  Channel and
tap accumulation is plain fixed-order addition: those indices are not
permuted, and the (g ascending, then k ascending) order is part of the
reproducibility contract.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import InvalidParameterError

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but the
    HAS_NUMBA = False  # numpy path keeps the package importable without it

BACKEND_ENV = "GNDE_BACKEND"

ACT_IDENTITY = 0
ACT_RELU = 1
ACT_LEAKY_RELU = 2
ACT_TANH = 3


def active_backend() -> str:
    """Resolve the backend from the environment, per call site."""
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice == "":
        return "numba" if HAS_NUMBA else "numpy"
    if choice not in ("numba", "numpy"):
        raise InvalidParameterError(
            f"{BACKEND_ENV} must be 'numba' or 'numpy', not {choice!r}"
        )
    if choice == "numba" and not HAS_NUMBA:
        raise InvalidParameterError("numba backend requested but numba is not installed")
    return choice


def _matvec_np(S, X):
    n, F = X.shape
    s = np.zeros((n, F))
    c = np.zeros((n, F))
    for j in range(n):
        v = S[:, j : j + 1] * X[j][None, :]
        t = s + v
        big = np.abs(s) >= np.abs(v)
        c = c + np.where(big, (s - t) + v, (v - t) + s)
        s = t
    return s + c


def _forward_np(S, X, coeffs, act_id, slope):
    L, F, _, K = coeffs.shape
    cur = X.copy()
    for layer in range(L):
        powers = [cur]
        for _ in range(1, K):
            powers.append(_matvec_np(S, powers[-1]))
        z = np.zeros_like(cur)
        for f in range(F):
            for g in range(F):
                for k in range(K):
                    z[:, f] += coeffs[layer, f, g, k] * powers[k][:, g]
        if act_id == ACT_RELU:
            cur = np.where(z > 0.0, z, 0.0)
        elif act_id == ACT_LEAKY_RELU:
            cur = np.where(z > 0.0, z, slope * z)
        elif act_id == ACT_TANH:
            cur = np.tanh(z)
        else:
            cur = z
    return cur


if HAS_NUMBA:

    @njit(cache=True, nogil=True)
    def _matvec_nb(S, X):  # pragma: no cover - exercised via dispatch
        n, F = X.shape
        out = np.empty((n, F))
        for i in range(n):
            for f in range(F):
                s = 0.0
                c = 0.0
                for j in range(n):
                    v = S[i, j] * X[j, f]
                    t = s + v
                    if abs(s) >= abs(v):
                        c += (s - t) + v
                    else:
                        c += (v - t) + s
                    s = t
                out[i, f] = s + c
        return out

    @njit(cache=True, nogil=True)
    def _forward_nb(S, X, coeffs, act_id, slope):  # pragma: no cover
        L = coeffs.shape[0]
        F = coeffs.shape[1]
        K = coeffs.shape[3]
        n = S.shape[0]
        cur = X.copy()
        powers = np.empty((K, n, F))
        for layer in range(L):
            powers[0] = cur
            for k in range(1, K):
                nxt = _matvec_nb(S, powers[k - 1])
                powers[k] = nxt
            z = np.zeros((n, F))
            for f in range(F):
                for g in range(F):
                    for k in range(K):
                        h = coeffs[layer, f, g, k]
                        for i in range(n):
                            z[i, f] += h * powers[k, i, g]
            for i in range(n):
                for f in range(F):
                    x = z[i, f]
                    if act_id == ACT_RELU:
                        z[i, f] = x if x > 0.0 else 0.0
                    elif act_id == ACT_LEAKY_RELU:
                        z[i, f] = x if x > 0.0 else slope * x
                    elif act_id == ACT_TANH:
                        z[i, f] = math.tanh(x)
            cur = z
        return cur


def shift_matvec(S, X) -> np.ndarray:
    """S @ X with order-independent compensated reduction."""
    S = np.ascontiguousarray(S, dtype=np.float64)
    X = np.ascontiguousarray(X, dtype=np.float64)
    if active_backend() == "numba":
        return _matvec_nb(S, X)
    return _matvec_np(S, X)


def layer_stack_forward(S, X, coeffs, act_id: int, slope: float = 0.0) -> np.ndarray:
    """Full L-layer filter-bank forward pass on raw arrays.

    ``coeffs`` has shape (L, F, F, K); tap k applies S^k with S^0 = I,
    powers built by repeated shift application (S^k is never materialized).
    """
    S = np.ascontiguousarray(S, dtype=np.float64)
    X = np.ascontiguousarray(X, dtype=np.float64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    if active_backend() == "numba":
        return _forward_nb(S, X, coeffs, act_id, float(slope))
    return _forward_np(S, X, coeffs, act_id, float(slope))
