"""Spectral GNN forward map with time-varying filter banks.

A bank holds coefficients h[l, f, g, k] applying tap S^k from input
channel g to output channel f at layer l.  The time law is either
``constant`` or ``fourier`` (a trigonometric polynomial in t over a fixed
horizon).  ``h_sup`` exposes both a grid estimate and a certified upper
bound of sup_{t, indices} |h|; every theoretical constant downstream uses
the certified value so the checked inequalities stay valid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatchError, InvalidParameterError
from .sampling import FeatureMatrix

CONSTANT = "constant"
FOURIER = "fourier"

H_SUP_GRID = 10_000

_ACT_IDS = {
    "identity": kernels.ACT_IDENTITY,
    "relu": kernels.ACT_RELU,
    "leaky_relu": kernels.ACT_LEAKY_RELU,
    "tanh": kernels.ACT_TANH,
}


@dataclass(frozen=True)
class Activation:
    """Normalized-Lipschitz activation: |rho(x)-rho(y)| <= |x-y|, rho(0)=0."""

    kind: str = "tanh"
    slope: float = 0.01

    def __post_init__(self):
        if self.kind not in _ACT_IDS:
            raise InvalidParameterError(
                f"unknown activation {self.kind!r}; choose from {sorted(_ACT_IDS)}"
            )
        if self.kind == "leaky_relu" and not (0.0 <= self.slope <= 1.0):
            raise InvalidParameterError("leaky_relu slope must be in [0, 1]")

    @property
    def act_id(self) -> int:
        return _ACT_IDS[self.kind]

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "relu":
            return np.where(x > 0.0, x, 0.0)
        if self.kind == "leaky_relu":
            return np.where(x > 0.0, x, self.slope * x)
        if self.kind == "tanh":
            return np.tanh(x)
        return x.copy()


@dataclass(frozen=True, eq=False)
class FilterBank:
    """Immutable filter-coefficient bank.

    ``constant`` law: coeffs has shape (L, F, F, K) and is returned as-is
    at every t.  ``fourier`` law: coeffs has shape (L, F, F, K, 2M+1)
    holding (c0, a_1..a_M, b_1..b_M) per filter; evaluation at t is
    c0 + sum_m a_m cos(2 pi m t / T) + b_m sin(2 pi m t / T).
    """

    coeffs: np.ndarray
    time_law: str = CONSTANT
    modes: int = 0
    horizon: float = 1.0

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.coeffs), dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)
        if not np.isfinite(arr).all():
            raise InvalidParameterError("filter coefficients must be finite")
        if self.time_law == CONSTANT:
            if arr.ndim != 4:
                raise InvalidParameterError("constant law needs a (L,F,F,K) array")
        elif self.time_law == FOURIER:
            if self.modes < 1:
                raise InvalidParameterError("fourier law needs modes >= 1")
            if arr.ndim != 5 or arr.shape[4] != 2 * self.modes + 1:
                raise InvalidParameterError(
                    "fourier law needs a (L,F,F,K,2M+1) coefficient array"
                )
            if not self.horizon > 0.0:
                raise InvalidParameterError("fourier law needs a positive horizon")
        else:
            raise InvalidParameterError(f"unknown time law {self.time_law!r}")
        if arr.shape[1] != arr.shape[2] or min(arr.shape[:4]) < 1:
            raise InvalidParameterError("coefficient array must be (L,F,F,K) shaped")

    @property
    def L(self) -> int:
        return self.coeffs.shape[0]

    @property
    def F(self) -> int:
        return self.coeffs.shape[1]

    @property
    def K(self) -> int:
        return self.coeffs.shape[3]


def filters_at(bank: FilterBank, t: float) -> np.ndarray:
    """Coefficient array (L,F,F,K) at time t in [0, horizon]."""
    if bank.time_law == CONSTANT:
        return bank.coeffs
    tt = float(t)
    if not (0.0 <= tt <= bank.horizon):
        raise InvalidParameterError(
            f"time {tt!r} outside the bank horizon [0, {bank.horizon!r}]"
        )
    m = np.arange(1, bank.modes + 1, dtype=np.float64)
    ang = 2.0 * math.pi * m * (tt / bank.horizon)
    basis = np.concatenate(([1.0], np.cos(ang), np.sin(ang)))
    return np.tensordot(bank.coeffs, basis, axes=(4, 0))


def h_sup(bank: FilterBank) -> float:
    """Grid estimate of sup over time and indices of |h| (exact for constant law)."""
    if bank.time_law == CONSTANT:
        return float(np.max(np.abs(bank.coeffs)))
    ts = np.linspace(0.0, bank.horizon, H_SUP_GRID)
    return max(float(np.max(np.abs(filters_at(bank, t)))) for t in ts)


def h_sup_certified(bank: FilterBank) -> float:
    """Upper bound on h_sup valid for all t: |c0| + sum(|a_m| + |b_m|)."""
    if bank.time_law == CONSTANT:
        return float(np.max(np.abs(bank.coeffs)))
    return float(np.max(np.sum(np.abs(bank.coeffs), axis=4)))


def random_filter_bank(
    L: int,
    F: int,
    K: int,
    rng,
    time_law: str = CONSTANT,
    modes: int = 0,
    horizon: float = 1.0,
) -> FilterBank:
    """Coefficients drawn uniformly from [-1, 1] (the replication preset)."""
    if time_law == CONSTANT:
        return FilterBank(rng.uniform(-1.0, 1.0, size=(L, F, F, K)))
    return FilterBank(
        rng.uniform(-1.0, 1.0, size=(L, F, F, K, 2 * modes + 1)),
        time_law=FOURIER,
        modes=modes,
        horizon=horizon,
    )


def gnn_forward(S, X, coeffs, act: Activation):
    """One multi-layer forward pass X -> rho(sum_{g,k} h_fgk S^k X_g).

    S must be the symmetric shift array (checked for shape here; symmetry
    is the caller's contract, validated once per integration).  Accepts a
    FeatureMatrix or a raw (n, F) array and returns the same flavor.
    """
    wrapped = isinstance(X, FeatureMatrix)
    vals = X.values if wrapped else np.asarray(X, dtype=np.float64)
    S = np.asarray(S, dtype=np.float64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionMismatchError("shift array must be square")
    if vals.ndim != 2 or vals.shape[0] != S.shape[0]:
        raise DimensionMismatchError(
            f"features have {vals.shape[0] if vals.ndim == 2 else '?'} rows "
            f"but the shift array is {S.shape[0]}x{S.shape[0]}"
        )
    if coeffs.ndim != 4 or coeffs.shape[1] != coeffs.shape[2]:
        raise DimensionMismatchError("coefficients must be (L,F,F,K) shaped")
    if coeffs.shape[1] != vals.shape[1]:
        raise DimensionMismatchError(
            f"bank has {coeffs.shape[1]} channels but features have {vals.shape[1]}"
        )
    out = kernels.layer_stack_forward(S, vals, coeffs, act.act_id, act.slope)
    return FeatureMatrix(out) if wrapped else out


# ---------------------------------------------------------------------------
# Plain-text serialization


def bank_to_text(bank: FilterBank, seed=None) -> str:
    """Flat config record; coefficients in row-major (l,f,g,k[,mode]) order."""
    lines = [
        f"L={bank.L}",
        f"F={bank.F}",
        f"K={bank.K}",
        f"law={bank.time_law}",
    ]
    if bank.time_law == FOURIER:
        lines.append(f"modes={bank.modes}")
        lines.append(f"horizon={bank.horizon!r}")
    if seed is not None:
        lines.append(f"seed={seed}")
    flat = ",".join(repr(float(x)) for x in bank.coeffs.ravel())
    lines.append(f"coeffs={flat}")
    return "\n".join(lines) + "\n"


def bank_from_text(text: str) -> FilterBank:
    fields = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidParameterError(f"bad bank line {line!r}")
        key, val = line.split("=", 1)
        fields[key.strip()] = val.strip()
    try:
        L, F, K = int(fields["L"]), int(fields["F"]), int(fields["K"])
        law = fields.get("law", CONSTANT)
        flat = np.asarray([float(x) for x in fields["coeffs"].split(",")])
    except (KeyError, ValueError) as exc:
        raise InvalidParameterError("bank record is missing or has bad fields") from exc
    if law == CONSTANT:
        return FilterBank(flat.reshape(L, F, F, K))
    modes = int(fields["modes"])
    horizon = float(fields.get("horizon", "1.0"))
    return FilterBank(
        flat.reshape(L, F, F, K, 2 * modes + 1),
        time_law=FOURIER,
        modes=modes,
        horizon=horizon,
    )
