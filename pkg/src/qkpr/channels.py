"""Single-qutrit noise channels, their three-qutrit lift and application.

Channel families (CLI names in brackets): amplitude damping [ad], phase
damping [pd], depolarizing [dep], phase flip [pf] and trit-phase flip [tpf].
pf and tpf carry a variant:

  pf  as-printed    the quoted matrices, identical to amplitude damping
      standard      {sqrt(1-p) I, sqrt(p/2) Z, sqrt(p/2) Z^2}
  tpf as-printed    identity weight sqrt(1 - 2p/3); not trace preserving
      renormalized  identity weight sqrt(1 - p); flips keep sqrt(p/3)
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .linalg import DEFAULT_TOL, as_matrix

FAMILIES = ("ad", "pd", "dep", "pf", "tpf")
VARIANTS = {"pf": ("standard", "as-printed"), "tpf": ("renormalized", "as-printed")}
FAMILY_NAMES = {
    "ad": "amplitude damping",
    "pd": "phase damping",
    "dep": "depolarizing",
    "pf": "phase flip",
    "tpf": "trit-phase flip",
}


def omega_power(k: int) -> complex:
    """w**k with w = exp(2 pi i / 3), from the reduced angle rather than repeated products."""
    ang = 2.0 * math.pi * (k % 3) / 3.0
    return complex(math.cos(ang), math.sin(ang))


OMEGA = omega_power(1)
Y = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=np.complex128)
Z = np.diag([omega_power(0), omega_power(1), omega_power(2)])


class ChannelCompletenessError(ValueError):
    """Kraus operators whose sum E^dag E is not the identity."""

    def __init__(self, kind: "ChannelKind", p: float, sum_matrix: np.ndarray, deviation: float):
        self.kind = kind
        self.p = p
        self.sum_matrix = sum_matrix
        self.deviation = deviation
        diag = np.real(np.diag(sum_matrix))
        if np.allclose(sum_matrix, diag[0] * np.eye(len(diag)), atol=1e-12):
            shape = f"{diag[0]:.12g} * I"
        else:
            shape = f"diag {np.array2string(diag, precision=6)}"
        super().__init__(
            f"{kind.label} at p={p:.12g} violates completeness: sum E^dag E = {shape} "
            f"(max deviation from I {deviation:.3g})"
        )


@dataclass(frozen=True)
class ChannelKind:
    family: str
    variant: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown channel {self.family!r}; choose from {FAMILIES}")
        if self.family in VARIANTS:
            if self.variant is None:
                object.__setattr__(self, "variant", VARIANTS[self.family][0])
            elif self.variant not in VARIANTS[self.family]:
                raise ValueError(f"{self.family} variant must be one of {VARIANTS[self.family]}")
        elif self.variant is not None:
            raise ValueError(f"{self.family} takes no variant")

    @property
    def label(self) -> str:
        return self.family if self.variant is None else f"{self.family}[{self.variant}]"

    @property
    def is_unital(self) -> bool:
        return self.family in ("pd", "dep") or (self.family, self.variant) in (
            ("pf", "standard"),
            ("tpf", "renormalized"),
        )


AMPLITUDE_DAMPING = ChannelKind("ad")
PHASE_DAMPING = ChannelKind("pd")
DEPOLARIZING = ChannelKind("dep")
PHASE_FLIP = ChannelKind("pf", "standard")
TRIT_PHASE_FLIP = ChannelKind("tpf", "renormalized")
DEFAULT_KINDS = (AMPLITUDE_DAMPING, PHASE_DAMPING, DEPOLARIZING, PHASE_FLIP, TRIT_PHASE_FLIP)


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"decoherence parameter p must lie in [0, 1], got {p}")
    return p


def _amplitude_damping(p):
    e0 = np.diag([1.0, math.sqrt(1 - p), math.sqrt(1 - p)]).astype(np.complex128)
    e1 = np.zeros((3, 3), dtype=np.complex128)
    e1[0, 1] = math.sqrt(p)
    e2 = np.zeros((3, 3), dtype=np.complex128)
    e2[0, 2] = math.sqrt(p)
    return [e0, e1, e2]


def _phase_damping(p):
    return [math.sqrt(1 - p) * np.eye(3, dtype=np.complex128), math.sqrt(p) * Z]


def _depolarizing(p):
    y2 = Y @ Y
    z2 = np.diag([omega_power(0), omega_power(2), omega_power(4)])
    words = [Y, Z, y2, Y @ Z, y2 @ Z, Y @ z2, y2 @ z2, z2]
    c = math.sqrt(p / 8)
    return [math.sqrt(1 - p) * np.eye(3, dtype=np.complex128)] + [c * w for w in words]


def _phase_flip(p, variant):
    if variant == "as-printed":
        return _amplitude_damping(p)
    z2 = np.diag([omega_power(0), omega_power(2), omega_power(4)])
    c = math.sqrt(p / 2)
    return [math.sqrt(1 - p) * np.eye(3, dtype=np.complex128), c * Z, c * z2]


def _trit_phase_flip(p, variant):
    w, wb = omega_power(1), omega_power(-1)
    e1 = np.array([[0, 0, w], [1, 0, 0], [0, wb, 0]], dtype=np.complex128)
    e2 = np.array([[0, wb, 0], [0, 0, w], [1, 0, 0]], dtype=np.complex128)
    e3 = np.array([[0, w, 0], [0, 0, wb], [1, 0, 0]], dtype=np.complex128)
    weight = 1 - 2 * p / 3 if variant == "as-printed" else 1 - p
    c = math.sqrt(p / 3)
    return [math.sqrt(weight) * np.eye(3, dtype=np.complex128), c * e1, c * e2, c * e3]


def completeness_sum(kraus) -> np.ndarray:
    ops = [as_matrix(e) for e in kraus]
    return sum(e.conj().T @ e for e in ops)


def completeness_deviation(kraus) -> float:
    s = completeness_sum(kraus)
    return float(np.max(np.abs(s - np.eye(s.shape[0]))))


def verify_completeness(kraus, tol: float = DEFAULT_TOL) -> bool:
    return completeness_deviation(kraus) <= tol


def single_qutrit_kraus(kind: ChannelKind, p: float, check: bool = True) -> list[np.ndarray]:
    """The single-qutrit Kraus set of ``kind`` at decoherence ``p``.

    With ``check`` (the default) an incomplete set raises
    ChannelCompletenessError; pass ``check=False`` to inspect it anyway.
    """
    p = _check_p(p)
    if kind.family == "ad":
        ops = _amplitude_damping(p)
    elif kind.family == "pd":
        ops = _phase_damping(p)
    elif kind.family == "dep":
        ops = _depolarizing(p)
    elif kind.family == "pf":
        ops = _phase_flip(p, kind.variant)
    else:
        ops = _trit_phase_flip(p, kind.variant)
    if check:
        dev = completeness_deviation(ops)
        if dev > 1e-12:
            raise ChannelCompletenessError(kind, p, completeness_sum(ops), dev)
    return ops


def lift_to_three(single) -> list[np.ndarray]:
    """All n**3 ordered products e_i (x) e_j (x) e_k, Alice's factor first."""
    ops = [as_matrix(e) for e in single]
    return [np.kron(np.kron(a, b), c) for a, b, c in itertools.product(ops, repeat=3)]


@dataclass(frozen=True, eq=False)
class QutritChannel:
    kind: ChannelKind
    p: float
    single_kraus: tuple
    packed: _kernels.PackedKraus = field(repr=False)

    @property
    def lifted_kraus(self) -> np.ndarray:
        return self.packed.dense

    def completeness_error(self, tol: float = DEFAULT_TOL) -> ChannelCompletenessError | None:
        dev = completeness_deviation(self.single_kraus)
        if dev > tol:
            return ChannelCompletenessError(self.kind, self.p, completeness_sum(self.single_kraus), dev)
        return None


@functools.lru_cache(maxsize=32)
def _make_channel_cached(kind: ChannelKind, p: float) -> QutritChannel:
    single = single_qutrit_kraus(kind, p, check=False)
    return QutritChannel(kind, p, tuple(single), _kernels.PackedKraus.pack(lift_to_three(single)))


def make_channel(kind: ChannelKind, p: float, check: bool = True) -> QutritChannel:
    p = _check_p(p)
    ch = _make_channel_cached(kind, p)
    if check:
        err = ch.completeness_error(1e-12)
        if err is not None:
            raise err
    return ch


def apply_channel(rho: np.ndarray, ch: QutritChannel) -> np.ndarray:
    """sum_k E_k rho E_k^dag over the lifted Kraus list."""
    err = ch.completeness_error()
    if err is not None:
        raise err
    return _kernels.kraus_sum(ch.packed, rho)


def apply_adjoint_channel(op: np.ndarray, ch: QutritChannel) -> np.ndarray:
    """Heisenberg-picture map sum_k E_k^dag op E_k."""
    dense = ch.lifted_kraus
    return np.matmul(np.matmul(dense.conj().transpose(0, 2, 1), op), dense).sum(axis=0)


def decoherence_from_time(gamma: float, t: float) -> float:
    """p = 1 - exp(-gamma t)."""
    if gamma < 0 or t < 0:
        raise ValueError("gamma and t must be non-negative")
    return -math.expm1(-gamma * t)
