"""Player moves: SU(3)-style unitaries built from eight angles."""

from __future__ import annotations

from dataclasses import astuple, dataclass
from typing import NamedTuple, Union

import numpy as np

from . import _kernels
from .linalg import as_matrix, is_unitary

TWO_PI = 2.0 * np.pi

ANGLE_NAMES = ("theta", "phi", "chi", "alpha1", "alpha2", "alpha3", "beta1", "beta2")
ANGLE_LOWER = np.zeros(8)
ANGLE_UPPER = np.array([np.pi, TWO_PI, np.pi / 2, TWO_PI, TWO_PI, TWO_PI, TWO_PI, TWO_PI])
# theta and chi are bounded; the phases wrap around.
ANGLE_PERIODIC = np.array([False, True, False, True, True, True, True, True])

_RANGE_SLACK = 1e-12


class UnitarityError(RuntimeError):
    """The constructed strategy matrix is not unitary (an implementation fault)."""


@dataclass(frozen=True)
class StrategyParams:
    theta: float
    phi: float
    chi: float
    alpha1: float
    alpha2: float
    alpha3: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name, lo, hi, val in zip(ANGLE_NAMES, ANGLE_LOWER, ANGLE_UPPER, astuple(self)):
            if not np.isfinite(val) or not lo - _RANGE_SLACK <= val <= hi + _RANGE_SLACK:
                raise ValueError(f"{name}={val} outside [{lo}, {hi:.6g}]")

    @classmethod
    def from_array(cls, x) -> "StrategyParams":
        return cls(*(float(v) for v in x))

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)


U_OPT_PRESETS: dict[str, tuple[float, ...]] = {
    # theta and phi as quoted alongside the optimum; payoff 0.6103 on GHZ
    "as-printed": (
        np.pi / 4,
        float(np.arccos(1 / np.sqrt(3))),
        np.pi / 4,
        5 * np.pi / 18,
        5 * np.pi / 18,
        5 * np.pi / 18,
        np.pi / 3,
        11 * np.pi / 6,
    ),
    # theta and phi exchanged; reaches the 2/3 optimum on GHZ
    "corrected": (
        float(np.arccos(1 / np.sqrt(3))),
        np.pi / 4,
        np.pi / 4,
        5 * np.pi / 18,
        5 * np.pi / 18,
        5 * np.pi / 18,
        np.pi / 3,
        11 * np.pi / 6,
    ),
}


def u_opt(variant: str = "corrected") -> StrategyParams:
    """The quantum-optimal move. ``variant`` is ``"corrected"`` or ``"as-printed"``."""
    try:
        return StrategyParams(*U_OPT_PRESETS[variant])
    except KeyError:
        raise ValueError(f"unknown u_opt variant {variant!r}") from None


# theta=pi/2, phi=0, chi=pi/2, beta2-alpha2=pi gives the identity exactly
IDENTITY_PARAMS = StrategyParams(np.pi / 2, 0.0, np.pi / 2, 0.0, 0.0, 0.0, 0.0, np.pi)


def build_unitary(s: StrategyParams) -> np.ndarray:
    """Columns: z, conj(w), and the conjugate cross column of z and w."""
    u = _kernels.unitary(s.as_array())
    if not is_unitary(u, 1e-8):
        raise UnitarityError(f"strategy matrix for {s} is not unitary")
    return u


Move = Union[StrategyParams, np.ndarray]


class StrategyTriple(NamedTuple):
    alice: Move
    bob: Move
    charlie: Move

    @classmethod
    def all(cls, move: Move) -> "StrategyTriple":
        return cls(move, move, move)

    def unitaries(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(move_unitary(m) for m in self)

    def replace_player(self, player: int, move: Move) -> "StrategyTriple":
        moves = list(self)
        moves[player] = move
        return StrategyTriple(*moves)


def move_unitary(move: Move) -> np.ndarray:
    """Unitary for a move given as angles or as a literal 3x3 unitary."""
    if isinstance(move, StrategyParams):
        return build_unitary(move)
    u = as_matrix(move)
    if u.shape != (3, 3) or not is_unitary(u, 1e-8):
        raise ValueError("literal moves must be 3x3 unitaries")
    return u


def apply_strategies(rho: np.ndarray, moves: StrategyTriple) -> np.ndarray:
    """(U_A^dag x U_B^dag x U_C^dag) rho (U_A x U_B x U_C)."""
    ua, ub, uc = moves.unitaries()
    k = np.kron(np.kron(ua, ub), uc)
    return k.conj().T @ np.asarray(rho, dtype=np.complex128) @ k
