"""Payoff projectors and expected payoffs.

A player is paid 1 when the restaurant (trit) they end up in is not shared
with either of the other two players.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .states import DIM, basis_digits

PLAYERS = ("alice", "bob", "charlie")


def player_index(player) -> int:
    if isinstance(player, str):
        try:
            return PLAYERS.index(player.lower())
        except ValueError:
            raise ValueError(f"unknown player {player!r}; choose from {PLAYERS}") from None
    if player not in (0, 1, 2):
        raise ValueError(f"player index must be 0, 1 or 2, got {player}")
    return int(player)


class ImaginaryPayoffError(ValueError):
    pass


class PayoffTriple(NamedTuple):
    alice: float
    bob: float
    charlie: float


@dataclass(frozen=True, eq=False)
class PayoffOperator:
    player: str
    matrix: np.ndarray

    @property
    def mask(self) -> np.ndarray:
        return np.real(np.diag(self.matrix))


def is_unique(digits: tuple[int, int, int], player: int) -> bool:
    mine = digits[player]
    return all(mine != d for k, d in enumerate(digits) if k != player)


@functools.lru_cache(maxsize=None)
def _mask(player: int) -> np.ndarray:
    m = np.array([is_unique(basis_digits(i), player) for i in range(DIM)], dtype=np.float64)
    m.setflags(write=False)
    return m


def payoff_operator(player) -> PayoffOperator:
    idx = player_index(player)
    return PayoffOperator(PLAYERS[idx], np.diag(_mask(idx)).astype(np.complex128))


def expected_payoff(rho: np.ndarray, op: PayoffOperator, imag_tol: float = 1e-8) -> float:
    """Re Tr(op @ rho); an imaginary part above ``imag_tol`` raises ImaginaryPayoffError."""
    val = np.einsum("ij,ji->", op.matrix, np.asarray(rho, dtype=np.complex128))
    if abs(val.imag) > imag_tol:
        raise ImaginaryPayoffError(
            f"Tr(P rho) has imaginary part {val.imag:.3g}; the state is not Hermitian"
        )
    return float(val.real)


def payoffs(rho: np.ndarray) -> PayoffTriple:
    return PayoffTriple(*(expected_payoff(rho, payoff_operator(k)) for k in range(3)))
