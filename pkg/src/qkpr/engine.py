"""Game pipeline, parameter sweeps and the best-response (Nash) check."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .channels import (
    PHASE_DAMPING,
    ChannelKind,
    apply_adjoint_channel,
    apply_channel,
    make_channel,
)
from .payoff import PLAYERS, PayoffTriple, payoff_operator, payoffs, player_index
from .states import InitialState, check_density, parameterized_initial
from .strategies import (
    ANGLE_LOWER,
    ANGLE_PERIODIC,
    ANGLE_UPPER,
    StrategyParams,
    StrategyTriple,
    apply_strategies,
    move_unitary,
    u_opt,
)

log = logging.getLogger(__name__)

PRE, POST = "pre-strategy", "post-strategy"
_STAGE_ALIASES = {"pre": PRE, "post": POST, PRE: PRE, POST: POST}


def normalize_stage(stage: str) -> str:
    try:
        return _STAGE_ALIASES[stage]
    except KeyError:
        raise ValueError(f"noise stage must be 'pre' or 'post', got {stage!r}") from None


@dataclass(frozen=True)
class GameConfig:
    initial: InitialState = InitialState.ghz()
    moves: StrategyTriple = StrategyTriple.all(u_opt())
    channel: ChannelKind = PHASE_DAMPING
    p: float = 0.0
    noise_stage: str = PRE

    def __post_init__(self):
        object.__setattr__(self, "noise_stage", normalize_stage(self.noise_stage))
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def describe(self) -> dict:
        return {
            "initial": self.initial.describe(),
            "channel": self.channel.label,
            "p": self.p,
            "noise_stage": self.noise_stage,
        }


def run_pipeline(
    rho: np.ndarray,
    moves: StrategyTriple,
    channel: ChannelKind,
    p: float,
    noise_stage: str = PRE,
    check: bool = True,
) -> np.ndarray:
    """Final state: noise and moves in the order given by ``noise_stage``.

    With ``check`` every intermediate state is validated as a density matrix.
    """
    stage = normalize_stage(noise_stage)
    ch = make_channel(channel, p)
    states = [rho]
    if stage == PRE:
        states.append(apply_channel(states[-1], ch))
    states.append(apply_strategies(states[-1], moves))
    if stage == POST:
        states.append(apply_channel(states[-1], ch))
    if check:
        for s in states:
            check_density(s)
    return states[-1]


def play(config: GameConfig, check: bool = True) -> PayoffTriple:
    rho = run_pipeline(
        config.initial.density(), config.moves, config.channel, config.p, config.noise_stage, check
    )
    return payoffs(rho)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass
class SweepResult:
    """Payoffs over a grid.

    For a decoherence sweep ``payoffs`` has shape (n_p, n_channels, 3);
    for an angle sweep (n_theta, n_phi, 3).
    """

    kind: str
    axes: dict
    channels: list
    payoffs: np.ndarray
    metadata: dict = field(default_factory=dict)

    def rows(self) -> list[dict]:
        out = []
        if self.kind == "p":
            for i, p in enumerate(self.axes["p"]):
                for j, ch in enumerate(self.channels):
                    a, b, c = self.payoffs[i, j]
                    out.append(
                        {
                            "p": p,
                            "channel": ch,
                            "noise_stage": self.metadata["noise_stage"],
                            "payoff_alice": a,
                            "payoff_bob": b,
                            "payoff_charlie": c,
                        }
                    )
        else:
            p = self.metadata["p"]
            for i, th in enumerate(self.axes["theta"]):
                for j, ph in enumerate(self.axes["phi"]):
                    a, b, c = self.payoffs[i, j]
                    out.append(
                        {
                            "theta": th,
                            "phi": ph,
                            "p": p,
                            "channel": self.channels[0],
                            "payoff_alice": a,
                            "payoff_bob": b,
                            "payoff_charlie": c,
                        }
                    )
        return out


def p_grid(n: int = 101) -> np.ndarray:
    if n < 2:
        raise ValueError("p grid needs at least two points")
    return np.linspace(0.0, 1.0, n)


def sweep_decoherence(
    initial: InitialState,
    moves: StrategyTriple,
    channel_kinds: ChannelKind | Sequence[ChannelKind],
    grid: Sequence[float] | int = 101,
    noise_stage: str = PRE,
) -> SweepResult:
    kinds = [channel_kinds] if isinstance(channel_kinds, ChannelKind) else list(channel_kinds)
    ps = p_grid(grid) if isinstance(grid, (int, np.integer)) else np.asarray(grid, dtype=float)
    if np.any(ps < 0) or np.any(ps > 1):
        raise ValueError("p grid must lie in [0, 1]")
    rho0 = initial.density()
    out = np.empty((len(ps), len(kinds), 3))
    for i, p in enumerate(ps):
        for j, kind in enumerate(kinds):
            out[i, j] = payoffs(run_pipeline(rho0, moves, kind, float(p), noise_stage))
    return SweepResult(
        kind="p",
        axes={"p": ps},
        channels=[k.label for k in kinds],
        payoffs=out,
        metadata={"initial": initial.describe(), "noise_stage": normalize_stage(noise_stage)},
    )


def angle_grids(n_theta: int = 50, n_phi: int = 50) -> tuple[np.ndarray, np.ndarray]:
    return np.linspace(0.0, np.pi, n_theta), np.linspace(0.0, 2 * np.pi, n_phi)


def sweep_state_angles(
    theta_grid: Sequence[float] | int,
    phi_grid: Sequence[float] | int,
    moves: StrategyTriple,
    channel_kind: ChannelKind,
    p: float,
    noise_stage: str = PRE,
) -> SweepResult:
    if isinstance(theta_grid, (int, np.integer)):
        theta_grid = np.linspace(0.0, np.pi, theta_grid)
    if isinstance(phi_grid, (int, np.integer)):
        phi_grid = np.linspace(0.0, 2 * np.pi, phi_grid)
    thetas = np.asarray(theta_grid, dtype=float)
    phis = np.asarray(phi_grid, dtype=float)
    out = np.empty((len(thetas), len(phis), 3))
    for i, th in enumerate(thetas):
        for j, ph in enumerate(phis):
            rho = parameterized_initial(th, ph)
            out[i, j] = payoffs(run_pipeline(rho, moves, channel_kind, p, noise_stage))
    return SweepResult(
        kind="angles",
        axes={"theta": thetas, "phi": phis},
        channels=[channel_kind.label],
        payoffs=out,
        metadata={"p": p, "noise_stage": normalize_stage(noise_stage)},
    )


# ---------------------------------------------------------------------------
# Best response
# ---------------------------------------------------------------------------


@dataclass
class BestResponseReport:
    player: str
    baseline: float
    best: float
    best_params: StrategyParams | None
    grid_evaluations: int
    refine_evaluations: int
    final_step: float

    @property
    def improvement(self) -> float:
        return self.best - self.baseline

    def as_dict(self) -> dict:
        return {
            "player": self.player,
            "baseline": self.baseline,
            "best": self.best,
            "improvement": self.improvement,
            "best_params": None if self.best_params is None else self.best_params.as_array().tolist(),
            "grid_evaluations": self.grid_evaluations,
            "refine_evaluations": self.refine_evaluations,
            "final_step": self.final_step,
        }


def _slot_kron(mats: list[np.ndarray]) -> np.ndarray:
    return np.kron(np.kron(mats[0], mats[1]), mats[2])


def deviation_form(config: GameConfig, player) -> np.ndarray:
    """9x9 Hermitian H with payoff(U) = vec(U)^H H vec(U) for the deviating player.

    vec is row-major (U[i, j] at 3*i + j); the other two moves stay fixed.
    Exact for both noise stages: the post-strategy channel is moved onto the
    payoff operator via its adjoint.
    """
    k = player_index(player)
    ch = make_channel(config.channel, config.p)
    sigma = config.initial.density()
    q = payoff_operator(k).matrix
    if config.noise_stage == PRE:
        sigma = apply_channel(sigma, ch)
    else:
        q = apply_adjoint_channel(q, ch)
    fixed = [move_unitary(m) for m in config.moves]
    lifts = np.empty((9, 27, 27), dtype=np.complex128)
    for a in range(9):
        unit = np.zeros((3, 3), dtype=np.complex128)
        unit[divmod(a, 3)] = 1.0
        mats = list(fixed)
        mats[k] = unit
        lifts[a] = _slot_kron(mats)
    t = np.matmul(sigma, lifts)
    h = np.einsum("xy,azy,bzx->ab", q, lifts.conj(), t)
    return 0.5 * (h + h.conj().T)


def _form_at(h: np.ndarray, u: np.ndarray) -> float:
    v = np.asarray(u, dtype=np.complex128).ravel()
    return float(np.vdot(v, h @ v).real)


def best_response(
    config: GameConfig,
    player,
    budget: int = 50_000,
    grid_points: int = 5,
    n_seeds: int = 8,
    min_step: float = 1e-4,
) -> BestResponseReport:
    """Search the deviating player's strategy space holding the others fixed.

    A full tensor grid with ``grid_points`` values per angle seeds a
    Hooke-Jeeves refinement from the baseline move and the best grid points.
    Refinement stops when every step is below ``min_step`` radians or after
    ``budget`` objective evaluations (grid evaluations are counted apart).
    The reported best value is recomputed through the full pipeline.
    """
    k = player_index(player)
    h = deviation_form(config, k)
    own = config.moves[k]
    baseline = _form_at(h, move_unitary(own))

    axes = np.empty((8, grid_points))
    spacing = np.empty(8)
    for d in range(8):
        if ANGLE_PERIODIC[d]:
            axes[d] = np.linspace(ANGLE_LOWER[d], ANGLE_UPPER[d], grid_points, endpoint=False)
        else:
            axes[d] = np.linspace(ANGLE_LOWER[d], ANGLE_UPPER[d], grid_points)
        spacing[d] = axes[d, 1] - axes[d, 0]
    values = _kernels.form_grid(h, axes)
    n_grid = values.size
    top = np.argsort(-values, kind="stable")[:n_seeds]
    seeds = [_kernels.grid_point(axes, i) for i in top]
    if isinstance(own, StrategyParams):
        seeds.insert(0, own.as_array())

    best_x, best_f = None, -np.inf
    used, last_step = 0, np.nan
    for x0 in seeds:
        remaining = budget - used
        if remaining <= 0:
            break
        x, fx, nev, last_step = _kernels.pattern_search(
            h, x0, spacing / 2, ANGLE_LOWER, ANGLE_UPPER, ANGLE_PERIODIC, min_step, remaining
        )
        used += nev
        if fx > best_f:
            best_x, best_f = x, fx
    log.debug("best response player=%s grid=%d refine=%d best=%.12g", PLAYERS[k], n_grid, used, best_f)

    if best_x is None or best_f < baseline:
        best_params, best_f = (own if isinstance(own, StrategyParams) else None), baseline
    else:
        best_params = StrategyParams.from_array(np.clip(best_x, ANGLE_LOWER, ANGLE_UPPER))
        moves = config.moves.replace_player(k, best_params)
        checked = play(
            GameConfig(config.initial, moves, config.channel, config.p, config.noise_stage), check=False
        )[k]
        if abs(checked - best_f) > 1e-9:
            raise RuntimeError(f"reduced payoff {best_f} disagrees with pipeline {checked}")
        best_f = max(checked, baseline)
    return BestResponseReport(
        player=PLAYERS[k],
        baseline=baseline,
        best=best_f,
        best_params=best_params,
        grid_evaluations=n_grid,
        refine_evaluations=used,
        final_step=last_step,
    )


def nash_check(config: GameConfig, players: Sequence = PLAYERS, **search) -> list[BestResponseReport]:
    return [best_response(config, pl, **search) for pl in players]
