"""Three-player quantum Kolkata restaurant game under qutrit decoherence."""

from .channels import (
    AMPLITUDE_DAMPING,
    DEFAULT_KINDS,
    DEPOLARIZING,
    PHASE_DAMPING,
    PHASE_FLIP,
    TRIT_PHASE_FLIP,
    ChannelCompletenessError,
    ChannelKind,
    QutritChannel,
    apply_channel,
    decoherence_from_time,
    lift_to_three,
    make_channel,
    single_qutrit_kraus,
    verify_completeness,
)
from .engine import (
    BestResponseReport,
    GameConfig,
    SweepResult,
    best_response,
    nash_check,
    play,
    sweep_decoherence,
    sweep_state_angles,
)
from .payoff import PayoffTriple, expected_payoff, payoff_operator
from .states import InitialState, ghz3, mixed_initial, parameterized_initial, preset_initial
from .strategies import (
    IDENTITY_PARAMS,
    StrategyParams,
    StrategyTriple,
    apply_strategies,
    build_unitary,
    u_opt,
)

__version__ = "0.1.0"
