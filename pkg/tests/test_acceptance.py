"""Exit criteria, one test each. A summary line per criterion is printed at
the end of the pytest run."""

import time

import numpy as np

from conftest import random_density, random_params
from qkpr import engine
from qkpr.channels import (
    AMPLITUDE_DAMPING,
    DEFAULT_KINDS,
    PHASE_DAMPING,
    ChannelCompletenessError,
    ChannelKind,
    apply_channel,
    lift_to_three,
    make_channel,
    single_qutrit_kraus,
    verify_completeness,
)
from qkpr.engine import GameConfig, play
from qkpr.linalg import is_hermitian_psd
from qkpr.payoff import payoff_operator
from qkpr.states import InitialState, ghz3, mixed_initial, parameterized_initial
from qkpr.strategies import StrategyTriple, apply_strategies, build_unitary, u_opt

OPT = StrategyTriple.all(u_opt())
P_ELEVENTHS = [round(0.1 * i, 10) for i in range(11)]


def per_qutrit_expansion(rho, single):
    t = rho.reshape([3] * 6)
    for q in range(3):
        acc = np.zeros_like(t)
        for e in single:
            x = np.moveaxis(np.tensordot(e, t, axes=([1], [q])), 0, q)
            x = np.moveaxis(np.tensordot(x, e.conj(), axes=([3 + q], [1])), -1, 3 + q)
            acc = acc + x
        t = acc
    return t.reshape(27, 27)


def test_ac1_quantum_optimum(acceptance_report):
    t0 = time.perf_counter()
    worst = max(
        np.abs(np.array(play(GameConfig(InitialState.ghz(), OPT, kind, 0.0))) - 2 / 3).max()
        for kind in DEFAULT_KINDS
    )
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 1.0
    acceptance_report(1, "quantum optimum 2/3", ok, f"max |payoff - 2/3| = {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_ac2_classical_baseline(acceptance_report):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(100):
        moves = StrategyTriple(*(random_params(rng) for _ in range(3)))
        kind = DEFAULT_KINDS[i % len(DEFAULT_KINDS)]
        pay = play(GameConfig(InitialState.mixed(0.0), moves, kind, 0.0))
        worst = max(worst, np.abs(np.array(pay) - 4 / 9).max())
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 5.0
    acceptance_report(2, "classical baseline 4/9", ok, f"max |payoff - 4/9| = {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_ac3_cptp_suite(acceptance_report):
    t0 = time.perf_counter()
    failures = []
    for kind in DEFAULT_KINDS:
        for p in P_ELEVENTHS:
            single = single_qutrit_kraus(kind, p)
            if not (verify_completeness(single, 1e-10) and verify_completeness(lift_to_three(single), 1e-10)):
                failures.append((kind.label, p))
    printed = ChannelKind("tpf", "as-printed")
    rejected = 0
    for p in P_ELEVENTHS[1:]:
        try:
            single_qutrit_kraus(printed, p)
        except ChannelCompletenessError as exc:
            if np.abs(exc.sum_matrix - (1 + p / 3) * np.eye(3)).max() < 1e-12 and f"{1 + p / 3:.12g}" in str(exc):
                rejected += 1
    elapsed = time.perf_counter() - t0
    ok = not failures and rejected == 10 and elapsed < 5.0
    acceptance_report(3, "CPTP suite", ok, f"{len(failures)} incomplete sets, {rejected}/10 as-printed tpf rejected with (1+p/3)I, {elapsed:.2f}s")
    assert ok


def test_ac4_phase_damping_noiseless_at_one(acceptance_report):
    t0 = time.perf_counter()
    full = engine.sweep_state_angles(20, 20, OPT, PHASE_DAMPING, 1.0, "pre")
    none = engine.sweep_state_angles(20, 20, OPT, PHASE_DAMPING, 0.0, "pre")
    worst = np.abs(full.payoffs - none.payoffs).max()
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 30.0
    acceptance_report(4, "phase damping noiseless at p=1", ok, f"max grid difference {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_ac5_phase_damping_symmetry(acceptance_report):
    t0 = time.perf_counter()
    ps = [round(0.05 * i, 10) for i in range(11)]
    worst = 0.0
    for p in ps:
        lo = play(GameConfig(InitialState.ghz(), OPT, PHASE_DAMPING, p, "pre"))
        hi = play(GameConfig(InitialState.ghz(), OPT, PHASE_DAMPING, 1 - p, "pre"))
        worst = max(worst, np.abs(np.array(lo) - np.array(hi)).max())
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 5.0
    detail = f"max |payoff(p) - payoff(1-p)| = {worst:.2e}, {elapsed:.2f}s"
    if not ok:
        detail += " -- falsifies the pre-strategy noise-stage choice"
    acceptance_report(5, "phase damping symmetric about p=1/2", ok, detail)
    assert ok


def test_ac6_amplitude_damping_collapse(acceptance_report):
    rng = np.random.default_rng(6)
    t0 = time.perf_counter()
    target = np.zeros((27, 27))
    target[0, 0] = 1.0
    ch = make_channel(AMPLITUDE_DAMPING, 1.0)
    states = [ghz3(), mixed_initial(0.0), mixed_initial(0.5)]
    states += [random_density(rng) for _ in range(20)]
    states += [parameterized_initial(t, f) for t in np.linspace(0, np.pi, 5) for f in np.linspace(0, 2 * np.pi, 5)]
    worst_state = 0.0
    worst_oracle = 0.0
    for rho in states:
        out = apply_channel(rho, ch)
        oracle = per_qutrit_expansion(rho, ch.single_kraus)
        worst_state = max(worst_state, np.abs(out - target).max())
        worst_oracle = max(worst_oracle, np.abs(oracle - target).max())
    grid = engine.sweep_state_angles(20, 20, OPT, AMPLITUDE_DAMPING, 1.0, "pre")
    spread = np.ptp(grid.payoffs)
    elapsed = time.perf_counter() - t0
    ok = worst_state <= 1e-10 and worst_oracle <= 1e-10 and spread <= 1e-9 and elapsed < 10.0
    acceptance_report(
        6, "amplitude damping collapse", ok,
        f"state err {worst_state:.2e}, oracle err {worst_oracle:.2e}, grid spread {spread:.2e}, {elapsed:.2f}s",
    )
    assert ok


def test_ac7_nash_invariance(acceptance_report):
    t0 = time.perf_counter()
    failures = []
    worst = -np.inf
    for kind in DEFAULT_KINDS:
        for p in (0.0, 0.3, 0.7):
            cfg = GameConfig(InitialState.ghz(), OPT, kind, p)
            for rep in engine.nash_check(cfg, budget=50_000):
                worst = max(worst, rep.improvement)
                if rep.improvement > 1e-3:
                    failures.append(f"{kind.label}@p={p}/{rep.player}:+{rep.improvement:.5f}")
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 600.0
    detail = f"45 searches, max improvement {worst:.2e}, {elapsed:.1f}s"
    if failures:
        detail += "; exceeds 1e-3: " + ", ".join(failures)
    acceptance_report(7, "Nash invariance under decoherence", ok, detail)
    assert ok, detail


def test_ac8_linearity(acceptance_report):
    rng = np.random.default_rng(8)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(20):
        kind = DEFAULT_KINDS[rng.integers(len(DEFAULT_KINDS))]
        p = float(rng.uniform())
        stage = ("pre", "post")[i % 2]
        moves = StrategyTriple(*(random_params(rng) for _ in range(3)))
        ghz_pay = np.array(play(GameConfig(InitialState.ghz(), moves, kind, p, stage)))
        flat_pay = np.array(play(GameConfig(InitialState.mixed(0.0), moves, kind, p, stage)))
        for f in (0.2, 0.5, 1.0):
            pay = np.array(play(GameConfig(InitialState.mixed(f), moves, kind, p, stage)))
            worst = max(worst, np.abs(pay - (f * ghz_pay + (1 - f) * flat_pay)).max())
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 30.0
    acceptance_report(8, "linearity in the mixing fraction", ok, f"max deviation {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_ac9_invariant_suite(acceptance_report):
    rng = np.random.default_rng(9)
    t0 = time.perf_counter()
    checks = {}

    worst_u = max(
        np.abs((lambda u: u.conj().T @ u - np.eye(3))(build_unitary(random_params(rng)))).max()
        for _ in range(1000)
    )
    checks["unitarity(1000 draws)"] = worst_u <= 1e-9

    ok_states = True
    for _ in range(10):
        rho = random_density(rng, rank=3)
        moved = apply_strategies(rho, StrategyTriple(*(random_params(rng) for _ in range(3))))
        ok_states &= abs(np.trace(moved) - 1) < 1e-10 and is_hermitian_psd(moved, 1e-10)
        for kind in DEFAULT_KINDS:
            out = apply_channel(rho, make_channel(kind, float(rng.uniform())))
            ok_states &= abs(np.trace(out) - 1) < 1e-10 and is_hermitian_psd(out, 1e-10)
    checks["trace/Hermitian/PSD preservation"] = bool(ok_states)

    mm = np.eye(27) / 27
    unital_ok = all(
        np.abs(apply_channel(mm, make_channel(kind, p)) - mm).max() <= 1e-10
        for kind in DEFAULT_KINDS if kind.is_unital for p in (0.25, 0.5, 1.0)
    )
    ad_moves = np.abs(apply_channel(mm, make_channel(AMPLITUDE_DAMPING, 0.5)) - mm).max() > 1e-3
    checks["unitality classification"] = unital_ok and ad_moves

    checks["payoff operator trace 12"] = all(np.trace(payoff_operator(k).matrix).real == 12 for k in range(3))

    sym_ok = True
    for kind in DEFAULT_KINDS:
        s = random_params(rng)
        for initial in (InitialState.ghz(), InitialState.mixed(0.3)):
            pay = play(GameConfig(initial, StrategyTriple.all(s), kind, float(rng.uniform())))
            sym_ok &= max(pay) - min(pay) <= 1e-10
    checks["symmetric profile -> equal payoffs"] = bool(sym_ok)

    elapsed = time.perf_counter() - t0
    ok = all(checks.values()) and elapsed < 120.0
    failed = [k for k, v in checks.items() if not v]
    acceptance_report(9, "invariant suite", ok, f"{len(checks) - len(failed)}/{len(checks)} groups pass, {elapsed:.2f}s" + (f"; failed: {failed}" if failed else ""))
    assert ok
