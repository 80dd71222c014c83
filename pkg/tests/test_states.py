import numpy as np
import pytest

from qkpr.states import (
    STATE_PRESETS,
    InitialState,
    basis_digits,
    basis_index,
    check_density,
    ghz3,
    mixed_initial,
    parameterized_initial,
    preset_initial,
)

EQUAL_AMPLITUDE = (np.arccos(1 / np.sqrt(3)), np.pi / 4)


def test_basis_index_roundtrip():
    for i in range(27):
        assert basis_index(*basis_digits(i)) == i
    assert basis_index(1, 1, 1) == 13
    assert basis_index(0, 1, 1) == 4


def test_ghz3_diagonal():
    d = np.diag(ghz3()).real
    expected = np.zeros(27)
    expected[[0, 13, 26]] = 1 / 3
    assert np.abs(d - expected).max() < 1e-15
    nz = np.argwhere(np.abs(ghz3()) > 1e-15)
    assert {tuple(x) for x in nz} == {(r, c) for r in (0, 13, 26) for c in (0, 13, 26)}
    assert abs(np.trace(ghz3()) - 1) < 1e-15


def test_ghz3_equals_equal_amplitude_state():
    assert np.abs(ghz3() - parameterized_initial(*EQUAL_AMPLITUDE)).max() < 1e-12
    assert np.abs(ghz3() - preset_initial("maximal")).max() < 1e-12


def test_as_printed_preset_is_not_equal_amplitude():
    d = np.diag(preset_initial("as-printed")).real[[0, 13, 26]]
    assert np.allclose(d, [1 / 6, 1 / 3, 1 / 2], atol=1e-12)


def test_mixed_endpoints():
    assert np.abs(mixed_initial(1) - ghz3()).max() < 1e-15
    assert np.abs(mixed_initial(0) - np.eye(27) / 27).max() < 1e-15


def test_mixed_half_spectrum():
    lam = np.sort(np.linalg.eigvalsh(mixed_initial(0.5)))
    assert abs(lam[-1] - (0.5 + 0.5 / 27)) < 1e-12
    assert np.abs(lam[:-1] - 0.5 / 27).max() < 1e-12


def test_mixed_affine():
    for f in np.linspace(0, 1, 11):
        combo = f * mixed_initial(1) + (1 - f) * mixed_initial(0)
        assert np.abs(mixed_initial(f) - combo).max() < 1e-12


@pytest.mark.parametrize("f", [-0.1, 1.5])
def test_mixed_range(f):
    with pytest.raises(ValueError):
        mixed_initial(f)


def test_parameterized_examples():
    rho = parameterized_initial(0.0, 1.234)
    assert abs(rho[26, 26] - 1) < 1e-15 and abs(np.trace(rho) - 1) < 1e-15
    rho = parameterized_initial(np.pi / 2, 0.0)
    assert abs(rho[0, 0] - 1) < 1e-15
    d = np.diag(parameterized_initial(np.pi / 4, np.arccos(1 / np.sqrt(3)))).real
    assert np.allclose(d[[0, 13, 26]], [1 / 6, 1 / 3, 1 / 2], atol=1e-12)


def test_parameterized_unit_trace_grid():
    for th in np.linspace(0, np.pi, 50):
        for ph in np.linspace(0, 2 * np.pi, 50):
            check_density(parameterized_initial(th, ph))


@pytest.mark.parametrize("theta,phi", [(-0.1, 0), (3.2, 0), (1, -0.1), (1, 6.3)])
def test_parameterized_range(theta, phi):
    with pytest.raises(ValueError):
        parameterized_initial(theta, phi)


def test_every_constructor_valid():
    for rho in [ghz3(), mixed_initial(0.3), *(preset_initial(n) for n in STATE_PRESETS)]:
        check_density(rho)


def test_check_density_rejects():
    with pytest.raises(ValueError, match="trace"):
        check_density(np.eye(27))
    bad = np.eye(27) / 27
    bad[0, 1] = 0.1
    with pytest.raises(ValueError, match="Hermitian"):
        check_density(bad)
    neg = np.diag([1.1, -0.1] + [0] * 25)
    with pytest.raises(ValueError, match="PSD"):
        check_density(neg)


def test_initial_state_recipes():
    assert np.array_equal(InitialState.ghz().density(), ghz3())
    assert np.array_equal(InitialState.mixed(0.2).density(), mixed_initial(0.2))
    assert np.array_equal(InitialState.angles(1.0, 2.0).density(), parameterized_initial(1.0, 2.0))
    assert np.array_equal(InitialState.from_preset("maximal").density(), preset_initial("maximal"))
    with pytest.raises(ValueError):
        InitialState("mixed")
    with pytest.raises(ValueError):
        InitialState("preset", preset="nope")
    with pytest.raises(ValueError):
        InitialState("w-state")
