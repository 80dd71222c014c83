"""Initial three-qutrit states.

Basis ket |a b c> (Alice, Bob, Charlie) sits at index 9*a + 3*b + c.
Density matrices are plain 27x27 complex arrays; `check_density` enforces
the Hermitian / PSD / unit-trace contract.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, as_matrix

DIM = 27
QUTRIT = 3

# |000>, |111>, |222>
DIAGONAL_KETS = (0, 13, 26)


def basis_index(a: int, b: int, c: int) -> int:
    return 9 * a + 3 * b + c


def basis_digits(index: int) -> tuple[int, int, int]:
    return index // 9, (index // 3) % 3, index % 3


def check_density(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Validate a 27x27 density matrix and return it as complex128.

    Raises ValueError when the matrix is not Hermitian, has an eigenvalue
    below ``-tol`` or a trace off from one by more than ``tol``.
    """
    rho = as_matrix(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"density matrix must be {DIM}x{DIM}, got {rho.shape}")
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > tol:
        raise ValueError(f"density matrix not Hermitian (max deviation {herm_err:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr.real:.12g}, expected 1")
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam < -tol:
        raise ValueError(f"density matrix not PSD (smallest eigenvalue {lam:.3g})")
    return rho


def _projector_on_diagonal_kets(amps) -> np.ndarray:
    psi = np.zeros(DIM, dtype=np.complex128)
    psi[list(DIAGONAL_KETS)] = amps
    return np.outer(psi, psi.conj())


def ghz3() -> np.ndarray:
    """Projector onto (|000> + |111> + |222>) / sqrt(3)."""
    return _projector_on_diagonal_kets(np.full(3, 1.0 / np.sqrt(3.0)))


def mixed_initial(f: float) -> np.ndarray:
    """``f * ghz3() + (1 - f) / 27 * I``."""
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"mixing fraction f must lie in [0, 1], got {f}")
    return f * ghz3() + ((1.0 - f) / DIM) * np.eye(DIM, dtype=np.complex128)


def parameterized_initial(theta: float, phi: float) -> np.ndarray:
    """Projector onto sin(theta)cos(phi)|000> + sin(theta)sin(phi)|111> + cos(theta)|222>."""
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    if not 0.0 <= phi <= 2.0 * np.pi:
        raise ValueError(f"phi must lie in [0, 2pi], got {phi}")
    amps = (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
    return _projector_on_diagonal_kets(amps)


# "as-printed" is the angle pair quoted for the figures; it does not give equal
# amplitudes. "maximal" does, and reproduces ghz3() exactly.
STATE_PRESETS: dict[str, tuple[float, float]] = {
    "as-printed": (np.pi / 4, float(np.arccos(1.0 / np.sqrt(3.0)))),
    "maximal": (float(np.arccos(1.0 / np.sqrt(3.0))), np.pi / 4),
}


def preset_initial(name: str) -> np.ndarray:
    try:
        theta, phi = STATE_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown state preset {name!r}; choose from {sorted(STATE_PRESETS)}") from None
    return parameterized_initial(theta, phi)


@dataclass(frozen=True)
class InitialState:
    """Recipe for one of the initial-state families.

    kind is ``ghz``, ``mixed`` (uses f), ``angles`` (uses theta, phi) or
    ``preset`` (uses preset).
    """

    kind: str = "ghz"
    f: float | None = None
    theta: float | None = None
    phi: float | None = None
    preset: str | None = None

    def __post_init__(self):
        if self.kind == "mixed":
            if self.f is None or not 0.0 <= self.f <= 1.0:
                raise ValueError(f"mixed state needs f in [0, 1], got {self.f}")
        elif self.kind == "angles":
            if self.theta is None or self.phi is None:
                raise ValueError("angles state needs theta and phi")
        elif self.kind == "preset":
            if self.preset not in STATE_PRESETS:
                raise ValueError(f"unknown state preset {self.preset!r}")
        elif self.kind != "ghz":
            raise ValueError(f"unknown initial state kind {self.kind!r}")

    @classmethod
    def ghz(cls) -> "InitialState":
        return cls("ghz")

    @classmethod
    def mixed(cls, f: float) -> "InitialState":
        return cls("mixed", f=f)

    @classmethod
    def angles(cls, theta: float, phi: float) -> "InitialState":
        return cls("angles", theta=theta, phi=phi)

    @classmethod
    def from_preset(cls, name: str) -> "InitialState":
        return cls("preset", preset=name)

    def density(self) -> np.ndarray:
        if self.kind == "ghz":
            return ghz3()
        if self.kind == "mixed":
            return mixed_initial(self.f)
        if self.kind == "angles":
            return parameterized_initial(self.theta, self.phi)
        return preset_initial(self.preset)

    def describe(self) -> dict:
        out = {"kind": self.kind}
        for key in ("f", "theta", "phi", "preset"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out
