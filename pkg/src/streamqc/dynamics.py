"""Drive Hamiltonian, noise channels, and Lindblad evolution over one control interval.

The drive is H = Omega sigma_x + Delta sigma_z with the detuning Delta either
proportional to the instantaneous amplitude (Delta = ratio * Omega, the default)
or held at a fixed value.  Dephasing enters through the pair of collapse
operators sqrt(Gamma)|0><0|, sqrt(Gamma)|1><1| and relaxation through
sqrt(gamma) sigma_x.

``evolve_interval`` integrates the master equation with classical RK4.  Because
the equation is linear in rho and the pulse is constant over an interval, the
RK4 sweep collapses to a precomputable 4x4 propagator acting on the flattened
state; this is algebraically identical to stepping RK4 and is what makes a
100-step episode cheap.  A literal step-by-step RK4 lives in the test suite as
the cross-check.

Under this convention the resonant flip over total time T = 1 has amplitude
Omega = pi/2 (exp(-i Omega T sigma_x) with Omega T = pi/2 maps |0> to |1>).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import IDENTITY_2, PROJ_0, PROJ_1, SIGMA_X, SIGMA_Z, hermiticity_defect
from .errors import NumericalInstabilityError

#: Largest commandable Rabi amplitude.
OMEGA_MAX = 3.0 * np.pi

#: Amplitude of the resonant flip ("pi-pulse") over total time T = 1.
OMEGA_FLIP = 0.5 * np.pi


@dataclass(frozen=True)
class NoiseModel:
    """Detuning, dephasing, and relaxation parameters of the master equation.

    ``detuning_mode`` selects whether Delta tracks the instantaneous drive
    amplitude ("proportional", Delta = detuning_ratio * Omega) or stays at
    ``detuning_value`` ("fixed").
    """

    detuning_ratio: float = 0.0
    detuning_mode: str = "proportional"
    detuning_value: float = 0.0
    dephasing_rate: float = 0.0
    relaxation_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.detuning_mode not in ("proportional", "fixed"):
            raise ValueError(f"unknown detuning mode {self.detuning_mode!r}")
        if self.dephasing_rate < 0 or self.relaxation_rate < 0:
            raise ValueError("noise rates must be non-negative")

    def detuning(self, omega: float) -> float:
        """Instantaneous detuning for drive amplitude ``omega``."""
        if self.detuning_mode == "proportional":
            return self.detuning_ratio * omega
        return self.detuning_value


#: The three single-channel training environments and the combined transfer one.
NOISE_PRESETS: dict[str, NoiseModel] = {
    "detuning": NoiseModel(detuning_ratio=0.05),
    "dephasing": NoiseModel(dephasing_rate=0.05),
    "relaxation": NoiseModel(relaxation_rate=0.05),
    "hybrid": NoiseModel(detuning_ratio=0.1, dephasing_rate=0.05, relaxation_rate=0.05),
}


@dataclass(frozen=True)
class DriveSpec:
    """A single constant-amplitude pulse, Omega in [0, 3 pi]."""

    omega: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.omega <= OMEGA_MAX + 1e-12:
            raise ValueError(f"omega must lie in [0, 3 pi], got {self.omega}")


def build_hamiltonian(drive: DriveSpec, noise: NoiseModel) -> np.ndarray:
    """H = Omega sigma_x + Delta sigma_z for the given pulse and noise model."""
    return drive.omega * SIGMA_X + noise.detuning(drive.omega) * SIGMA_Z


def collapse_operators(noise: NoiseModel) -> list[np.ndarray]:
    """Collapse operators of the noise model.

    Dephasing at rate Gamma contributes sqrt(Gamma)|0><0| and sqrt(Gamma)|1><1|;
    relaxation at rate gamma contributes sqrt(gamma) sigma_x.
    """
    ops = []
    if noise.dephasing_rate > 0:
        root = np.sqrt(noise.dephasing_rate)
        ops.append(root * PROJ_0)
        ops.append(root * PROJ_1)
    if noise.relaxation_rate > 0:
        ops.append(np.sqrt(noise.relaxation_rate) * SIGMA_X)
    return ops


def lindblad_rhs(rho: np.ndarray, h: np.ndarray, collapses: list[np.ndarray]) -> np.ndarray:
    """Right-hand side -i[H, rho] + sum_n (C_n rho C_n^+ - 1/2 {C_n^+ C_n, rho})."""
    rho = np.asarray(rho, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if hermiticity_defect(h) > 1e-10:
        raise ValueError("Hamiltonian must be Hermitian")
    out = -1j * (h @ rho - rho @ h)
    for c in collapses:
        cdc = c.conj().T @ c
        out += c @ rho @ c.conj().T - 0.5 * (cdc @ rho + rho @ cdc)
    return out


# ------------------------------------------------------------------
# Superoperator machinery (row-major flattening: vec(A rho B) = (A kron B^T) vec(rho))
# ------------------------------------------------------------------

def _commutator_superop(h: np.ndarray) -> np.ndarray:
    """4x4 superoperator of -i[h, .] on the row-major flattened state."""
    return -1j * (np.kron(h, IDENTITY_2) - np.kron(IDENTITY_2, h.T))


def _dissipator_superop(c: np.ndarray) -> np.ndarray:
    """4x4 superoperator of C . C^+ - 1/2 {C^+ C, .}."""
    cdc = c.conj().T @ c
    return (
        np.kron(c, c.conj())
        - 0.5 * (np.kron(cdc, IDENTITY_2) + np.kron(IDENTITY_2, cdc.T))
    )


_LX = _commutator_superop(SIGMA_X)
_LZ = _commutator_superop(SIGMA_Z)


@lru_cache(maxsize=64)
def _noise_superop(noise: NoiseModel) -> np.ndarray:
    total = np.zeros((4, 4), dtype=complex)
    for c in collapse_operators(noise):
        total = total + _dissipator_superop(c)
    return total


def interval_propagator(
    omega: float, noise: NoiseModel, dt: float, substeps: int
) -> np.ndarray:
    """Exact RK4 propagator for one control interval of length ``dt``.

    Per substep of size h = dt/substeps the classical RK4 update of the linear
    equation vec(rho)' = M vec(rho) is the polynomial
    I + hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24; the interval propagator is its
    ``substeps``-th power.
    """
    m = _noise_superop(noise) + omega * _LX + noise.detuning(omega) * _LZ
    a = (dt / substeps) * m
    a2 = a @ a
    p = np.eye(4, dtype=complex) + a + a2 / 2.0 + (a2 @ a) / 6.0 + (a2 @ a2) / 24.0
    return np.linalg.matrix_power(p, substeps)


def _min_eigenvalue_2x2(rho: np.ndarray) -> float:
    # Closed form for a Hermitian 2x2: (tr - sqrt(tr^2 - 4 det)) / 2.
    tr = (rho[0, 0] + rho[1, 1]).real
    det = (rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real
    disc = max(tr * tr - 4.0 * det, 0.0)
    return 0.5 * (tr - np.sqrt(disc))


def evolve_interval(
    rho: np.ndarray,
    drive: DriveSpec,
    noise: NoiseModel,
    dt: float,
    substeps: int = 10,
) -> np.ndarray:
    """Evolve ``rho`` for time ``dt`` under a constant pulse, with RK4 substepping.

    The output is re-symmetrized and trace-renormalized; a state that fails the
    density-matrix invariants afterwards raises ``NumericalInstabilityError``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if substeps < 1:
        raise ValueError("substeps must be at least 1")
    rho = np.asarray(rho, dtype=complex)
    p = interval_propagator(drive.omega, noise, dt, substeps)
    out = (p @ rho.reshape(4)).reshape(2, 2)
    out = 0.5 * (out + out.conj().T)
    trace = out[0, 0].real + out[1, 1].real
    # Every power of the generator is traceless, so RK4 preserves the trace up
    # to round-off; real drift means the integration blew up.
    if not np.isfinite(trace) or abs(trace - 1.0) > 1e-10:
        raise NumericalInstabilityError(
            f"trace drifted to {trace!r} over one interval (dt={dt}, substeps={substeps})"
        )
    out = out / trace
    min_eig = _min_eigenvalue_2x2(out)
    if min_eig < -1e-10:
        raise NumericalInstabilityError(
            f"state lost positivity (min eigenvalue {min_eig:.3g})"
        )
    return out
