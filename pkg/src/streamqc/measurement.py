"""Impulsive Gaussian-pointer weak measurement of sigma_z on a qubit.

The pointer lives on the integer grid q in [-50, 50] (101 sites, unit
spacing) with real amplitudes phi(q) proportional to exp(-q^2 / 4 sigma^2),
renormalized so the discrete probabilities sum to one exactly.

The grid is periodic: the measurement coupling translates the pointer by one
site cyclically, +1 on the sigma_z = +1 (|0>) branch and -1 on the |1> branch.
That makes the Kraus family M(q0) = phi(q0-1)|0><0| + phi(q0+1)|1><1| (with
cyclically shifted amplitudes) exactly complete: sum M^+ M = I by construction.
Wrap-around leakage is below 1.5e-7 in probability at sigma = 10 and
underflows entirely for sigma <= 1.

Two routes compute the same channel:

* the fast 2x2 Kraus path (production, used in training loops), and
* ``collective_measure_oracle``, which builds the 202x202 pointer (x) qubit
  state, applies the conditional translation, and projects on |q0><q0| (x) I.

Their agreement to 1e-10 is part of the acceptance suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import COLLECTIVE_DIM, POINTER_DIM, PROJ_0, PROJ_1, tensor_product

GRID_MIN = -50
GRID_MAX = 50


@dataclass(frozen=True)
class PointerGrid:
    """Integer position grid of the pointer: 101 sites in [-50, 50], unit spacing."""

    q_min: int = GRID_MIN
    q_max: int = GRID_MAX
    dx: int = 1

    def __post_init__(self) -> None:
        if self.n_points != POINTER_DIM:
            raise ValueError("pointer grid must have 101 sites")

    @property
    def n_points(self) -> int:
        return (self.q_max - self.q_min) // self.dx + 1

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.q_min, self.q_max + 1, self.dx, dtype=float)

    def index_of(self, q0: int) -> int:
        if not float(q0).is_integer() or not self.q_min <= q0 <= self.q_max:
            raise ValueError(f"q0 must be an integer in [{self.q_min}, {self.q_max}], got {q0}")
        return int(q0) - self.q_min


DEFAULT_GRID = PointerGrid()


@dataclass(frozen=True, eq=False)
class GaussianPointer:
    """Discretely normalized Gaussian pointer of width ``sigma`` on the grid.

    Caches the cyclically shifted amplitudes and derived weights used by the
    Kraus path; treat instances as immutable.
    """

    sigma: float
    grid: PointerGrid
    amplitudes: np.ndarray
    # phi shifted to be centered at +1 (|0> branch) and -1 (|1> branch).
    shifted_plus: np.ndarray = field(repr=False)
    shifted_minus: np.ndarray = field(repr=False)
    weights_plus: np.ndarray = field(repr=False)
    weights_minus: np.ndarray = field(repr=False)
    #: sum_q phi(q-1) phi(q+1): off-diagonal damping of the non-selective channel.
    coherence_factor: float = field(repr=False)


def make_gaussian_pointer(sigma: float, grid: PointerGrid = DEFAULT_GRID) -> GaussianPointer:
    """Build the normalized pointer state, centered at q = 0."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    amp = np.exp(-grid.positions**2 / (4.0 * sigma**2))
    amp /= np.sqrt(np.sum(amp**2))
    plus = np.roll(amp, 1)
    minus = np.roll(amp, -1)
    return GaussianPointer(
        sigma=float(sigma),
        grid=grid,
        amplitudes=amp,
        shifted_plus=plus,
        shifted_minus=minus,
        weights_plus=plus**2,
        weights_minus=minus**2,
        coherence_factor=float(np.sum(plus * minus)),
    )


@dataclass(frozen=True)
class MeasurementOutcome:
    """One weak-measurement readout: the integer weak value and the collapsed state."""

    q0: int
    q0_normalized: float
    posterior: np.ndarray


def normalize_weak_value(q0: int) -> float:
    """Map a grid outcome to [0, 1]: (q0 + 50) / 100."""
    if not GRID_MIN <= q0 <= GRID_MAX:
        raise ValueError(f"q0 must lie in [{GRID_MIN}, {GRID_MAX}], got {q0}")
    return (q0 - GRID_MIN) / (GRID_MAX - GRID_MIN)


def kraus_operator(q0: int, pointer: GaussianPointer, g: int = 1) -> np.ndarray:
    """Diagonal Kraus operator M(q0) = phi(q0-g)|0><0| + phi(q0+g)|1><1|.

    Amplitude shifts are cyclic on the grid, so sum_{q0} M^+ M = I exactly.
    """
    i = pointer.grid.index_of(q0)
    if g == 1:
        return np.array(
            [[pointer.shifted_plus[i], 0.0], [0.0, pointer.shifted_minus[i]]], dtype=complex
        )
    if not isinstance(g, (int, np.integer)) or g < 1:
        raise ValueError(f"displacement g must be a positive integer, got {g}")
    plus = np.roll(pointer.amplitudes, g)
    minus = np.roll(pointer.amplitudes, -g)
    return np.array([[plus[i], 0.0], [0.0, minus[i]]], dtype=complex)


def outcome_distribution(rho: np.ndarray, pointer: GaussianPointer) -> np.ndarray:
    """P(q0) = Tr(M(q0) rho M(q0)^+) over all 101 outcomes, in grid order."""
    rho = np.asarray(rho, dtype=complex)
    return pointer.weights_plus * rho[0, 0].real + pointer.weights_minus * rho[1, 1].real


def posterior_state(
    rho: np.ndarray, pointer: GaussianPointer, q0: int
) -> tuple[float, np.ndarray]:
    """Probability and collapsed state for a forced outcome ``q0``.

    The collapse is the diagonal congruence rho -> M rho M^+ / P with
    M = diag(phi(q0-1), phi(q0+1)).
    """
    rho = np.asarray(rho, dtype=complex)
    i = pointer.grid.index_of(q0)
    a = pointer.shifted_plus[i]
    b = pointer.shifted_minus[i]
    prob = a * a * rho[0, 0].real + b * b * rho[1, 1].real
    if prob < 1e-300:
        raise FloatingPointError(f"outcome q0={q0} has vanishing probability {prob!r}")
    post = np.array(
        [[a * a * rho[0, 0], a * b * rho[0, 1]], [a * b * rho[1, 0], b * b * rho[1, 1]]],
        dtype=complex,
    )
    return float(prob), post / prob


def sample_and_collapse(
    rho: np.ndarray, pointer: GaussianPointer, rng: np.random.Generator
) -> MeasurementOutcome:
    """Draw q0 from the outcome distribution and collapse the state accordingly."""
    probs = outcome_distribution(rho, pointer)
    u = rng.random() * probs.sum()
    i = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    i = min(i, POINTER_DIM - 1)
    q0 = i + GRID_MIN
    _, post = posterior_state(rho, pointer, q0)
    return MeasurementOutcome(q0=q0, q0_normalized=normalize_weak_value(q0), posterior=post)


def nonselective_map(rho: np.ndarray, pointer: GaussianPointer) -> np.ndarray:
    """Outcome-averaged channel sum_{q0} M(q0) rho M(q0)^+.

    Populations are untouched; coherences shrink by the pointer's
    sigma-dependent overlap factor.
    """
    rho = np.asarray(rho, dtype=complex)
    c = pointer.coherence_factor
    return np.array(
        [[rho[0, 0], c * rho[0, 1]], [c * rho[1, 0], rho[1, 1]]], dtype=complex
    )


# ------------------------------------------------------------------
# Collective 202x202 oracle
# ------------------------------------------------------------------

def _translation_matrix(shift: int) -> np.ndarray:
    """Cyclic translation on the pointer grid: |q> -> |q + shift>."""
    return np.roll(np.eye(POINTER_DIM), shift, axis=0)


def collective_coupled_state(rho: np.ndarray, pointer: GaussianPointer, g: int = 1) -> np.ndarray:
    """Pointer (x) qubit state after the impulsive coupling, as a 202x202 matrix.

    The coupling is the exact conditional translation: the pointer moves +g on
    the |0> branch and -g on the |1> branch, cyclically.
    """
    rho_p = np.outer(pointer.amplitudes, pointer.amplitudes)
    rho_ini = tensor_product(rho_p, rho)
    u = tensor_product(_translation_matrix(g), PROJ_0) + tensor_product(
        _translation_matrix(-g), PROJ_1
    )
    return u @ rho_ini @ u.conj().T


def collective_measure_oracle(
    rho: np.ndarray, pointer: GaussianPointer, q0: int
) -> tuple[float, np.ndarray]:
    """Probability and posterior of outcome ``q0`` via the full collective state.

    Projects the coupled 202x202 state with |q0><q0| (x) I and traces out the
    pointer.  Slow but construction-faithful; the fast Kraus path must agree
    with it to 1e-10.
    """
    i = pointer.grid.index_of(q0)
    rho_fin = collective_coupled_state(rho, pointer)
    block = rho_fin[2 * i : 2 * i + 2, 2 * i : 2 * i + 2]
    prob = float(np.trace(block).real)
    if prob < 1e-300:
        raise FloatingPointError(f"outcome q0={q0} has vanishing probability {prob!r}")
    return prob, block / prob


def pointer_marginal(coupled: np.ndarray) -> np.ndarray:
    """Pointer reduced state of a 202x202 coupled matrix (convenience wrapper)."""
    if coupled.shape != (COLLECTIVE_DIM, COLLECTIVE_DIM):
        raise ValueError(f"expected {COLLECTIVE_DIM}x{COLLECTIVE_DIM}, got {coupled.shape}")
    from .core import partial_trace

    return partial_trace(coupled, keep="pointer")
