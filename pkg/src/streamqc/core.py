"""Dense complex-matrix primitives and qubit-state utilities.

Matrices are plain complex128 ndarrays.  Density matrices are 2x2 (qubit) or
202x202 (pointer x qubit, pointer index major) Hermitian, trace-one, positive
semidefinite arrays; ``validate_density_matrix`` checks those invariants.

Index convention: entry [0, 0] is the population of |0>, entry [1, 1] the
population of |1>.  hbar = 1, all quantities dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

#: Projectors |0><0| and |1><1|.
PROJ_0 = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ_1 = np.array([[0, 0], [0, 1]], dtype=complex)

#: Pure-state density matrices used throughout the flip task.
RHO_GROUND = PROJ_0.copy()
RHO_EXCITED = PROJ_1.copy()
RHO_PLUS = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
RHO_MIXED = 0.5 * IDENTITY_2

# Collective (pointer x qubit) dimensions.
POINTER_DIM = 101
COLLECTIVE_DIM = POINTER_DIM * 2


def pure_state_density(psi: np.ndarray) -> np.ndarray:
    """Density matrix |psi><psi| of a (not necessarily normalized) state vector."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with a-index major: (A (x) B)[i*rb + k, j*cb + l] = A[i,j] B[k,l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m: np.ndarray, keep: str) -> np.ndarray:
    """Reduce a 202x202 pointer (x) qubit matrix to the kept subsystem.

    ``keep`` is ``"pointer"`` (101x101 result) or ``"qubit"`` (2x2 result).
    The trace of the input is preserved.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (COLLECTIVE_DIM, COLLECTIVE_DIM):
        raise ValueError(
            f"expected a {COLLECTIVE_DIM}x{COLLECTIVE_DIM} pointer-qubit matrix, got {m.shape}"
        )
    t = m.reshape(POINTER_DIM, 2, POINTER_DIM, 2)
    if keep == "qubit":
        return np.einsum("isit->st", t)
    if keep == "pointer":
        return np.einsum("isjs->ij", t)
    raise ValueError(f"keep must be 'pointer' or 'qubit', got {keep!r}")


def expectation(rho: np.ndarray, obs: np.ndarray) -> float:
    """Tr(rho obs) for a Hermitian 2x2 observable; the imaginary residue is discarded."""
    obs = np.asarray(obs, dtype=complex)
    if obs.shape != (2, 2):
        raise ValueError(f"observable must be 2x2, got {obs.shape}")
    if hermiticity_defect(obs) > HERMITICITY_TOL:
        raise ValueError("observable is not Hermitian")
    value = np.trace(np.asarray(rho, dtype=complex) @ obs)
    return float(value.real)


def matrix_sqrt_psd(m: np.ndarray) -> np.ndarray:
    """Hermitian square root with eigenvalues clamped at 0, so the result stays PSD."""
    vals, vecs = np.linalg.eigh(np.asarray(m, dtype=complex))
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def uhlmann_fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """Uhlmann fidelity F = (Tr sqrt(sqrt(rho) target sqrt(rho)))^2, clipped to [0, 1].

    For a pure target |psi><psi| this reduces to <psi|rho|psi>.  Inputs must be
    valid density matrices.
    """
    for name, m in (("rho", rho), ("target", target)):
        report = validate_density_matrix(m)
        if not report.passed:
            raise ValueError(f"{name} is not a valid density matrix: {report}")
    rho = np.asarray(rho, dtype=complex)
    target = np.asarray(target, dtype=complex)
    # For a pure argument the formula reduces exactly to the overlap
    # Tr(rho target); the eigen route would square-root near-zero eigenvalues
    # and lose half the working precision there.
    for a, b in ((rho, target), (target, rho)):
        if abs(np.trace(b @ b).real - 1.0) <= 1e-12:
            return min(max(float(np.trace(a @ b).real), 0.0), 1.0)
    inner = matrix_sqrt_psd(rho) @ target @ matrix_sqrt_psd(rho)
    vals = np.linalg.eigvalsh(inner)
    f = float(np.sum(np.sqrt(np.clip(vals, 0.0, None))) ** 2)
    return min(max(f, 0.0), 1.0)


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation of m from its adjoint."""
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m - m.conj().T)))


@dataclass(frozen=True)
class ValidationReport:
    """Defect summary for a candidate density matrix."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    passed: bool

    def __str__(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{status} (hermiticity defect {self.hermiticity_defect:.3g}, "
            f"trace defect {self.trace_defect:.3g}, "
            f"min eigenvalue {self.min_eigenvalue:.3g})"
        )


def validate_density_matrix(
    m: np.ndarray,
    herm_tol: float = HERMITICITY_TOL,
    trace_tol: float = TRACE_TOL,
    psd_tol: float = PSD_TOL,
) -> ValidationReport:
    """Report Hermiticity, trace, and positivity defects of a square matrix."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    herm = hermiticity_defect(m)
    trace = float(abs(np.trace(m) - 1.0))
    # Eigenvalues of the symmetrized matrix: round-off antisymmetry must not
    # masquerade as a positivity failure.
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))))
    passed = herm <= herm_tol and trace <= trace_tol and min_eig >= -psd_tol
    return ValidationReport(herm, trace, min_eig, passed)
