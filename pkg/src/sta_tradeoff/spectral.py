"""Small dense Hermitian linear algebra.

Operators are plain complex ``ndarray`` objects of shape ``(d, d)`` and states
are complex vectors of shape ``(d,)``. The helpers here validate them and
provide the eigen-decomposition, the state-projected operator norm and the
angle between two pure states.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, ValidationError

HERMITIAN_ATOL = 1e-12
NORM_ATOL = 1e-10
MIN_GAP = 1e-12

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the matching eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def vector(self, k: int) -> np.ndarray:
        return self.eigenvectors[:, k]

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def as_hermitian(H, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``H`` as a complex square array, checking Hermiticity.

    The tolerance is absolute for matrices with entries of order one and
    scales with the largest entry otherwise.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValidationError(f"operator must be square, got shape {H.shape}")
    if H.shape[0] < 2:
        raise ValidationError("operator dimension must be at least 2")
    scale = max(1.0, float(np.max(np.abs(H))))
    asym = float(np.max(np.abs(H - H.conj().T)))
    if asym > atol * scale:
        raise ValidationError(f"operator is not Hermitian (max |H - H^dag| = {asym:.3e})")
    return H


def as_state(psi, dim: int | None = None, normalized: bool = True) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValidationError(f"state must be a vector, got shape {psi.shape}")
    if dim is not None and psi.shape[0] != dim:
        raise ValidationError(f"state dimension {psi.shape[0]} does not match operator dimension {dim}")
    if normalized:
        n = np.linalg.norm(psi)
        if abs(n * n - 1.0) > NORM_ATOL:
            raise ValidationError(f"state is not normalized (<psi|psi> = {n * n:.12g})")
    return psi


def fix_gauge(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude component is real and positive.

    Ties within 1e-12 go to the lowest index, which keeps the choice
    deterministic.
    """
    mags = np.abs(v)
    k = int(np.flatnonzero(mags >= mags.max() * (1.0 - 1e-12))[0])
    return v * (np.conj(v[k]) / mags[k])


def eigensystem_hermitian(H, min_gap: float = MIN_GAP) -> EigenSystem:
    """Eigen-decomposition of a Hermitian matrix with deterministic gauge.

    Raises
    ------
    ValidationError
        If ``H`` is not square or not Hermitian.
    DegeneracyError
        If any two consecutive eigenvalues differ by less than ``min_gap``.
    """
    H = as_hermitian(H)
    # symmetrize so eigh sees exactly Hermitian input
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    gaps = np.diff(w)
    if gaps.size and gaps.min() < min_gap:
        k = int(np.argmin(gaps))
        raise DegeneracyError(
            f"eigenvalues {w[k]:.15g} and {w[k + 1]:.15g} are degenerate (gap {gaps[k]:.3e} < {min_gap:.1e})"
        )
    V = np.column_stack([fix_gauge(V[:, k]) for k in range(V.shape[1])])
    return EigenSystem(eigenvalues=w, eigenvectors=V)


def state_norm_of_operator(A, psi) -> float:
    """Trace norm of ``A |psi><psi|``, which for a pure state is ``||A psi||``."""
    A = as_hermitian(A)
    psi = as_state(psi, dim=A.shape[0])
    return float(np.linalg.norm(A @ psi))


def bures_angle(psi0, psi1) -> float:
    """Angle ``arccos |<psi0|psi1>|`` between two pure states, in ``[0, pi/2]``.

    Evaluated as ``atan2(sin, cos)`` with the sine taken from the components
    orthogonal to each state; this stays accurate for nearly parallel states
    where ``arccos`` loses half the digits. The result is symmetric in its
    arguments to the last bit.
    """
    a = as_state(psi0)
    b = as_state(psi1, dim=a.shape[0])
    ab = np.vdot(a, b)
    ba = np.vdot(b, a)
    cos = 0.5 * (abs(ab) + abs(ba))
    sin = 0.5 * (np.linalg.norm(b - ab * a) + np.linalg.norm(a - ba * b))
    return float(np.arctan2(sin, cos))


def reconstruct(es: EigenSystem) -> np.ndarray:
    V = es.eigenvectors
    return (V * es.eigenvalues) @ V.conj().T
