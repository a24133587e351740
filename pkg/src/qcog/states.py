"""States of mind as probability vectors, pure states and density matrices.

Implements the square-root embedding of answer distributions, projective and
degenerate measurement updates of the von Neumann-Lueders type, and POVM
outcome statistics.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import as_matrix, frame_projectors, is_hermitian, is_psd

STRUCTURAL_TOL = 1e-10


class StateError(ValueError):
    """A state object violates its structural invariants."""


class MeasurementError(ValueError):
    """A measurement description is invalid (incomplete, non-orthogonal...)."""


@dataclass(frozen=True)
class ProbabilityVector:
    """Nonnegative reals summing to 1; one question's answer distribution."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).copy()
        if p.ndim != 1 or p.size == 0:
            raise StateError("probabilities must form a nonempty 1-d vector")
        if np.min(p) < -1e-12:
            raise StateError(f"negative probability {np.min(p)}")
        p = np.clip(p, 0.0, None)
        if abs(p.sum() - 1.0) > 1e-9:
            raise StateError(f"probabilities sum to {p.sum()}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_percents(cls, values) -> "ProbabilityVector":
        """Divide by 100 and renormalize; reject if the sum is off by > 1%."""
        v = np.asarray(values, dtype=float)
        if np.min(v) < 0:
            raise StateError(f"negative percentage in {list(v)}")
        s = v.sum()
        if abs(s - 100.0) > 1.0:
            raise StateError(f"percentages sum to {s}, outside [99, 101]")
        return cls(v / s)

    @property
    def dim(self) -> int:
        return self.probs.size

    def __len__(self) -> int:
        return self.probs.size


@dataclass(frozen=True)
class PureState:
    """Unit-norm complex amplitude vector with a label naming its basis."""

    amplitudes: np.ndarray
    basis_label: str = "standard"

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128).copy()
        if a.ndim != 1 or a.size == 0:
            raise StateError("amplitudes must form a nonempty 1-d vector")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > 1e-6:
            raise StateError(f"amplitude norm {norm} too far from 1")
        a /= norm
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, trace-1 matrix; the post-measurement state of mind."""

    matrix: np.ndarray
    tol: float = field(default=STRUCTURAL_TOL, compare=False)

    def __post_init__(self):
        m = as_matrix(self.matrix).copy()
        if m.shape[0] != m.shape[1]:
            raise StateError("density matrix must be square")
        if not is_hermitian(m, self.tol):
            raise StateError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > self.tol:
            raise StateError(f"trace is {np.trace(m).real}, not 1")
        if not is_psd(m, self.tol):
            raise StateError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix":
        a = state.amplitudes
        return cls(np.outer(a, a.conj()))

    @classmethod
    def diagonal(cls, p: ProbabilityVector) -> "DensityMatrix":
        return cls(np.diag(p.probs).astype(np.complex128))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


@dataclass(frozen=True)
class Povm:
    """Positive effects summing to the identity."""

    effects: tuple

    def __post_init__(self):
        effects = tuple(as_matrix(e) for e in self.effects)
        if not effects:
            raise MeasurementError("POVM needs at least one effect")
        dim = effects[0].shape[0]
        total = np.zeros((dim, dim), dtype=np.complex128)
        for e in effects:
            if e.shape != (dim, dim):
                raise MeasurementError("POVM effects have mismatched shapes")
            if not is_psd(e, STRUCTURAL_TOL):
                raise MeasurementError("POVM effect is not PSD")
            total += e
        if np.max(np.abs(total - np.eye(dim))) > STRUCTURAL_TOL:
            raise MeasurementError("POVM effects do not sum to the identity")
        object.__setattr__(self, "effects", effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]


def square_root_embed(p: ProbabilityVector, basis_label: str = "standard") -> PureState:
    """Embed a distribution as the vector of its nonnegative square roots."""
    return PureState(np.sqrt(p.probs).astype(np.complex128), basis_label)


def outcome_probabilities(state: DensityMatrix, frame) -> ProbabilityVector:
    """Answer distribution <Q_i|rho|Q_i> of a question asked in ``frame``."""
    u = as_matrix(frame)
    if u.shape != (state.dim, state.dim):
        raise MeasurementError(
            f"frame shape {u.shape} does not match state dim {state.dim}")
    p = np.einsum("ij,ik,kj->j", u.conj(), state.matrix, u).real
    return ProbabilityVector(p)


def _check_projective(projectors, dim: int, tol: float) -> None:
    total = np.zeros((dim, dim), dtype=np.complex128)
    for i, p in enumerate(projectors):
        if p.shape != (dim, dim):
            raise MeasurementError("projector dimension mismatch")
        for j, q in enumerate(projectors):
            expect = p if i == j else 0.0
            if np.max(np.abs(p @ q - expect)) > tol:
                raise MeasurementError(
                    f"projectors {i},{j} are not orthogonal idempotents")
        total += p
    if np.max(np.abs(total - np.eye(dim))) > tol:
        raise MeasurementError("projectors do not sum to the identity")


def lueders_update(state: DensityMatrix, projectors,
                   tol: float = STRUCTURAL_TOL) -> DensityMatrix:
    """Post-measurement state sum_i P_i rho P_i for a complete orthogonal set.

    Projectors may have rank > 1 (degenerate questions).
    """
    projs = [as_matrix(p) for p in projectors]
    _check_projective(projs, state.dim, tol)
    out = sum(p @ state.matrix @ p for p in projs)
    out = (out + out.conj().T) / 2
    return DensityMatrix(out)


def measure_frame(state: DensityMatrix, frame) -> DensityMatrix:
    """Lueders update for a non-degenerate question given as a frame."""
    return lueders_update(state, frame_projectors(frame))


def povm_probabilities(state: DensityMatrix, povm: Povm) -> ProbabilityVector:
    """Outcome distribution trace(rho E_i) of a generalized measurement."""
    if povm.dim != state.dim:
        raise MeasurementError(
            f"POVM dim {povm.dim} does not match state dim {state.dim}")
    p = np.array([np.trace(state.matrix @ e).real for e in povm.effects])
    return ProbabilityVector(p)


def degenerate_yes_probability(state: DensityMatrix, subspace_basis,
                               tol: float = STRUCTURAL_TOL) -> float:
    """Probability of the pooled 'yes' answer of a degenerate binary question.

    ``subspace_basis`` spans the subspace whose projector defines 'yes'.
    """
    vecs = [np.asarray(v, dtype=np.complex128) for v in subspace_basis]
    gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    if np.max(np.abs(gram - np.eye(len(vecs)))) > tol:
        raise MeasurementError("subspace basis is not orthonormal")
    proj = sum(np.outer(v, v.conj()) for v in vecs)
    value = float(np.trace(state.matrix @ proj).real)
    return float(np.clip(value, 0.0, 1.0))
