"""Two-question interference in two dimensions.

Closed forms for the overlap and the follow-up answer probability when a
first (leading) question is asked unconditionally before a second one, the
spin-1/2 order-effect demonstration, and the (p, q) region scan showing
where the leading question inflates the follow-up answer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import frame_projectors
from .states import (DensityMatrix, ProbabilityVector, lueders_update,
                     outcome_probabilities, square_root_embed)


def _check_unit_interval(name: str, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name}={x} outside [0, 1]")
    return x


def overlap_alpha(p: float, q: float) -> float:
    """Squared overlap of the two yes-states for yes-probabilities p and q."""
    p = _check_unit_interval("p", p)
    q = _check_unit_interval("q", q)
    root = np.sqrt(p * q) + np.sqrt((1.0 - p) * (1.0 - q))
    return float(root * root)


def sequential_probability(p: float, q: float) -> float:
    """Yes-probability of the second question after the first one is asked.

    The first question has yes-probability p on the initial state, the
    second would have had q; the returned value is the second question's
    yes-probability after the first measurement has taken place.
    """
    p = _check_unit_interval("p", p)
    q = _check_unit_interval("q", q)
    return float(2 * p * (p - 1) * (2 * q - 1) + q
                 + 2 * (2 * p - 1) * np.sqrt(p * q * (1 - p) * (1 - q)))


def _second_question_frame(p: float, q: float) -> np.ndarray:
    # angle of the second question's yes-state relative to the first basis,
    # branch chosen so both amplitude overlaps are nonnegative square roots
    a = np.arccos(np.clip(np.sqrt(p), 0.0, 1.0))
    c = a - np.arccos(np.clip(np.sqrt(q), 0.0, 1.0))
    return np.array([[np.cos(c), -np.sin(c)],
                     [np.sin(c), np.cos(c)]], dtype=np.complex128)


def sequential_probability_via_states(p: float, q: float) -> float:
    """Same quantity through the explicit state pipeline (the ground truth).

    Builds the initial pure state by the square-root embedding, applies the
    measurement update of the first question, and reads off the second
    question's statistics from the updated density matrix.
    """
    p = _check_unit_interval("p", p)
    q = _check_unit_interval("q", q)
    psi = square_root_embed(ProbabilityVector(np.array([p, 1.0 - p])))
    rho = DensityMatrix.from_pure(psi)
    rho = lueders_update(rho, frame_projectors(np.eye(2)))
    frame = _second_question_frame(p, q)
    return float(outcome_probabilities(rho, frame).probs[0])


@dataclass(frozen=True)
class InterferenceResult:
    """One (p, q) evaluation of the leading-question effect."""

    p: float
    q: float
    alpha: float
    p_f_b: float
    delta: float
    in_region: bool


def interference_point(p: float, q: float) -> InterferenceResult:
    alpha = overlap_alpha(p, q)
    pfb = sequential_probability(p, q)
    return InterferenceResult(
        p=p, q=q, alpha=alpha, p_f_b=pfb, delta=pfb - q,
        in_region=bool(p > pfb > q))


def interference_region_scan(grid_n: int) -> list[InterferenceResult]:
    """Uniform grid_n x grid_n scan of cell centers over (0, 1) x (0, 1).

    Row-major: p varies in the outer loop, q in the inner one.  Cells are
    independent; the boundary values p, q in {0, 1} are excluded by the
    cell-center sampling.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    centers = (np.arange(grid_n) + 0.5) / grid_n
    return [interference_point(float(p), float(q))
            for p in centers for q in centers]


def spin_order_demo() -> tuple[float, float]:
    """P(X=UP) for a spin-1/2 prepared as the x-up state, with and without
    an intervening y-spin measurement.  Returns (1, 1/2) up to rounding."""
    s = 1.0 / np.sqrt(2.0)
    x_frame = np.array([[s, s], [s, -s]], dtype=np.complex128)
    y_frame = np.array([[s, s], [1j * s, -1j * s]], dtype=np.complex128)

    x_up = x_frame[:, 0]
    rho = DensityMatrix(np.outer(x_up, x_up.conj()))
    direct = float(outcome_probabilities(rho, x_frame).probs[0])

    rho_after_y = lueders_update(rho, frame_projectors(y_frame))
    after = float(outcome_probabilities(rho_after_y, x_frame).probs[0])
    return direct, after
