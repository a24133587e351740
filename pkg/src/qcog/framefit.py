"""Fit explicit orthonormal frames reproducing a question chain's statistics.

Implements the isolated-first-question scheme: the first question sits on
its own tensor factor of a product state, the second question's basis is
taken as the reference frame, and every later question is an orthonormal
frame fitted so the frame expectations of the current density matrix equal
the observed answer distribution.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import itertools

import numpy as np
from scipy.optimize import least_squares

from .feasibility import SurveyChain, chain_feasibility, majorization_check
from .hilbert import FrameParameters, frame_from_parameters, frame_projectors
from .states import (DensityMatrix, ProbabilityVector, lueders_update,
                     outcome_probabilities, square_root_embed)

TWO_PI = 2.0 * np.pi


class InfeasibleTargetError(ValueError):
    """Target distribution is not majorized by the current spectrum."""

    def __init__(self, message: str, slack: float, transition=None):
        super().__init__(message)
        self.slack = slack
        self.transition = transition


class ConvergenceError(RuntimeError):
    """No multi-start reached the residual threshold."""


@dataclass(frozen=True)
class FitOptions:
    seed: int = 0
    n_starts: int = 32
    residual_threshold: float = 1e-18
    tol: float = 0.0
    max_nfev: int = 2000


@dataclass(frozen=True)
class TransitionFit:
    frame: np.ndarray
    residual: float
    iterations: int
    parameters: FrameParameters


def _eigenbasis(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # diagonal states keep their own ordering; otherwise fall back to eigh
    off = m - np.diag(np.diag(m))
    if np.max(np.abs(off)) < 1e-13:
        return np.diag(m).real.copy(), np.eye(m.shape[0], dtype=np.complex128)
    lam, v = np.linalg.eigh(m)
    return lam, v


def _expectation_residuals(x: np.ndarray, lam: np.ndarray,
                           target: np.ndarray) -> np.ndarray:
    w = frame_from_parameters(FrameParameters.from_vector(x))
    achieved = (lam[:, None] * (np.abs(w) ** 2)).sum(axis=0)
    return achieved - target


def fit_transition(rho: DensityMatrix, target: ProbabilityVector,
                   options: FitOptions | None = None) -> TransitionFit:
    """Find a frame whose expectations on ``rho`` match ``target``.

    Multi-start derivative-based least squares over the six frame
    parameters, evaluated in the eigenbasis of ``rho`` (where the two
    redundant phases drop out of the objective).  Among converged starts
    the lexicographically smallest parameter vector wins.
    """
    options = options or FitOptions()
    if rho.dim != 3 or target.dim != 3:
        raise ValueError("frame fitting works on 3-dimensional questions")
    lam, v = _eigenbasis(np.asarray(rho.matrix))
    t = target.probs

    feasible, slack = majorization_check(lam, t, options.tol)
    if not feasible:
        raise InfeasibleTargetError(
            f"target {t.tolist()} not majorized by spectrum "
            f"{np.sort(lam)[::-1].tolist()} (slack {slack:.6g})", slack)

    rng = np.random.default_rng(options.seed)
    starts = [np.zeros(6)]
    starts += [rng.uniform(0.0, TWO_PI, size=6)
               for _ in range(max(0, options.n_starts - 1))]

    converged: list[tuple[np.ndarray, float, int]] = []
    for k, x0 in enumerate(starts):
        r0 = _expectation_residuals(x0, lam, t)
        sse0 = float(r0 @ r0)
        if sse0 <= options.residual_threshold:
            converged.append((np.mod(x0, TWO_PI), sse0, 0))
            if k == 0:
                break
            continue
        sol = least_squares(
            _expectation_residuals, x0, args=(lam, t), method="trf",
            xtol=5e-16, ftol=5e-16, gtol=1e-14, max_nfev=options.max_nfev)
        sse = float(sol.fun @ sol.fun)
        if sse <= options.residual_threshold:
            converged.append((np.mod(sol.x, TWO_PI), sse, int(sol.nfev)))

    if not converged:
        raise ConvergenceError(
            f"no solution below {options.residual_threshold} after "
            f"{len(starts)} starts")

    params, sse, nfev = min(converged, key=lambda c: tuple(c[0]))
    fp = FrameParameters.from_vector(params)
    frame = v @ frame_from_parameters(fp)
    return TransitionFit(frame=frame, residual=sse, iterations=nfev,
                         parameters=fp)


def _nearest_point_qp(t: np.ndarray, g: np.ndarray, h: np.ndarray,
                      a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # min 1/2 ||y - t||^2  s.t.  a y = b,  g y <= h; exact active-set
    # enumeration (the problem is tiny: dim 3, a handful of constraints)
    n = t.size
    n_ineq = g.shape[0]
    best = None
    best_obj = np.inf
    for r in range(n_ineq + 1):
        for active in itertools.combinations(range(n_ineq), r):
            rows = np.vstack([a, g[list(active)]]) if active else a
            rhs = np.concatenate([b, h[list(active)]]) if active else b
            m = rows.shape[0]
            kkt = np.block([[np.eye(n), rows.T],
                            [rows, np.zeros((m, m))]])
            try:
                sol = np.linalg.solve(kkt, np.concatenate([t, rhs]))
            except np.linalg.LinAlgError:
                continue
            y, mult = sol[:n], sol[n:]
            if np.any(g @ y - h > 1e-12):
                continue
            if np.any(mult[a.shape[0]:] < -1e-12):
                continue
            obj = float(((y - t) ** 2).sum())
            if obj < best_obj - 1e-15:
                best, best_obj = y, obj
    if best is None:
        raise RuntimeError("projection QP found no feasible point")
    return best


def project_to_majorized(target: ProbabilityVector, current,
                         ) -> tuple[ProbabilityVector, float, float]:
    """Nearest (Euclidean) distribution to ``target`` that is majorized by
    ``current``.  Returns (adjusted, max componentwise adjustment,
    Euclidean adjustment norm)."""
    t = np.asarray(target.probs, dtype=float)
    c = np.sort(np.asarray(getattr(current, "probs", current), dtype=float))[::-1]
    order = np.argsort(-t, kind="stable")
    ts = t[order]
    n = t.size
    bounds_cum = np.cumsum(c)

    # in sorted (descending) coordinates: partial sums bounded by those of
    # the current spectrum, entries ordered and nonnegative, total fixed
    g_rows, h_vals = [], []
    for k in range(n - 1):
        row = np.zeros(n)
        row[:k + 1] = 1.0
        g_rows.append(row)
        h_vals.append(bounds_cum[k])
    for k in range(n - 1):
        row = np.zeros(n)
        row[k], row[k + 1] = -1.0, 1.0
        g_rows.append(row)
        h_vals.append(0.0)
    row = np.zeros(n)
    row[-1] = -1.0
    g_rows.append(row)
    h_vals.append(0.0)

    ys = _nearest_point_qp(ts, np.array(g_rows), np.array(h_vals),
                           np.ones((1, n)), np.array([1.0]))
    adjusted = np.empty_like(t)
    adjusted[order] = ys
    adjusted = np.clip(adjusted, 0.0, None)
    adjusted /= adjusted.sum()
    _, slack = majorization_check(c, adjusted, 0.0)
    if slack > 1e-12:
        raise RuntimeError(f"projection failed to reach the feasible set "
                           f"(slack {slack:.3g})")
    delta = adjusted - t
    return (ProbabilityVector(adjusted),
            float(np.max(np.abs(delta))),
            float(np.linalg.norm(delta)))


@dataclass(frozen=True)
class FitResult:
    """Frames and diagnostics for one fitted chain.

    ``frames[0]`` models the base question (standard basis); later entries
    are fitted.  ``achieved`` covers every question of the chain, including
    the isolated first one when present.
    """

    label: str
    isolate_first: bool
    base_index: int
    isolated_distribution: ProbabilityVector | None
    frames: tuple
    residuals: tuple
    iterations: tuple
    achieved: tuple
    projection_distances: tuple
    seed: int

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


def fit_chain(chain: SurveyChain, isolate_first: bool, tol: float,
              options: FitOptions | None = None) -> FitResult:
    """Fit frames for every question after the base one.

    With ``isolate_first`` the first question is carried exactly on its own
    tensor factor and the second question's basis becomes the reference;
    otherwise the first question itself is the reference.  Targets whose
    majorization slack is positive but within ``tol`` are first projected
    to the feasible set and the adjustment distance recorded.
    """
    options = options or FitOptions()
    base_index = 1 if isolate_first else 0
    if len(chain.questions) <= base_index:
        raise ValueError("chain too short for this fitting mode")
    if chain.dim != 3:
        raise ValueError("frame fitting works on 3-dimensional questions")

    report = chain_feasibility(chain, isolate_first, tol)
    for tr in report.transitions:
        if not tr.feasible_at_tol:
            raise InfeasibleTargetError(
                f"transition Q{tr.from_index + 1}->Q{tr.to_index + 1} of "
                f"{chain.label!r} is infeasible: majorization slack "
                f"{tr.majorization_slack:.4g} exceeds tol {tol}",
                tr.majorization_slack, transition=tr)

    questions = chain.questions
    base = questions[base_index]
    isolated = questions[0].probs if isolate_first else None

    rho = DensityMatrix.from_pure(square_root_embed(base.probs))
    frames = [np.eye(3, dtype=np.complex128)]
    achieved = list([isolated] if isolated is not None else [])
    residuals: list[float] = []
    iterations: list[int] = []
    projections = [0.0]

    ach_base = outcome_probabilities(rho, frames[0])
    achieved.append(ach_base)
    rho = lueders_update(rho, frame_projectors(frames[0]))

    for step, q in enumerate(questions[base_index + 1:], start=1):
        spectrum = np.linalg.eigvalsh(rho.matrix)
        _, slack = majorization_check(spectrum, q.probs.probs, 0.0)
        target = q.probs
        proj_dist = 0.0
        if slack > 0.0:
            target, proj_dist, _ = project_to_majorized(q.probs, spectrum)
        sub_options = dataclasses.replace(
            options, seed=[options.seed, step], tol=0.0)
        tf = fit_transition(rho, target, sub_options)
        frames.append(tf.frame)
        residuals.append(tf.residual)
        iterations.append(tf.iterations)
        projections.append(proj_dist)
        achieved.append(outcome_probabilities(rho, tf.frame))
        rho = lueders_update(rho, frame_projectors(tf.frame))

    return FitResult(
        label=chain.label,
        isolate_first=isolate_first,
        base_index=base_index,
        isolated_distribution=isolated,
        frames=tuple(frames),
        residuals=tuple(residuals),
        iterations=tuple(iterations),
        achieved=tuple(achieved),
        projection_distances=tuple(projections),
        seed=options.seed,
    )


def replay(fit: FitResult, chain: SurveyChain) -> list[ProbabilityVector]:
    """Recompute the sequential statistics of a fit from scratch.

    Uses only the state machinery: embed the base distribution, then for
    each frame read off the outcome probabilities and apply the measurement
    update.  The isolated first question, if any, is reproduced verbatim.
    """
    base = chain.questions[fit.base_index]
    rho = DensityMatrix.from_pure(square_root_embed(base.probs))
    out: list[ProbabilityVector] = []
    if fit.isolated_distribution is not None:
        out.append(fit.isolated_distribution)
    for frame in fit.frames:
        out.append(outcome_probabilities(rho, frame))
        rho = lueders_update(rho, frame_projectors(frame))
    return out


def fit_result_to_dict(fit: FitResult) -> dict:
    """JSON-ready view; frames as row-major (re, im) pairs."""
    def frame_json(u: np.ndarray) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in u]

    return {
        "label": fit.label,
        "isolate_first": fit.isolate_first,
        "seed": fit.seed,
        "isolated_distribution": (None if fit.isolated_distribution is None
                                  else fit.isolated_distribution.probs.tolist()),
        "frames": [frame_json(u) for u in fit.frames],
        "residuals": list(fit.residuals),
        "iterations": list(fit.iterations),
        "achieved": [p.probs.tolist() for p in fit.achieved],
        "projection_distances": list(fit.projection_distances),
    }
