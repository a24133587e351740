"""Dense complex linear algebra on small Hilbert spaces (dimensions 2 to 243).

Matrices and frames are plain numpy arrays of dtype complex128.  An
orthonormal frame is stored as a unitary matrix whose *columns* are the
frame vectors.  Everything here is a pure function over immutable inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d complex128 array."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={a.ndim}")
    return a


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    eye = np.eye(a.shape[0])
    return bool(np.max(np.abs(a.conj().T @ a - eye)) <= tol)


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(m)
    if not is_hermitian(a, tol):
        return False
    return bool(np.min(np.linalg.eigvalsh(a)) >= -tol)


def kron(a, b) -> np.ndarray:
    """Kronecker product; the left factor indexes the blocks."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, dims, keep: int) -> np.ndarray:
    """Trace out every tensor factor of ``rho`` except ``dims[keep]``.

    ``dims`` lists the factor dimensions whose product must equal the side
    of the square matrix ``rho``.
    """
    a = as_matrix(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if a.shape != (total, total):
        raise ValueError(
            f"matrix shape {a.shape} does not match factor dims {dims}")
    n = len(dims)
    if not 0 <= keep < n:
        raise ValueError(f"keep index {keep} out of range for {n} factors")

    t = a.reshape(dims + dims)
    # shared letter on traced factors, distinct row/col letters on the kept one
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[:n])
    row[keep] = "y"
    col[keep] = "z"
    sub = "".join(row) + "".join(col) + "->yz"
    return np.einsum(sub, t)


@dataclass(frozen=True)
class FrameParameters:
    """Three angles and three phases specifying an orthonormal frame in C^3."""

    angles: tuple[float, float, float]
    phases: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(x) for x in self.angles))
        object.__setattr__(self, "phases", tuple(float(x) for x in self.phases))
        if len(self.angles) != 3 or len(self.phases) != 3:
            raise ValueError("FrameParameters needs 3 angles and 3 phases")

    @classmethod
    def from_vector(cls, x) -> "FrameParameters":
        x = np.asarray(x, dtype=float)
        if x.shape != (6,):
            raise ValueError("parameter vector must have 6 entries")
        return cls(tuple(x[:3]), tuple(x[3:]))

    def to_vector(self) -> np.ndarray:
        return np.array(self.angles + self.phases, dtype=float)


def _plane_rotation(theta: float, i: int, j: int) -> np.ndarray:
    r = np.eye(3, dtype=np.complex128)
    c, s = np.cos(theta), np.sin(theta)
    r[i, i] = c
    r[j, j] = c
    r[i, j] = -s
    r[j, i] = s
    return r


def frame_from_parameters(params: FrameParameters, dim: int = 3) -> np.ndarray:
    """Orthonormal frame in C^3 from three plane rotations with phases.

    The factors act on planes (1,2), (1,3) and (2,3) in that order.  The
    phase of the (1,2) factor enters as a left diagonal phase and the phase
    of the (2,3) factor as a right diagonal phase, so those two phases never
    change the moduli of the frame components: they are the two redundant
    phase parameters for diagonal-state statistics.  All-zero parameters
    give the standard basis.
    """
    if dim != 3:
        raise ValueError("only 3-dimensional frames are supported")
    t1, t2, t3 = params.angles
    p1, p2, p3 = params.phases

    f12 = np.diag([np.exp(1j * p1), np.exp(-1j * p1), 1.0]) @ _plane_rotation(t1, 0, 1)

    c2, s2 = np.cos(t2), np.sin(t2)
    f13 = np.eye(3, dtype=np.complex128)
    f13[0, 0] = c2
    f13[2, 2] = c2
    f13[0, 2] = -np.exp(1j * p2) * s2
    f13[2, 0] = np.exp(-1j * p2) * s2

    f23 = _plane_rotation(t3, 1, 2) @ np.diag([1.0, np.exp(1j * p3), np.exp(-1j * p3)])

    return f12 @ f13 @ f23


def frame_projectors(frame) -> list[np.ndarray]:
    """Rank-1 projectors onto the columns of ``frame``."""
    u = as_matrix(frame)
    return [np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1])]
