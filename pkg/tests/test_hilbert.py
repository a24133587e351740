import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcog.hilbert import (FrameParameters, frame_from_parameters,
                          frame_projectors, is_hermitian, is_psd, is_unitary,
                          kron, partial_trace)

from .conftest import haar_unitary, random_density


class TestPredicates:
    def test_hermitian(self):
        assert is_hermitian(np.array([[1.0, 1j], [-1j, 2.0]]))
        assert not is_hermitian(np.array([[1.0, 1j], [1j, 2.0]]))

    def test_unitary(self):
        rng = np.random.default_rng(3)
        assert is_unitary(haar_unitary(rng, 4), 1e-12)
        assert not is_unitary(np.diag([1.0, 2.0]))

    def test_psd(self):
        assert is_psd(np.diag([0.0, 1.0]))
        assert not is_psd(np.diag([-0.1, 1.1]))


class TestKron:
    def test_identity(self):
        assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))

    def test_diagonal_blocks(self):
        out = kron(np.diag([1.0, 2.0]), np.eye(2))
        assert np.array_equal(out, np.diag([1.0, 1.0, 2.0, 2.0]))

    def test_kron_of_unitaries_is_unitary(self):
        # oracle: check U^dagger U = I on the product directly
        rng = np.random.default_rng(7)
        u = kron(haar_unitary(rng, 3), haar_unitary(rng, 3))
        assert np.max(np.abs(u.conj().T @ u - np.eye(9))) < 1e-12

    def test_associative(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        c = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert np.allclose(kron(kron(a, b), c), kron(a, kron(b, c)),
                           atol=1e-12)


def _contract_oracle(rho, dims, keep):
    # independent index-by-index contraction, no einsum
    n = len(dims)
    d = dims[keep]
    out = np.zeros((d, d), dtype=complex)
    idx = [range(k) for k in dims]
    import itertools
    strides = np.cumprod(([1] + list(dims[::-1]))[:-1])[::-1]

    def flat(multi):
        return int(sum(m * s for m, s in zip(multi, strides)))

    for row in itertools.product(*idx):
        for j in range(d):
            col = list(row)
            col[keep] = j
            out[row[keep], j] += rho[flat(row), flat(col)]
    return out


class TestPartialTrace:
    def test_product_state(self):
        rng = np.random.default_rng(5)
        ra = random_density(rng, 2)
        rb = random_density(rng, 3)
        got = partial_trace(kron(ra, rb), [2, 3], keep=0)
        assert np.allclose(got, ra, atol=1e-12)

    def test_maximally_mixed(self):
        got = partial_trace(np.eye(9) / 9, [3, 3], keep=0)
        assert np.allclose(got, np.eye(3) / 3, atol=1e-14)

    def test_bell_state_marginals(self):
        psi = np.zeros(4, dtype=complex)
        psi[1] = psi[2] = 1 / np.sqrt(2)  # (|01> + |10>)/sqrt(2)
        rho = np.outer(psi, psi.conj())
        for keep in (0, 1):
            got = partial_trace(rho, [2, 2], keep)
            assert np.allclose(got, np.eye(2) / 2, atol=1e-14)
            assert np.allclose(got, _contract_oracle(rho, [2, 2], keep),
                               atol=1e-14)

    def test_trace_preserved(self):
        rng = np.random.default_rng(13)
        rho = random_density(rng, 12)
        red = partial_trace(rho, [2, 3, 2], keep=1)
        assert abs(np.trace(red) - np.trace(rho)) < 1e-12
        assert is_hermitian(red, 1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(5), [2, 3], keep=0)


class TestFrameFromParameters:
    def test_zero_parameters_standard_basis(self):
        u = frame_from_parameters(FrameParameters((0, 0, 0), (0, 0, 0)))
        assert np.array_equal(u, np.eye(3))

    def test_orthonormal_for_1000_random_draws(self):
        rng = np.random.default_rng(17)
        worst = 0.0
        for _ in range(1000):
            fp = FrameParameters(rng.uniform(0, 2 * np.pi, 3),
                                 rng.uniform(0, 2 * np.pi, 3))
            u = frame_from_parameters(fp)
            worst = max(worst, np.max(np.abs(u.conj().T @ u - np.eye(3))))
        assert worst < 1e-12

    def test_redundant_phases_leave_diagonal_expectations(self):
        rng = np.random.default_rng(19)
        angles = tuple(rng.uniform(0, 2 * np.pi, 3))
        mid = rng.uniform(0, 2 * np.pi)
        rho = np.diag(rng.uniform(0, 1, 3))
        rho /= np.trace(rho)
        expectations = []
        for _ in range(4):
            fp = FrameParameters(angles, (rng.uniform(0, 2 * np.pi), mid,
                                          rng.uniform(0, 2 * np.pi)))
            u = frame_from_parameters(fp)
            expectations.append(np.einsum("ij,ik,kj->j", u.conj(), rho, u).real)
        for e in expectations[1:]:
            assert np.allclose(e, expectations[0], atol=1e-12)

    @given(st.lists(st.floats(-10, 10), min_size=6, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_gram_matrix_property(self, xs):
        fp = FrameParameters(tuple(xs[:3]), tuple(xs[3:]))
        u = frame_from_parameters(fp)
        gram = u.conj().T @ u
        assert np.max(np.abs(gram - np.eye(3))) < 1e-12

    def test_projectors_complete(self):
        fp = FrameParameters((0.3, 1.2, 2.5), (0.7, 0.1, 1.9))
        projs = frame_projectors(frame_from_parameters(fp))
        assert np.allclose(sum(projs), np.eye(3), atol=1e-12)
