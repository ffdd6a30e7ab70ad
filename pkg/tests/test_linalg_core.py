"""Dense complex kernel: arithmetic, rank, solves, certificates."""

import numpy as np
import pytest

from ybuskit import (
    Branch,
    Network,
    Shunt,
    SingularMatrixError,
    StructuralError,
    full_rank_certificate,
    lu_solve,
    numerical_rank,
)
from ybuskit.linalg_core import add, as_cmatrix, matmul, negate, sub, transpose
from ybuskit.ybus import assemble
from oracles import exact_assemble, exact_rank, random_rational_network


class TestBasicOps:
    def test_identity_multiplication(self):
        b = np.array([[1 + 2j, 3], [0, -1j]])
        np.testing.assert_array_equal(matmul(np.eye(2), b), b)

    def test_dimension_mismatch_is_structural(self):
        with pytest.raises(StructuralError):
            matmul(np.ones((2, 3)), np.ones((2, 3)))
        with pytest.raises(StructuralError):
            add(np.ones((2, 2)), np.ones((3, 3)))

    def test_transpose_does_not_conjugate(self):
        a = np.array([[1 + 1j, 2j], [3, 4 - 4j]])
        t = transpose(a)
        assert t[0, 1] == 3 + 0j
        assert t[1, 0] == 2j  # a plain transpose keeps the imaginary part

    def test_transpose_is_an_involution(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
        np.testing.assert_array_equal(transpose(transpose(a)), a)

    def test_add_sub_negate_roundtrip(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = rng.standard_normal((3, 3)) * 1j
        np.testing.assert_array_equal(sub(add(a, b), b), (a + b) - b)
        np.testing.assert_array_equal(negate(negate(a)), a)

    def test_non_finite_entries_rejected(self):
        with pytest.raises(StructuralError):
            as_cmatrix([[1.0, float("nan")]])
        with pytest.raises(StructuralError):
            as_cmatrix([[float("inf"), 0.0]])

    def test_non_two_dimensional_rejected(self):
        with pytest.raises(StructuralError):
            as_cmatrix([1.0, 2.0])


class TestNumericalRank:
    def test_identity(self):
        assert numerical_rank(np.eye(3)).rank == 3

    def test_zero_matrix(self):
        r = numerical_rank(np.zeros((2, 2)))
        assert r.rank == 0

    def test_rank_counts_values_above_tolerance(self):
        r = numerical_rank(np.diag([1.0, 1e-3, 1e-20]))
        assert r.rank == int(np.count_nonzero(r.singular_values > r.tolerance_used))
        assert r.rank == 2

    def test_fixed_tolerance_override(self):
        m = np.diag([1.0, 1e-3])
        assert numerical_rank(m, tol=1e-2).rank == 1
        assert numerical_rank(m, tol=1e-6).rank == 2

    def test_path_matrix_rank_matches_exact_elimination(self):
        net = Network(4, branches=tuple(Branch(i, i + 1, 1 + 0j) for i in range(3)))
        y = assemble(net)
        assert numerical_rank(y.matrix).rank == 3
        assert exact_rank(exact_assemble(net)) == 3

    def test_random_rational_matrices_match_exact_rank(self):
        rng = np.random.default_rng(42)
        for k in range(20):
            n = int(rng.integers(2, 8))
            nodes, branches, shunts = random_rational_network(
                rng, n, extra_edges=int(rng.integers(0, 3)),
                shunt_count=int(rng.integers(0, n + 1)))
            net = Network(
                nodes,
                tuple(Branch(i, j, y) for i, j, y in branches),
                tuple(Shunt(v, y) for v, y in shunts),
            )
            got = numerical_rank(assemble(net).matrix).rank
            want = exact_rank(exact_assemble(net))
            assert got == want, f"instance {k}: numerical {got} vs exact {want}"


class TestLuSolve:
    def test_scalar_case(self):
        res = lu_solve([[2.0]], [[4.0]])
        np.testing.assert_array_equal(res.solution, [[2.0 + 0j]])
        assert res.relative_residual == 0.0

    def test_identity_returns_rhs(self):
        rng = np.random.default_rng(3)
        b = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        res = lu_solve(np.eye(4), b)
        np.testing.assert_allclose(res.solution, b, rtol=0, atol=0)

    def test_random_complex_systems_meet_residual_contract(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
            b = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            res = lu_solve(a, b)
            # multiply back: the oracle for the reported residual
            direct = np.linalg.norm(a @ res.solution - b) / np.linalg.norm(b)
            assert res.relative_residual <= 1e-12
            assert abs(res.relative_residual - direct) <= 1e-15
            assert np.isfinite(res.condition_estimate)

    def test_complex_symmetric_non_hermitian_instance(self):
        # symmetric under plain transpose, NOT equal to its conjugate transpose
        rng = np.random.default_rng(9)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        a = a + a.T
        assert np.allclose(a, a.T)
        assert not np.allclose(a, a.conj().T)
        b = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert lu_solve(a, b).relative_residual <= 1e-12

    def test_exactly_singular_matrix_names_the_pivot(self):
        with pytest.raises(SingularMatrixError) as err:
            lu_solve(np.zeros((2, 2)), np.ones(2))
        assert err.value.pivot_index is not None

    def test_shape_mismatch(self):
        with pytest.raises(StructuralError):
            lu_solve(np.eye(3), np.ones(4))
        with pytest.raises(StructuralError):
            lu_solve(np.ones((2, 3)), np.ones(2))

    def test_vector_rhs_keeps_shape(self):
        res = lu_solve(np.eye(3), np.ones(3))
        assert res.solution.shape == (3,)


def _rank_r_real(rng, m, n, r):
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


def _well_conditioned(rng, n, complex_=False):
    """Invertible matrix with condition at most 1e6 by construction."""
    def gauss(shape):
        g = rng.standard_normal(shape)
        return g + 1j * rng.standard_normal(shape) if complex_ else g

    q1, _ = np.linalg.qr(gauss((n, n)))
    q2, _ = np.linalg.qr(gauss((n, n)))
    s = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), size=n))
    return q1 @ np.diag(s) @ q2


class TestRankUnderProducts:
    def test_gram_product_preserves_rank_of_real_matrices(self):
        rng = np.random.default_rng(101)
        for _ in range(100):
            m = int(rng.integers(2, 10))
            n = int(rng.integers(2, 10))
            r = int(rng.integers(1, min(m, n) + 1))
            mat = _rank_r_real(rng, m, n, r)
            assert numerical_rank(mat).rank == r
            assert numerical_rank(mat.T @ mat).rank == r

    def test_gram_product_can_lose_rank_for_complex_matrices(self):
        # the reason the real restriction above exists
        m = np.array([[1.0], [1j]])
        assert numerical_rank(m).rank == 1
        assert numerical_rank(m.T @ m).rank == 0

    def test_invertible_factors_preserve_rank(self):
        rng = np.random.default_rng(202)
        for k in range(100):
            m = int(rng.integers(2, 9))
            n = int(rng.integers(2, 9))
            r = int(rng.integers(1, min(m, n) + 1))
            use_complex = k % 2 == 1
            mat = _rank_r_real(rng, m, n, r).astype(complex)
            if use_complex:
                mat = mat + 1j * _rank_r_real(rng, m, n, r)
            rank0 = numerical_rank(mat).rank
            left = _well_conditioned(rng, m, complex_=use_complex)
            right = _well_conditioned(rng, n, complex_=use_complex)
            assert numerical_rank(left @ mat).rank == rank0
            assert numerical_rank(mat @ right).rank == rank0


class TestFullRankCertificate:
    def test_invertible_matrix_passes_both_routes(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        lu = full_rank_certificate(a)
        svd = full_rank_certificate(a, use_svd=True)
        assert lu.full_rank and svd.full_rank
        assert lu.method == "lu" and svd.method == "svd"
        assert np.isfinite(lu.condition_estimate)

    def test_exactly_singular_matrix_fails_with_pivot(self):
        cert = full_rank_certificate(np.zeros((3, 3)))
        assert not cert.full_rank
        assert cert.failed_pivot is not None

    def test_numerically_singular_matrix_fails(self):
        a = np.diag([1.0, 1.0, 1e-300])
        assert not full_rank_certificate(a).full_rank
        assert not full_rank_certificate(a, use_svd=True).full_rank

    def test_rectangular_input_rejected(self):
        with pytest.raises(StructuralError):
            full_rank_certificate(np.ones((2, 3)))
