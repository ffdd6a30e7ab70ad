"""Rank prediction and its two verification routes.

Oracle strategy: numerical verdicts are cross-checked against exact
Gaussian elimination over rational complex numbers (tests/oracles.py) on
networks with dyadic admittances, where float assembly is exact.
"""

import numpy as np
import pytest

from ybuskit import (
    AdmittanceMatrix,
    Branch,
    Network,
    PreconditionError,
    RankVerdict,
    Shunt,
    assemble,
    augment_virtual_ground,
    block_form_matrix,
    predict_rank,
    shunt_totals,
    verify_matrix_rank,
    verify_rank,
    verify_rank_via_augmentation,
)

from oracles import exact_assemble, exact_rank, random_rational_network


def path(n, y=1.0):
    return Network(n, tuple(Branch(i, i + 1, y) for i in range(n - 1)), ())


def star(n, y=1.0):
    return Network(n, tuple(Branch(0, i, y) for i in range(1, n)), ())


def with_shunts(net, *shunts):
    return Network(net.node_count, net.branches, net.shunts + tuple(shunts))


def _draw_net(rng, n, extra_edges, shunt_count):
    nodes, branches, shunts = random_rational_network(
        rng, n, extra_edges=extra_edges, shunt_count=shunt_count)
    return Network(nodes,
                   tuple(Branch(i, j, y) for i, j, y in branches),
                   tuple(Shunt(v, y) for v, y in shunts))


class TestPredictRank:
    def test_shuntless_path(self):
        assert predict_rank(path(3)) == 2

    def test_small_shunt_still_counts(self):
        assert predict_rank(with_shunts(path(3), Shunt(0, 1e-3 + 0j))) == 3

    def test_single_node_with_shunt(self):
        assert predict_rank(Network(1, (), (Shunt(0, 2.0 - 1j),))) == 1

    def test_cancelling_shunts_count_as_none(self):
        # two shunts at the same node summing to zero: the assembled
        # diagonal sees nothing, so the prediction is the shuntless one
        net = with_shunts(path(3), Shunt(1, 1j), Shunt(1, -1j))
        assert predict_rank(net) == 2

    def test_disconnected_refused(self):
        net = Network(3, (Branch(0, 1, 1.0),), ())
        with pytest.raises(PreconditionError, match="connected"):
            predict_rank(net)

    def test_zero_branch_refused(self):
        net = Network(2, (Branch(0, 1, 0j),), ())
        with pytest.raises(PreconditionError):
            predict_rank(net)


class TestVerifyRank:
    def test_star_shuntless(self):
        v = verify_rank(star(5))
        assert v.predicted_rank == 4 and v.measured_rank == 4
        assert v.agrees and v.shunt_count == 0 and v.method == "direct"

    def test_star_with_leaf_shunt(self):
        v = verify_rank(with_shunts(star(5), Shunt(4, 0.5 + 0.1j)))
        assert v.predicted_rank == 5 and v.measured_rank == 5 and v.agrees
        assert v.shunt_count == 1

    def test_purely_reactive_case(self):
        # branch 1i, shunt 1i: no real parts anywhere, still full rank
        net = Network(2, (Branch(0, 1, 1j),), (Shunt(0, 1j),))
        v = verify_rank(net)
        assert v.predicted_rank == 2 and v.agrees

    def test_gap_is_finite_for_deficient_full_size(self):
        v = verify_rank(path(4))
        assert v.measured_rank == 3
        assert np.isfinite(v.singular_gap) and v.singular_gap > 1e6

    def test_gap_is_inf_at_full_rank(self):
        v = verify_rank(with_shunts(path(4), Shunt(2, 1.0)))
        assert v.singular_gap == float("inf")

    def test_measured_matches_exact_oracle(self):
        rng = np.random.default_rng(23)
        for k in range(25):
            net = _draw_net(rng, int(rng.integers(2, 10)),
                            int(rng.integers(0, 4)),
                            shunt_count=(0 if k % 2 == 0 else int(rng.integers(1, 4))))
            v = verify_rank(net)
            assert v.measured_rank == exact_rank(exact_assemble(net))

    def test_ones_vector_spans_nullspace_when_shuntless(self):
        rng = np.random.default_rng(29)
        for _ in range(15):
            net = _draw_net(rng, int(rng.integers(3, 12)), 2, 0)
            y = assemble(net).matrix
            resid = np.linalg.norm(y @ np.ones(net.node_count))
            assert resid <= 1e-10 * np.linalg.norm(y)


def test_exact_cancellation_instance_is_reported_not_hidden():
    # A cycle whose admittances cancel exactly: (1, 1, -1/2) around a
    # triangle collapses the shuntless matrix to rank 1, below the generic
    # N-1.  The verdict must report the honest measurement and flag the
    # disagreement rather than massage it away.
    net = Network(3, (Branch(0, 1, 1.0), Branch(1, 2, 1.0), Branch(0, 2, -0.5)), ())
    y = assemble(net).matrix
    np.testing.assert_array_equal(
        y, np.array([[0.5, -1, 0.5], [-1, 2, -1], [0.5, -1, 0.5]], dtype=complex))
    assert exact_rank(exact_assemble(net)) == 1
    v = verify_rank(net)
    assert v.predicted_rank == 2 and v.measured_rank == 1 and not v.agrees


class TestAugmentVirtualGround:
    def test_single_node(self):
        aug = augment_virtual_ground(Network(1, (), (Shunt(0, 3j),)))
        assert aug.node_count == 2
        assert aug.branches == (Branch(0, 1, 3j),)
        assert aug.shunts == ()

    def test_two_node_path_plus_shunt(self):
        net = Network(2, (Branch(0, 1, 1.0),), (Shunt(0, 2.0),))
        aug = augment_virtual_ground(net)
        assert aug.node_count == 3
        # original branch plus one converted shunt: a 3-node path 1-0-2
        assert len(aug.branches) == 2
        assert aug.branches[1] == Branch(0, 2, 2.0)
        assert aug.shunts == ()

    def test_result_is_connected_and_shuntless(self):
        rng = np.random.default_rng(31)
        from ybuskit import is_connected
        for _ in range(10):
            net = _draw_net(rng, int(rng.integers(2, 10)), 1,
                            shunt_count=int(rng.integers(1, 4)))
            if not any(abs(s.admittance) > 0 for s in net.shunts):
                continue
            aug = augment_virtual_ground(net)
            assert is_connected(aug)
            assert aug.shunts == ()

    def test_zero_valued_shunts_are_dropped(self):
        net = Network(2, (Branch(0, 1, 1.0),), (Shunt(0, 0j), Shunt(1, 5.0)))
        aug = augment_virtual_ground(net)
        assert len(aug.branches) == 2  # only the nonzero shunt converts

    def test_no_shunts_refused(self):
        with pytest.raises(PreconditionError, match="shunt"):
            augment_virtual_ground(path(3))
        with pytest.raises(PreconditionError, match="shunt"):
            augment_virtual_ground(with_shunts(path(3), Shunt(0, 0j)))


def test_block_form_matrix_layout():
    y = np.array([[2.0, -1.0], [-1.0, 1.5]], dtype=complex)
    t = np.array([1j, 0.5], dtype=complex)
    out = block_form_matrix(y, t)
    want = np.array(
        [[2.0, -1.0, -1j],
         [-1.0, 1.5, -0.5],
         [-1j, -0.5, 0.5 + 1j]], dtype=complex)
    np.testing.assert_array_equal(out, want)


class TestVerifyViaAugmentation:
    def test_path_with_one_shunt(self):
        v = verify_rank_via_augmentation(with_shunts(path(3), Shunt(1, 1.0 + 1j)))
        assert v.method == "virtual_ground"
        assert v.predicted_rank == 3 and v.measured_rank == 3 and v.agrees
        assert v.block_form_max_rel_error is not None
        assert v.block_form_max_rel_error <= 1e-12

    def test_agrees_with_direct_route(self):
        rng = np.random.default_rng(37)
        for _ in range(15):
            n = int(rng.integers(2, 11))
            net = _draw_net(rng, n, 2, shunt_count=max(1, n // 2))
            if not any(abs(s.admittance) > 0 for s in net.shunts):
                continue
            direct = verify_rank(net)
            aug = verify_rank_via_augmentation(net)
            assert (direct.predicted_rank, direct.measured_rank, direct.agrees) == \
                   (aug.predicted_rank, aug.measured_rank, aug.agrees)

    def test_augmented_assembly_equals_block_form_exactly(self):
        # dyadic admittances: both sides are sums of the same exact values
        rng = np.random.default_rng(41)
        for _ in range(10):
            net = _draw_net(rng, int(rng.integers(2, 9)), 1, shunt_count=2)
            if not any(abs(s.admittance) > 0 for s in net.shunts):
                continue
            lhs = assemble(augment_virtual_ground(net)).matrix
            rhs = block_form_matrix(assemble(net).matrix, shunt_totals(net))
            np.testing.assert_array_equal(lhs, rhs)

    def test_shuntless_refused(self):
        with pytest.raises(PreconditionError):
            verify_rank_via_augmentation(path(4))


class TestVerifyMatrixRank:
    def test_direct_shuntless(self):
        v = verify_matrix_rank(assemble(path(4)))
        assert v.predicted_rank == 3 and v.measured_rank == 3 and v.agrees
        assert v.shunt_count == 0

    def test_direct_shunted(self):
        v = verify_matrix_rank(assemble(with_shunts(path(4), Shunt(0, 1j))))
        assert v.predicted_rank == 4 and v.agrees and v.shunt_count == 1

    def test_virtual_ground_method(self):
        y = assemble(with_shunts(path(4), Shunt(2, 0.5)))
        v = verify_matrix_rank(y, method="virtual_ground")
        assert v.method == "virtual_ground"
        assert v.predicted_rank == 4 and v.measured_rank == 4 and v.agrees

    def test_virtual_ground_needs_shunts(self):
        with pytest.raises(PreconditionError, match="shunt"):
            verify_matrix_rank(assemble(path(3)), method="virtual_ground")

    def test_unknown_method(self):
        with pytest.raises(PreconditionError, match="method"):
            verify_matrix_rank(assemble(path(3)), method="qr")

    def test_disconnected_pattern_refused(self):
        m = np.zeros((4, 4), dtype=complex)
        m[:2, :2] = [[1, -1], [-1, 1]]
        m[2:, 2:] = [[1, -1], [-1, 1]]
        with pytest.raises(PreconditionError, match="disconnected"):
            verify_matrix_rank(AdmittanceMatrix(m, (0, 1, 2, 3)))

    def test_rank_one_cancellation_matrix_flagged(self):
        # same triangle as above, loaded as a bare matrix: row sums vanish
        # so the prediction is N-1 = 2, yet the true rank is 1
        m = np.array([[0.5, -1, 0.5], [-1, 2, -1], [0.5, -1, 0.5]], dtype=complex)
        v = verify_matrix_rank(AdmittanceMatrix(m, (0, 1, 2)))
        assert v.predicted_rank == 2 and v.measured_rank == 1
        assert not v.agrees

    def test_matches_network_route(self):
        rng = np.random.default_rng(43)
        for k in range(20):
            net = _draw_net(rng, int(rng.integers(2, 10)), 2,
                            shunt_count=(0 if k % 2 else 2))
            via_net = verify_rank(net)
            via_mat = verify_matrix_rank(assemble(net))
            assert via_net.predicted_rank == via_mat.predicted_rank
            assert via_net.measured_rank == via_mat.measured_rank


def test_verdict_is_frozen():
    v = RankVerdict(2, 2, True, 0, "direct", float("inf"))
    with pytest.raises(AttributeError):
        v.agrees = False
