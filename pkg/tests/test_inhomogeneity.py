import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ndcspin import DomainError, ResourceError
from ndcspin.ideal import ideal_probabilities
from ndcspin.inhomogeneity import (averaged_violation, effective_angles, group_couplings,
                                   inhomogeneous_probabilities, inhomogeneous_violation,
                                   sample_couplings)
from ndcspin.oracle import qubit_level_protocol

PHI = np.pi / 4


def test_sampling_contract():
    a = sample_couplings(50, 0.02, seed=7)
    b = sample_couplings(50, 0.02, seed=7)
    assert a.couplings.tobytes() == b.couplings.tobytes()
    assert np.all(sample_couplings(8, 0.0, seed=1, mean=2.5).couplings == 2.5)
    big = sample_couplings(10_000, 0.01, seed=0)
    assert abs(big.couplings.std() / 0.01 - 1) < 0.03
    with pytest.raises(DomainError):
        sample_couplings(0, 0.01)
    with pytest.raises(DomainError):
        sample_couplings(4, -0.1)


def test_grouping_examples():
    g = sample_couplings(12, 0.05, seed=3).couplings
    one = group_couplings(g, 1)
    assert one.group_means.shape == (1,) and abs(one.group_means[0] - g.mean()) < 1e-15
    each = group_couplings(g, 12)
    assert np.array_equal(each.group_means, np.sort(g)[::-1])
    three = group_couplings(g, 3)
    ref = [np.mean(sorted(g, reverse=True)[4 * k:4 * k + 4]) for k in range(3)]
    assert np.allclose(three.group_means, ref, rtol=0, atol=1e-15)
    assert three.twice_j_sub == 4
    with pytest.raises(DomainError):
        group_couplings(g, 5)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 5), st.integers(0, 10_000))
def test_grouping_invariants(n_groups, per_group, seed):
    g = sample_couplings(n_groups * per_group, 0.1, seed=seed).couplings
    grp = group_couplings(g, n_groups)
    assert np.all(np.diff(grp.group_means) <= 0)
    assert abs(grp.group_means.mean() - grp.sample_mean) < 1e-12


def test_uniform_calibration():
    grp = group_couplings(np.full(6, 0.7), 3)
    ang = effective_angles(grp, PHI)
    assert np.allclose(ang.rotation, PHI) and np.allclose(ang.phase, np.pi)


@pytest.mark.parametrize("n_groups", [1, 2, 3, 4, 6])
def test_uniform_limit_is_ideal(n_groups):
    grp = group_couplings(np.ones(12), n_groups)
    t = inhomogeneous_probabilities(grp, 6)
    assert t.max_abs_diff(ideal_probabilities(12, PHI)) < 1e-6
    assert abs(abs(inhomogeneous_violation(grp, 6).v_plus) - 0.25) < 1e-6


def test_dense_and_factored_agree():
    grp = group_couplings(sample_couplings(12, 0.02, seed=5).couplings, 3)
    a = inhomogeneous_probabilities(grp, 2, method="dense")
    b = inhomogeneous_probabilities(grp, 2, method="factored")
    assert a.max_abs_diff(b) < 1e-12
    with pytest.raises(DomainError):
        inhomogeneous_probabilities(grp, 2, method="nope")


def test_dimension_cap():
    grp = group_couplings(np.ones(24), 24)
    with pytest.raises(ResourceError, match="16777216"):
        inhomogeneous_probabilities(grp, 2)
    with pytest.raises(ResourceError):
        inhomogeneous_probabilities(group_couplings(np.ones(12), 3), 2, cap=100)


def test_two_valued_couplings_against_qubits():
    g = np.array([1.05, 1.05, 0.95, 0.95])
    t = inhomogeneous_probabilities(group_couplings(g, 2), 2)
    assert t.max_abs_diff(qubit_level_protocol(g, PHI, 2)) < 1e-8


@settings(max_examples=8, deadline=None)
@given(st.lists(st.floats(0.7, 1.3), min_size=1, max_size=5))
def test_one_qubit_groups_against_qubits(g):
    g = np.array(g)
    t = inhomogeneous_probabilities(group_couplings(g, g.size), 2)
    assert abs(t.p12.sum() - 1) < 1e-10
    assert t.max_abs_diff(qubit_level_protocol(g, PHI, 2)) < 1e-8


def test_ten_qubits_still_violate():
    assert averaged_violation(10, 0.01, 2, 2, seeds=16).mean_abs_v > 0.1


def test_averaged_violation_seeds():
    a = averaged_violation(8, 0.01, 2, 2, seeds=[3, 4])
    b = averaged_violation(8, 0.01, 2, 2, seeds=[3, 4])
    assert a.mean_abs_v == b.mean_abs_v and a.seeds == [3, 4]
    with pytest.raises(DomainError):
        averaged_violation(8, 0.01, 2, 2, seeds=[])
