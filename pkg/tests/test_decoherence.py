import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from ndcspin import DomainError
from ndcspin.cavity import CavityAmplitude, coherent_overlap, half_line_overlap, right_probability
from ndcspin.decoherence import (DecoherenceRates, decohered_probabilities, decohered_violation,
                                 evolve_open, leak_exponent, optimal_alpha)
from ndcspin.ideal import ideal_probabilities
from ndcspin.oracle import open_protocol_rk4
from ndcspin.spin_math import coherent_state

PHI = np.pi / 4
rates_st = st.builds(DecoherenceRates, st.floats(0, 1), st.floats(0, 1))


def test_rates_validation():
    for bad in [(-0.1, 0), (0, float("nan")), (float("inf"), 0)]:
        with pytest.raises(DomainError):
            DecoherenceRates(*bad)


def test_probe_amplitude():
    a = CavityAmplitude(2.0)
    assert abs(a.value - (1 + 1j) * np.sqrt(2)) < 1e-15
    with pytest.raises(DomainError):
        CavityAmplitude(-1.0)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5))
def test_half_line_overlaps_add_up(a, b):
    total = half_line_overlap(a, b, +1) + half_line_overlap(a, b, -1)
    assert abs(total - coherent_overlap(a, b)) < 1e-12
    assert abs(half_line_overlap(a, a, +1) - right_probability(a)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.floats(0.5, 4), rates_st)
def test_branch_state_is_a_density_matrix(twice_j, alpha, rates):
    joint = evolve_open(coherent_state(twice_j, PHI), alpha, rates)
    rho = joint.reduced_spin()
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-8
    assert abs(np.trace(rho) - 1) < 1e-8
    assert np.min(np.linalg.eigvalsh(rho)) > -1e-10
    split = joint.reduced_spin(+1) + joint.reduced_spin(-1)
    assert np.max(np.abs(split - rho)) < 1e-10


def test_leak_exponent_properties():
    assert np.all(leak_exponent(np.arange(-4, 5), 2.0, 0.0) == 0)
    assert leak_exponent(0, 2.0, 0.3) == 0


@pytest.mark.parametrize("dm", [1, 2, -3])
def test_leak_exponent_is_a_time_integral(dm):
    # D = |a|^2 int_0^tau r e^{-r t} (1 - e^{-i dm t}) dt
    r, a = 0.1, 2.0
    f = lambda t: r * a ** 2 * np.exp(-r * t) * (1 - np.exp(-1j * dm * t))
    re = integrate.quad(lambda t: f(t).real, 0, np.pi, epsabs=1e-14)[0]
    im = integrate.quad(lambda t: f(t).imag, 0, np.pi, epsabs=1e-14)[0]
    assert abs(leak_exponent(dm, a, r) - (re + 1j * im)) < 1e-12


def test_closed_and_quadrature_split_agree():
    a = decohered_probabilities(4, PHI, 2, DecoherenceRates(0.1, 0.05))
    b = decohered_probabilities(4, PHI, 2, DecoherenceRates(0.1, 0.05), split="quadrature")
    assert a.max_abs_diff(b) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 10), rates_st)
def test_table_normalization(twice_j, rates):
    t = decohered_probabilities(twice_j, PHI, 2, rates)
    assert abs(t.p2.sum() - 1) < 1e-10
    assert abs(t.p12.sum() - 1) < 1e-10


def test_ideal_limit():
    for tj in (2, 4, 5, 8):
        t = decohered_probabilities(tj, PHI, 6, DecoherenceRates())
        assert t.max_abs_diff(ideal_probabilities(tj, PHI)) < 1e-10
    assert abs(decohered_violation(8, PHI, 6, DecoherenceRates()).v_plus + 0.25) < 1e-4


def test_monotone_in_dephasing():
    rs = np.linspace(0, 0.5, 11)
    for tj in (4, 8):
        v = [abs(decohered_violation(tj, PHI, 2, DecoherenceRates(0, r)).v_plus) for r in rs]
        assert all(a >= b - 1e-14 for a, b in zip(v, v[1:]))


def test_larger_spins_dephase_faster():
    v = [abs(decohered_violation(tj, PHI, 2, DecoherenceRates(0, 0.05)).v_plus) for tj in (4, 8, 16, 32)]
    assert all(a > b for a, b in zip(v, v[1:]))


def test_strong_dephasing_destroys_violation():
    for tj in (8, 12, 16):
        for r in (1.0, 2.0):
            assert abs(decohered_violation(tj, PHI, 2, DecoherenceRates(0, r)).v_plus) < 0.01


def test_weak_probe_never_reaches_quarter():
    v = abs(decohered_violation(8, PHI, 1, DecoherenceRates(1e-6, 0)).v_plus)
    assert v < 0.2


def test_pinned_cavity_decay_value():
    assert abs(abs(decohered_violation(4, PHI, 2, DecoherenceRates(0.01, 0)).v_plus)
               - 0.2354539977666138) < 1e-12


def test_optimal_alpha():
    grid = np.arange(1, 6.01, 0.5)
    small = np.arange(0.5, 3.01, 0.5)
    assert optimal_alpha(8, PHI, DecoherenceRates(), small)[0] == 3.0
    best, v = optimal_alpha(8, PHI, DecoherenceRates(0.3, 0), grid)
    assert best < grid.max()
    best, v = optimal_alpha(8, PHI, DecoherenceRates(0.2, 0), grid)
    assert best == 1.5 and abs(v - 0.12671643267999133) < 1e-12
    with pytest.raises(DomainError):
        optimal_alpha(8, PHI, DecoherenceRates(), [])


def test_ties_prefer_smaller_amplitude():
    # beyond |a0| ~ 5 the noiseless value is 1/4 to machine precision
    best, v = optimal_alpha(8, PHI, DecoherenceRates(), [6.0, 3.0, 5.5])
    assert best == 5.5 and abs(v - 0.25) < 1e-14


def test_rk4_protocol_matches_closed_form():
    rates = DecoherenceRates(0.05, 0.02)
    a = open_protocol_rk4(4, PHI, 2, rates.r_c, rates.r_s)
    assert a.max_abs_diff(decohered_probabilities(4, PHI, 2, rates)) < 1e-4
