"""Protocol statistics with cavity photon loss and collective spin dephasing.

Time is measured as chi*t and rates as r_c = gamma_c/chi, r_s = gamma_s/chi.
During an entangling window of length chi*t = pi the joint state stays a
sum of coherent-state branches,

    rho = sum_{m,n} c_{mn} |m><n| (x) |A_m><A_n|,
    A_m = alpha_0 exp(-i m chi t - gamma_c t / 2),

and tracing the cavity with a homodyne half-line projector multiplies c_{mn}
by <A_n|Pi_s|A_m>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cavity import (CavityAmplitude, as_amplitude, coherent_overlap,
                     half_line_overlap, position_wavefunction, right_probability)
from .errors import DomainError, NumericError
from .ideal import SIGNS, ProbabilityTable, ViolationResult
from .spin_math import SpinJ, as_spin, coherent_state, wigner_d_matrix


@dataclass(frozen=True)
class DecoherenceRates:
    r_c: float = 0.0
    r_s: float = 0.0

    def __post_init__(self):
        for name in ("r_c", "r_s"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be finite and non-negative, got {v}")


def leak_exponent(dm, alpha_mag: float, r_c: float, chi_t: float = np.pi):
    """Exponent D_{mn} of the coherence loss from photon leakage.

    dm = m - n.  Written so that r_c = 0 and dm = 0 need no limit:
    D = |a|^2 [(1 - e^{-r tau}) + r (e^{-(r + i dm) tau} - 1) / (r + i dm)].
    """
    dm = np.asarray(dm, dtype=float)
    r, tau = float(r_c), float(chi_t)
    if r == 0:
        return np.zeros(dm.shape, dtype=complex)
    diag = dm == 0
    den = np.where(diag, 1.0, r + 1j * dm)  # the diagonal is exactly zero; avoid 0/0 for tiny r
    out = (1 - np.exp(-r * tau)) + r * (np.exp(-den * tau) - 1) / den
    return alpha_mag ** 2 * np.where(diag, 0.0, out)


def branch_amplitudes(j, alpha, r_c: float, chi_t: float = np.pi) -> np.ndarray:
    s = as_spin(j)
    a = as_amplitude(alpha)
    return a.value * np.exp(-1j * s.m() * chi_t - 0.5 * r_c * chi_t)


@dataclass
class BranchedJointState:
    """Spin-cavity state after one entangling window."""

    twice_j: int
    coefficients: np.ndarray  # c_{mn}
    amplitudes: np.ndarray    # A_m
    chi_t: float

    def reduced_spin(self, sign: int | None = None, split: str = "closed") -> np.ndarray:
        """Spin density matrix after tracing the cavity, optionally with the
        homodyne outcome `sign` selected (unnormalized)."""
        a = self.amplitudes
        if sign is None:
            w = coherent_overlap(a[:, None], a[None, :])
        elif split == "closed":
            w = half_line_overlap(a[:, None], a[None, :], sign)
        elif split == "quadrature":
            w = _half_line_overlap_quad(a, sign)
        else:
            raise DomainError(f"unknown split {split!r}")
        return self.coefficients * w

    def to_fock(self, n_max: int) -> np.ndarray:
        """Joint density matrix on spin (x) Fock{0..n_max}, spin-major."""
        from .oracle import coherent_fock
        vecs = np.array([coherent_fock(a, n_max) for a in self.amplitudes])
        rho = np.einsum("mn,mp,nq->mpnq", self.coefficients, vecs, vecs.conj())
        d = vecs.size
        return rho.reshape(d, d)


def _half_line_overlap_quad(a: np.ndarray, sign: int) -> np.ndarray:
    out = np.empty((a.size, a.size), dtype=complex)
    # every branch density is negligible beyond sqrt(2)|A| + 12 from the origin
    span = np.sqrt(2) * np.max(np.abs(a)) + 12
    lo, hi = (0.0, span) if sign > 0 else (-span, 0.0)
    for i, ai in enumerate(a):
        for k, ak in enumerate(a):
            f = lambda x: position_wavefunction(ai, x) * np.conj(position_wavefunction(ak, x))
            re, e1 = integrate.quad(lambda x: f(x).real, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=400)
            im, e2 = integrate.quad(lambda x: f(x).imag, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=400)
            if e1 + e2 > 1e-9:
                raise NumericError(f"overlap quadrature error {e1 + e2}")
            out[i, k] = re + 1j * im
    return out


def evolve_open(state: np.ndarray, alpha, rates: DecoherenceRates,
                chi_t: float = np.pi) -> BranchedJointState:
    """Branch decomposition of the joint state after an entangling window."""
    state = np.asarray(state, dtype=complex)
    s = SpinJ(state.shape[0] - 1)
    if abs(np.vdot(state, state).real - 1) > 1e-10:
        raise DomainError("spin state is not normalized")
    if not np.isfinite(chi_t) or chi_t < 0:
        raise DomainError("chi_t must be non-negative")
    a = as_amplitude(alpha)
    m = s.m()
    dm = m[:, None] - m[None, :]
    coeff = np.outer(state, state.conj())
    coeff = coeff * np.exp(2j * (m[:, None] ** 2 - m[None, :] ** 2) * chi_t)
    coeff = coeff * np.exp(-dm ** 2 * rates.r_s * chi_t)
    coeff = coeff * np.exp(-leak_exponent(dm, a.magnitude, rates.r_c, chi_t))
    return BranchedJointState(s.twice_j, coeff, branch_amplitudes(s, a, rates.r_c, chi_t), chi_t)


def _final_readout(rho: np.ndarray, s: SpinJ, alpha, r_c: float) -> np.ndarray:
    """[P(+), P(-)] of the last window applied to spin density matrix rho;
    only the diagonal matters, where leakage and dephasing drop out."""
    p_plus = right_probability(branch_amplitudes(s, alpha, r_c))
    diag = np.real(np.diag(rho))
    return np.array([np.sum(diag * p_plus), np.sum(diag * (1 - p_plus))])


def decohered_probabilities(j, phi: float, alpha, rates: DecoherenceRates,
                            phi2: float | None = None, split: str = "closed") -> ProbabilityTable:
    s = as_spin(j)
    rates = rates or DecoherenceRates()
    phi2 = phi if phi2 is None else phi2
    psi = coherent_state(s, phi)
    rot = wigner_d_matrix(s, phi2)
    m = s.m()
    # skipped first measurement: the spin still idles and dephases for one window
    idle = np.outer(psi, psi) * np.exp(-(m[:, None] - m[None, :]) ** 2 * rates.r_s * np.pi)
    p2 = _final_readout(rot @ idle @ rot.T, s, alpha, rates.r_c)
    joint = evolve_open(psi, alpha, rates)
    p12 = np.empty((2, 2))
    for a_idx, sg in enumerate(SIGNS):
        rho1 = joint.reduced_spin(sg, split=split)
        p12[a_idx] = _final_readout(rot @ rho1 @ rot.T, s, alpha, rates.r_c)
    return ProbabilityTable(p2, p12)


def decohered_violation(j, phi: float, alpha, rates: DecoherenceRates) -> ViolationResult:
    s = as_spin(j)
    t = decohered_probabilities(s, phi, alpha, rates)
    a = as_amplitude(alpha)
    return ViolationResult(t.v_plus, t.v_minus, t, s.twice_j, s.branch,
                           {"phi": float(phi), "alpha0": a.magnitude,
                            "r_c": rates.r_c, "r_s": rates.r_s})


def optimal_alpha(j, phi: float, rates: DecoherenceRates, grid) -> tuple[float, float]:
    """Grid point maximizing |V_+|; ties go to the smaller amplitude."""
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise DomainError("empty amplitude grid")
    vals = np.array([abs(decohered_violation(j, phi, CavityAmplitude(a), rates).v_plus)
                     for a in grid])
    k = int(np.flatnonzero(vals >= vals.max() - 1e-15)[0])
    return float(grid[k]), float(vals[k])
