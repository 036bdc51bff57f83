"""Protocol statistics for an ensemble with spread-out qubit-cavity couplings.

The N couplings are sorted and cut into n contiguous groups; each group is
treated as a collective spin of size N/(2n) that rotates by
phi_k = phi <g>_k/<g> and imprints the cavity phase theta_k = pi <g>_k^2/<g>^2,
both calibrated on the sample mean <g>.  The joint spin state lives on the
tensor product of the group spins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import as_amplitude, half_line_overlap, position_wavefunction, right_probability
from .errors import DomainError, ResourceError
from .ideal import SIGNS, ProbabilityTable, ViolationResult
from .spin_math import SpinJ, coherent_state, wigner_d_matrix

DEFAULT_CAP = 2_000_000
DENSE_LIMIT = 256


@dataclass
class CouplingSample:
    couplings: np.ndarray
    mean: float
    r_sigma: float
    seed: int | None = None

    @property
    def n_qubits(self) -> int:
        return int(self.couplings.size)


def sample_couplings(n_qubits: int, r_sigma: float, seed: int | None = None,
                     mean: float = 1.0) -> CouplingSample:
    """Draw couplings g_i ~ N(mean, (r_sigma*mean)^2) from a seeded generator."""
    if n_qubits < 1:
        raise DomainError("need at least one qubit")
    if not np.isfinite(r_sigma) or r_sigma < 0:
        raise DomainError("r_sigma must be non-negative")
    rng = np.random.default_rng(seed)
    g = mean + r_sigma * mean * rng.standard_normal(n_qubits)
    if np.any(g <= 0):
        raise DomainError("a sampled coupling is not positive; r_sigma is too large")
    return CouplingSample(g, mean, r_sigma, seed)


@dataclass
class GroupedCouplings:
    group_means: np.ndarray
    sample_mean: float
    twice_j_sub: int
    order: np.ndarray

    @property
    def n_groups(self) -> int:
        return int(self.group_means.size)

    @property
    def sub_spin(self) -> SpinJ:
        return SpinJ(self.twice_j_sub)

    @property
    def dim(self) -> int:
        return (self.twice_j_sub + 1) ** self.n_groups


def group_couplings(couplings, n_groups: int) -> GroupedCouplings:
    """Sort descending (ties by original index) and average contiguous blocks."""
    g = np.asarray(couplings.couplings if isinstance(couplings, CouplingSample) else couplings,
                   dtype=float)
    N = g.size
    if n_groups < 1 or N % n_groups:
        raise DomainError(f"{N} qubits cannot be split into {n_groups} equal groups")
    order = np.argsort(-g, kind="stable")
    means = g[order].reshape(n_groups, N // n_groups).mean(axis=1)
    return GroupedCouplings(means, float(g.mean()), N // n_groups, order)


@dataclass
class EffectiveAngles:
    rotation: np.ndarray   # phi_k
    phase: np.ndarray      # theta_k


def effective_angles(groups: GroupedCouplings, phi: float = np.pi / 4) -> EffectiveAngles:
    ratio = groups.group_means / groups.sample_mean
    return EffectiveAngles(phi * ratio, np.pi * ratio ** 2)


def _apply_local(mats, vecs: np.ndarray, d: int, n: int) -> np.ndarray:
    """Apply kron(mats) to the leading axis of vecs (shape (d**n, ...))."""
    tail = vecs.shape[1:]
    t = vecs.reshape((d,) * n + tail)
    for k, mat in enumerate(mats):
        t = np.moveaxis(np.tensordot(mat, t, axes=([1], [k])), 0, k)
    return t.reshape((d ** n,) + tail)


def _kron_all(vectors) -> np.ndarray:
    out = np.array([1.0])
    for v in vectors:
        out = np.kron(out, v)
    return out


def inhomogeneous_probabilities(groups: GroupedCouplings, alpha, phi: float = np.pi / 4,
                                cap: int = DEFAULT_CAP, method: str = "auto",
                                nodes: int = 160) -> ProbabilityTable:
    """Outcome table of the grouped model.

    method 'dense' forms the full matrix of half-line overlaps in closed
    form; 'factored' writes the first measurement as a Gauss-Legendre sum
    over homodyne outcomes x, so memory grows only linearly in the joint
    dimension.  'auto' picks dense up to DENSE_LIMIT states.
    """
    a = as_amplitude(alpha)
    sub = groups.sub_spin
    n, d = groups.n_groups, sub.dim
    dim = groups.dim
    if dim > cap:
        raise ResourceError(f"joint dimension {dim} exceeds cap {cap}")
    ang = effective_angles(groups, phi)
    m = sub.m()
    phase = np.zeros(1)
    for th in ang.phase:
        phase = (phase[:, None] + th * m[None, :]).ravel()
    amps = a.value * np.exp(-1j * phase)
    p_right = right_probability(amps)
    readout = np.stack([p_right, 1 - p_right])

    psi2 = _kron_all([coherent_state(sub, 2 * p) for p in ang.rotation])
    p2 = readout @ psi2 ** 2
    psi = _kron_all([coherent_state(sub, p) for p in ang.rotation])
    rots = [wigner_d_matrix(sub, p) for p in ang.rotation]
    if method == "auto":
        method = "dense" if dim <= DENSE_LIMIT else "factored"
    p12 = np.empty((2, 2))
    if method == "dense":
        for i, sg in enumerate(SIGNS):
            rho = np.outer(psi, psi) * half_line_overlap(amps[:, None], amps[None, :], sg)
            rho = _apply_local(rots, rho, d, n)
            rho = _apply_local(rots, rho.T, d, n).T
            p12[i] = readout @ np.real(np.diag(rho))
    elif method == "factored":
        span = np.sqrt(2) * a.magnitude + 12
        t, w = np.polynomial.legendre.leggauss(nodes)
        x = 0.5 * span * (t + 1)
        w = 0.5 * span * w
        for i, sg in enumerate(SIGNS):
            branch = position_wavefunction(amps[:, None], sg * x[None, :]) * np.sqrt(w)[None, :]
            u = _apply_local(rots, psi[:, None] * branch, d, n)
            p12[i] = readout @ np.sum(np.abs(u) ** 2, axis=1)
    else:
        raise DomainError(f"unknown method {method!r}")
    return ProbabilityTable(p2, p12)


def inhomogeneous_violation(groups: GroupedCouplings, alpha, phi: float = np.pi / 4,
                            cap: int = DEFAULT_CAP) -> ViolationResult:
    t = inhomogeneous_probabilities(groups, alpha, phi, cap)
    twice_j = groups.twice_j_sub * groups.n_groups
    return ViolationResult(t.v_plus, t.v_minus, t, twice_j, SpinJ(twice_j).branch,
                           {"phi": float(phi), "alpha0": as_amplitude(alpha).magnitude,
                            "n_groups": groups.n_groups})


@dataclass
class AveragedViolation:
    mean_abs_v: float
    stderr: float
    values: np.ndarray
    seeds: list


def averaged_violation(n_qubits: int, r_sigma: float, n_groups: int, alpha,
                       seeds=32, phi: float = np.pi / 4, cap: int = DEFAULT_CAP) -> AveragedViolation:
    """Mean |V_+| over coupling draws, with its standard error."""
    seeds = list(range(seeds)) if isinstance(seeds, (int, np.integer)) else list(seeds)
    if not seeds:
        raise DomainError("need at least one seed")
    vals = []
    for sd in seeds:
        grp = group_couplings(sample_couplings(n_qubits, r_sigma, sd), n_groups)
        vals.append(abs(inhomogeneous_probabilities(grp, alpha, phi, cap).v_plus))
    vals = np.array(vals)
    err = vals.std(ddof=1) / np.sqrt(vals.size) if vals.size > 1 else 0.0
    return AveragedViolation(float(vals.mean()), float(err), vals, seeds)
