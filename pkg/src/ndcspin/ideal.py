"""Outcome statistics of the two-measurement parity protocol with perfect
parity measurements, and the resulting violation of the no-disturbance
condition.

Outcome index 0 is the '+' (even) result and index 1 the '-' (odd) result.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import DomainError, NumericError
from .spin_math import SpinJ, as_spin, parity_mask, wigner_d_matrix

SIGNS = (+1, -1)


@dataclass
class ProbabilityTable:
    """p2[s] = P_2(s) without the first measurement; p12[s1, s2] joint."""

    p2: np.ndarray
    p12: np.ndarray

    def __post_init__(self):
        self.p2 = np.asarray(self.p2, dtype=float).reshape(2)
        self.p12 = np.asarray(self.p12, dtype=float).reshape(2, 2)

    @property
    def v_plus(self) -> float:
        return float(self.p2[0] - self.p12[:, 0].sum())

    @property
    def v_minus(self) -> float:
        return float(self.p2[1] - self.p12[:, 1].sum())

    @property
    def first_marginal(self) -> np.ndarray:
        return self.p12.sum(axis=1)

    def max_abs_diff(self, other: "ProbabilityTable") -> float:
        return float(max(np.abs(self.p2 - other.p2).max(),
                         np.abs(self.p12 - other.p12).max()))

    def as_dict(self) -> dict:
        return {"p2_plus": float(self.p2[0]), "p2_minus": float(self.p2[1]),
                "p12_pp": float(self.p12[0, 0]), "p12_pm": float(self.p12[0, 1]),
                "p12_mp": float(self.p12[1, 0]), "p12_mm": float(self.p12[1, 1]),
                "v_plus": self.v_plus, "v_minus": self.v_minus}


@dataclass
class ViolationResult:
    v_plus: float
    v_minus: float
    table: ProbabilityTable
    twice_j: int
    branch: str
    params: dict = field(default_factory=dict)

    @property
    def magnitude(self) -> float:
        return abs(self.v_plus)


def _check_angle(phi):
    phi = float(phi)
    if not np.isfinite(phi):
        raise DomainError("angle must be finite")
    return phi


def first_measurement_probability(j, phi: float) -> np.ndarray:
    """[P_1(+), P_1(-)] for a single perfect parity measurement of |phi>."""
    s = as_spin(j)
    c = np.cos(_check_angle(phi)) ** s.twice_j
    sign = 1.0 if s.even_like else -1.0
    return np.array([0.5 + sign * 0.5 * c, 0.5 - sign * 0.5 * c])


def ideal_probabilities(j, phi: float) -> ProbabilityTable:
    """Closed-form table for two equal rotations by phi.

    Written with the overlaps d_{-j,-j}(2 phi) = cos^{2j}(phi) and
    d_{-j,-j}(4 phi) = cos^{2j}(2 phi).
    """
    s = as_spin(j)
    phi = _check_angle(phi)
    c1 = np.cos(phi) ** s.twice_j
    c2 = np.cos(2 * phi) ** s.twice_j
    big = lambda sg: 3 / 8 + sg * 0.5 * c1 + c2 / 8
    small = 1 / 8 - c2 / 8
    if s.even_like:
        p2 = [0.5 + 0.5 * c2, 0.5 - 0.5 * c2]
        p12 = [[big(+1), small], [big(-1), small]]
    else:
        p2 = [0.5 - 0.5 * c2, 0.5 + 0.5 * c2]
        p12 = [[small, big(-1)], [small, big(+1)]]
    return ProbabilityTable(np.array(p2), np.array(p12))


def ideal_violation(j, phi: float) -> ViolationResult:
    s = as_spin(j)
    t = ideal_probabilities(s, phi)
    return ViolationResult(t.v_plus, t.v_minus, t, s.twice_j, s.branch, {"phi": float(phi)})


def two_angle_probabilities(j, phi1: float, phi2: float) -> ProbabilityTable:
    """Table for rotations phi1 then phi2 by direct summation over m."""
    s = as_spin(j)
    phi1, phi2 = _check_angle(phi1), _check_angle(phi2)
    ground = wigner_d_matrix(s, phi1)[:, 0]
    total = wigner_d_matrix(s, phi1 + phi2)[:, 0]
    second = wigner_d_matrix(s, phi2)
    masks = [parity_mask(s, sg) for sg in SIGNS]
    p2 = np.array([np.sum(total[mk] ** 2) for mk in masks])
    p12 = np.empty((2, 2))
    for a, m1 in enumerate(masks):
        branch = second[:, m1] @ ground[m1]
        for b, m2 in enumerate(masks):
            p12[a, b] = np.sum(branch[m2] ** 2)
    return ProbabilityTable(p2, p12)


def two_angle_violation(j, phi1: float, phi2: float) -> ViolationResult:
    s = as_spin(j)
    t = two_angle_probabilities(s, phi1, phi2)
    return ViolationResult(t.v_plus, t.v_minus, t, s.twice_j, s.branch,
                           {"phi1": float(phi1), "phi2": float(phi2)})


def orthogonal_error_violation(j, phi1: float) -> ViolationResult:
    """Violation when the second angle is pi/2 - phi1.

    V_+ = -sin^{2j}(2 phi1)/4 on the even-like branch and the opposite sign
    on the odd-like branch.
    """
    s = as_spin(j)
    phi1 = _check_angle(phi1)
    amp = 0.25 * np.sin(2 * phi1) ** s.twice_j
    vp = -amp if s.even_like else amp
    t = two_angle_probabilities(s, phi1, np.pi / 2 - phi1)
    return ViolationResult(float(vp), float(-vp), t, s.twice_j, s.branch,
                           {"phi1": phi1, "phi2": np.pi / 2 - phi1})


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for the Gaussian average over angle errors.

    method 'adaptive' uses scipy's QUADPACK on [-width*sigma, width*sigma];
    'hermite' uses Gauss-Hermite nodes.
    """

    method: str = "adaptive"
    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    width: float = 12.0
    nodes: int = 200
    limit: int = 500


def _abs_orthogonal(s: SpinJ, delta):
    return 0.25 * np.abs(np.cos(2 * delta)) ** s.twice_j


def gaussian_averaged_violation(j, sigma: float, quad: QuadratureSpec | None = None) -> float:
    """Mean of |V(pi/4 + delta)| for delta ~ N(0, sigma^2) with orthogonal
    rotation error, computed by quadrature of the exact integrand."""
    s = as_spin(j)
    quad = quad or QuadratureSpec()
    sigma = float(sigma)
    if not np.isfinite(sigma) or sigma < 0:
        raise DomainError("sigma must be finite and non-negative")
    if sigma == 0:
        return 0.25
    if quad.method == "hermite":
        x, w = np.polynomial.hermite.hermgauss(quad.nodes)
        return float(np.sum(w * _abs_orthogonal(s, np.sqrt(2) * sigma * x)) / np.sqrt(np.pi))
    if quad.method != "adaptive":
        raise DomainError(f"unknown quadrature method {quad.method!r}")
    # the integrand has period pi/2; split at its zeros so QUADPACK sees smooth pieces
    lo, hi = -quad.width * sigma, quad.width * sigma
    zeros = np.pi / 4 + np.pi / 2 * np.arange(np.floor((lo - np.pi / 4) / (np.pi / 2)),
                                              np.ceil((hi - np.pi / 4) / (np.pi / 2)) + 1)
    edges = np.unique(np.concatenate([[lo, 0.0, hi], zeros[(zeros > lo) & (zeros < hi)]]))
    f = lambda d: _abs_orthogonal(s, d) * np.exp(-0.5 * (d / sigma) ** 2)
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, e = integrate.quad(f, a, b, epsabs=quad.abs_tol, epsrel=quad.rel_tol, limit=quad.limit)
        total += val
        err += e
    norm = sigma * np.sqrt(2 * np.pi)
    if err / norm > max(quad.abs_tol * len(edges), quad.rel_tol * total / norm) * 10:
        raise NumericError(f"quadrature did not converge: value={total / norm}, error={err / norm}")
    return float(total / norm)


def small_angle_violation(j, sigma: float) -> float:
    """Gaussian average of the small-angle form exp(-8 j delta^2)/4,
    which integrates to 1 / (4 sqrt(1 + 16 j sigma^2))."""
    s = as_spin(j)
    return float(0.25 / np.sqrt(1 + 16 * s.j * sigma ** 2))


def small_angle_integrand(j, delta):
    s = as_spin(j)
    return 0.25 * np.exp(-8 * s.j * np.asarray(delta) ** 2)
