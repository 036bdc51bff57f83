"""Collective spin algebra: Wigner d-matrices, spin coherent states, parity
projectors and the Husimi distribution.

States of a spin j live in a (2j+1)-dimensional array indexed by
i = m + j, so index 0 is the lowest-weight state |j, -j>.  All labels are
carried as twice the physical value (twice_j, twice_m) to keep half-integer
spins exact.

The d-matrix convention is d_{m',m}(beta) = <j m'| exp(-i beta J_y) |j m>,
which gives d_{-j,-j} = cos^{2j}(beta/2) and d_{-j,j} = sin^{2j}(beta/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

NORM_TOL = 1e-10


@dataclass(frozen=True)
class SpinJ:
    twice_j: int

    def __post_init__(self):
        if not isinstance(self.twice_j, (int, np.integer)) or self.twice_j < 1:
            raise DomainError(f"twice_j must be a positive integer, got {self.twice_j!r}")

    @property
    def j(self) -> float:
        return self.twice_j / 2

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    @property
    def is_half_integer(self) -> bool:
        return self.twice_j % 2 == 1

    @property
    def branch(self) -> str:
        """Which column of the ideal closed forms applies.

        Half-integer j = n + 1/2 with n odd behaves like even integer j,
        and n even like odd integer j.
        """
        if not self.is_half_integer:
            return "even" if (self.twice_j // 2) % 2 == 0 else "odd"
        n = (self.twice_j - 1) // 2
        return "half-n-odd" if n % 2 == 1 else "half-n-even"

    @property
    def even_like(self) -> bool:
        return self.branch in ("even", "half-n-odd")

    def twice_m(self) -> np.ndarray:
        return np.arange(-self.twice_j, self.twice_j + 1, 2)

    def m(self) -> np.ndarray:
        return self.twice_m() / 2


@dataclass(frozen=True)
class MIndex:
    """Magnetic label of a basis state |j, m>, stored as twice_m."""

    spin: SpinJ
    twice_m: int

    def __post_init__(self):
        tj = self.spin.twice_j
        if abs(self.twice_m) > tj or (self.twice_m - tj) % 2:
            raise DomainError(f"twice_m={self.twice_m} invalid for twice_j={tj}")

    @property
    def index(self) -> int:
        return (self.twice_m + self.spin.twice_j) // 2

    @property
    def label(self) -> int:
        """Integer label whose parity defines the even/odd sectors.

        For integer j this is m itself; for half-integer j it is m - 1/2.
        """
        if self.spin.is_half_integer:
            return (self.twice_m - 1) // 2
        return self.twice_m // 2

    @property
    def is_even(self) -> bool:
        return self.label % 2 == 0


def as_spin(j) -> SpinJ:
    if isinstance(j, SpinJ):
        return j
    return SpinJ(int(j))


def parity_labels(j) -> np.ndarray:
    """Integer parity labels for every basis index of spin j."""
    s = as_spin(j)
    tm = s.twice_m()
    if s.is_half_integer:
        return (tm - 1) // 2
    return tm // 2


def parity_mask(j, sign: int = +1) -> np.ndarray:
    """Boolean mask of the even (sign=+1) or odd (sign=-1) sector."""
    even = parity_labels(j) % 2 == 0
    return even if sign > 0 else ~even


def _validate_twice_m(s: SpinJ, twice_m: int) -> int:
    return MIndex(s, int(twice_m)).index


# --- d-matrix construction -------------------------------------------------
#
# The matrix for spin j is built from the one for j - 1/2 by coupling an
# extra spin-1/2: |j m> = sqrt((j+m)/2j)|j-1/2, m-1/2>|up>
#                       + sqrt((j-m)/2j)|j-1/2, m+1/2>|down>.
# Every step is an isometric recombination of bounded entries, so rounding
# errors grow only linearly in 2j.


def _recursive_d(twice_j: int, beta: float) -> np.ndarray:
    c, s = np.cos(beta / 2), np.sin(beta / 2)
    d = np.array([[c, s], [-s, c]])
    for t in range(2, twice_j + 1):
        i = np.arange(t + 1)
        up = np.sqrt(i / t)
        dn = np.sqrt((t - i) / t)
        pad = np.zeros((t + 2, t + 2))
        pad[1:-1, 1:-1] = d
        # pad[a+1, b+1] holds the smaller matrix entry (a, b)
        s_uu = pad[0:t + 1, 0:t + 1]
        s_dd = pad[1:t + 2, 1:t + 2]
        s_ud = pad[0:t + 1, 1:t + 2]
        s_du = pad[1:t + 2, 0:t + 1]
        d = (c * np.outer(up, up) * s_uu + c * np.outer(dn, dn) * s_dd
             - s * np.outer(up, dn) * s_ud + s * np.outer(dn, up) * s_du)
    return d


@lru_cache(maxsize=256)
def _quarter_turn(twice_j: int) -> np.ndarray:
    d = _recursive_d(twice_j, np.pi / 2)
    d.setflags(write=False)
    return d


def wigner_d_matrix(j, beta: float) -> np.ndarray:
    """Full real d-matrix d_{m',m}(beta), rows m', columns m.

    Uses J_y = U J_z U^dagger with U = exp(-i pi/2 J_z) exp(-i pi/2 J_y), so
    d(beta) = P Delta diag(exp(-i k beta)) Delta^T P^* with Delta = d(pi/2).
    """
    s = as_spin(j)
    beta = float(beta)
    if not np.isfinite(beta):
        raise DomainError("beta must be finite")
    return _d_matrix_cached(s.twice_j, beta).copy()


@lru_cache(maxsize=4096)
def _d_matrix_cached(twice_j: int, beta: float) -> np.ndarray:
    delta = _quarter_turn(twice_j)
    m = np.arange(-twice_j, twice_j + 1, 2) / 2
    phase = np.exp(-0.5j * np.pi * m)
    core = (delta * np.exp(-1j * beta * m)[None, :]) @ delta.T
    d = (phase[:, None] * core * phase.conj()[None, :]).real
    d.setflags(write=False)
    return d


def wigner_d_matrix_recursive(j, beta: float) -> np.ndarray:
    """Same matrix built directly by the spin-1/2 coupling recursion."""
    s = as_spin(j)
    if s.twice_j == 1:
        c, sn = np.cos(beta / 2), np.sin(beta / 2)
        return np.array([[c, sn], [-sn, c]])
    return _recursive_d(s.twice_j, float(beta))


def wigner_d(j, twice_m1: int, twice_m2: int, beta: float) -> float:
    s = as_spin(j)
    a = _validate_twice_m(s, twice_m1)
    b = _validate_twice_m(s, twice_m2)
    return float(_d_matrix_cached(s.twice_j, float(beta))[a, b])


def wigner_d_column(j, twice_m2: int, beta: float) -> np.ndarray:
    s = as_spin(j)
    b = _validate_twice_m(s, twice_m2)
    return _d_matrix_cached(s.twice_j, float(beta))[:, b].copy()


def coherent_state(j, phi: float) -> np.ndarray:
    """Spin coherent state exp(-i phi J_y)|j, -j> as a real amplitude vector."""
    s = as_spin(j)
    return wigner_d_column(s, -s.twice_j, phi)


def rotate(state: np.ndarray, phi: float, j=None) -> np.ndarray:
    state = np.asarray(state)
    s = as_spin(j) if j is not None else SpinJ(state.shape[0] - 1)
    if state.shape[0] != s.dim:
        raise DomainError("state dimension does not match spin")
    return wigner_d_matrix(s, phi) @ state


def parity_project(state: np.ndarray, sign: int, j=None) -> np.ndarray:
    state = np.asarray(state)
    s = as_spin(j) if j is not None else SpinJ(state.shape[0] - 1)
    if sign not in (+1, -1):
        raise DomainError("sign must be +1 or -1")
    out = state.copy()
    out[~parity_mask(s, sign)] = 0
    return out


def husimi_q(state: np.ndarray, phi: float, theta: float, j=None) -> float:
    """Husimi Q(phi, theta) = |<theta, phi|psi>|^2 for the probe
    exp(-i theta J_z) exp(-i phi J_y)|j, -j>."""
    state = np.asarray(state, dtype=complex)
    s = as_spin(j) if j is not None else SpinJ(state.shape[0] - 1)
    norm = np.vdot(state, state).real
    if abs(norm - 1) > NORM_TOL:
        raise DomainError(f"state is not normalized (norm^2 = {norm})")
    probe = np.exp(-1j * theta * s.m()) * coherent_state(s, phi)
    return float(abs(np.vdot(probe, state)) ** 2)
