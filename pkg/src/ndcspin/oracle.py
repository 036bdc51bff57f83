"""Brute-force reference routes on the truncated spin (x) Fock space.

Everything here works with explicit state vectors or density matrices in
the Fock basis and a homodyne POVM built from Hermite functions, so it
shares no closed forms with the analytic modules it is used to check.
Joint pure states are arrays of shape (2j+1, n_max+1), spin index first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .cavity import as_amplitude
from .errors import DomainError, NumericError, ResourceError
from .ideal import SIGNS, ProbabilityTable
from .spin_math import SpinJ, as_spin, coherent_state, wigner_d, wigner_d_matrix

LEAK_TOL = 1e-8


def cutoff_rule(alpha_mag: float) -> int:
    """Smallest cutoff accepted for a probe of amplitude |alpha_0|."""
    return int(math.ceil(alpha_mag ** 2 + 10 * alpha_mag))


def default_cutoff(alpha_mag: float, tail: float = 1e-20) -> int:
    """Cutoff used when none is given: at least the rule, and large enough
    that the Poisson tail beyond it is below `tail`.  Overlaps through the
    non-diagonal homodyne projector are only accurate to the amplitude of
    the discarded tail, i.e. its square root."""
    n = cutoff_rule(alpha_mag)
    while poisson.sf(n, alpha_mag ** 2) > tail:
        n += 1
    return n


def coherent_fock(a: complex, n_max: int) -> np.ndarray:
    """Fock amplitudes of |a> up to n_max, in log space to survive large |a|."""
    n = np.arange(n_max + 1)
    a = complex(a)
    if a == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1
        return out
    logmag = -0.5 * abs(a) ** 2 + n * np.log(abs(a)) - 0.5 * gammaln(n + 1)
    return np.exp(logmag + 1j * n * np.angle(a))


def checked_coherent(a: complex, n_max: int, tol: float = LEAK_TOL) -> np.ndarray:
    v = coherent_fock(a, n_max)
    leak = 1 - np.vdot(v, v).real
    if leak > tol:
        raise ResourceError(f"Fock cutoff {n_max} leaks {leak:.3e} of |{a}>; raise n_max")
    return v


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """psi_n(x) for n = 0..n_max by the normalized three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, x.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x ** 2)
    if n_max >= 1:
        out[1] = np.sqrt(2) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


@dataclass
class HomodynePOVM:
    """Fock-basis matrices of the x > 0 and x < 0 projectors."""

    n_max: int
    plus: np.ndarray
    minus: np.ndarray
    nodes: int
    span: float

    def element(self, sign: int) -> np.ndarray:
        return self.plus if sign > 0 else self.minus

    def completeness_error(self) -> float:
        return float(np.abs(self.plus + self.minus - np.eye(self.n_max + 1)).max())


def build_homodyne_povm(n_max: int, alpha_mag: float = 0.0, nodes: int | None = None,
                        tol: float = 1e-8) -> HomodynePOVM:
    span = max(np.sqrt(2) * alpha_mag + 8, np.sqrt(2 * n_max + 1) + 8)
    nodes = max(400, 4 * n_max) if nodes is None else nodes
    if nodes < 400:
        raise DomainError("the POVM quadrature needs at least 400 nodes")
    t, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * span * (t + 1)
    w = 0.5 * span * w
    mats = []
    for xs in (x, -x):
        h = hermite_functions(n_max, xs)
        mats.append((h * w) @ h.T)
    povm = HomodynePOVM(n_max, mats[0], mats[1], nodes, span)
    err = povm.completeness_error()
    if err > tol:
        raise NumericError(f"homodyne POVM incomplete by {err:.3e}")
    return povm


def joint_state(spin: np.ndarray, alpha, n_max: int) -> np.ndarray:
    a = as_amplitude(alpha)
    return np.outer(np.asarray(spin, dtype=complex), checked_coherent(a.value, n_max))


def dispersive_evolve(psi: np.ndarray, chi_t: float) -> np.ndarray:
    """Apply exp(-i chi t (a^dagger a J_z - 2 J_z^2)) to a joint state."""
    s = SpinJ(psi.shape[0] - 1)
    m = s.m()[:, None]
    n = np.arange(psi.shape[1])[None, :]
    return psi * np.exp(-1j * chi_t * (n * m - 2 * m ** 2))


def homodyne_probabilities(psi: np.ndarray, povm: HomodynePOVM):
    """Outcome probabilities and unnormalized post-measurement spin states."""
    probs, states = [], []
    for sg in SIGNS:
        rho = psi @ povm.element(sg).T @ psi.conj().T
        states.append(rho)
        probs.append(np.trace(rho).real)
    return np.array(probs), states


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    ev = np.linalg.eigvalsh(0.5 * (a - b + (a - b).conj().T))
    return float(0.5 * np.abs(ev).sum())


def _readout(rho: np.ndarray, alpha, povm: HomodynePOVM) -> np.ndarray:
    """Final entangle-and-measure step on a spin density matrix."""
    lam, vec = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    out = np.zeros(2)
    for k in range(lam.size):
        if abs(lam[k]) < 1e-300:
            continue
        psi = dispersive_evolve(joint_state(vec[:, k], alpha, povm.n_max), np.pi)
        p, _ = homodyne_probabilities(psi, povm)
        out += lam[k] * p
    return out


def _protocol_setup(alpha, n_max, nodes):
    a = as_amplitude(alpha)
    rule = cutoff_rule(a.magnitude)
    if n_max is None:
        n_max = default_cutoff(a.magnitude)
    elif n_max < rule:
        raise ResourceError(f"n_max={n_max} is below the cutoff rule {rule} for |alpha_0|={a.magnitude}")
    return a, build_homodyne_povm(n_max, a.magnitude, nodes)


def full_protocol_exact(j, phi: float, alpha, n_max: int | None = None,
                        nodes: int | None = None, phi2: float | None = None) -> ProbabilityTable:
    """Protocol table from explicit joint-state evolution and the Hermite POVM."""
    s = as_spin(j)
    a, povm = _protocol_setup(alpha, n_max, nodes)
    phi2 = phi if phi2 is None else phi2
    psi_spin = coherent_state(s, phi)
    rot = wigner_d_matrix(s, phi2)
    p2 = _readout(rot @ np.outer(psi_spin, psi_spin) @ rot.T, a, povm)
    psi = dispersive_evolve(joint_state(psi_spin, a, povm.n_max), np.pi)
    _, post = homodyne_probabilities(psi, povm)
    p12 = np.array([_readout(rot @ rho @ rot.T, a, povm) for rho in post])
    return ProbabilityTable(p2, p12)


# --- open-system reference --------------------------------------------------


def _rk4_window(blocks: np.ndarray, m: np.ndarray, n: np.ndarray, r_c: float, r_s: float,
                chi_t: float, n_steps: int, dephasing: str) -> np.ndarray:
    """RK4 for blocks X_b = <m_b| rho |n_b> (Fock operators) of the master
    equation with H = chi (a^dag a J_z - 2 J_z^2), photon loss r_c and J_z
    dephasing r_s, integrated in the frame rotating with H."""
    F = blocks.shape[-1]
    p = np.arange(F)
    dm = (m - n)[:, None, None]
    if dephasing == "solution":
        deph = r_s * dm ** 2
    elif dephasing == "literal":
        deph = 0.5 * r_s * dm ** 2
    else:
        raise DomainError(f"unknown dephasing convention {dephasing!r}")
    decay = -0.5 * r_c * (p[:, None] + p[None, :])[None] - deph
    feed = np.sqrt(np.outer(p[1:], p[1:]))

    def rhs(t, y):
        out = decay * y
        out[:, :-1, :-1] += r_c * np.exp(-1j * dm * t) * feed * y[:, 1:, 1:]
        return out

    y = blocks.astype(complex)
    h = chi_t / n_steps
    for k in range(n_steps):
        t = k * h
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    frame = -1j * chi_t * (m[:, None, None] * p[None, :, None] - n[:, None, None] * p[None, None, :]) \
        + 2j * chi_t * (m ** 2 - n ** 2)[:, None, None]
    return np.exp(frame) * y


@dataclass
class RK4Result:
    rho: np.ndarray       # joint density matrix, spin-major
    n_steps: int
    step_change: float    # trace distance between the last two refinements


def lindblad_rk4(spin_state: np.ndarray, alpha, r_c: float, r_s: float, chi_t: float = np.pi,
                 n_max: int | None = None, n_steps: int = 64, tol: float = 1e-6,
                 max_steps: int = 1 << 14, dephasing: str = "solution") -> RK4Result:
    """Evolve spin (x) |alpha_0> through one window, doubling the step count
    until successive results differ by less than tol in trace distance."""
    s = SpinJ(np.asarray(spin_state).shape[0] - 1)
    a = as_amplitude(alpha)
    n_max = default_cutoff(a.magnitude) if n_max is None else n_max
    cav = checked_coherent(a.value, n_max)
    spin_state = np.asarray(spin_state, dtype=complex)
    mm, nn = np.meshgrid(s.m(), s.m(), indexing="ij")
    coeff = np.outer(spin_state, spin_state.conj()).ravel()
    blocks0 = coeff[:, None, None] * np.outer(cav, cav.conj())[None]
    S, F = s.dim, n_max + 1

    def run(steps):
        x = _rk4_window(blocks0, mm.ravel(), nn.ravel(), r_c, r_s, chi_t, steps, dephasing)
        return x.reshape(S, S, F, F).transpose(0, 2, 1, 3).reshape(S * F, S * F)

    prev = run(n_steps)
    while True:
        n_steps *= 2
        cur = run(n_steps)
        change = trace_distance(cur, prev)
        if change < tol:
            return RK4Result(cur, n_steps, change)
        if n_steps >= max_steps:
            raise NumericError(f"RK4 did not settle: change {change:.3e} at {n_steps} steps")
        prev = cur


def _partial_povm(rho_joint: np.ndarray, S: int, F: int, element: np.ndarray) -> np.ndarray:
    r = rho_joint.reshape(S, F, S, F)
    return np.einsum("apbq,qp->ab", r, element)


def open_protocol_rk4(j, phi: float, alpha, r_c: float, r_s: float,
                      dephasing: str = "solution", n_steps: int = 64) -> ProbabilityTable:
    """Decohered protocol table with every window integrated by RK4."""
    s = as_spin(j)
    a, povm = _protocol_setup(alpha, None, None)
    F = povm.n_max + 1
    rot = wigner_d_matrix(s, phi)
    psi = coherent_state(s, phi)

    def readout(rho_spin):
        out = np.zeros(2)
        for k in range(s.dim):
            w = rho_spin[k, k].real
            e = np.zeros(s.dim)
            e[k] = 1
            res = lindblad_rk4(e, a, r_c, r_s, n_max=povm.n_max, n_steps=n_steps, dephasing=dephasing)
            out += w * np.array([np.trace(_partial_povm(res.rho, s.dim, F, povm.element(sg))).real
                                 for sg in SIGNS])
        return out

    # no probe field in the skipped window: the cavity stays in vacuum
    idle = lindblad_rk4(psi, 1e-300, r_c, r_s, n_max=0, n_steps=n_steps, dephasing=dephasing).rho
    p2 = readout(rot @ idle @ rot.T)
    first = lindblad_rk4(psi, a, r_c, r_s, n_max=povm.n_max, n_steps=n_steps, dephasing=dephasing).rho
    p12 = np.array([readout(rot @ _partial_povm(first, s.dim, F, povm.element(sg)) @ rot.T)
                    for sg in SIGNS])
    return ProbabilityTable(p2, p12)


# --- qubit-level reference --------------------------------------------------


def _pauli_ops(N: int):
    dim = 1 << N
    idx = np.arange(dim)
    bits = (idx[:, None] >> np.arange(N)[None, :]) & 1  # 1 = up
    return dim, idx, bits


def _product_rotation(angles: np.ndarray) -> np.ndarray:
    out = np.array([[1.0]])
    for ang in angles[::-1]:
        c, s = np.cos(ang / 2), np.sin(ang / 2)
        out = np.kron(out, np.array([[c, s], [-s, c]]))
    return out


def _qubit_window(couplings: np.ndarray, include_xy: bool, n_max: int):
    """Per-photon-number unitaries of one window, normalized so that the
    mean dispersive shift gives chi t = pi."""
    g = np.asarray(couplings, dtype=float)
    N = g.size
    dim, idx, bits = _pauli_ops(N)
    ratio = g / g.mean()
    theta = np.pi * ratio ** 2
    sz = 2 * bits - 1
    zsum = (sz * theta[None, :]).sum(axis=1) / 2
    if not include_xy:
        ph = np.exp(-1j * np.arange(n_max + 1)[:, None] * zsum[None, :])
        return [np.diag(row) for row in ph]
    xy = np.zeros((dim, dim))
    for i in range(N):
        for k in range(N):
            if i == k:
                continue
            # 4 (s+_i s-_k + s-_i s+_k): flips an up at k and a down at i, or reverse
            src = idx[(bits[:, i] == 0) & (bits[:, k] == 1)]
            dst = src ^ (1 << i) ^ (1 << k)
            c = np.pi * ratio[i] * ratio[k]
            xy[dst, src] += c
            xy[src, dst] += c
    out = []
    for n in range(n_max + 1):
        lam, vec = np.linalg.eigh(np.diag(n * zsum) + xy)
        out.append((vec * np.exp(-1j * lam)) @ vec.conj().T)
    return out


def qubit_level_protocol(couplings, phi: float, alpha, include_xy: bool = False,
                         n_max: int | None = None, nodes: int | None = None) -> ProbabilityTable:
    """Protocol on N <= 8 individual qubits with per-qubit couplings g_i.

    Rotation angles are phi g_i / <g> and dispersive phases pi (g_i/<g>)^2,
    calibrated on the sample mean <g>.
    """
    g = np.asarray(couplings, dtype=float)
    if g.ndim != 1 or not 1 <= g.size <= 8:
        raise DomainError("qubit-level reference supports 1 to 8 qubits")
    if np.any(g <= 0):
        raise DomainError("couplings must be positive")
    a, povm = _protocol_setup(alpha, n_max, nodes)
    F = povm.n_max + 1
    ratio = g / g.mean()
    rot = _product_rotation(phi * ratio)
    window = _qubit_window(g, include_xy, povm.n_max)
    cav = checked_coherent(a.value, povm.n_max)
    ground = np.zeros(1 << g.size)
    ground[0] = 1

    def entangle(vec):
        return np.stack([window[n] @ vec * cav[n] for n in range(F)], axis=1)

    def measure(psi):
        return [psi @ povm.element(sg).T @ psi.conj().T for sg in SIGNS]

    def readout(rho):
        lam, vec = np.linalg.eigh(0.5 * (rho + rho.conj().T))
        out = np.zeros(2)
        for k in range(lam.size):
            if abs(lam[k]) > 1e-300:
                out += lam[k] * np.array([np.trace(r).real for r in measure(entangle(vec[:, k]))])
        return out

    first = rot @ ground
    p2 = readout(rot @ np.outer(first, first) @ rot.T)
    p12 = np.array([readout(rot @ r @ rot.T) for r in measure(entangle(first))])
    return ProbabilityTable(p2, p12)


# --- rotation and measurement-scheme checks ----------------------------------


def resonant_rotation_check(j, phi: float, alpha_r: float, n_max: int | None = None) -> float:
    """Fidelity of the spin after a resonant pulse from |alpha_r> with the
    target exp(-i phi J_y)|j,-j>.

    H = -i g (a J_+ - a^dag J_-), run for t = phi / (2 alpha_r g); it keeps
    n + (m + j) fixed, so each excitation sector is exponentiated exactly.
    """
    s = as_spin(j)
    if alpha_r <= 0:
        raise DomainError("alpha_r must be positive")
    n_max = default_cutoff(alpha_r) if n_max is None else n_max
    cav = checked_coherent(alpha_r, n_max)
    t = phi / (2 * alpha_r)
    m = s.m()
    jj = s.j
    raise_c = np.sqrt((jj - m[:-1]) * (jj + m[:-1] + 1))
    final = np.zeros((s.dim, n_max + 1), dtype=complex)
    for k in range(n_max + 1):
        # basis (n = k - i, spin index i); initial amplitude only at i = 0
        i = np.arange(min(k, n_max) + 1)
        i = i[(i <= s.twice_j) & (k - i <= n_max)]
        if i.size == 0 or i[0] != 0:
            continue
        h = np.zeros((i.size, i.size), dtype=complex)
        for a_ in range(i.size - 1):
            # <n-1, i+1| H |n, i> = -i sqrt(n) c_i
            val = -1j * np.sqrt(k - i[a_]) * raise_c[i[a_]]
            h[a_ + 1, a_] = val
            h[a_, a_ + 1] = np.conj(val)
        lam, vec = np.linalg.eigh(h)
        u = (vec * np.exp(-1j * lam * t)) @ vec.conj().T
        amp = u[:, 0] * cav[k]
        final[i, k - i] += amp
    rho = final @ final.conj().T
    target = coherent_state(s, phi)
    return float(np.real(target @ rho @ target))


@dataclass
class DisturbanceCheck:
    table: ProbabilityTable
    spin_disturbance: float
    method: int
    notes: dict = field(default_factory=dict)


def _luders(povm: HomodynePOVM, sign: int) -> np.ndarray:
    lam, vec = np.linalg.eigh(povm.element(sign))
    return (vec * np.sqrt(np.clip(lam, 0, None))) @ vec.T


def disturbance_method_check(j, phi: float, alpha, method: int,
                             n_max: int | None = None) -> DisturbanceCheck:
    """Estimate P_2 by either of two schemes that make the first window
    leave the spin undisturbed.

    method 1: the window runs twice (chi t = 2 pi), returning the cavity to
    a product state; in the measured branch the homodyne collapse happens
    between the two windows.
    method 2: the unmeasured branch probes with the cat state
    (|a> + |-a>)/sqrt(2 + 2 exp(-2|a|^2)), which the window maps to itself.
    """
    s = as_spin(j)
    a, povm = _protocol_setup(alpha, n_max, None)
    psi_spin = coherent_state(s, phi)
    target = np.outer(psi_spin, psi_spin)
    rot = wigner_d_matrix(s, phi)
    if method == 1:
        psi = dispersive_evolve(joint_state(psi_spin, a, povm.n_max), np.pi)
        undisturbed = dispersive_evolve(psi, np.pi)
        post = []
        for sg in SIGNS:
            collapsed = psi @ _luders(povm, sg).T
            again = dispersive_evolve(collapsed, np.pi)
            post.append(again @ again.conj().T)
    elif method == 2:
        plus = checked_coherent(a.value, povm.n_max)
        cat = (plus + checked_coherent(-a.value, povm.n_max)) / np.sqrt(2 + 2 * np.exp(-2 * a.magnitude ** 2))
        undisturbed = dispersive_evolve(np.outer(psi_spin, cat), np.pi)
        psi = dispersive_evolve(joint_state(psi_spin, a, povm.n_max), np.pi)
        _, post = homodyne_probabilities(psi, povm)
    else:
        raise DomainError("method must be 1 or 2")
    rho_free = undisturbed @ undisturbed.conj().T
    disturbance = trace_distance(rho_free, target)
    p2 = _readout(rot @ rho_free @ rot.T, a, povm)
    p12 = np.array([_readout(rot @ r @ rot.T, a, povm) for r in post])
    return DisturbanceCheck(ProbabilityTable(p2, p12), disturbance, method)


# --- explicit d-matrix sum -------------------------------------------------


def wigner_d_explicit(twice_j: int, twice_m1: int, twice_m2: int, beta: float, dps: int = 40) -> float:
    """Factorial-sum d_{m1,m2}(beta) in mpmath at `dps` digits."""
    import mpmath as mp
    with mp.workdps(dps):
        jp, jm = (twice_j + twice_m1) // 2, (twice_j - twice_m1) // 2
        kp, km = (twice_j + twice_m2) // 2, (twice_j - twice_m2) // 2
        diff = (twice_m1 - twice_m2) // 2  # m1 - m2
        pref = mp.sqrt(mp.factorial(jp) * mp.factorial(jm) * mp.factorial(kp) * mp.factorial(km))
        c, s = mp.cos(mp.mpf(beta) / 2), mp.sin(mp.mpf(beta) / 2)
        total = mp.mpf(0)
        for k in range(0, twice_j + 1):
            a1, a2, a3 = kp - k, jm - k, k + diff
            if a1 < 0 or a2 < 0 or a3 < 0:
                continue
            term = (-1) ** (a3 % 2) * pref / (mp.factorial(a1) * mp.factorial(k) * mp.factorial(a2) * mp.factorial(a3))
            total += term * c ** (twice_j - diff - 2 * k) * s ** (2 * k + diff)
        return float(total)


# --- regression suite ------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    delta: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.delta < self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "delta": self.delta, "tolerance": self.tolerance,
                "passed": self.passed}


def run_oracle_suite(tolerance: float | None = None, n_max: int | None = None) -> list[CheckResult]:
    """Analytic modules against the brute-force routes.

    `tolerance` replaces every per-check tolerance; `n_max` forces the Fock
    cutoff for the |alpha_0| = 2 checks and must respect the cutoff rule.
    """
    from .decoherence import DecoherenceRates, decohered_probabilities, evolve_open
    from .ideal import ideal_probabilities
    from .inhomogeneity import group_couplings, inhomogeneous_probabilities

    tol = (lambda t: t) if tolerance is None else (lambda t: tolerance)
    phi = np.pi / 4
    out = []

    worst = 0.0
    for tj in (1, 4, 9, 20):
        for tm1 in range(-tj, tj + 1, 2):
            for tm2 in range(-tj, tj + 1, 2):
                worst = max(worst, abs(wigner_d(tj, tm1, tm2, 0.91) - wigner_d_explicit(tj, tm1, tm2, 0.91)))
    out.append(CheckResult("wigner_d vs factorial sum", worst, tol(1e-12)))

    exact = full_protocol_exact(2, phi, 6)
    out.append(CheckResult("ideal table vs Fock protocol at |a0|=6",
                           exact.max_abs_diff(ideal_probabilities(2, phi)), tol(1e-6)))

    zero = DecoherenceRates()
    out.append(CheckResult("analytic vs Fock protocol at |a0|=2",
                           full_protocol_exact(4, phi, 2, n_max=n_max).max_abs_diff(
                               decohered_probabilities(4, phi, 2, zero)), tol(1e-8)))

    rates = DecoherenceRates(0.1, 0.05)
    psi = coherent_state(2, phi)
    cut = default_cutoff(2) if n_max is None else n_max
    if cut < cutoff_rule(2):
        raise ResourceError(f"n_max={cut} is below the cutoff rule {cutoff_rule(2)}")
    rk = lindblad_rk4(psi, 2, rates.r_c, rates.r_s, n_max=cut)
    out.append(CheckResult("branch state vs RK4 master equation",
                           trace_distance(rk.rho, evolve_open(psi, 2, rates).to_fock(cut)), tol(1e-4)))

    g = np.ones(4)
    out.append(CheckResult("XY term irrelevant for uniform couplings",
                           qubit_level_protocol(g, phi, 2, n_max=n_max).max_abs_diff(
                               qubit_level_protocol(g, phi, 2, include_xy=True, n_max=n_max)), tol(1e-10)))

    g = np.array([1.04, 0.97, 1.01, 0.95])
    out.append(CheckResult("one-qubit groups vs qubit-level protocol",
                           inhomogeneous_probabilities(group_couplings(g, 4), 2).max_abs_diff(
                               qubit_level_protocol(g, phi, 2, n_max=n_max)), tol(1e-8)))

    out.append(CheckResult("resonant pulse infidelity at alpha_r=40",
                           1 - resonant_rotation_check(1, phi, 40.0), tol(1e-2)))

    ideal_v = ideal_probabilities(2, phi).v_plus
    for method in (1, 2):
        chk = disturbance_method_check(2, phi, 6, method)
        out.append(CheckResult(f"method {method} violation", abs(chk.table.v_plus - ideal_v), tol(1e-5)))
        out.append(CheckResult(f"method {method} spin disturbance", chk.spin_disturbance, tol(1e-8)))
    return out
