"""Hardware planning: coupling strength from a dipole in a coplanar
resonator, qubit spacing from the dipole-dipole limit, the largest usable
ensemble and the decoherence and angle-error budgets.

Frequencies are angular (rad/s) unless a name ends in _hz.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy import constants as sc

from .errors import DomainError

HBAR = sc.hbar
EPS0 = sc.epsilon_0
C_LIGHT = sc.c
E_CHARGE = sc.e
BOHR = sc.physical_constants["Bohr radius"][0]

TWO_PI = 2 * math.pi
MHZ = 1e6
KHZ = 1e3
UM = 1e-6

SPACING_RATIO = 0.05       # dipole-dipole shift allowed, relative to chi
DELTA_OVER_G = 10.0        # dispersive detuning
COUPLING_MARGIN = 25.0     # g >= 25 gamma_c
DEPHASING_MARGIN = 2.5     # g >= 2.5 N gamma_s
PLACEMENT_WARN = 0.2       # fraction of L_x beyond which the cosine mode shape matters


def to_hz(omega: float) -> float:
    return omega / TWO_PI


def from_hz(f: float) -> float:
    return f * TWO_PI


@dataclass(frozen=True)
class ResonatorGeometry:
    length_x: float = 2e-2
    length_y: float = 8e-6
    length_z: float = 2e-7
    eps_r: float = 5.0
    omega: float | None = None   # defaults to the fundamental of the length_x line

    def __post_init__(self):
        for name in ("length_x", "length_y", "length_z", "eps_r"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")

    @property
    def volume(self) -> float:
        return self.length_x * self.length_y * self.length_z

    @property
    def mode_omega(self) -> float:
        if self.omega is not None:
            return self.omega
        return TWO_PI * C_LIGHT / (2 * self.length_x * math.sqrt(self.eps_r))


@dataclass(frozen=True)
class QubitSpec:
    """A qubit technology: dipole in units of e*a0 and distance from the line."""

    label: str
    dipole_units: float
    z_position: float = 0.0
    gamma_c_hz: float | None = None
    gamma_s_hz: float | None = None

    def __post_init__(self):
        if not self.dipole_units > 0:
            raise DomainError("dipole must be positive")

    @property
    def dipole(self) -> float:
        return self.dipole_units * BOHR * E_CHARGE


def evanescent_factor(geom: ResonatorGeometry, z: float) -> float:
    """Field attenuation outside the dielectric, exp(-Im k_out (z - L_z)).

    The in-film wavevector k = sqrt(w^2/c^2 - pi^2/Lx^2 - pi^2/Ly^2) is
    imaginary for a thin line, and matching at z = L_z gives
    k_out = -i k tan(k L_z).
    """
    if z <= geom.length_z:
        return 1.0
    w = geom.mode_omega
    k_in = np.sqrt(complex((w / C_LIGHT) ** 2 - (math.pi / geom.length_x) ** 2
                           - (math.pi / geom.length_y) ** 2))
    k_out = -1j * k_in * np.tan(k_in * geom.length_z)
    return float(math.exp(-abs(k_out.imag) * (z - geom.length_z)))


def coupling_from_dipole(q: QubitSpec, geom: ResonatorGeometry, attenuate: bool = True) -> float:
    """g = d sqrt(w / (2 hbar eps0 eps_r V)), reduced by the evanescent factor."""
    w = geom.mode_omega
    g = q.dipole * math.sqrt(w / (2 * HBAR * EPS0 * geom.eps_r * geom.volume))
    if attenuate:
        g *= evanescent_factor(geom, q.z_position)
    return g


def dispersive_shift(g: float, delta_over_g: float = DELTA_OVER_G) -> float:
    """chi = 4 g^2 / Delta."""
    return 4 * g / delta_over_g


def min_qubit_distance(q: QubitSpec, g: float, ratio: float = SPACING_RATIO,
                       delta_over_g: float = DELTA_OVER_G) -> float:
    """Spacing at which the dipole-dipole energy equals ratio * chi."""
    if not ratio > 0 or not g > 0:
        raise DomainError("ratio and g must be positive")
    chi = dispersive_shift(g, delta_over_g)
    return (q.dipole ** 2 / (4 * math.pi * EPS0 * HBAR * ratio * chi)) ** (1 / 3)


def max_qubits(geom: ResonatorGeometry, r_q: float) -> int:
    """Largest ensemble whose positional coupling spread keeps the
    violation; floor(0.6 (L_x/r_q)^(2/3))."""
    if not r_q > 0:
        raise DomainError("spacing must be positive")
    return int(math.floor(0.6 * (geom.length_x / r_q) ** (2 / 3) + 1e-12))


def positional_couplings(g: float, r_q: float, n_qubits: int, geom: ResonatorGeometry) -> np.ndarray:
    """g_k = g cos(pi r_q k / L_x) for qubits centred on the antinode."""
    if n_qubits * r_q > geom.length_x:
        raise DomainError("the ensemble does not fit on the resonator")
    k = np.arange(n_qubits) - n_qubits // 2
    return g * np.cos(math.pi * r_q * k / geom.length_x)


def placement_warning(r_q: float, n_qubits: int, geom: ResonatorGeometry) -> bool:
    return n_qubits * r_q > PLACEMENT_WARN * geom.length_x


def positional_moments(g: float, r_q: float, n_qubits: int, geom: ResonatorGeometry):
    """Small-angle mean and standard deviation of the positional couplings
    for even n_qubits: mean g(1 - a^2 (N^2+2)/24), variance
    g^2 a^4 (N^4 + 10 N^2 - 11)/720, with a = pi r_q / L_x."""
    a = math.pi * r_q / geom.length_x
    N = n_qubits
    mean = g * (1 - a ** 2 * (N ** 2 + 2) / 24)
    var = g ** 2 * a ** 4 * (N ** 4 + 10 * N ** 2 - 11) / 720
    return mean, math.sqrt(max(var, 0.0))


def angle_error_bound(n_qubits: int) -> float:
    """Largest rotation-angle spread keeping the Gaussian-averaged violation
    above 1/(4 sqrt 2) of the small-angle form: 1/(4 sqrt(2N + 1))."""
    return 1 / (4 * math.sqrt(2 * n_qubits + 1))


@dataclass
class HardwareSheet:
    label: str
    dipole_units: float
    g: float
    delta: float
    chi: float
    r_q: float
    n_qubits: int
    gamma_c_bound: float
    gamma_s_bound: float
    sigma_phi_bound: float
    attenuation: float
    flags: list = field(default_factory=list)

    def row_hz(self) -> dict:
        return {
            "label": self.label,
            "n_d": self.dipole_units,
            "g_MHz": to_hz(self.g) / MHZ,
            "delta_MHz": to_hz(self.delta) / MHZ,
            "chi_MHz": to_hz(self.chi) / MHZ,
            "r_q_um": self.r_q / UM,
            "N": self.n_qubits,
            "gamma_s_kHz": to_hz(self.gamma_s_bound) / KHZ,
            "gamma_c_kHz": to_hz(self.gamma_c_bound) / KHZ,
            "sigma_phi": self.sigma_phi_bound,
            "attenuation": self.attenuation,
            "flags": list(self.flags),
        }


def bounds_from(g: float, n_qubits: int):
    """(gamma_c, gamma_s, sigma_phi) budgets for coupling g and N qubits."""
    return (g / COUPLING_MARGIN, g / (DEPHASING_MARGIN * n_qubits), angle_error_bound(n_qubits))


def build_sheet(q: QubitSpec, geom: ResonatorGeometry | None = None,
                delta_over_g: float = DELTA_OVER_G, ratio: float = SPACING_RATIO,
                attenuated_spacing: bool = False) -> HardwareSheet:
    """Full budget for one technology.

    The spacing uses the bare (unattenuated) coupling by default, which is
    how the 1.6 n_d^(1/3) micron rule of thumb is obtained.
    """
    geom = geom or ResonatorGeometry()
    g = coupling_from_dipole(q, geom)
    g_space = g if attenuated_spacing else coupling_from_dipole(q, geom, attenuate=False)
    r_q = min_qubit_distance(q, g_space, ratio, delta_over_g)
    n = max_qubits(geom, r_q)
    gc, gs, sp = bounds_from(g, n)
    flags = []
    if q.gamma_c_hz is not None and from_hz(q.gamma_c_hz) > gc:
        flags.append("gamma_c exceeds bound")
    if q.gamma_s_hz is not None and from_hz(q.gamma_s_hz) > gs:
        flags.append("gamma_s exceeds bound")
    if placement_warning(r_q, n, geom):
        flags.append("ensemble spans a large part of the line")
    return HardwareSheet(q.label, q.dipole_units, g, delta_over_g * g, dispersive_shift(g, delta_over_g),
                         r_q, n, gc, gs, sp, evanescent_factor(geom, q.z_position), flags)


# Technologies and their quoted design values, for comparison.
REFERENCE_SPECS = [
    QubitSpec("superconducting", 1e4),
    QubitSpec("rydberg", 3e3, z_position=50e-6),
    QubitSpec("spin", 1e2),
]

REFERENCE_ROWS = {
    "superconducting": {"g_MHz": 110, "delta_MHz": 1000, "chi_MHz": 45, "r_q_um": 35, "N": 41,
                        "gamma_s_kHz": 4500, "gamma_c_kHz": 1000, "sigma_phi": 0.027},
    "rydberg": {"g_MHz": 7, "delta_MHz": 70, "chi_MHz": 3, "r_q_um": 23, "N": 53,
                "gamma_s_kHz": 300, "gamma_c_kHz": 54, "sigma_phi": 0.024},
    "spin": {"g_MHz": 1, "delta_MHz": 10, "chi_MHz": 0.4, "r_q_um": 7, "N": 110,
             "gamma_s_kHz": 45, "gamma_c_kHz": 24, "sigma_phi": 0.017},
}


def load_specs(path) -> tuple[list[QubitSpec], ResonatorGeometry]:
    """Read {"geometry": {...}, "qubits": [{...}, ...]} from JSON."""
    data = json.loads(Path(path).read_text())
    geom = ResonatorGeometry(**data.get("geometry", {}))
    specs = [QubitSpec(**row) for row in data.get("qubits", [])]
    if not specs:
        raise DomainError("config lists no qubits")
    return specs, geom


def sheets_to_json(sheets: list[HardwareSheet]) -> str:
    return json.dumps([s.row_hz() for s in sheets], indent=2)


def sheets_to_text(sheets: list[HardwareSheet]) -> str:
    cols = ["label", "n_d", "g_MHz", "delta_MHz", "chi_MHz", "r_q_um", "N",
            "gamma_s_kHz", "gamma_c_kHz", "sigma_phi"]
    rows = [[_fmt(s.row_hz()[c]) for c in cols] for s in sheets]
    widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
    line = lambda vals: "  ".join(v.rjust(w) for v, w in zip(vals, widths))
    return "\n".join([line(cols)] + [line(r) for r in rows]) + "\n"


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(v)
    return f"{v:.4g}"


def geometry_dict(geom: ResonatorGeometry) -> dict:
    return asdict(geom)
