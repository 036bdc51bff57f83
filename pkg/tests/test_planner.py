import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ndcspin import DomainError
from ndcspin.planner import (REFERENCE_ROWS, REFERENCE_SPECS, UM, QubitSpec, ResonatorGeometry,
                             angle_error_bound, build_sheet, coupling_from_dipole, dispersive_shift,
                             evanescent_factor, from_hz, load_specs, max_qubits, min_qubit_distance,
                             positional_couplings, positional_moments, sheets_to_json, sheets_to_text,
                             to_hz)

GEOM = ResonatorGeometry()


def test_geometry():
    assert abs(GEOM.volume - 2e-2 * 8e-6 * 2e-7) < 1e-25
    f = to_hz(GEOM.mode_omega)
    assert abs(f / (3e8 / (2 * 2e-2 * math.sqrt(5))) - 1) < 0.2
    with pytest.raises(DomainError):
        ResonatorGeometry(length_x=0)
    with pytest.raises(DomainError):
        QubitSpec("bad", 0)


def test_unit_dipole_coupling():
    # 7.1e4 per second as an angular frequency, i.e. about 11 kHz
    g = coupling_from_dipole(QubitSpec("unit", 1), GEOM)
    assert abs(g / 7.1e4 - 1) < 0.01
    assert abs(to_hz(g) / 1.13e4 - 1) < 0.01


def test_coupling_scaling():
    q = QubitSpec("q", 50)
    g = coupling_from_dipole(q, GEOM)
    big = ResonatorGeometry(length_y=16e-6, omega=GEOM.mode_omega)
    assert abs(coupling_from_dipole(q, big) / g - 1 / math.sqrt(2)) < 1e-12
    assert abs(coupling_from_dipole(QubitSpec("q", 100), GEOM) / g - 2) < 1e-12


def test_evanescent_decay():
    assert evanescent_factor(GEOM, GEOM.length_z) == 1.0
    assert abs(evanescent_factor(GEOM, 50e-6) - 0.2) < 0.03
    z = np.linspace(GEOM.length_z, 1e-4, 20)
    f = [evanescent_factor(GEOM, v) for v in z]
    assert all(a > b for a, b in zip(f, f[1:]))
    ryd = QubitSpec("ryd", 3e3, z_position=50e-6)
    ratio = coupling_from_dipole(ryd, GEOM) / coupling_from_dipole(ryd, GEOM, attenuate=False)
    assert abs(ratio - evanescent_factor(GEOM, 50e-6)) < 1e-15


def test_dispersive_shift():
    assert abs(dispersive_shift(3.0) - 1.2) < 1e-12
    g = 2.0e6
    assert abs(dispersive_shift(g, 10) - 4 * g ** 2 / (10 * g)) < 1e-12 * g


def test_spacing():
    def r_q(n_d, ratio=0.05):
        q = QubitSpec("q", n_d)
        return min_qubit_distance(q, coupling_from_dipole(q, GEOM, attenuate=False), ratio)

    assert abs(r_q(1) / UM - 1.6) < 0.05
    assert abs(r_q(1e4) / (35 * UM) - 1) < 0.1
    assert abs(r_q(1, 0.025) / r_q(1) - 2 ** (1 / 3)) < 1e-12
    for n_d in (10, 1e3, 1e5):
        assert abs(r_q(n_d) / (r_q(1) * n_d ** (1 / 3)) - 1) < 1e-12


def test_max_qubits():
    assert max_qubits(GEOM, 35 * UM) == 41
    assert max_qubits(GEOM, 23 * UM) in (53, 54)
    assert abs(max_qubits(GEOM, 7 * UM) - 121) <= 1
    with pytest.raises(DomainError):
        max_qubits(GEOM, 0)


def test_positional_couplings():
    g = positional_couplings(1.0, 35 * UM, 40, GEOM)
    assert g[20] == 1.0 and g.size == 40
    with pytest.raises(DomainError):
        positional_couplings(1.0, 1e-3, 40, GEOM)


@given(st.integers(2, 200).map(lambda n: 2 * (n // 2)), st.floats(1e-7, 1e-4))
def test_positional_moments(n, r_q):
    a = math.pi * r_q / GEOM.length_x
    if a * n > 0.3 or n * r_q > GEOM.length_x:
        return
    g = positional_couplings(1.0, r_q, n, GEOM)
    mean, std = positional_moments(1.0, r_q, n, GEOM)
    assert abs(mean - g.mean()) < 0.01 * g.mean()
    assert abs(1 - a ** 2 * n ** 2 / 24 - g.mean()) < 0.01
    if std > 1e-9:
        assert abs(std - g.std()) < 0.05 * g.std()


def test_unit_round_trip():
    for f in (1.0, 3.35e9, 7.1e4):
        assert to_hz(from_hz(f)) == pytest.approx(f, rel=1e-15)


def test_angle_bound():
    assert abs(angle_error_bound(41) - 0.027) < 0.001
    assert abs(angle_error_bound(110) - 0.017) < 0.001


def test_reference_sheets():
    sheets = {q.label: build_sheet(q) for q in REFERENCE_SPECS}
    sc = sheets["superconducting"]
    assert sc.n_qubits == 41
    assert abs(sc.sigma_phi_bound - 0.027) < 0.001
    assert abs(sc.chi - 0.4 * sc.g) < 1e-12 * sc.g
    for label, row in REFERENCE_ROWS.items():
        got = sheets[label].row_hz()
        assert abs(got["g_MHz"] / row["g_MHz"] - 1) < 0.15  # listed to one figure
        assert abs(got["N"] / row["N"] - 1) < 0.2


def test_listed_decoherence_columns_are_exchanged():
    # the budget g/25 for cavity decay and g/(2.5 N) for dephasing reproduce the
    # listed rows only with the two columns swapped
    sheets = {q.label: build_sheet(q) for q in REFERENCE_SPECS}
    for label in ("superconducting", "rydberg"):
        got, row = sheets[label].row_hz(), REFERENCE_ROWS[label]
        assert abs(got["gamma_c_kHz"] / row["gamma_s_kHz"] - 1) < 0.12
        assert abs(got["gamma_s_kHz"] / row["gamma_c_kHz"] - 1) < 0.12
    got = sheets["spin"].row_hz()
    assert abs(got["gamma_c_kHz"] / REFERENCE_ROWS["spin"]["gamma_s_kHz"] - 1) < 0.12


def test_flags():
    ok = build_sheet(QubitSpec("ok", 1e4, gamma_c_hz=1e3, gamma_s_hz=1e3))
    assert not any("exceeds" in f for f in ok.flags)
    bad = build_sheet(QubitSpec("bad", 1e4, gamma_c_hz=1e8, gamma_s_hz=1e8))
    assert "gamma_c exceeds bound" in bad.flags and "gamma_s exceeds bound" in bad.flags


def test_config_round_trip(tmp_path):
    cfg = {"geometry": {"length_x": 0.02}, "qubits": [{"label": "unit", "dipole_units": 1}]}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    specs, geom = load_specs(p)
    sheet = build_sheet(specs[0], geom)
    rows = json.loads(sheets_to_json([sheet]))
    assert rows[0]["label"] == "unit" and abs(rows[0]["r_q_um"] - 1.6) < 0.05
    assert "unit" in sheets_to_text([sheet])
    p.write_text(json.dumps({"qubits": []}))
    with pytest.raises(DomainError):
        load_specs(p)
