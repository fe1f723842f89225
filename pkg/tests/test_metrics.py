import dataclasses
import math

import pytest
from hypothesis import given, settings, strategies as st

from drisleo.beamform import LinkBudget
from drisleo.errors import NumericalError
from drisleo.metrics import (
    achievable_rate,
    ee_from,
    energy_efficiency,
    link_metrics,
    relative_power,
    required_transmit_power,
    ris_power,
    total_power,
)
from drisleo.pathloss import free_space_loss
from drisleo.scenario import (
    Architecture,
    dbm_to_watt,
    move_su,
    resize_ris_u,
    scenario_from_mapping,
    watt_to_dbm,
    with_mode,
)


def test_achievable_rate():
    assert achievable_rate(3.0) == 2.0
    assert achievable_rate(0.0) == 0.0
    assert achievable_rate(1000.0) == pytest.approx(9.9672, abs=1e-4)
    with pytest.raises(ValueError):
        achievable_rate(-0.1)


def test_ris_power(defaults):
    pm = defaults.power_model
    assert ris_power(defaults.ris_u, pm, 0.01) == pytest.approx(2.0, rel=1e-12)
    active = with_mode(defaults, "active").ris_u
    assert ris_power(active, pm, 0.01) == pytest.approx(400 * 1.0 + 10**0.5 + 0.005, rel=1e-12)
    assert ris_power(active, pm, 0.01) == pytest.approx(403.17, abs=5e-3)
    assert ris_power(defaults.ris_u, pm, 0.01, n_elements=0) == 0.0


def test_total_power(defaults):
    p_static = dbm_to_watt(75)
    assert total_power(defaults.replace(architecture="noris")) == pytest.approx(0.01 + p_static, rel=1e-12)
    assert total_power(defaults.replace(architecture="noris")) == pytest.approx(31622.8, abs=0.05)
    assert total_power(defaults) == pytest.approx(p_static + 0.01 + 2 + 2, rel=1e-12)
    no_static = scenario_from_mapping({"p_static_system_w": 0.0})
    assert total_power(no_static) == pytest.approx(4.01, rel=1e-12)
    assert total_power(no_static.replace(architecture="sris-su")) == pytest.approx(2.01, rel=1e-12)


def test_energy_efficiency(defaults):
    assert ee_from(50e6, 2.0, 2.0) == 5.0e7
    assert ee_from(50e6, 0.0, 2.0) == 0.0
    with pytest.raises(ValueError):
        ee_from(50e6, 1.0, 0.0)
    # golden value from the full pipeline
    assert energy_efficiency(defaults) == pytest.approx(5227.505157, rel=1e-9)


def test_required_power_noris(defaults):
    scn = defaults.replace(architecture="noris")
    p = required_transmit_power(scn, 2.0)
    expected = 3 * dbm_to_watt(-133.5) * free_space_loss(scn).loss_linear
    assert p == pytest.approx(expected, rel=1e-12)
    assert watt_to_dbm(p) == pytest.approx(16.88, abs=0.02)


def test_required_power_limits(defaults):
    ps = [required_transmit_power(defaults, t) for t in (1e-1, 1e-3, 1e-6)]
    assert ps[0] > ps[1] > ps[2] and ps[2] < 1e-9
    with pytest.raises(ValueError):
        required_transmit_power(defaults, 0.0)
    assert required_transmit_power(defaults, 2.0) < required_transmit_power(defaults.replace(architecture="noris"), 2.0)


@pytest.mark.parametrize("mode", ["passive", "active"])
def test_required_power_increasing(defaults, mode):
    scn = with_mode(defaults, mode)
    by_target = [required_transmit_power(scn, t) for t in (0.5, 1.0, 2.0, 4.0, 8.0)]
    assert all(b > a for a, b in zip(by_target, by_target[1:]))
    # a longer inter-RIS hop raises L without changing the incident power on RIS-u
    by_loss = [required_transmit_power(with_mode(scenario_from_mapping({"d_h_m": d}), mode), 2.0)
               for d in (1e5, 1e6, 1e7)]
    assert all(b > a for a, b in zip(by_loss, by_loss[1:]))


def test_active_bisection_hits_target(defaults):
    scn = with_mode(scenario_from_mapping({"p_amplifier_budget_w": 0.05}), "active")
    p = required_transmit_power(scn, 10.0)
    budget = LinkBudget(scn)
    assert 1 < budget.amplification(p) < 10
    assert math.log2(1 + budget.snr(p)) == pytest.approx(10.0, rel=1e-6)


def test_cap_enforced_at_solution():
    scn = with_mode(scenario_from_mapping({"p_amplifier_budget_w": 0.05}), "active")
    far = move_su(scn, 300.0)
    with pytest.raises(NumericalError, match="amplification unbounded"):
        required_transmit_power(far, 1.0)
    assert required_transmit_power(far.replace(saturate_amplification=True), 1.0) > 0


def test_unreachable_target():
    scn = with_mode(scenario_from_mapping({"p_amplifier_budget_w": 0.005}), "active")
    with pytest.raises(NumericalError):
        required_transmit_power(move_su(scn, 500.0), 60.0)


def test_relative_power(defaults):
    assert relative_power(defaults, 2.0, baseline=Architecture.DRIS) == 0.0
    rp = relative_power(defaults, 2.0)
    back = relative_power(defaults.replace(architecture="noris"), 2.0, baseline=Architecture.DRIS)
    assert rp == pytest.approx(-back, rel=1e-12)
    assert rp < 0


def test_relative_power_fixed_amplification(defaults):
    quiet = defaults.replace(rf=dataclasses.replace(defaults.rf, dynamic_noise_power_w=0.0))
    passive = relative_power(quiet, 2.0)
    doubled = relative_power(with_mode(quiet, "active", 2.0), 2.0)
    assert passive - doubled == pytest.approx(20 * math.log10(2), abs=1e-9)


def test_adr_non_decreasing_in_area(defaults):
    adrs = [link_metrics(resize_ris_u(defaults, (n * defaults.ris_u.spacing_m) ** 2)).adr_bps_per_hz
            for n in (1, 2, 5, 10, 20, 30, 40)]
    assert all(b >= a for a, b in zip(adrs, adrs[1:]))


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from(["dris", "sris-su", "sris-sap", "noris"]),
    st.sampled_from(["passive", "active"]),
    st.floats(0.05, 200.0),
    st.floats(-20.0, 40.0),
)
def test_consistency_identities(arch, mode, d_u, p_dbm):
    scn = with_mode(scenario_from_mapping({"architecture": arch, "transmit_power_dbm": p_dbm,
                                           "ris_u_n_x": 10, "ris_u_n_y": 10, "saturate_amplification": True}), mode)
    m = link_metrics(move_su(scn, d_u))
    assert m.adr_bps_per_hz == pytest.approx(math.log2(1 + m.snr_linear), rel=1e-12)
    assert m.ee_bits_per_joule == pytest.approx(scn.rf.bandwidth_hz * m.adr_bps_per_hz / m.p_total_w, rel=1e-12)
    assert m.p_total_w == pytest.approx(dbm_to_watt(p_dbm) + m.p_ris_s_w + m.p_ris_u_w + scn.power_model.p_static_system_w,
                                        rel=1e-12)
