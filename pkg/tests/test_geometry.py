import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from drisleo.errors import GeometryError
from drisleo.geometry import (
    FAR_FIELD,
    NEAR_FIELD,
    classify_region,
    element_positions,
    local_angles,
    pairwise_distances,
    rayleigh_distance,
)
from drisleo.pathloss import dris_nearfield_loss
from drisleo.scenario import PanelSpec, scenario_from_mapping

from helpers import move_rigidly, rotation

D = 0.0125


def _panel(n_x, n_y, anchor=(0, 0, 0), bx=(1, 0, 0), by=(0, 1, 0)):
    return PanelSpec(n_x, n_y, D, D, D, anchor, bx, by)


def test_single_element():
    g = element_positions(_panel(1, 1))
    np.testing.assert_array_equal(g.positions_m, [[0, 0, 0]])
    assert g.aperture_m == 0


def test_two_by_two():
    g = element_positions(_panel(2, 2))
    # x-major: the y index varies fastest
    np.testing.assert_allclose(g.positions_m, [[0, 0, 0], [0, D, 0], [D, 0, 0], [D, D, 0]], atol=0)
    np.testing.assert_allclose(g.center_m, [D / 2, D / 2, 0])
    np.testing.assert_array_equal(g.normal, [0, 0, 1])


def test_twenty_by_twenty_extent():
    g = element_positions(_panel(20, 20))
    extent = g.positions_m.max(axis=0) - g.positions_m.min(axis=0)
    assert extent[0] == pytest.approx(0.2375) and extent[1] == pytest.approx(0.2375)
    assert g.aperture_m == pytest.approx(0.2375 * math.sqrt(2)) and g.aperture_m == pytest.approx(0.3359, abs=1e-4)


def test_positions_formula_exact():
    bx = np.array([0.6, 0.8, 0.0])
    by = np.array([0.0, 0.0, 1.0])
    anchor = np.array([1.0, -2.0, 3.0])
    g = element_positions(_panel(3, 5, anchor, bx, by))
    for i in range(3):
        for j in range(5):
            np.testing.assert_array_equal(g.positions_m[i * 5 + j], anchor + i * D * bx + j * D * by)
    assert abs(g.normal @ bx) < 1e-12 and abs(g.normal @ by) < 1e-12


def test_local_angles():
    g = element_positions(_panel(1, 1))
    assert local_angles((0, 0, 2), g, 0) == (0.0, 0.0)
    theta, phi = local_angles((1, 0, 0), g, 0)
    assert theta == pytest.approx(math.pi / 2) and phi == pytest.approx(0.0)
    theta, phi = local_angles((0, -1, 1e-3), g, 0)
    assert phi == pytest.approx(1.5 * math.pi)
    assert local_angles((0.1, 0.1, -1), g, 0)[0] > math.pi / 2
    with pytest.raises(GeometryError):
        local_angles((0, 0, 0), g, 0)


def test_rayleigh_distance():
    assert rayleigh_distance(0.3536, 0.025) == pytest.approx(10.0, abs=5e-3)
    lam = 299792458 / 12e9
    assert rayleigh_distance(19 * lam / 2 * math.sqrt(2), lam) == pytest.approx(9.03, abs=0.02)
    with pytest.raises(ValueError):
        rayleigh_distance(0.0, 0.025)


def test_classify_region():
    assert classify_region(1.0, 0.3536, 0.025) == NEAR_FIELD
    assert classify_region(1.2e6, 0.3536, 0.025) == FAR_FIELD
    r = rayleigh_distance(0.3536, 0.025)
    assert classify_region(r, 0.3536, 0.025) == FAR_FIELD
    assert classify_region(np.nextafter(r, 0), 0.3536, 0.025) == NEAR_FIELD
    assert classify_region(0.01, 0.0, 0.025) == FAR_FIELD
    with pytest.raises(ValueError):
        classify_region(0.0, 0.3, 0.025)


def test_pairwise_examples():
    scn = scenario_from_mapping({"ris_u_n_x": 2, "ris_u_n_y": 1, "ris_s_n_x": 1, "ris_s_n_y": 1,
                                 "d_h_m": 1.2e6, "su_position_m": [0.0, 0.0, 1.0]})
    g = pairwise_distances(scn)
    anchor = np.array(scn.ris_u.anchor_m)
    # the SU is 1 m above the panel plane, offset from each element by its in-plane position
    expected = [math.sqrt(1 + float(np.sum(element_positions(scn.ris_u).positions_m[i, :2] ** 2))) for i in range(2)]
    np.testing.assert_allclose(g.d_su_to_ru_m, expected, rtol=1e-14)
    assert anchor[2] == 0.0


def test_pairwise_axis_examples():
    scn = scenario_from_mapping({"ris_u_n_x": 1, "ris_u_n_y": 1, "ris_u_anchor_m": [0.0, 0.0, 0.0],
                                 "su_position_m": [0.0, 0.0, 1.0]})
    assert pairwise_distances(scn).d_su_to_ru_m[0] == 1.0
    scn = scenario_from_mapping({"ris_u_n_x": 1, "ris_u_n_y": 1, "ris_u_anchor_m": [0.0125, 0.0, 0.0],
                                 "su_position_m": [0.0, 0.0, 1.0]})
    assert pairwise_distances(scn).d_su_to_ru_m[0] == pytest.approx(1.0000781, abs=1e-7)


def test_inter_ris_bounds():
    scn = scenario_from_mapping({"ris_u_n_x": 20, "ris_u_n_y": 20, "ris_s_n_x": 20, "ris_s_n_y": 20})
    g = pairwise_distances(scn)
    assert g.d_ru_to_rs_m.shape == (400, 400)
    assert g.d_ru_to_rs_m.min() >= 1.2e6 - 0.5 and g.d_ru_to_rs_m.max() <= 1.2e6 + 0.5
    diag_u = element_positions(scn.ris_u).aperture_m
    assert np.all(np.abs(g.d_su_to_ru_m - g.d_u) <= diag_u)
    assert np.all(g.d_su_to_ru_m > 0)


def test_degenerate_geometry():
    base = scenario_from_mapping({"ris_u_n_x": 2, "ris_u_n_y": 2})
    scn = base.replace(su_position_m=base.ris_u.anchor_m)
    with pytest.raises(GeometryError, match="degenerate geometry"):
        pairwise_distances(scn)


def test_distance_symmetry(small):
    g = pairwise_distances(small)
    pu = element_positions(small.ris_u).positions_m
    ps = element_positions(small.ris_s).positions_m
    back = np.linalg.norm(pu[None, :, :] - ps[:, None, :], axis=-1)
    np.testing.assert_array_equal(g.d_ru_to_rs_m, back)


def test_element_distance_converges_to_center():
    errs = []
    for d in (1.0, 10.0, 100.0, 1000.0):
        scn = scenario_from_mapping({"ris_u_n_x": 8, "ris_u_n_y": 8, "ris_s_n_x": 2, "ris_s_n_y": 2, "d_u_m": d})
        g = pairwise_distances(scn)
        errs.append(np.max(np.abs(g.d_su_to_ru_m / g.d_u - 1)))
    assert all(b < a for a, b in zip(errs, errs[1:]))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.tuples(*[st.floats(-100, 100)] * 3))
def test_rigid_motion_invariance(seed, shift):
    scn = scenario_from_mapping({"ris_u_n_x": 3, "ris_u_n_y": 2, "ris_s_n_x": 2, "ris_s_n_y": 3, "d_h_m": 2e3,
                                 "su_position_m": [0.2, 0.1, 0.7], "sap_position_m": [-0.1, 0.05, 2e3 - 0.9]})
    moved = move_rigidly(scn, rotation(seed), shift)
    a, b = pairwise_distances(scn), pairwise_distances(moved)
    for name in ("d_su_to_ru_m", "d_ru_to_rs_m", "d_rs_to_sap_m", "theta_su_tx", "theta_u_in", "theta_u_out",
                 "theta_s_in", "theta_s_out", "theta_sap_rx"):
        np.testing.assert_allclose(getattr(b, name), getattr(a, name), rtol=1e-9, atol=1e-9)
    assert dris_nearfield_loss(moved).loss_linear == pytest.approx(dris_nearfield_loss(scn).loss_linear, rel=1e-9)
