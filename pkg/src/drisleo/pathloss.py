"""Path loss of double-RIS, single-RIS and direct links.

Every loss here is an *effective* attenuation: antenna and RIS gains are folded
in, so the received power is always ``P_t / L``.

Two independent routes exist for the double-RIS link:

* the closed forms (:func:`dris_nearfield_loss`, :func:`dris_farfield_loss`);
* :func:`field_superposition_power`, which propagates the electric field of
  every element pair with its full phase and sums them. It is slow and
  materialises every table, and is used to check the closed forms.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .geometry import (
    NEAR_FIELD,
    LinkGeometry,
    classify_region,
    cos_off_axis,
    element_positions,
    pairwise_distances,
)
from .scenario import Architecture, Mode, PanelSpec, Scenario, linear_to_db

Z0 = 376.73  # free-space impedance, ohm

# summation block size (rows of RIS-s) for the element-pair reduction;
# fixed so the reduction order, and hence the result, is reproducible
_CHUNK_ELEMENTS = 1 << 20


@dataclass(frozen=True)
class PathLossResult:
    loss_linear: float
    model_used: str
    amplification: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.loss_linear) and self.loss_linear > 0):
            raise GeometryError(f"link has no usable path ({self.model_used}): loss={self.loss_linear}")

    @property
    def loss_db(self) -> float:
        return linear_to_db(self.loss_linear)


def radiation_pattern(theta, phi=None):
    """Normalised power pattern: cos^3(theta) in the front half-space, 0 behind."""
    theta = np.asarray(theta, dtype=float)
    out = np.where(theta <= np.pi / 2, np.clip(np.cos(theta), 0.0, None) ** 3, 0.0)
    return float(out) if out.ndim == 0 else out


def _pattern_cos(c):
    # same pattern, from the cosine of the elevation
    return np.clip(c, 0.0, None) ** 3


def combined_pattern(geom: LinkGeometry, n_s: int, n_u: int) -> float:
    """Product of the six single-hop patterns along the path through (n_s, n_u)."""
    return float(
        radiation_pattern(geom.theta_su_tx[n_u])
        * radiation_pattern(geom.theta_u_in[n_u])
        * radiation_pattern(geom.theta_u_out[n_s, n_u])
        * radiation_pattern(geom.theta_s_in[n_s, n_u])
        * radiation_pattern(geom.theta_s_out[n_s])
        * radiation_pattern(geom.theta_sap_rx[n_s])
    )


def receive_aperture(scn: Scenario) -> float:
    lam = scn.rf.wavelength_m
    return scn.rf.gain_sap * lam**2 / (4 * math.pi)


# ----------------------------------------------------------------------------
# Reference: full field superposition
# ----------------------------------------------------------------------------
def field_superposition_power(scn: Scenario, phases_u, phases_s, amplitude_u: float = 1.0,
                              transmit_power_w: float | None = None) -> float:
    """Received power (W) at the SAP from the coherent sum of all double-reflected fields.

    ``phases_u``/``phases_s`` are the element phase shifts (radians) of RIS-u
    and RIS-s; RIS-u elements reflect with magnitude ``amplitude_u``.
    """
    rf = scn.rf
    p_t = rf.transmit_power_w if transmit_power_w is None else transmit_power_w
    lam = rf.wavelength_m
    g = pairwise_distances(scn)
    e_u = scn.ris_u.element_area_m2
    e_s = scn.ris_s.element_area_m2

    f_c = (
        radiation_pattern(g.theta_su_tx)[None, :]
        * radiation_pattern(g.theta_u_in)[None, :]
        * radiation_pattern(g.theta_u_out)
        * radiation_pattern(g.theta_s_in)
        * radiation_pattern(g.theta_s_out)[:, None]
        * radiation_pattern(g.theta_sap_rx)[:, None]
    )
    d1 = g.d_su_to_ru_m[None, :]
    d2 = g.d_ru_to_rs_m
    d3 = g.d_rs_to_sap_m[:, None]

    # incident power on each RIS-u element, then the power each RIS-s element
    # receives from it, then what reaches the SAP aperture
    a_r = receive_aperture(scn)
    p_in = p_t * rf.gain_su / (4 * math.pi * d1**2) * e_u
    p_mid = rf.gain_ris_u * p_in * amplitude_u**2 / (4 * math.pi * d2**2) * e_s
    p_rx = rf.gain_ris_s * p_mid / (4 * math.pi * d3**2) * a_r * f_c

    d_c = d1 + d2 + d3
    phase = -2 * math.pi * d_c / lam + np.asarray(phases_u)[None, :] + np.asarray(phases_s)[:, None]
    field = np.sqrt(2 * Z0 * p_rx / a_r) * np.exp(1j * phase)
    e_total = field.sum()
    return float(abs(e_total) ** 2 / (2 * Z0) * a_r)


def single_reflection_power(scn: Scenario, phases, amplitude: float = 1.0,
                            transmit_power_w: float | None = None) -> float:
    """Field-superposition received power for the single-RIS architectures."""
    rf = scn.rf
    p_t = rf.transmit_power_w if transmit_power_w is None else transmit_power_w
    lam = rf.wavelength_m
    panel, g_i = _sris_panel(scn)
    grid = element_positions(panel)
    su = np.array(scn.su_position_m)
    sap = np.array(scn.sap_position_m)
    v1 = grid.positions_m - su
    v2 = sap - grid.positions_m
    d1 = np.linalg.norm(v1, axis=1)
    d2 = np.linalg.norm(v2, axis=1)
    f = (
        _pattern_cos(cos_off_axis(v1, scn.resolved_su_boresight(), d1))
        * _pattern_cos(cos_off_axis(-v1, grid.normal, d1))
        * _pattern_cos(cos_off_axis(v2, grid.normal, d2))
        * _pattern_cos(cos_off_axis(-v2, scn.resolved_sap_boresight(), d2))
    )
    a_r = receive_aperture(scn)
    p_in = p_t * rf.gain_su / (4 * math.pi * d1**2) * panel.element_area_m2
    p_rx = g_i * p_in * amplitude**2 / (4 * math.pi * d2**2) * a_r * f
    field = np.sqrt(2 * Z0 * p_rx / a_r) * np.exp(1j * (-2 * math.pi * (d1 + d2) / lam + np.asarray(phases)))
    return float(abs(field.sum()) ** 2 / (2 * Z0) * a_r)


# ----------------------------------------------------------------------------
# Element sums behind the closed forms
# ----------------------------------------------------------------------------
def _geometry_only(panel: PanelSpec) -> PanelSpec:
    return dataclasses.replace(panel, mode=Mode.PASSIVE, amplification=1.0)


def _tuple(v) -> tuple:
    return tuple(float(x) for x in v)


@functools.lru_cache(maxsize=512)
def _dris_sum(ris_u: PanelSpec, ris_s: PanelSpec, su, su_bore, sap, sap_bore) -> float:
    gu = element_positions(ris_u)
    gs = element_positions(ris_s)
    su, su_bore, sap, sap_bore = map(np.asarray, (su, su_bore, sap, sap_bore))

    v = gu.positions_m - su
    du = np.linalg.norm(v, axis=1)
    w = sap - gs.positions_m
    ds = np.linalg.norm(w, axis=1)
    if np.any(du == 0) or np.any(ds == 0):
        raise GeometryError("degenerate geometry: terminal on a RIS element")
    amp_u = np.sqrt(_pattern_cos(cos_off_axis(v, su_bore, du)) * _pattern_cos(cos_off_axis(-v, gu.normal, du))) / du
    amp_s = np.sqrt(_pattern_cos(cos_off_axis(w, gs.normal, ds)) * _pattern_cos(cos_off_axis(-w, sap_bore, ds))) / ds

    # pair offsets relative to the panel centers keep the subtraction well conditioned
    ru = gu.positions_m - gu.center_m
    rs = gs.positions_m - gs.center_m
    c = gs.center_m - gu.center_m
    proj_u = rs @ gu.normal + c @ gu.normal  # (N_s,), n_u contribution subtracted below
    proj_s = rs @ gs.normal + c @ gs.normal
    ru_nu = ru @ gu.normal
    ru_ns = ru @ gs.normal

    rows = max(1, _CHUNK_ELEMENTS // max(1, len(ru)))
    total = 0.0
    for start in range(0, len(rs), rows):
        sl = slice(start, start + rows)
        diff = (rs[sl, None, :] + c) - ru[None, :, :]  # element n_u -> element n_s
        dm = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        cos_out = (proj_u[sl, None] - ru_nu[None, :]) / dm
        cos_in = -(proj_s[sl, None] - ru_ns[None, :]) / dm
        mid = np.sqrt(_pattern_cos(cos_out) * _pattern_cos(cos_in)) / dm
        total += float(amp_s[sl] @ mid @ amp_u)
    return total


def dris_element_sum(scn: Scenario) -> float:
    """``sum_{n_s,n_u} sqrt(F^c) / (d_{u,n_u} d_{n_s,n_u} d_{s,n_s})`` over all element pairs."""
    return _dris_sum(
        _geometry_only(scn.ris_u),
        _geometry_only(scn.ris_s),
        _tuple(scn.su_position_m),
        _tuple(scn.resolved_su_boresight()),
        _tuple(scn.sap_position_m),
        _tuple(scn.resolved_sap_boresight()),
    )


def _center_pattern_dris(scn: Scenario) -> float:
    cu, cs = scn.ris_u.center_m, scn.ris_s.center_m
    su, sap = np.array(scn.su_position_m), np.array(scn.sap_position_m)
    nu, ns = scn.ris_u.normal, scn.ris_s.normal

    def pat(vec, axis):
        return _pattern_cos(cos_off_axis(vec, axis))

    return float(
        pat(cu - su, scn.resolved_su_boresight())
        * pat(su - cu, nu)
        * pat(cs - cu, nu)
        * pat(cu - cs, ns)
        * pat(sap - cs, ns)
        * pat(cs - sap, scn.resolved_sap_boresight())
    )


def _dris_prefactor(scn: Scenario, amplification: float) -> float:
    rf = scn.rf
    return (
        rf.gain_su * rf.gain_ris_s * rf.gain_ris_u * rf.gain_sap
        * scn.ris_s.element_area_m2 * scn.ris_u.element_area_m2
        * rf.wavelength_m**2 * amplification**2
    )


def _resolve_amplification(scn: Scenario, amplification: float | None) -> float:
    if amplification is not None:
        return float(amplification)
    if scn.ris_u.mode is Mode.PASSIVE:
        return 1.0
    from .beamform import amplification_factor  # beamform depends on this module

    return amplification_factor(scn)


def dris_nearfield_loss(scn: Scenario, amplification: float | None = None) -> PathLossResult:
    a = _resolve_amplification(scn, amplification)
    s = dris_element_sum(scn)
    loss = 256 * math.pi**4 / (_dris_prefactor(scn, a) * s**2) if s > 0 else math.inf
    return PathLossResult(loss, "dris_nf", a)


def dris_farfield_loss(scn: Scenario, amplification: float | None = None) -> PathLossResult:
    a = _resolve_amplification(scn, amplification)
    n2 = (scn.ris_s.n_elements * scn.ris_u.n_elements) ** 2
    f_c = _center_pattern_dris(scn)
    den = _dris_prefactor(scn, a) * n2 * f_c
    num = 256 * math.pi**4 * scn.d_u**2 * scn.d_s**2 * scn.d_h**2
    return PathLossResult(num / den if den > 0 else math.inf, "dris_ff", a)


# ----------------------------------------------------------------------------
# Single RIS
# ----------------------------------------------------------------------------
@functools.lru_cache(maxsize=512)
def _single_sum(panel: PanelSpec, src, src_bore, dst, dst_bore):
    grid = element_positions(panel)
    src, src_bore, dst, dst_bore = map(np.asarray, (src, src_bore, dst, dst_bore))
    v1 = grid.positions_m - src
    v2 = dst - grid.positions_m
    d1 = np.linalg.norm(v1, axis=1)
    d2 = np.linalg.norm(v2, axis=1)
    if np.any(d1 == 0) or np.any(d2 == 0):
        raise GeometryError("degenerate geometry: terminal on a RIS element")
    f = (
        _pattern_cos(cos_off_axis(v1, src_bore, d1))
        * _pattern_cos(cos_off_axis(-v1, grid.normal, d1))
        * _pattern_cos(cos_off_axis(v2, grid.normal, d2))
        * _pattern_cos(cos_off_axis(-v2, dst_bore, d2))
    )
    s = float(np.sum(np.sqrt(f) / (d1 * d2)))
    c = panel.center_m
    e1, e2 = c - src, dst - c
    f_center = float(
        _pattern_cos(cos_off_axis(e1, src_bore))
        * _pattern_cos(cos_off_axis(-e1, panel.normal))
        * _pattern_cos(cos_off_axis(e2, panel.normal))
        * _pattern_cos(cos_off_axis(-e2, dst_bore))
    )
    return s, f_center, float(np.linalg.norm(e1)), float(np.linalg.norm(e2))


def _single_panel_loss(panel, src, src_bore, dst, dst_bore, g_tx, g_ris, g_rx, wavelength, a, near):
    s, f_center, d1, d2 = _single_sum(
        _geometry_only(panel), _tuple(src), _tuple(src_bore), _tuple(dst), _tuple(dst_bore)
    )
    pre = g_tx * g_rx * g_ris * panel.element_area_m2 * wavelength**2 * a**2
    if near:
        den = pre * s**2
        return 64 * math.pi**3 / den if den > 0 else math.inf
    den = pre * panel.n_elements**2 * f_center
    return 64 * math.pi**3 * d1**2 * d2**2 / den if den > 0 else math.inf


def _sris_panel(scn: Scenario):
    if scn.architecture is Architecture.SRIS_AT_SU:
        return scn.ris_u, scn.rf.gain_ris_u
    if scn.architecture is Architecture.SRIS_AT_SAP:
        return scn.ris_s, scn.rf.gain_ris_s
    raise ValueError(f"single-RIS loss needs an SRIS architecture, got {scn.architecture.value}")


def _terminal_hop_region(scn: Scenario) -> str:
    """Region of the hop between the RIS and its nearby terminal."""
    lam = scn.rf.wavelength_m
    if scn.architecture is Architecture.SRIS_AT_SAP:
        return classify_region(scn.d_s, scn.ris_s.aperture_m, lam)
    return classify_region(scn.d_u, scn.ris_u.aperture_m, lam)


def sris_loss(scn: Scenario, regime: str | None = None, amplification: float | None = None) -> PathLossResult:
    """Single-RIS loss; ``regime`` is ``"nf"``, ``"ff"`` or None (decided by the terminal hop)."""
    panel, g_i = _sris_panel(scn)
    if regime is None:
        regime = "nf" if _terminal_hop_region(scn) == NEAR_FIELD else "ff"
    if regime not in ("nf", "ff"):
        raise ValueError(f"regime must be 'nf' or 'ff', got {regime!r}")
    if scn.architecture is Architecture.SRIS_AT_SU:
        a = _resolve_amplification(scn, amplification)
    else:
        a = 1.0 if amplification is None else float(amplification)
    rf = scn.rf
    loss = _single_panel_loss(
        panel,
        scn.su_position_m,
        scn.resolved_su_boresight(),
        scn.sap_position_m,
        scn.resolved_sap_boresight(),
        rf.gain_su,
        g_i,
        rf.gain_sap,
        rf.wavelength_m,
        a,
        regime == "nf",
    )
    return PathLossResult(loss, f"sris_{regime}", a)


def amplified_noise_loss(scn: Scenario) -> float:
    """Loss from RIS-u to the SAP seen by noise injected at RIS-u.

    DRIS: single-RIS loss of the RIS-u -> RIS-s -> SAP segment, with RIS-u's
    center as the emitter. SRIS at SU: free-space RIS-u -> SAP.
    """
    rf = scn.rf
    lam = rf.wavelength_m
    cu = scn.ris_u.center_m
    if scn.architecture is Architecture.DRIS:
        near = classify_region(scn.d_s, scn.ris_s.aperture_m, lam) == NEAR_FIELD
        return _single_panel_loss(
            scn.ris_s,
            cu,
            scn.ris_u.normal,
            scn.sap_position_m,
            scn.resolved_sap_boresight(),
            rf.gain_ris_u,
            rf.gain_ris_s,
            rf.gain_sap,
            lam,
            1.0,
            near,
        )
    if scn.architecture is Architecture.SRIS_AT_SU:
        d = float(np.linalg.norm(np.array(scn.sap_position_m) - cu))
        return (4 * math.pi * d / lam) ** 2 / (rf.gain_ris_u * rf.gain_sap)
    raise ValueError("no amplified-noise path without an active RIS-u")


# ----------------------------------------------------------------------------
# Direct link and model selection
# ----------------------------------------------------------------------------
def free_space_loss(scn: Scenario) -> PathLossResult:
    rf = scn.rf
    loss = (4 * math.pi * scn.d_direct / rf.wavelength_m) ** 2 / (rf.gain_su * rf.gain_sap)
    return PathLossResult(loss, "free_space", 1.0)


def select_model(scn: Scenario, exact: bool = False, amplification: float | None = None) -> PathLossResult:
    """Pick the loss model for the scenario's architecture.

    The double/single RIS links switch between the per-element and the
    center-distance forms at the Rayleigh distance of the terminal hop, unless
    ``scn.path_loss_model`` pins one, or ``exact`` forces the per-element sum.
    """
    arch = scn.architecture
    if arch is Architecture.NORIS:
        return free_space_loss(scn)
    choice = "nf" if exact else scn.path_loss_model
    if choice == "auto":
        choice = "nf" if _terminal_hop_region(scn) == NEAR_FIELD else "ff"
    if arch is Architecture.DRIS:
        fn = dris_nearfield_loss if choice == "nf" else dris_farfield_loss
        return fn(scn, amplification)
    return sris_loss(scn, choice, amplification)


def incident_power(scn: Scenario, transmit_power_w: float | None = None) -> float:
    """Total power the SU delivers onto the RIS-u elements (W)."""
    rf = scn.rf
    p_t = rf.transmit_power_w if transmit_power_w is None else transmit_power_w
    grid = element_positions(scn.ris_u)
    v = grid.positions_m - np.array(scn.su_position_m)
    d = np.linalg.norm(v, axis=1)
    f = _pattern_cos(cos_off_axis(v, scn.resolved_su_boresight(), d)) * _pattern_cos(
        cos_off_axis(-v, grid.normal, d)
    )
    return float(np.sum(p_t * rf.gain_su * f * scn.ris_u.element_area_m2 / (4 * math.pi * d**2)))
