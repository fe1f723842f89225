"""Dual-stage RIS phase design, composite channel gain, active-RIS amplification and SNR."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet, build_channels
from .errors import NumericalError
from .geometry import element_positions
from .pathloss import PathLossResult, amplified_noise_loss, incident_power, select_model
from .scenario import Architecture, Mode, Scenario

MAX_AMPLIFICATION = 1e3


@dataclass(frozen=True)
class ReflectionConfig:
    phi_u: np.ndarray  # reflection coefficients of RIS-u, |phi_u| = amplitude_u
    phi_s: np.ndarray  # reflection coefficients of RIS-s, unit modulus
    amplitude_u: float = 1.0


def _unit(z: np.ndarray) -> np.ndarray:
    mag = np.abs(z)
    if np.any(mag == 0):
        raise NumericalError("cannot phase-align a zero channel entry")
    return z / mag


def design_phases(channels: ChannelSet, amplitude_u: float = 1.0) -> ReflectionConfig:
    """Conjugate each element's cascaded channel so every path adds in phase.

    RIS-u cancels the SU-side vector times its own array response in H; RIS-s
    cancels the SAP-side vector times its array response and undoes the
    propagation phase across the inter-RIS hop.
    """
    H = channels.H
    phi_u = amplitude_u * np.conj(_unit(H.a_tx * channels.h_u))
    phi_s = np.conj(_unit(channels.h_s * H.a_rx)) * np.conj(H.phase)
    return ReflectionConfig(phi_u=phi_u, phi_s=phi_s, amplitude_u=amplitude_u)


def composite_gain(channels: ChannelSet, config: ReflectionConfig) -> complex:
    """``h_s^T diag(phi_s) H diag(phi_u) h_u``."""
    n_s, n_u = channels.H.shape
    if config.phi_u.shape != (n_u,) or config.phi_s.shape != (n_s,) or channels.h_u.shape != (n_u,) \
            or channels.h_s.shape != (n_s,):
        raise ValueError("dimension mismatch between channels and reflection configuration")
    row = channels.H.left_multiply(channels.h_s * config.phi_s)
    return complex(row @ (config.phi_u * channels.h_u))


def cophasing_phases(scn: Scenario):
    """Element phases (rad) that cancel the exact propagation phase of every path.

    The inter-RIS distance is split at the panel centers, which is exact up to
    the small cross term of a far-field hop. Returns ``(phases_u, phases_s)``.
    """
    k = scn.rf.wavenumber_rad_per_m
    gu = element_positions(scn.ris_u)
    gs = element_positions(scn.ris_s)
    d_su = np.linalg.norm(gu.positions_m - np.array(scn.su_position_m), axis=1)
    d_sap = np.linalg.norm(gs.positions_m - np.array(scn.sap_position_m), axis=1)
    d_u_to_cs = np.linalg.norm(gs.center_m - gu.positions_m, axis=1)
    d_s_to_cu = np.linalg.norm(gs.positions_m - gu.center_m, axis=1)
    d_h = float(np.linalg.norm(gs.center_m - gu.center_m))
    return k * (d_su + d_u_to_cs), k * (d_sap + (d_s_to_cu - d_h))


# ----------------------------------------------------------------------------
# Active RIS
# ----------------------------------------------------------------------------
def _has_active_ris_u(scn: Scenario) -> bool:
    return scn.architecture.uses_ris_u and scn.ris_u.mode is Mode.ACTIVE


def _amplification(scn: Scenario, transmit_power_w: float, p_inc_per_watt: float) -> float:
    if not _has_active_ris_u(scn):
        return 1.0
    if scn.ris_u.amplification is not None:
        return float(scn.ris_u.amplification)
    p_a = scn.power_model.amplifier_budget(transmit_power_w)
    if p_a == 0:
        return 1.0
    p_inc = p_inc_per_watt * transmit_power_w
    if p_inc <= 0:
        raise NumericalError("no power incident on RIS-u; amplification undefined")
    a = math.sqrt(1.0 + p_a / p_inc)
    if a > MAX_AMPLIFICATION and scn.saturate_amplification:
        return MAX_AMPLIFICATION
    if a > MAX_AMPLIFICATION:
        raise NumericalError(f"amplification unbounded (a = {a:.3g} > {MAX_AMPLIFICATION:g})")
    return a


def amplification_factor(scn: Scenario, transmit_power_w: float | None = None) -> float:
    """Common amplitude gain of RIS-u.

    The amplifier adds its whole budget ``P_A`` to the incident power, so
    ``a = sqrt(1 + P_A / P_inc)``. Passive panels return 1; an explicit
    ``amplification`` on the panel takes precedence. Above ``MAX_AMPLIFICATION``
    the gain is clamped when the scenario saturates, otherwise NumericalError.
    """
    p_t = scn.rf.transmit_power_w if transmit_power_w is None else transmit_power_w
    if not _has_active_ris_u(scn) or scn.ris_u.amplification is not None:
        return _amplification(scn, p_t, 0.0)
    return _amplification(scn, p_t, incident_power(scn, 1.0))


def _noise_gain(scn: Scenario) -> float:
    """Amplified-noise power gain at the SAP per unit a^2 and unit sigma_d^2, designed phases."""
    if not _has_active_ris_u(scn):
        return 0.0
    n_u = scn.ris_u.n_elements
    if scn.architecture is Architecture.DRIS:
        return scn.ris_s.n_elements**2 * n_u / amplified_noise_loss(scn)
    return n_u / amplified_noise_loss(scn)


def effective_noise(scn: Scenario, channels: ChannelSet | None = None,
                    config: ReflectionConfig | None = None) -> float:
    """Noise power at the SAP: static noise plus amplified RIS-u noise for an active RIS-u.

    For DRIS the amplified term uses ``||h_s^T Phi_s H Phi_u||^2`` from the
    given channels/config (designed phases if omitted).
    """
    rf = scn.rf
    if not _has_active_ris_u(scn):
        return rf.static_noise_power_w
    if scn.architecture is Architecture.SRIS_AT_SU:
        a = amplification_factor(scn)
        return rf.static_noise_power_w + rf.dynamic_noise_power_w * a**2 * _noise_gain(scn)
    if channels is None:
        channels = build_channels(scn)
    if config is None:
        config = design_phases(channels, amplification_factor(scn))
    row = channels.H.left_multiply(channels.h_s * config.phi_s) * config.phi_u
    norm2 = float(np.vdot(row, row).real)
    return rf.static_noise_power_w + rf.dynamic_noise_power_w / amplified_noise_loss(scn) * norm2


# ----------------------------------------------------------------------------
# SNR
# ----------------------------------------------------------------------------
@dataclass(frozen=True)
class LinkState:
    composite_gain: complex
    normalized_gain: complex
    effective_noise_w: float
    snr_linear: float
    path_loss: PathLossResult
    amplification: float


def received_snr(scn: Scenario, config: ReflectionConfig | None = None, exact: bool = False,
                 transmit_power_w: float | None = None) -> LinkState:
    """SNR at the SAP.

    The composite cascaded gain is normalised by its coherent maximum
    ``a_u N_s N_u``; the array gain lives entirely in the path loss, so designed
    phases give ``P_t / (L N_0)`` and any other configuration less.
    ``config`` only applies to the double-RIS architecture.
    """
    rf = scn.rf
    p_t = rf.transmit_power_w if transmit_power_w is None else transmit_power_w
    a = amplification_factor(scn, p_t)
    pl = select_model(scn, exact=exact, amplification=a)
    if scn.architecture is Architecture.DRIS:
        channels = build_channels(scn)
        if config is None:
            config = design_phases(channels, a)
        g = composite_gain(channels, config)
        g_norm = g / (a * scn.ris_s.n_elements * scn.ris_u.n_elements)
        n0 = effective_noise(scn, channels, config)
    else:
        if config is not None:
            raise ValueError("explicit reflection configs are only supported for DRIS")
        g = g_norm = 1.0 + 0j
        n0 = rf.static_noise_power_w + rf.dynamic_noise_power_w * a**2 * _noise_gain(scn)
    snr = p_t / (pl.loss_linear * n0) * abs(g_norm) ** 2
    return LinkState(g, g_norm, n0, snr, pl, a)


class LinkBudget:
    """Designed-phase SNR as a function of transmit power, for repeated evaluation.

    Geometry-dependent quantities are computed once; only the amplification
    and the amplified noise depend on ``P_t``.
    """

    def __init__(self, scn: Scenario, exact: bool = False):
        self.scn = scn
        self.base = select_model(scn, exact=exact, amplification=1.0)
        active = _has_active_ris_u(scn) and scn.ris_u.amplification is None
        self._p_inc_per_watt = incident_power(scn, 1.0) if active else 0.0
        self._noise_gain = _noise_gain(scn)

    @property
    def model_used(self) -> str:
        return self.base.model_used

    def amplification(self, transmit_power_w: float) -> float:
        return _amplification(self.scn, transmit_power_w, self._p_inc_per_watt)

    def noise(self, transmit_power_w: float) -> float:
        rf = self.scn.rf
        a = self.amplification(transmit_power_w)
        return rf.static_noise_power_w + rf.dynamic_noise_power_w * a**2 * self._noise_gain

    def loss(self, transmit_power_w: float) -> float:
        return self.base.loss_linear / self.amplification(transmit_power_w) ** 2

    def snr(self, transmit_power_w: float) -> float:
        return transmit_power_w / (self.loss(transmit_power_w) * self.noise(transmit_power_w))
