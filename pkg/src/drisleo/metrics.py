"""Rate, power consumption, energy efficiency and required transmit power."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .beamform import LinkBudget, received_snr
from .errors import NumericalError
from .scenario import Architecture, Mode, PanelSpec, PowerModel, Scenario, linear_to_db

P_MIN_W = 1e-12
P_MAX_W = 1e4
MAX_BISECTION_STEPS = 200


@dataclass(frozen=True)
class LinkMetrics:
    path_loss_db: float
    snr_linear: float
    adr_bps_per_hz: float
    p_total_w: float
    ee_bits_per_joule: float
    p_ris_s_w: float
    p_ris_u_w: float
    model_used: str
    amplification: float
    noise_w: float

    @property
    def snr_db(self) -> float:
        return 10 * math.log10(self.snr_linear) if self.snr_linear > 0 else -math.inf


def achievable_rate(snr_linear: float) -> float:
    if snr_linear < 0:
        raise ValueError("SNR must be non-negative")
    return math.log2(1.0 + snr_linear)


def ris_power(panel: PanelSpec, pm: PowerModel, transmit_power_w: float, n_elements: int | None = None) -> float:
    """Passive: one phase shifter per element. Active: amplifier budget plus per-element and static draw."""
    n = panel.n_elements if n_elements is None else n_elements
    if panel.mode is Mode.PASSIVE:
        return n * pm.p_phase_shifter_w
    return pm.amplifier_budget(transmit_power_w) + n * pm.p_dynamic_w + pm.p_static_active_ris_w


def _panel_powers(scn: Scenario, transmit_power_w: float) -> tuple[float, float]:
    arch = scn.architecture
    p_s = ris_power(scn.ris_s, scn.power_model, transmit_power_w) if arch.uses_ris_s else 0.0
    p_u = ris_power(scn.ris_u, scn.power_model, transmit_power_w) if arch.uses_ris_u else 0.0
    return p_s, p_u


def total_power(scn: Scenario, transmit_power_w: float | None = None) -> float:
    p_t = scn.rf.transmit_power_w if transmit_power_w is None else transmit_power_w
    p_s, p_u = _panel_powers(scn, p_t)
    return p_t + p_s + p_u + scn.power_model.p_static_system_w


def ee_from(bandwidth_hz: float, adr: float, p_total_w: float) -> float:
    if p_total_w <= 0:
        raise ValueError("total power must be positive")
    return bandwidth_hz * adr / p_total_w


def link_metrics(scn: Scenario, exact: bool = False) -> LinkMetrics:
    state = received_snr(scn, exact=exact)
    adr = achievable_rate(state.snr_linear)
    p_s, p_u = _panel_powers(scn, scn.rf.transmit_power_w)
    p_tot = total_power(scn)
    return LinkMetrics(
        path_loss_db=state.path_loss.loss_db,
        snr_linear=state.snr_linear,
        adr_bps_per_hz=adr,
        p_total_w=p_tot,
        ee_bits_per_joule=ee_from(scn.rf.bandwidth_hz, adr, p_tot),
        p_ris_s_w=p_s,
        p_ris_u_w=p_u,
        model_used=state.path_loss.model_used,
        amplification=state.amplification,
        noise_w=state.effective_noise_w,
    )


def energy_efficiency(scn: Scenario, exact: bool = False) -> float:
    """Bits per joule at the scenario's transmit power."""
    return link_metrics(scn, exact).ee_bits_per_joule


def required_transmit_power(scn: Scenario, target_adr: float, exact: bool = False) -> float:
    """Smallest transmit power (W) reaching ``target_adr`` with designed phases.

    Closed form when the SNR is linear in ``P_t``; otherwise (active RIS-u with a
    budget-derived amplification) bisection on log-power.
    """
    if not target_adr > 0:
        raise ValueError("target ADR must be positive")
    snr_target = 2.0**target_adr - 1.0
    nonlinear = scn.architecture.uses_ris_u and scn.ris_u.mode is Mode.ACTIVE and scn.ris_u.amplification is None
    if not nonlinear:
        budget = LinkBudget(scn, exact)
        return snr_target * budget.noise(1.0) * budget.loss(1.0)

    # probes at small P_t may push the gain past the cap; clamping keeps the SNR
    # monotone in P_t, and the cap is enforced on the solution below
    budget = LinkBudget(scn.replace(saturate_amplification=True), exact)
    if budget.snr(P_MAX_W) < snr_target:
        raise NumericalError(f"target ADR {target_adr} unreachable below {P_MAX_W:g} W")
    if budget.snr(P_MIN_W) >= snr_target:
        p = P_MIN_W
    else:
        p = _bisect_log_power(budget, snr_target)
    if not scn.saturate_amplification:
        LinkBudget(scn, exact).amplification(p)  # raises if the gain is beyond the cap
    return p


def _bisect_log_power(budget: LinkBudget, snr_target: float) -> float:
    lo, hi = math.log(P_MIN_W), math.log(P_MAX_W)
    for _ in range(MAX_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if budget.snr(math.exp(mid)) < snr_target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-7:  # log-space width ~ relative width
            return math.exp(hi)
    raise NumericalError("bisection for required transmit power did not converge")


def relative_power(scn: Scenario, target_adr: float, baseline: Architecture = Architecture.NORIS,
                   exact: bool = False) -> float:
    """Required-power ratio (dB) of ``scn`` against the same scenario under ``baseline``."""
    base = scn.replace(architecture=Architecture.parse(baseline))
    return linear_to_db(required_transmit_power(scn, target_adr, exact)) - linear_to_db(
        required_transmit_power(base, target_adr, exact)
    )


__all__ = [
    "LinkMetrics",
    "achievable_rate",
    "ee_from",
    "energy_efficiency",
    "link_metrics",
    "relative_power",
    "required_transmit_power",
    "ris_power",
    "total_power",
]
