"""Seeded randomized self-checks shared by the CLI and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamform import composite_gain, cophasing_phases, design_phases
from .channel import build_channels
from .pathloss import dris_nearfield_loss, field_superposition_power
from .scenario import Scenario, scenario_from_mapping

MAX_OFF_AXIS_RAD = math.radians(60.0)


def _direction(rng: np.random.Generator, z_sign: float) -> np.ndarray:
    theta = rng.uniform(0.0, MAX_OFF_AXIS_RAD)
    phi = rng.uniform(0.0, 2 * math.pi)
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), z_sign * math.cos(theta)])


def random_scenario(rng: np.random.Generator, max_side: int = 8, amplification: float | None = None) -> Scenario:
    """Random double-RIS layout with panels up to ``max_side`` per side.

    Terminals sit within 60 degrees of their panel's normal. The inter-RIS hop
    is at least 10 km so splitting its phase at the panel centers is exact to
    well below 1e-6.
    """
    d_u = float(10 ** rng.uniform(-1.0, 1.0))
    d_s = float(10 ** rng.uniform(-1.0, 1.0))
    d_h = float(10 ** rng.uniform(4.0, math.log10(1.2e6)))
    su = d_u * _direction(rng, 1.0)
    sap = np.array([0.0, 0.0, d_h]) + d_s * _direction(rng, -1.0)
    cfg = {
        "ris_u_n_x": int(rng.integers(1, max_side + 1)),
        "ris_u_n_y": int(rng.integers(1, max_side + 1)),
        "ris_s_n_x": int(rng.integers(1, max_side + 1)),
        "ris_s_n_y": int(rng.integers(1, max_side + 1)),
        "d_h_m": d_h,
        "su_position_m": [float(x) for x in su],
        "sap_position_m": [float(x) for x in sap],
    }
    if amplification is not None:
        cfg.update(ris_u_mode="active", ris_u_amplification=amplification)
    return scenario_from_mapping(cfg)


def oracle_relative_error(scn: Scenario) -> float:
    """|P_t / P_oracle / L_nf - 1| with co-phased elements."""
    phases_u, phases_s = cophasing_phases(scn)
    a = scn.ris_u.amplification or 1.0
    p_rx = field_superposition_power(scn, phases_u, phases_s, amplitude_u=a)
    loss = dris_nearfield_loss(scn, amplification=a).loss_linear
    return abs(scn.rf.transmit_power_w / p_rx / loss - 1.0)


@dataclass(frozen=True)
class CombiningCheck:
    identity_error: float  # relative error of |g| against a N_s N_u
    best_random_ratio: float  # max over random draws of |g_random| / |g_designed|


def combining_check(scn: Scenario, rng: np.random.Generator, draws: int = 10_000) -> CombiningCheck:
    ch = build_channels(scn)
    a = scn.ris_u.amplification or 1.0
    cfg = design_phases(ch, a)
    g = abs(composite_gain(ch, cfg))
    n_s, n_u = ch.H.shape
    target = a * n_s * n_u

    # random unit-modulus phases; the factored channel keeps this O(draws * N)
    phi_s = np.exp(1j * rng.uniform(0, 2 * math.pi, (draws, n_s)))
    phi_u = a * np.exp(1j * rng.uniform(0, 2 * math.pi, (draws, n_u)))
    left = (phi_s * ch.h_s) @ ch.H.a_rx
    right = (phi_u * ch.h_u) @ ch.H.a_tx
    g_rand = np.abs(ch.H.phase * left * right)
    return CombiningCheck(abs(g / target - 1.0), float(g_rand.max() / g))


def run_selfcheck(seed: int, n_oracle: int = 20, n_combining: int = 100, draws: int = 10_000) -> list[tuple[str, bool, str]]:
    """Run both randomized checks; returns ``(name, passed, detail)`` per check."""
    rng = np.random.default_rng(seed)
    errs = [oracle_relative_error(random_scenario(rng)) for _ in range(n_oracle)]
    worst = max(errs)
    out = [("oracle equivalence", worst < 1e-6, f"{n_oracle} scenarios, worst relative error {worst:.3e}")]
    id_err, ratio = 0.0, 0.0
    for _ in range(n_combining):
        a = float(rng.uniform(1.0, 5.0)) if rng.random() < 0.5 else None
        c = combining_check(random_scenario(rng, amplification=a), rng, draws)
        id_err, ratio = max(id_err, c.identity_error), max(ratio, c.best_random_ratio)
    out.append(
        (
            "coherent combining",
            id_err < 1e-9 and ratio <= 1.0,
            f"{n_combining} geometries, worst identity error {id_err:.3e}, best random/designed {ratio:.6f}",
        )
    )
    return out
