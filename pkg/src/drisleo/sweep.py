"""Single-point evaluation, parameter sweeps, figure presets and CSV output."""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import os
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .metrics import (
    LinkMetrics,
    link_metrics,
    relative_power,
    required_transmit_power,
)
from .scenario import (
    Architecture,
    Mode,
    Scenario,
    elements_per_side,
    move_su,
    resize_ris_u,
    watt_to_dbm,
    with_mode,
)

VARIABLES = ("d_u", "A_u", "target_adr")
METRICS = ("RP", "TP", "ADR", "EE")
CSV_HEADER = ("variable", "label", "metric", "value", "path_loss_db", "snr_db", "model_used", "a_u")
DEFAULT_TARGET_ADR = 2.0


@dataclass(frozen=True)
class SweepConfig:
    """One curve: architecture, RIS-u mode and fixed overrides.

    Recognised overrides: ``d_u_m``, ``area_u_m2``, ``target_adr``,
    ``path_loss_model`` (``auto``/``nf``/``ff``).
    """

    label: str
    architecture: Architecture = Architecture.DRIS
    mode: Mode = Mode.PASSIVE
    overrides: dict[str, Any] = field(default_factory=dict)

    def apply(self, scn: Scenario) -> Scenario:
        unknown = set(self.overrides) - {"d_u_m", "area_u_m2", "target_adr", "path_loss_model"}
        if unknown:
            raise ValueError(f"unknown sweep override(s): {sorted(unknown)}")
        # far-off terminals drive the budget-derived gain past the cap; sweeps clamp it
        scn = scn.replace(architecture=Architecture.parse(self.architecture), saturate_amplification=True)
        mode = Mode.parse(self.mode)
        # keep an explicitly configured gain when the mode is unchanged
        keep = scn.ris_u.amplification if mode is scn.ris_u.mode else None
        scn = with_mode(scn, mode, keep)
        if "area_u_m2" in self.overrides:
            scn = resize_ris_u(scn, self.overrides["area_u_m2"])
        if "d_u_m" in self.overrides:
            scn = move_su(scn, self.overrides["d_u_m"])
        if "path_loss_model" in self.overrides:
            scn = scn.replace(path_loss_model=self.overrides["path_loss_model"])
        return scn


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    grid: tuple[float, ...]
    configurations: tuple[SweepConfig, ...]
    metric: str

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}")
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}")
        grid = tuple(float(g) for g in self.grid)
        if not grid:
            raise ValueError("empty grid")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "configurations", tuple(self.configurations))
        labels = [c.label for c in self.configurations]
        if len(set(labels)) != len(labels):
            raise ValueError("configuration labels must be unique")
        if self.variable == "target_adr" and self.metric in ("ADR", "EE"):
            raise ValueError("sweeping the target ADR only makes sense for RP/TP")


def make_grid(lo: float, hi: float, count: int, log: bool = False) -> tuple[float, ...]:
    if count < 2:
        raise ValueError("grid needs at least two points")
    if log:
        if lo <= 0:
            raise ValueError("log grid needs positive bounds")
        g = np.logspace(math.log10(lo), math.log10(hi), count)
    else:
        g = np.linspace(lo, hi, count)
    return tuple(float(x) for x in g)


@dataclass(frozen=True)
class SweepRow:
    variable: float
    label: str
    metric: str
    value: float
    path_loss_db: float
    snr_db: float
    model_used: str
    a_u: float


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)

    def series(self, label: str) -> tuple[np.ndarray, np.ndarray]:
        pts = [(r.variable, r.value) for r in self.rows if r.label == label]
        x, y = zip(*pts) if pts else ((), ())
        return np.array(x), np.array(y)

    @property
    def labels(self) -> list[str]:
        return list(dict.fromkeys(r.label for r in self.rows))


def run_point(scn: Scenario, exact: bool = False) -> LinkMetrics:
    """Full pipeline for one scenario: geometry, channels, path loss, beamforming, metrics."""
    return link_metrics(scn, exact=exact)


def _evaluate(scn: Scenario, metric: str, target_adr: float) -> tuple[float, LinkMetrics]:
    if metric in ("ADR", "EE"):
        m = run_point(scn)
        return (m.adr_bps_per_hz if metric == "ADR" else m.ee_bits_per_joule), m
    p_req = required_transmit_power(scn, target_adr)
    m = run_point(scn.replace(rf=dataclasses.replace(scn.rf, transmit_power_w=p_req)))
    if metric == "TP":
        return watt_to_dbm(p_req), m
    return relative_power(scn, target_adr), m


def run_sweep(spec: SweepSpec, scn: Scenario) -> SweepResult:
    """Evaluate every configuration at every grid point, grid-major."""
    result = SweepResult()
    for x in spec.grid:
        for cfg in spec.configurations:
            try:
                point = cfg.apply(scn)
                target = float(cfg.overrides.get("target_adr", DEFAULT_TARGET_ADR))
                if spec.variable == "d_u":
                    point = move_su(point, x)
                elif spec.variable == "A_u":
                    point = resize_ris_u(point, x)
                else:
                    target = x
                value, m = _evaluate(point, spec.metric, target)
            except Exception as exc:
                raise type(exc)(f"sweep point {spec.variable}={x:.10g} [{cfg.label}]: {exc}") from exc
            result.rows.append(
                SweepRow(
                    variable=x,
                    label=cfg.label,
                    metric=spec.metric,
                    value=value,
                    path_loss_db=m.path_loss_db,
                    snr_db=m.snr_db,
                    model_used=m.model_used,
                    a_u=m.amplification,
                )
            )
    return result


def _fmt(v: float) -> str:
    return format(v, ".10g")


def emit_csv(result: SweepResult, destination) -> None:
    """Write rows as CSV to a path or text stream. Identical results give identical bytes."""
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            emit_csv(result, fh)
        return
    w = csv.writer(destination, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        w.writerow(
            [_fmt(r.variable), r.label, r.metric, _fmt(r.value), _fmt(r.path_loss_db), _fmt(r.snr_db),
             r.model_used, _fmt(r.a_u)]
        )


def csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    emit_csv(result, buf)
    return buf.getvalue()


# ----------------------------------------------------------------------------
# Figure presets
# ----------------------------------------------------------------------------
D_U_GRID = make_grid(0.01, 1000.0, 50, log=True)
AREA_GRID = make_grid(1e-4, 4.0, 50, log=True)
ADR_GRID = make_grid(0.5, 10.0, 20)
PRESETS = ("fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c")

_AREAS = (0.1**2, 0.25**2, 0.5**2)


def realizable_areas(grid: Iterable[float], spacing_m: float) -> tuple[float, ...]:
    """Snap requested areas to square grids on ``spacing_m``; drop duplicates."""
    sides = sorted({elements_per_side(a, spacing_m) for a in grid})
    return tuple(float((n * spacing_m) ** 2) for n in sides)


def _side(area: float) -> str:
    return f"{math.sqrt(area):.3g}^2"


def _ap(mode: Mode) -> str:
    return "A" if mode is Mode.ACTIVE else "P"


def _by_area(areas: Sequence[float], extra: dict | None = None) -> list[SweepConfig]:
    out = []
    for area in areas:
        for mode in (Mode.ACTIVE, Mode.PASSIVE):
            out.append(SweepConfig(f"DRIS ({_side(area)}, {_ap(mode)})", Architecture.DRIS, mode,
                                   {"area_u_m2": area, **(extra or {})}))
    return out


def _baselines(extra: dict | None = None) -> list[SweepConfig]:
    extra = extra or {}
    a = 0.25**2
    return [
        SweepConfig(f"SRIS ({_side(a)}, A)", Architecture.SRIS_AT_SU, Mode.ACTIVE, {"area_u_m2": a, **extra}),
        SweepConfig(f"SRIS ({_side(a)}, P)", Architecture.SRIS_AT_SU, Mode.PASSIVE, {"area_u_m2": a, **extra}),
        SweepConfig("SRIS at SAP", Architecture.SRIS_AT_SAP, Mode.PASSIVE, dict(extra)),
        SweepConfig("no RIS", Architecture.NORIS, Mode.PASSIVE, dict(extra)),
    ]


def _by_field(d_values=((1.0, "nf"), (100.0, "ff"))) -> list[SweepConfig]:
    out = []
    for d_u, model in d_values:
        for mode in (Mode.ACTIVE, Mode.PASSIVE):
            out.append(SweepConfig(f"({model.upper()}, {d_u:g} m, {_ap(mode)})", Architecture.DRIS, mode,
                                   {"d_u_m": d_u, "path_loss_model": model}))
    return out


def preset_spec(name: str, scn: Scenario) -> SweepSpec:
    """Sweep specification reproducing one figure panel.

    Area sweeps use ``AREA_GRID`` snapped to realisable RIS-u grids, so the
    reported area is the one actually simulated.
    """
    if name == "fig2a":
        return SweepSpec("d_u", D_U_GRID, _by_area(_AREAS) + _baselines(), "RP")
    if name == "fig2b":
        cfgs = [
            SweepConfig(f"DRIS ({adr:g}, {_ap(mode)})", Architecture.DRIS, mode,
                        {"area_u_m2": 0.25**2, "target_adr": adr})
            for adr in (1.0, 2.0, 4.0, 8.0)
            for mode in (Mode.ACTIVE, Mode.PASSIVE)
        ]
        return SweepSpec("d_u", D_U_GRID, cfgs, "RP")
    if name == "fig2c":
        return SweepSpec("target_adr", ADR_GRID, _by_area(_AREAS, {"d_u_m": 1.0}) + _baselines({"d_u_m": 1.0}), "TP")
    if name == "fig3a":
        return SweepSpec("d_u", D_U_GRID, _by_area((0.25**2,)) + _baselines(), "ADR")
    if name in ("fig3b", "fig3c"):
        grid = realizable_areas(AREA_GRID, scn.ris_u.spacing_m)
        return SweepSpec("A_u", grid, _by_field(), "ADR" if name == "fig3b" else "EE")
    raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")


def run_preset(name: str, scn: Scenario) -> SweepResult:
    return run_sweep(preset_spec(name, scn), scn)
