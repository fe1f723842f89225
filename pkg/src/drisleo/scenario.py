"""Scenario description: RF parameters, RIS panels, node placement and power model.

All values are stored in SI linear units. dB/dBm only appear at the config
boundary (``*_db`` / ``*_dbm`` keys) and in reports.

Config files are flat YAML mappings, e.g.::

    carrier_frequency_hz: 12.0e9
    transmit_power_dbm: 10
    d_u_m: 0.5
    ris_u_area_m2: 0.0625
    ris_u_mode: active
    architecture: dris

Unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
import yaml

from .errors import ConfigError

SPEED_OF_LIGHT = 299_792_458.0

Vec3 = tuple[float, float, float]


# ----------------------------------------------------------------------------
# dB helpers
# ----------------------------------------------------------------------------
def _finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite input: {x!r}")
    return x


def db_to_linear(db: float) -> float:
    return 10.0 ** (_finite(db) / 10.0)


def linear_to_db(value: float) -> float:
    value = _finite(value)
    if value <= 0:
        raise ValueError(f"cannot express {value!r} in dB")
    return 10.0 * math.log10(value)


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((_finite(dbm) - 30.0) / 10.0)


def watt_to_dbm(watt: float) -> float:
    return linear_to_db(watt) + 30.0


_CONVERSIONS = {
    "db->linear": db_to_linear,
    "linear->db": linear_to_db,
    "dbm->watt": dbm_to_watt,
    "watt->dbm": watt_to_dbm,
}


def db_conversion(value: float, direction: str) -> float:
    """Dispatch to one of the four dB conversions by name, e.g. ``"dbm->watt"``."""
    try:
        fn = _CONVERSIONS[direction]
    except KeyError:
        raise ValueError(
            f"unknown direction {direction!r}; expected one of {sorted(_CONVERSIONS)}"
        ) from None
    return fn(value)


# ----------------------------------------------------------------------------
# Enumerations
# ----------------------------------------------------------------------------
class Architecture(str, enum.Enum):
    DRIS = "dris"
    SRIS_AT_SU = "sris-su"
    SRIS_AT_SAP = "sris-sap"
    NORIS = "noris"

    @classmethod
    def parse(cls, text: "str | Architecture") -> "Architecture":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_at_", "-").replace("_", "-")
        for member in cls:
            if key == member.value:
                return member
        raise ConfigError(f"unknown architecture {text!r}")

    @property
    def uses_ris_u(self) -> bool:
        return self in (Architecture.DRIS, Architecture.SRIS_AT_SU)

    @property
    def uses_ris_s(self) -> bool:
        return self in (Architecture.DRIS, Architecture.SRIS_AT_SAP)


class Mode(str, enum.Enum):
    PASSIVE = "passive"
    ACTIVE = "active"

    @classmethod
    def parse(cls, text: "str | Mode") -> "Mode":
        try:
            return cls(str(text.value if isinstance(text, cls) else text).strip().lower())
        except ValueError:
            raise ConfigError(f"unknown RIS mode {text!r}") from None


PATH_LOSS_MODELS = ("auto", "nf", "ff")


# ----------------------------------------------------------------------------
# Domain types
# ----------------------------------------------------------------------------
def _vec3(value: Any, name: str) -> Vec3:
    try:
        arr = [float(v) for v in value]
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a 3-vector of numbers") from None
    if len(arr) != 3 or not all(math.isfinite(v) for v in arr):
        raise ConfigError(f"{name} must be a finite 3-vector")
    return (arr[0], arr[1], arr[2])


@dataclass(frozen=True)
class RFParams:
    carrier_frequency_hz: float
    bandwidth_hz: float
    transmit_power_w: float
    static_noise_power_w: float
    dynamic_noise_power_w: float
    gain_su: float
    gain_sap: float
    gain_ris_s: float
    gain_ris_u: float

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"{f.name} must be a finite number")
        if self.carrier_frequency_hz <= 0 or self.bandwidth_hz <= 0:
            raise ConfigError("carrier frequency and bandwidth must be positive")
        if self.transmit_power_w < 0:
            raise ConfigError("transmit power must be non-negative")
        if self.static_noise_power_w <= 0:
            raise ConfigError("static noise power must be positive")
        # zero dynamic noise is allowed: it is the passive limit of an active RIS
        if self.dynamic_noise_power_w < 0:
            raise ConfigError("dynamic noise power must be non-negative")
        for name in ("gain_su", "gain_sap", "gain_ris_s", "gain_ris_u"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive (linear units)")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def wavenumber_rad_per_m(self) -> float:
        return 2.0 * math.pi / self.wavelength_m


@dataclass(frozen=True)
class PanelSpec:
    """One RIS panel: a corner-anchored ``n_x`` by ``n_y`` grid of elements.

    Element ``(i, j)`` sits at ``anchor + i*spacing*basis_x + j*spacing*basis_y``.
    ``amplification`` is 1 for passive panels. For active panels ``None``
    means "derive from the amplifier power budget".
    """

    n_x: int
    n_y: int
    element_dx_m: float
    element_dy_m: float
    spacing_m: float
    anchor_m: Vec3
    basis_x: Vec3
    basis_y: Vec3
    mode: Mode = Mode.PASSIVE
    amplification: float | None = 1.0

    def __post_init__(self):
        for name in ("n_x", "n_y"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigError(f"{name} must be a positive integer")
        for name in ("element_dx_m", "element_dy_m", "spacing_m"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise ConfigError(f"{name} must be positive")
        object.__setattr__(self, "anchor_m", _vec3(self.anchor_m, "anchor_m"))
        object.__setattr__(self, "basis_x", _vec3(self.basis_x, "basis_x"))
        object.__setattr__(self, "basis_y", _vec3(self.basis_y, "basis_y"))
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        bx, by = np.array(self.basis_x), np.array(self.basis_y)
        if abs(np.linalg.norm(bx) - 1) > 1e-12 or abs(np.linalg.norm(by) - 1) > 1e-12:
            raise ConfigError("basis not unit norm")
        if abs(bx @ by) > 1e-12:
            raise ConfigError("basis not orthogonal")
        tol = 1e-12 * self.spacing_m
        if self.element_dx_m > self.spacing_m + tol or self.element_dy_m > self.spacing_m + tol:
            raise ConfigError("elements overlap: element size exceeds spacing")
        if self.mode is Mode.PASSIVE:
            if self.amplification is None:
                object.__setattr__(self, "amplification", 1.0)
            elif self.amplification != 1.0:
                raise ConfigError("passive panel requires amplification = 1")
        elif self.amplification is not None and not self.amplification > 1.0:
            raise ConfigError("active panel requires amplification > 1")

    @property
    def n_elements(self) -> int:
        return self.n_x * self.n_y

    @property
    def element_area_m2(self) -> float:
        return self.element_dx_m * self.element_dy_m

    @property
    def area_m2(self) -> float:
        return self.n_elements * self.element_area_m2

    @property
    def normal(self) -> np.ndarray:
        return np.cross(self.basis_x, self.basis_y)

    @property
    def center_m(self) -> np.ndarray:
        return (
            np.array(self.anchor_m)
            + 0.5 * (self.n_x - 1) * self.spacing_m * np.array(self.basis_x)
            + 0.5 * (self.n_y - 1) * self.spacing_m * np.array(self.basis_y)
        )

    @property
    def aperture_m(self) -> float:
        """Diagonal of the element-center extent."""
        return self.spacing_m * math.hypot(self.n_x - 1, self.n_y - 1)

    def recentered(self, center: np.ndarray, n_x: int | None = None, n_y: int | None = None) -> "PanelSpec":
        """Copy with a new grid size, keeping orientation and placing its center at ``center``."""
        n_x = self.n_x if n_x is None else n_x
        n_y = self.n_y if n_y is None else n_y
        anchor = _anchor_for_center(center, n_x, n_y, self.spacing_m, self.basis_x, self.basis_y)
        return dataclasses.replace(self, n_x=n_x, n_y=n_y, anchor_m=anchor)


@dataclass(frozen=True)
class PowerModel:
    """Hardware power consumption. The amplifier budget is either an absolute
    wattage or a fraction of the transmit power (exactly one is set)."""

    p_phase_shifter_w: float
    p_dynamic_w: float
    p_static_active_ris_w: float
    p_static_system_w: float
    p_amplifier_budget_w: float | None = None
    amplifier_budget_ratio: float | None = 0.5

    def __post_init__(self):
        if (self.p_amplifier_budget_w is None) == (self.amplifier_budget_ratio is None):
            raise ConfigError("set exactly one of p_amplifier_budget_w / amplifier_budget_ratio")
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if v is not None and (not math.isfinite(v) or v < 0):
                raise ConfigError(f"{f.name} must be finite and >= 0")

    def amplifier_budget(self, transmit_power_w: float) -> float:
        if self.p_amplifier_budget_w is not None:
            return self.p_amplifier_budget_w
        return self.amplifier_budget_ratio * transmit_power_w


@dataclass(frozen=True)
class Scenario:
    rf: RFParams
    sap_position_m: Vec3
    su_position_m: Vec3
    ris_s: PanelSpec
    ris_u: PanelSpec
    power_model: PowerModel
    architecture: Architecture = Architecture.DRIS
    su_boresight: Vec3 | None = None
    sap_boresight: Vec3 | None = None
    path_loss_model: str = "auto"
    saturate_amplification: bool = False  # clamp RIS-u gain at the cap instead of raising

    def __post_init__(self):
        object.__setattr__(self, "sap_position_m", _vec3(self.sap_position_m, "sap_position_m"))
        object.__setattr__(self, "su_position_m", _vec3(self.su_position_m, "su_position_m"))
        object.__setattr__(self, "architecture", Architecture.parse(self.architecture))
        for name in ("su_boresight", "sap_boresight"):
            v = getattr(self, name)
            if v is not None:
                v = _vec3(v, name)
                n = math.sqrt(sum(c * c for c in v))
                if n == 0:
                    raise ConfigError(f"{name} must be non-zero")
                object.__setattr__(self, name, (v[0] / n, v[1] / n, v[2] / n))
        if self.path_loss_model not in PATH_LOSS_MODELS:
            raise ConfigError(f"path_loss_model must be one of {PATH_LOSS_MODELS}")
        if self.ris_s.mode is not Mode.PASSIVE:
            raise ConfigError("RIS-s must be passive (only RIS-u may amplify)")
        pts = [
            np.array(self.sap_position_m),
            np.array(self.su_position_m),
            self.ris_s.center_m,
            self.ris_u.center_m,
        ]
        for i in range(4):
            for j in range(i + 1, 4):
                if np.array_equal(pts[i], pts[j]):
                    raise ConfigError("node and panel positions must be distinct")

    # center-to-center distances
    @property
    def d_u(self) -> float:
        return float(np.linalg.norm(self.ris_u.center_m - np.array(self.su_position_m)))

    @property
    def d_s(self) -> float:
        return float(np.linalg.norm(np.array(self.sap_position_m) - self.ris_s.center_m))

    @property
    def d_h(self) -> float:
        return float(np.linalg.norm(self.ris_s.center_m - self.ris_u.center_m))

    @property
    def d_direct(self) -> float:
        return float(np.linalg.norm(np.array(self.sap_position_m) - np.array(self.su_position_m)))

    def resolved_su_boresight(self) -> np.ndarray:
        """SU antenna pointing; defaults to the first node the SU talks to."""
        if self.su_boresight is not None:
            return np.array(self.su_boresight)
        arch = self.architecture
        if arch.uses_ris_u:
            target = self.ris_u.center_m
        elif arch is Architecture.SRIS_AT_SAP:
            target = self.ris_s.center_m
        else:
            target = np.array(self.sap_position_m)
        v = target - np.array(self.su_position_m)
        return v / np.linalg.norm(v)

    def resolved_sap_boresight(self) -> np.ndarray:
        if self.sap_boresight is not None:
            return np.array(self.sap_boresight)
        arch = self.architecture
        if arch.uses_ris_s:
            target = self.ris_s.center_m
        elif arch is Architecture.SRIS_AT_SU:
            target = self.ris_u.center_m
        else:
            target = np.array(self.su_position_m)
        v = target - np.array(self.sap_position_m)
        return v / np.linalg.norm(v)

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)


# ----------------------------------------------------------------------------
# Layout helpers
# ----------------------------------------------------------------------------
def _anchor_for_center(center, n_x, n_y, spacing, bx, by) -> Vec3:
    a = (
        np.asarray(center, dtype=float)
        - 0.5 * (n_x - 1) * spacing * np.asarray(bx)
        - 0.5 * (n_y - 1) * spacing * np.asarray(by)
    )
    return (float(a[0]), float(a[1]), float(a[2]))


def elements_per_side(area_m2: float, spacing_m: float) -> int:
    """Square-grid side length realising ``area_m2`` on a ``spacing_m`` pitch."""
    if not area_m2 > 0:
        raise ConfigError("RIS area must be positive")
    return max(1, int(round(math.sqrt(area_m2) / spacing_m)))


def move_su(scn: Scenario, d_u: float) -> Scenario:
    """Slide the SU along the RIS-u-center -> SU line to distance ``d_u``."""
    if not d_u > 0:
        raise ConfigError("d_u must be positive")
    c = scn.ris_u.center_m
    v = np.array(scn.su_position_m) - c
    pos = c + d_u * v / np.linalg.norm(v)
    return scn.replace(su_position_m=tuple(float(x) for x in pos))


def resize_ris_u(scn: Scenario, area_m2: float) -> Scenario:
    """Resize RIS-u to the square grid closest to ``area_m2``, keeping its center."""
    p = scn.ris_u
    n = elements_per_side(area_m2, p.spacing_m)
    return scn.replace(ris_u=p.recentered(p.center_m, n, n))


def with_mode(scn: Scenario, mode: "str | Mode", amplification: float | None = None) -> Scenario:
    mode = Mode.parse(mode)
    if mode is Mode.PASSIVE:
        amplification = 1.0
    return scn.replace(ris_u=dataclasses.replace(scn.ris_u, mode=mode, amplification=amplification))


# ----------------------------------------------------------------------------
# Table I defaults and config I/O
# ----------------------------------------------------------------------------
_DEFAULTS: dict[str, Any] = {
    "carrier_frequency_hz": 12.0e9,
    "bandwidth_hz": 50.0e6,
    "transmit_power_dbm": 10.0,
    "static_noise_power_dbm": -133.5,
    "dynamic_noise_power_dbm": -133.5,
    "gain_su_db": 10.0,
    "gain_sap_db": 20.0,
    "gain_ris_s_db": 3.0,
    "gain_ris_u_db": 3.0,
    "p_phase_shifter_w": 5e-3,
    "p_dynamic_dbm": 30.0,
    "p_static_active_ris_dbm": 35.0,
    "p_static_system_dbm": 75.0,
    "amplifier_budget_ratio": 0.5,
    "d_u_m": 1.0,
    "d_s_m": 1.0,
    "d_h_m": 1.2e6,
    "ris_s_n_x": 20,
    "ris_s_n_y": 20,
    "ris_u_n_x": 20,
    "ris_u_n_y": 20,
    "architecture": "dris",
    "path_loss_model": "auto",
    "saturate_amplification": False,
}

# keys that accept a unit suffix; value is the list of accepted suffixes
_POWER_KEYS = (
    "transmit_power",
    "static_noise_power",
    "dynamic_noise_power",
    "p_phase_shifter",
    "p_dynamic",
    "p_static_active_ris",
    "p_static_system",
    "p_amplifier_budget",
)
_GAIN_KEYS = ("gain_su", "gain_sap", "gain_ris_s", "gain_ris_u")
_PANEL_KEYS = (
    "n_x",
    "n_y",
    "area_m2",
    "element_dx_m",
    "element_dy_m",
    "spacing_m",
    "anchor_m",
    "basis_x",
    "basis_y",
    "mode",
    "amplification",
)
_PLAIN_KEYS = (
    "carrier_frequency_hz",
    "bandwidth_hz",
    "amplifier_budget_ratio",
    "d_u_m",
    "d_s_m",
    "d_h_m",
    "su_position_m",
    "sap_position_m",
    "su_boresight",
    "sap_boresight",
    "architecture",
    "path_loss_model",
    "saturate_amplification",
)


def _known_keys() -> set[str]:
    keys = set(_PLAIN_KEYS)
    for k in _POWER_KEYS:
        keys.update({k + "_w", k + "_dbm"})
    for k in _GAIN_KEYS:
        keys.update({k, k + "_db"})
    for p in ("ris_s", "ris_u"):
        keys.update(f"{p}_{k}" for k in _PANEL_KEYS)
    return keys


KNOWN_KEYS = frozenset(_known_keys())


def _number(cfg: Mapping[str, Any], key: str) -> float:
    v = cfg[key]
    if isinstance(v, str):
        # YAML 1.1 reads exponents without a sign or dot ("12e9") as strings
        try:
            v = float(v)
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {v!r}") from None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(f"{key} must be finite")
    return float(v)


def _power(cfg: Mapping[str, Any], base: str) -> float | None:
    w, dbm = base + "_w", base + "_dbm"
    if w in cfg and dbm in cfg:
        raise ConfigError(f"both {w} and {dbm} given")
    if w in cfg:
        return _number(cfg, w)
    if dbm in cfg:
        return dbm_to_watt(_number(cfg, dbm))
    return None


def _gain(cfg: Mapping[str, Any], base: str) -> float:
    if base in cfg and base + "_db" in cfg:
        raise ConfigError(f"both {base} and {base}_db given")
    if base in cfg:
        return _number(cfg, base)
    return db_to_linear(_number(cfg, base + "_db"))


def _panel(cfg: Mapping[str, Any], prefix: str, center, default_bx, default_by, wavelength) -> PanelSpec:
    def get(k, default=None):
        return cfg.get(f"{prefix}_{k}", default)

    spacing = float(get("spacing_m", wavelength / 2))
    if f"{prefix}_area_m2" in cfg:
        if f"{prefix}_n_x" in cfg or f"{prefix}_n_y" in cfg:
            raise ConfigError(f"give either {prefix}_area_m2 or {prefix}_n_x/_n_y, not both")
        n_x = n_y = elements_per_side(_number(cfg, f"{prefix}_area_m2"), spacing)
    else:
        n_x, n_y = get("n_x", _DEFAULTS[f"{prefix}_n_x"]), get("n_y", _DEFAULTS[f"{prefix}_n_y"])
    bx = _vec3(get("basis_x", default_bx), f"{prefix}_basis_x")
    by = _vec3(get("basis_y", default_by), f"{prefix}_basis_y")
    if f"{prefix}_anchor_m" in cfg:
        anchor = _vec3(get("anchor_m"), f"{prefix}_anchor_m")
    else:
        anchor = _anchor_for_center(center, n_x, n_y, spacing, bx, by)
    mode = Mode.parse(get("mode", "passive"))
    amp = get("amplification")
    if amp is not None:
        amp = float(amp)
    elif mode is Mode.PASSIVE:
        amp = 1.0
    return PanelSpec(
        n_x=n_x,
        n_y=n_y,
        element_dx_m=float(get("element_dx_m", spacing)),
        element_dy_m=float(get("element_dy_m", spacing)),
        spacing_m=spacing,
        anchor_m=anchor,
        basis_x=bx,
        basis_y=by,
        mode=mode,
        amplification=amp,
    )


def scenario_from_mapping(overrides: Mapping[str, Any] | None = None) -> Scenario:
    """Build a validated scenario from flat config keys layered over Table I defaults.

    Without explicit positions the canonical layout is used: RIS-u centered at
    the origin facing +z, the SU ``d_u_m`` in front of it, RIS-s ``d_h_m`` up the
    z axis facing back down, and the SAP ``d_s_m`` below RIS-s.
    """
    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")

    cfg: dict[str, Any] = {}
    # a unit-suffixed override replaces the default's other spelling
    for k, v in _DEFAULTS.items():
        base = k.rsplit("_", 1)[0]
        if base in _POWER_KEYS and (base + "_w" in overrides or base + "_dbm" in overrides):
            continue
        if base in _GAIN_KEYS and base in overrides:
            continue
        if k == "amplifier_budget_ratio" and (
            "p_amplifier_budget_w" in overrides or "p_amplifier_budget_dbm" in overrides
        ):
            continue
        for p in ("ris_s", "ris_u"):
            if k.startswith(p + "_n_") and f"{p}_area_m2" in overrides:
                break
        else:
            cfg[k] = v
    cfg.update(overrides)

    try:
        rf = RFParams(
            carrier_frequency_hz=_number(cfg, "carrier_frequency_hz"),
            bandwidth_hz=_number(cfg, "bandwidth_hz"),
            transmit_power_w=_power(cfg, "transmit_power"),
            static_noise_power_w=_power(cfg, "static_noise_power"),
            dynamic_noise_power_w=_power(cfg, "dynamic_noise_power"),
            gain_su=_gain(cfg, "gain_su"),
            gain_sap=_gain(cfg, "gain_sap"),
            gain_ris_s=_gain(cfg, "gain_ris_s"),
            gain_ris_u=_gain(cfg, "gain_ris_u"),
        )
        lam = rf.wavelength_m
        d_u, d_s, d_h = (_number(cfg, k) for k in ("d_u_m", "d_s_m", "d_h_m"))
        if min(d_u, d_s, d_h) <= 0:
            raise ConfigError("layout distances must be positive")
        ez = np.array([0.0, 0.0, 1.0])
        ris_u = _panel(cfg, "ris_u", np.zeros(3), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), lam)
        ris_s = _panel(cfg, "ris_s", d_h * ez, (1.0, 0.0, 0.0), (0.0, -1.0, 0.0), lam)
        su = cfg.get("su_position_m", tuple(ris_u.center_m + d_u * ris_u.normal))
        sap = cfg.get("sap_position_m", tuple(ris_s.center_m + d_s * ris_s.normal))

        pm = PowerModel(
            p_phase_shifter_w=_power(cfg, "p_phase_shifter"),
            p_dynamic_w=_power(cfg, "p_dynamic"),
            p_static_active_ris_w=_power(cfg, "p_static_active_ris"),
            p_static_system_w=_power(cfg, "p_static_system"),
            p_amplifier_budget_w=_power(cfg, "p_amplifier_budget"),
            amplifier_budget_ratio=(
                _number(cfg, "amplifier_budget_ratio") if "amplifier_budget_ratio" in cfg else None
            ),
        )
        return Scenario(
            rf=rf,
            sap_position_m=sap,
            su_position_m=su,
            ris_s=ris_s,
            ris_u=ris_u,
            power_model=pm,
            architecture=Architecture.parse(cfg["architecture"]),
            su_boresight=cfg.get("su_boresight"),
            sap_boresight=cfg.get("sap_boresight"),
            path_loss_model=str(cfg["path_loss_model"]),
            saturate_amplification=_flag(cfg, "saturate_amplification"),
        )
    except (TypeError, KeyError) as exc:
        raise ConfigError(f"malformed config: {exc}") from exc


def _flag(cfg: Mapping[str, Any], key: str) -> bool:
    v = cfg[key]
    if not isinstance(v, bool):
        raise ConfigError(f"{key} must be true or false")
    return v


def table1_defaults() -> Scenario:
    """Baseline scenario: 12 GHz, 1 m / 1200 km / 1 m layout, 20x20 half-wavelength panels."""
    return scenario_from_mapping()


def load_scenario(config_text: str) -> Scenario:
    try:
        data = yaml.safe_load(config_text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a flat key-value mapping")
    for k, v in data.items():
        if isinstance(v, dict):
            raise ConfigError(f"nested mapping under {k!r}; config must be flat")
    return scenario_from_mapping(data)


def load_scenario_file(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return load_scenario(fh.read())


def scenario_to_mapping(scn: Scenario) -> dict[str, Any]:
    """Flat SI-unit mapping that reloads to an identical scenario."""
    rf, pm = scn.rf, scn.power_model
    out: dict[str, Any] = {
        "carrier_frequency_hz": rf.carrier_frequency_hz,
        "bandwidth_hz": rf.bandwidth_hz,
        "transmit_power_w": rf.transmit_power_w,
        "static_noise_power_w": rf.static_noise_power_w,
        "dynamic_noise_power_w": rf.dynamic_noise_power_w,
        "gain_su": rf.gain_su,
        "gain_sap": rf.gain_sap,
        "gain_ris_s": rf.gain_ris_s,
        "gain_ris_u": rf.gain_ris_u,
        "p_phase_shifter_w": pm.p_phase_shifter_w,
        "p_dynamic_w": pm.p_dynamic_w,
        "p_static_active_ris_w": pm.p_static_active_ris_w,
        "p_static_system_w": pm.p_static_system_w,
        "su_position_m": list(scn.su_position_m),
        "sap_position_m": list(scn.sap_position_m),
        "architecture": scn.architecture.value,
        "path_loss_model": scn.path_loss_model,
        "saturate_amplification": scn.saturate_amplification,
    }
    if pm.p_amplifier_budget_w is not None:
        out["p_amplifier_budget_w"] = pm.p_amplifier_budget_w
    else:
        out["amplifier_budget_ratio"] = pm.amplifier_budget_ratio
    for name in ("su_boresight", "sap_boresight"):
        if getattr(scn, name) is not None:
            out[name] = list(getattr(scn, name))
    for prefix, p in (("ris_s", scn.ris_s), ("ris_u", scn.ris_u)):
        out.update(
            {
                f"{prefix}_n_x": int(p.n_x),
                f"{prefix}_n_y": int(p.n_y),
                f"{prefix}_element_dx_m": p.element_dx_m,
                f"{prefix}_element_dy_m": p.element_dy_m,
                f"{prefix}_spacing_m": p.spacing_m,
                f"{prefix}_anchor_m": list(p.anchor_m),
                f"{prefix}_basis_x": list(p.basis_x),
                f"{prefix}_basis_y": list(p.basis_y),
                f"{prefix}_mode": p.mode.value,
            }
        )
        if p.amplification is not None:
            out[f"{prefix}_amplification"] = p.amplification
    return out


def dump_scenario(scn: Scenario) -> str:
    return yaml.safe_dump(scenario_to_mapping(scn), sort_keys=True, default_flow_style=None)
