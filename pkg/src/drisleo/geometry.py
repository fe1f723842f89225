"""Element positions, per-element distances, local angles and field regions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GeometryError
from .scenario import PanelSpec, Scenario

NEAR_FIELD = "near_field"
FAR_FIELD = "far_field"


@dataclass(frozen=True)
class ElementGrid:
    """Element positions of one panel, flattened x-major (``index = i_x*n_y + i_y``)."""

    positions_m: np.ndarray  # (n_x*n_y, 3)
    normal: np.ndarray
    center_m: np.ndarray
    basis_x: np.ndarray
    basis_y: np.ndarray
    n_x: int
    n_y: int
    spacing_m: float

    def __len__(self):
        return self.positions_m.shape[0]

    @property
    def aperture_m(self) -> float:
        return self.spacing_m * math.hypot(self.n_x - 1, self.n_y - 1)


def element_positions(panel: PanelSpec) -> ElementGrid:
    bx = np.array(panel.basis_x)
    by = np.array(panel.basis_y)
    ix, iy = np.meshgrid(np.arange(panel.n_x), np.arange(panel.n_y), indexing="ij")
    ix, iy = ix.ravel(), iy.ravel()
    pos = (
        np.array(panel.anchor_m)[None, :]
        + (ix * panel.spacing_m)[:, None] * bx[None, :]
        + (iy * panel.spacing_m)[:, None] * by[None, :]
    )
    return ElementGrid(
        positions_m=pos,
        normal=np.cross(bx, by),
        center_m=pos.mean(axis=0),
        basis_x=bx,
        basis_y=by,
        n_x=panel.n_x,
        n_y=panel.n_y,
        spacing_m=panel.spacing_m,
    )


def direction_angles(vec, normal, basis_x, basis_y):
    """Elevation from ``normal`` and azimuth in the (basis_x, basis_y) plane.

    ``vec`` may be a single 3-vector or an array of shape (..., 3).
    Returns ``(theta, phi)`` with theta in [0, pi] and phi in [0, 2*pi).
    """
    vec = np.asarray(vec, dtype=float)
    r = np.linalg.norm(vec, axis=-1)
    if np.any(r == 0):
        raise GeometryError("degenerate geometry: zero-length direction")
    cos_t = np.clip((vec @ normal) / r, -1.0, 1.0)
    theta = np.arccos(cos_t)
    phi = np.mod(np.arctan2(vec @ basis_y, vec @ basis_x), 2 * np.pi)
    return theta, phi


def local_angles(point, grid: ElementGrid, element_index: int | None = None):
    """Angles of ``point`` seen from one element (or from the panel center if ``element_index`` is None)."""
    origin = grid.center_m if element_index is None else grid.positions_m[element_index]
    theta, phi = direction_angles(np.asarray(point, dtype=float) - origin, grid.normal, grid.basis_x, grid.basis_y)
    return float(theta), float(phi)


def rayleigh_distance(aperture_m: float, wavelength_m: float) -> float:
    if not aperture_m > 0 or not wavelength_m > 0:
        raise ValueError("aperture and wavelength must be positive")
    return 2.0 * aperture_m**2 / wavelength_m


def classify_region(distance_m: float, aperture_m: float, wavelength_m: float) -> str:
    if not distance_m > 0:
        raise ValueError("distance must be positive")
    if aperture_m == 0:
        # a single element has no near field
        return FAR_FIELD
    return NEAR_FIELD if distance_m < rayleigh_distance(aperture_m, wavelength_m) else FAR_FIELD


def cos_off_axis(vec: np.ndarray, axis: np.ndarray, dist: np.ndarray | None = None) -> np.ndarray:
    """Cosine of the angle between direction(s) ``vec`` and unit ``axis``."""
    if dist is None:
        dist = np.linalg.norm(vec, axis=-1)
    return (vec @ axis) / dist


@dataclass(frozen=True)
class LinkGeometry:
    """Per-element distance and elevation tables for the SU -> RIS-u -> RIS-s -> SAP chain.

    Elevation tables (radians) are named after the pattern they feed:

    * ``theta_su_tx[n_u]``: SU antenna toward element n_u
    * ``theta_u_in[n_u]``: element n_u toward the SU
    * ``theta_u_out[n_s, n_u]``: element n_u toward element n_s
    * ``theta_s_in[n_s, n_u]``: element n_s toward element n_u
    * ``theta_s_out[n_s]``: element n_s toward the SAP
    * ``theta_sap_rx[n_s]``: SAP antenna toward element n_s
    """

    d_su_to_ru_m: np.ndarray
    d_ru_to_rs_m: np.ndarray
    d_rs_to_sap_m: np.ndarray
    d_u: float
    d_s: float
    d_h: float
    theta_su_tx: np.ndarray
    theta_u_in: np.ndarray
    theta_u_out: np.ndarray
    theta_s_in: np.ndarray
    theta_s_out: np.ndarray
    theta_sap_rx: np.ndarray


def _angle(vec, axis):
    r = np.linalg.norm(vec, axis=-1)
    return np.arccos(np.clip((vec @ axis) / r, -1.0, 1.0))


def pairwise_distances(scn: Scenario) -> LinkGeometry:
    """Full distance/angle tables. Materialises an N_s x N_u table; meant for moderate panels."""
    gu = element_positions(scn.ris_u)
    gs = element_positions(scn.ris_s)
    su = np.array(scn.su_position_m)
    sap = np.array(scn.sap_position_m)
    su_bore = scn.resolved_su_boresight()
    sap_bore = scn.resolved_sap_boresight()

    v_su = gu.positions_m - su[None, :]  # SU -> element n_u
    v_mid = gs.positions_m[:, None, :] - gu.positions_m[None, :, :]  # n_u -> n_s
    v_sap = sap[None, :] - gs.positions_m  # n_s -> SAP

    d_su = np.linalg.norm(v_su, axis=-1)
    d_mid = np.linalg.norm(v_mid, axis=-1)
    d_sap = np.linalg.norm(v_sap, axis=-1)
    if np.any(d_su == 0) or np.any(d_mid == 0) or np.any(d_sap == 0):
        raise GeometryError("degenerate geometry: coincident points")

    return LinkGeometry(
        d_su_to_ru_m=d_su,
        d_ru_to_rs_m=d_mid,
        d_rs_to_sap_m=d_sap,
        d_u=scn.d_u,
        d_s=scn.d_s,
        d_h=scn.d_h,
        theta_su_tx=_angle(v_su, su_bore),
        theta_u_in=_angle(-v_su, gu.normal),
        theta_u_out=_angle(v_mid, gu.normal),
        theta_s_in=_angle(-v_mid, gs.normal),
        theta_s_out=_angle(v_sap, gs.normal),
        theta_sap_rx=_angle(-v_sap, sap_bore),
    )
