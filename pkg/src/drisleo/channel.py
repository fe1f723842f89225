"""Line-of-sight channel vectors: planar-wave UPA responses and spherical-wave near-field vectors.

Vectors are ordered x-major, matching :func:`drisleo.geometry.element_positions`.
The planar response uses ``exp(-j*pi*v*n)`` while the spherical vector uses
``exp(+j*k*(...))``; the two are complex conjugates of each other in the far
limit. The beamformer conjugates whatever it is given, so either convention
phase-aligns.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import ElementGrid, element_positions, local_angles, rayleigh_distance
from .errors import GeometryError
from .scenario import Scenario


def ula_steering(phase_step: float, n: int) -> np.ndarray:
    """``[1, e^{-j pi v}, ..., e^{-j pi (n-1) v}]`` for phase step ``v``."""
    if n < 1:
        raise ValueError("ULA needs at least one element")
    return np.exp(-1j * np.pi * phase_step * np.arange(n))


def upa_response(theta, phi, n_x, n_y, spacing_m, wavelength_m) -> np.ndarray:
    s = 2.0 * spacing_m / wavelength_m * math.sin(theta)
    return np.kron(ula_steering(s * math.cos(phi), n_x), ula_steering(s * math.sin(phi), n_y))


def near_field_channel(point, grid: ElementGrid, wavelength_m: float) -> np.ndarray:
    """Spherical-wave steering vector of ``grid`` toward ``point`` (angles/distance from the panel center)."""
    theta, phi = local_angles(point, grid)
    d = float(np.linalg.norm(np.asarray(point, dtype=float) - grid.center_m))
    if d <= 0:
        raise GeometryError("degenerate geometry: point at panel center")
    k = 2.0 * math.pi / wavelength_m
    delta = grid.spacing_m
    st = math.sin(theta)
    cx, cy = math.cos(phi) * st, math.sin(phi) * st
    ix = np.arange(grid.n_x)
    iy = np.arange(grid.n_y)
    bx = np.exp(1j * k * (ix * delta * cx - ix**2 * delta**2 * (1 - cx**2) / (2 * d)))
    by = np.exp(1j * k * (iy * delta * cy - iy**2 * delta**2 * (1 - cy**2) / (2 * d)))
    return np.kron(bx, by)


@dataclass(frozen=True)
class FarFieldChannel:
    """Rank-one LoS channel ``phase * a_rx a_tx^T`` kept in factored form."""

    phase: complex
    a_rx: np.ndarray
    a_tx: np.ndarray
    distance_m: float

    @property
    def shape(self):
        return (self.a_rx.size, self.a_tx.size)

    def matrix(self) -> np.ndarray:
        return self.phase * np.outer(self.a_rx, self.a_tx)

    def left_multiply(self, row: np.ndarray) -> np.ndarray:
        """``row @ H`` without forming H."""
        return self.phase * (row @ self.a_rx) * self.a_tx


def far_field_channel(tx: ElementGrid, rx: ElementGrid, wavelength_m: float) -> FarFieldChannel:
    d = float(np.linalg.norm(rx.center_m - tx.center_m))
    if d == 0:
        raise GeometryError("degenerate geometry: coincident panel centers")
    for g in (tx, rx):
        if g.aperture_m > 0 and d < rayleigh_distance(g.aperture_m, wavelength_m):
            warnings.warn(
                f"planar-wave channel used at {d:.3g} m, inside the Rayleigh distance "
                f"{rayleigh_distance(g.aperture_m, wavelength_m):.3g} m",
                stacklevel=2,
            )
    k = 2.0 * math.pi / wavelength_m
    th_t, ph_t = local_angles(rx.center_m, tx)
    th_r, ph_r = local_angles(tx.center_m, rx)
    return FarFieldChannel(
        phase=complex(np.exp(-1j * k * d)),
        a_rx=upa_response(th_r, ph_r, rx.n_x, rx.n_y, rx.spacing_m, wavelength_m),
        a_tx=upa_response(th_t, ph_t, tx.n_x, tx.n_y, tx.spacing_m, wavelength_m),
        distance_m=d,
    )


@dataclass(frozen=True)
class ChannelSet:
    h_u: np.ndarray  # SU -> RIS-u, length N_u
    h_s: np.ndarray  # RIS-s -> SAP, length N_s
    H: FarFieldChannel  # RIS-u -> RIS-s, N_s x N_u


def build_channels(scn: Scenario) -> ChannelSet:
    lam = scn.rf.wavelength_m
    gu = element_positions(scn.ris_u)
    gs = element_positions(scn.ris_s)
    return ChannelSet(
        h_u=near_field_channel(scn.su_position_m, gu, lam),
        h_s=near_field_channel(scn.sap_position_m, gs, lam),
        H=far_field_channel(gu, gs, lam),
    )
