"""Test-only helpers: rigid motions of whole scenarios."""

import dataclasses

import numpy as np


def rotation(rng_or_seed) -> np.ndarray:
    rng = np.random.default_rng(rng_or_seed)
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def move_rigidly(scn, rot: np.ndarray, shift):
    shift = np.asarray(shift, dtype=float)

    def point(p):
        return tuple(float(x) for x in rot @ np.asarray(p) + shift)

    def direction(v):
        return None if v is None else tuple(float(x) for x in rot @ np.asarray(v))

    def panel(p):
        return dataclasses.replace(p, anchor_m=point(p.anchor_m), basis_x=direction(p.basis_x),
                                   basis_y=direction(p.basis_y))

    return scn.replace(
        su_position_m=point(scn.su_position_m),
        sap_position_m=point(scn.sap_position_m),
        ris_u=panel(scn.ris_u),
        ris_s=panel(scn.ris_s),
        su_boresight=direction(scn.su_boresight),
        sap_boresight=direction(scn.sap_boresight),
    )
