"""Maps connecting the canonical, Foldy-Wouthuysen and Dirac pictures.

The involution v conjugates the lower (positron) doublet pointwise in
position space; on the momentum lattice that is conjugation combined with
momentum reflection. The mode matrices V+(k) and V-(k) implement the
Foldy-Wouthuysen rotation, and W = V+ . v carries canonical states all
the way to the Dirac picture.
"""

from __future__ import annotations

import numpy as np

from .dynamics import _GAMMA_PD
from .grid import Grid
from .states import Picture, Realization, State, in_realization, to_momentum, to_position


def _conj_lower_block(f: State) -> np.ndarray:
    if f.realization is Realization.Position:
        data = f.data.copy()
        data[2:] = np.conj(data[2:])
    else:
        data = f.data.copy()
        data[2:] = np.conj(f.grid.negate_k(data[2:]))
    return data


_V_PICTURE = {Picture.RCQM: Picture.FW, Picture.FW: Picture.RCQM}


def apply_v(f: State) -> State:
    """Involution between the canonical and FW pictures."""
    if f.picture not in _V_PICTURE:
        raise ValueError("v connects the canonical and FW pictures")
    return f.with_data(_conj_lower_block(f), picture=_V_PICTURE[f.picture])


apply_v_inv = apply_v  # v is its own inverse


def build_vpm(grid: Grid, flip_vminus: bool = False) -> tuple:
    """Mode matrices V+(k), V-(k) of the FW rotation, shape (*spatial, 4, 4).

    V+- (k) = ((w+m) -+ gamma^l k_l) / sqrt(2 w (w+m)); V+ V- = I.
    The flip_vminus hook negates V- and exists only to feed the
    negative-control checks.
    """
    w = grid.omega
    m = grid.spec.mass
    gk = np.zeros(grid.shape + (4, 4), dtype=complex)
    for ax in range(1, grid.spec.dim + 1):
        gk += grid.k_mesh(ax)[..., None, None] * _GAMMA_PD[ax]
    wm = (w + m)[..., None, None]
    denom = np.sqrt(2.0 * w * (w + m))[..., None, None]
    v_plus = (wm * np.eye(4) - gk) / denom
    v_minus = (wm * np.eye(4) + gk) / denom
    if flip_vminus:
        v_minus = -v_minus
    return v_plus, v_minus


def _mode_apply(matrices: np.ndarray, f: State) -> np.ndarray:
    tilde = to_momentum(f)
    return np.einsum("...ab,b...->a...", matrices, tilde.data)


def fw_to_dirac(phi: State, flip_vminus: bool = False) -> State:
    if phi.picture is not Picture.FW:
        raise ValueError("expected an FW-picture state")
    v_plus, _ = build_vpm(phi.grid, flip_vminus)
    out = State(phi.grid, Realization.Momentum, Picture.Dirac, phi.t, _mode_apply(v_plus, phi))
    return in_realization(out, phi.realization)


def dirac_to_fw(psi: State, flip_vminus: bool = False) -> State:
    if psi.picture is not Picture.Dirac:
        raise ValueError("expected a Dirac-picture state")
    _, v_minus = build_vpm(psi.grid, flip_vminus)
    out = State(psi.grid, Realization.Momentum, Picture.FW, psi.t, _mode_apply(v_minus, psi))
    return in_realization(out, psi.realization)


def apply_w(f: State, flip_vminus: bool = False) -> State:
    """Full canonical -> Dirac map W = V+ . v."""
    return fw_to_dirac(apply_v(f), flip_vminus)


def apply_w_inv(psi: State, flip_vminus: bool = False) -> State:
    """Inverse map Dirac -> canonical, W^-1 = v . V-."""
    return apply_v(dirac_to_fw(psi, flip_vminus))


def check_intertwinings(grid: Grid, flip_vminus: bool = False) -> dict:
    """Residuals of the defining mode identities.

    Returns max-norm residuals of V+ V- = I and V+ (g0 w) V- = H_D(k)
    over every lattice mode.
    """
    from .dynamics import BETA, dirac_hamiltonian_mode

    v_plus, v_minus = build_vpm(grid, flip_vminus)
    prod = np.einsum("...ab,...bc->...ac", v_plus, v_minus)
    res_inv = float(np.abs(prod - np.eye(4)).max())
    g0w = grid.omega[..., None, None] * BETA
    mid = np.einsum("...ab,...bc,...cd->...ad", v_plus, g0w, v_minus)
    res_ham = float(np.abs(mid - dirac_hamiltonian_mode(grid)).max())
    return {"v_plus_v_minus_identity": res_inv, "hamiltonian_conjugation": res_ham}
