"""Free evolution in the three pictures.

All three equations of motion are diagonalized on the momentum lattice,
so evolution is exact per mode: the canonical picture rotates every
component by exp(-i w t), the Foldy-Wouthuysen picture counter-rotates
the positron block, and the Dirac picture applies the closed-form
exponential of the mode Hamiltonian H(k) = alpha.k + beta m.
"""

from __future__ import annotations

import math

import numpy as np

from . import clifford
from .grid import Grid
from .states import Picture, Realization, State, in_realization, to_momentum

_GAMMA_PD = [np.asarray(clifford.as_complex(clifford.gamma(mu, clifford.Representation.PauliDirac)),
                        dtype=complex) for mu in range(4)]
BETA = _GAMMA_PD[0]
ALPHA = [BETA @ _GAMMA_PD[j] for j in (1, 2, 3)]
ETA = np.diag([1.0, 1.0, -1.0, -1.0])  # sign grading of the FW generator


def apply_omega(f: State, power: int = 1) -> State:
    """Apply the relativistic energy multiplier w(k)^power."""
    tilde = to_momentum(f)
    out = tilde.with_data(tilde.data * (tilde.grid.omega**power)[None])
    return in_realization(out, f.realization)


def omega_series_multiplier(grid: Grid, order: int) -> np.ndarray:
    """Truncated binomial series for w = m sqrt(1 + k^2/m^2).

    Converges on modes with |k| < m; used as an independent cross-check of
    the spectral multiplier on narrow-band states.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    m = grid.spec.mass
    k2 = sum(grid.k_mesh(ax) ** 2 for ax in range(1, grid.spec.dim + 1))
    ratio = k2 / m**2
    total = np.zeros(grid.shape)
    for j in range(order + 1):
        total += math.comb(2 * j, j) * (-0.25) ** j / (1 - 2 * j) * ratio**j
    return m * total


def evolve_sf(f: State, dt: float) -> State:
    """Advance a canonical state by dt under i d/dt f = w f."""
    if f.picture is not Picture.RCQM:
        raise ValueError("evolve_sf expects a canonical-picture state")
    tilde = to_momentum(f)
    out = tilde.with_data(tilde.data * np.exp(-1j * tilde.grid.omega * dt)[None], t=f.t + dt)
    return in_realization(out, f.realization)


def evolve_fw(phi: State, dt: float) -> State:
    """Advance a Foldy-Wouthuysen state by dt under i d/dt phi = g0 w phi."""
    if phi.picture is not Picture.FW:
        raise ValueError("evolve_fw expects an FW-picture state")
    tilde = to_momentum(phi)
    phase = np.exp(-1j * tilde.grid.omega * dt)
    data = tilde.data.copy()
    data[:2] *= phase[None]
    data[2:] *= np.conj(phase)[None]
    return in_realization(tilde.with_data(data, t=phi.t + dt), phi.realization)


def dirac_hamiltonian_mode(grid: Grid) -> np.ndarray:
    """Mode Hamiltonians H(k) = alpha.k + beta m, shape (*spatial, 4, 4)."""
    h = np.zeros(grid.shape + (4, 4), dtype=complex)
    for ax in range(1, grid.spec.dim + 1):
        h += grid.k_mesh(ax)[..., None, None] * ALPHA[ax - 1]
    h += grid.spec.mass * BETA
    return h


def apply_dirac_hamiltonian(psi: State) -> State:
    """Apply H = alpha.p + beta m spectrally."""
    tilde = to_momentum(psi)
    data = np.einsum("...ab,b...->a...", dirac_hamiltonian_mode(psi.grid), tilde.data)
    return in_realization(tilde.with_data(data), psi.realization)


def evolve_dirac(psi: State, dt: float) -> State:
    """Advance a Dirac state by dt with the closed-form mode exponential.

    exp(-i H(k) dt) = cos(w dt) - i sin(w dt) H(k)/w, since H(k)^2 = w^2.
    """
    if psi.picture is not Picture.Dirac:
        raise ValueError("evolve_dirac expects a Dirac-picture state")
    tilde = to_momentum(psi)
    w = tilde.grid.omega
    hpsi = np.einsum("...ab,b...->a...", dirac_hamiltonian_mode(psi.grid), tilde.data)
    data = np.cos(w * dt)[None] * tilde.data - 1j * (np.sin(w * dt) / w)[None] * hpsi
    return in_realization(tilde.with_data(data, t=psi.t + dt), psi.realization)


def evolve(f: State, dt: float) -> State:
    """Picture-dispatching evolution."""
    return {Picture.RCQM: evolve_sf, Picture.FW: evolve_fw, Picture.Dirac: evolve_dirac}[f.picture](f, dt)


def evolution_kernel(grid: Grid, picture: Picture, dt: float) -> np.ndarray:
    """Per-mode 4x4 evolution matrices, shape (*spatial, 4, 4).

    Exposed for oracle comparisons against dense matrix exponentials.
    """
    w = grid.omega
    eye = np.eye(4, dtype=complex)
    if picture is Picture.RCQM:
        return np.exp(-1j * w * dt)[..., None, None] * eye
    if picture is Picture.FW:
        kern = np.zeros(grid.shape + (4, 4), dtype=complex)
        kern[..., :2, :2] = np.exp(-1j * w * dt)[..., None, None] * np.eye(2)
        kern[..., 2:, 2:] = np.exp(1j * w * dt)[..., None, None] * np.eye(2)
        return kern
    h = dirac_hamiltonian_mode(grid)
    return (np.cos(w * dt)[..., None, None] * eye
            - 1j * (np.sin(w * dt) / w)[..., None, None] * h)
