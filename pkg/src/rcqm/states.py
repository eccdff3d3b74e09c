"""Four-component states, plane waves, Gaussian packets and amplitudes.

A State is a 4-component complex field over the grid, tagged with its
realization (position/momentum), its picture (canonical, Foldy-Wouthuysen
or Dirac) and a timestamp. The amplitude decomposition splits a canonical
state into electron amplitudes a_minus (upper doublet) and positron
amplitudes a_plus (lower doublet) on the momentum lattice.
"""

from __future__ import annotations

import base64
import io
import json
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .grid import Grid, GridSpec, make_grid


class Realization(Enum):
    Position = "position"
    Momentum = "momentum"


class Picture(Enum):
    RCQM = "rcqm"
    FW = "fw"
    Dirac = "dirac"


@dataclass(frozen=True)
class State:
    grid: Grid
    realization: Realization
    picture: Picture
    t: float
    data: np.ndarray  # shape (4, *spatial)

    def with_data(self, data, **kw) -> "State":
        return replace(self, data=data, **kw)


@dataclass(frozen=True)
class AmplitudeSet:
    """Momentum-lattice amplitudes at a reference time t."""

    grid: Grid
    t: float
    a_minus: np.ndarray  # shape (2, *spatial)
    a_plus: np.ndarray


def _measure(state: State) -> float:
    if state.realization is Realization.Position:
        return state.grid.dx_measure
    return state.grid.dk_measure


def inner_product(f: State, g: State) -> complex:
    if f.grid is not g.grid and f.grid.spec != g.grid.spec:
        raise ValueError("states live on different grids")
    if f.realization is not g.realization:
        raise ValueError("states in different realizations")
    return _measure(f) * np.vdot(f.data, g.data)


def norm(f: State) -> float:
    return float(np.sqrt(max(inner_product(f, f).real, 0.0)))


def to_momentum(f: State) -> State:
    if f.realization is Realization.Momentum:
        return f
    return f.with_data(f.grid.to_momentum(f.data), realization=Realization.Momentum)


def to_position(f: State) -> State:
    if f.realization is Realization.Position:
        return f
    return f.with_data(f.grid.to_position(f.data), realization=Realization.Position)


def in_realization(f: State, realization: Realization) -> State:
    return to_momentum(f) if realization is Realization.Momentum else to_position(f)


BASIS_ORTS = np.eye(4)  # Cartesian orts, common eigenvectors of (s_z, g)


def basis_ort(alpha: int) -> np.ndarray:
    if alpha not in (1, 2, 3, 4):
        raise IndexError("ort index must be 1..4")
    return BASIS_ORTS[alpha - 1]


def _k_on_lattice(grid: Grid, k) -> np.ndarray:
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.size != grid.spec.dim:
        raise ValueError("k has wrong dimension")
    j = k / grid.spec.dk
    if np.abs(j - np.rint(j)).max() > 1e-9 or np.abs(j).max() > (grid.spec.n_per_axis - 1) / 2:
        raise ValueError(f"k={k} not on the momentum lattice")
    return k


def plane_wave(grid: Grid, k, alpha: int, t: float = 0.0) -> State:
    """Discrete de Broglie wave, normalized so plane waves are orthonormal."""
    k = _k_on_lattice(grid, k)
    omega = float(np.sqrt(k @ k + grid.spec.mass**2))
    phase = np.zeros(grid.shape, dtype=complex)
    phase += sum(k[ax - 1] * grid.x_mesh(ax) for ax in range(1, grid.spec.dim + 1))
    field = np.exp(1j * phase - 1j * omega * t) / grid.spec.box_length ** (grid.spec.dim / 2)
    data = basis_ort(alpha).reshape((4,) + (1,) * grid.spec.dim) * field
    return State(grid, Realization.Position, Picture.RCQM, t, data.astype(complex))


def width_bounds(grid: Grid) -> tuple:
    """Admissible Gaussian widths: resolvable and wall-clear."""
    return grid.spec.dx, grid.spec.box_length / 8.0


def gaussian_packet(grid: Grid, center_x, center_k, width: float, polarization, t: float = 0.0) -> State:
    """Normalized Gaussian packet exp(-|x-x0|^2/(4 w^2) + i k0.x) * pol."""
    lo, hi = width_bounds(grid)
    if not (lo <= width <= hi):
        raise ValueError(f"width {width} outside [{lo:.4g}, {hi:.4g}]")
    x0 = np.atleast_1d(np.asarray(center_x, dtype=float))
    k0 = np.atleast_1d(np.asarray(center_k, dtype=float))
    if x0.size != grid.spec.dim or k0.size != grid.spec.dim:
        raise ValueError("center has wrong dimension")
    pol = np.asarray(polarization, dtype=complex)
    if pol.shape != (4,) or not np.any(pol):
        raise ValueError("polarization must be a nonzero 4-vector")
    r2 = sum((grid.x_mesh(ax) - x0[ax - 1]) ** 2 for ax in range(1, grid.spec.dim + 1))
    phase = sum(k0[ax - 1] * grid.x_mesh(ax) for ax in range(1, grid.spec.dim + 1))
    field = np.exp(-r2 / (4.0 * width**2) + 1j * phase)
    data = pol.reshape((4,) + (1,) * grid.spec.dim) * field
    state = State(grid, Realization.Position, Picture.RCQM, t, data.astype(complex))
    return state.with_data(state.data / norm(state))


def random_state(grid: Grid, seed: int, picture: Picture = Picture.RCQM) -> State:
    """Normalized band-limited random state; fixed seed protocol for CI."""
    rng = np.random.default_rng(seed)
    shape = (4,) + grid.shape
    tilde = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    # gentle spectral envelope keeps the state smooth in position space
    k2 = sum(grid.k_mesh(ax) ** 2 for ax in range(1, grid.spec.dim + 1))
    tilde = tilde * np.exp(-k2 / (2.0 * grid.spec.mass**2 * 4.0))
    f = State(grid, Realization.Momentum, picture, 0.0, tilde)
    return f.with_data(f.data / norm(f))


def decompose(f: State) -> AmplitudeSet:
    """Split a canonical state into charge-block amplitudes at its own time."""
    if f.picture is not Picture.RCQM:
        raise ValueError("decompose is defined for the canonical picture only")
    tilde = to_momentum(f)
    return AmplitudeSet(f.grid, f.t, tilde.data[:2].copy(), tilde.data[2:].copy())


def reconstruct(a: AmplitudeSet, t: float, realization: Realization = Realization.Position) -> State:
    """Rebuild the state at time t; amplitudes rotate harmonically."""
    phase = np.exp(-1j * a.grid.omega * (t - a.t))
    data = np.concatenate([a.a_minus, a.a_plus], axis=0) * phase[None]
    f = State(a.grid, Realization.Momentum, Picture.RCQM, t, data)
    return in_realization(f, realization)


def decompose_fw(phi: State) -> AmplitudeSet:
    """Amplitudes of a Foldy-Wouthuysen state.

    The positron block of the FW field holds the conjugated amplitudes at
    reflected momentum, so extraction conjugates and flips k there.
    """
    if phi.picture is not Picture.FW:
        raise ValueError("decompose_fw is defined for the FW picture only")
    tilde = to_momentum(phi)
    a_minus = tilde.data[:2].copy()
    a_plus = np.conj(phi.grid.negate_k(tilde.data[2:]))
    return AmplitudeSet(phi.grid, phi.t, a_minus, a_plus)


def amplitude_norm_sq(a: AmplitudeSet) -> float:
    total = np.sum(np.abs(a.a_minus) ** 2) + np.sum(np.abs(a.a_plus) ** 2)
    return float(a.grid.dk_measure * total)


# ---------------------------------------------------------------------------
# snapshot export


def state_to_json(f: State) -> str:
    interleaved = np.empty(f.data.shape + (2,))
    interleaved[..., 0] = f.data.real
    interleaved[..., 1] = f.data.imag
    payload = {
        "format": "rcqm-state-v1",
        "grid": {
            "dim": f.grid.spec.dim,
            "n_per_axis": f.grid.spec.n_per_axis,
            "box_length": f.grid.spec.box_length,
            "mass": f.grid.spec.mass,
        },
        "realization": f.realization.value,
        "picture": f.picture.value,
        "t": f.t,
        "data_b64": base64.b64encode(interleaved.astype("<f8").tobytes()).decode("ascii"),
    }
    return json.dumps(payload)


def state_from_json(text: str) -> State:
    payload = json.loads(text)
    if payload.get("format") != "rcqm-state-v1":
        raise ValueError("unrecognized state snapshot format")
    gs = payload["grid"]
    grid = make_grid(GridSpec(gs["dim"], gs["n_per_axis"], gs["box_length"], gs["mass"]))
    raw = np.frombuffer(base64.b64decode(payload["data_b64"]), dtype="<f8")
    raw = raw.reshape((4,) + grid.shape + (2,))
    data = raw[..., 0] + 1j * raw[..., 1]
    return State(grid, Realization(payload["realization"]), Picture(payload["picture"]),
                 payload["t"], data)


def density_marginals_csv(f: State) -> str:
    """CSV of the |f|^2 marginal along each axis (position realization)."""
    g = to_position(f)
    dens = np.sum(np.abs(g.data) ** 2, axis=0)
    out = io.StringIO()
    out.write("axis,coordinate,density\n")
    dim = f.grid.spec.dim
    for ax in range(1, dim + 1):
        other = tuple(i for i in range(dim) if i != ax - 1)
        marg = dens.sum(axis=other) * f.grid.spec.dx ** (dim - 1)
        for coord, val in zip(f.grid.x_axis, marg):
            out.write(f"{ax},{coord:.17g},{val:.17g}\n")
    return out.getvalue()
