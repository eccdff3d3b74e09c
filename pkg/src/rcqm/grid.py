"""Dual position/momentum discretization of a periodic box.

The box of side L with an odd number n of points per axis carries a
momentum lattice k = 2*pi*j/L, j in [-(n-1)/2, (n-1)/2], which is exactly
symmetric under k -> -k (no unpaired Nyquist mode). Transforms are the
centered discrete analogues of the symmetric (2*pi)^(-3/2) Fourier pair,
unitary with respect to the weighted inner products with measures dx^d
and dk^d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    dim: int
    n_per_axis: int
    box_length: float
    mass: float

    def __post_init__(self):
        if self.dim not in (1, 3):
            raise ValueError("dim must be 1 or 3")
        if self.n_per_axis % 2 == 0 or self.n_per_axis < 3:
            raise ValueError("n_per_axis must be odd and >= 3")
        if self.box_length <= 0:
            raise ValueError("box_length must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")

    @property
    def dx(self) -> float:
        return self.box_length / self.n_per_axis

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.box_length


@dataclass(frozen=True)
class Grid:
    spec: GridSpec
    x_axis: np.ndarray = field(repr=False)
    k_axis: np.ndarray = field(repr=False)
    omega: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple:
        return (self.spec.n_per_axis,) * self.spec.dim

    @property
    def dx_measure(self) -> float:
        return self.spec.dx ** self.spec.dim

    @property
    def dk_measure(self) -> float:
        return self.spec.dk ** self.spec.dim

    def axis_mesh(self, values: np.ndarray, axis: int) -> np.ndarray:
        """Reshape a per-axis coordinate array for broadcasting, axis in 1..dim."""
        shape = [1] * self.spec.dim
        shape[axis - 1] = self.spec.n_per_axis
        return values.reshape(shape)

    def x_mesh(self, axis: int) -> np.ndarray:
        return self.axis_mesh(self.x_axis, axis)

    def k_mesh(self, axis: int) -> np.ndarray:
        return self.axis_mesh(self.k_axis, axis)

    @property
    def _space_axes(self) -> tuple:
        return tuple(range(-self.spec.dim, 0))

    def to_momentum(self, data: np.ndarray) -> np.ndarray:
        """Centered unitary DFT over the trailing dim axes."""
        axes = self._space_axes
        out = np.fft.ifftshift(data, axes=axes)
        out = np.fft.fftn(out, axes=axes)
        out = np.fft.fftshift(out, axes=axes)
        return out * (self.spec.dx / np.sqrt(2.0 * np.pi)) ** self.spec.dim

    def to_position(self, data: np.ndarray) -> np.ndarray:
        axes = self._space_axes
        out = np.fft.ifftshift(data, axes=axes)
        out = np.fft.ifftn(out, axes=axes)
        out = np.fft.fftshift(out, axes=axes)
        n = self.spec.n_per_axis
        scale = (n * self.spec.dk / np.sqrt(2.0 * np.pi)) ** self.spec.dim
        return out * scale

    def negate_k(self, data: np.ndarray) -> np.ndarray:
        """Re-index momentum samples by the exact involution k -> -k."""
        return data[(Ellipsis,) + (slice(None, None, -1),) * self.spec.dim]


def make_grid(spec: GridSpec) -> Grid:
    n = spec.n_per_axis
    j = np.arange(n) - (n - 1) // 2
    x_axis = j * spec.dx
    k_axis = j * spec.dk
    g = Grid(spec, x_axis, k_axis, omega=np.zeros(1))
    k2 = sum(g.k_mesh(ax) ** 2 for ax in range(1, spec.dim + 1))
    omega = np.sqrt(k2 + spec.mass**2)
    return Grid(spec, x_axis, k_axis, omega)
