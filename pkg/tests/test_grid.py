import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rcqm.grid import GridSpec, make_grid


def test_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(2, 31, 40.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(1, 30, 40.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(1, 31, -1.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(3, 31, 40.0, 0.0)


def test_axes_centered_and_symmetric():
    g = make_grid(GridSpec(1, 11, 5.0, 1.0))
    assert np.allclose(g.x_axis, -g.x_axis[::-1])
    assert np.allclose(g.k_axis, -g.k_axis[::-1])
    assert g.x_axis[5] == 0.0
    assert np.allclose(np.diff(g.x_axis), g.spec.dx)
    assert np.allclose(np.diff(g.k_axis), g.spec.dk)


def test_omega_values():
    g = make_grid(GridSpec(3, 7, 10.0, 2.0))
    k2 = sum(g.k_mesh(ax) ** 2 for ax in (1, 2, 3))
    assert np.allclose(g.omega, np.sqrt(k2 + 4.0))
    assert g.omega.min() == 2.0


def test_transform_roundtrip_and_parseval():
    g = make_grid(GridSpec(3, 9, 7.0, 1.0))
    rng = np.random.default_rng(7)
    data = rng.normal(size=(4,) + g.shape) + 1j * rng.normal(size=(4,) + g.shape)
    tilde = g.to_momentum(data)
    assert np.allclose(g.to_position(tilde), data, atol=1e-13)
    norm_x = g.dx_measure * np.sum(np.abs(data) ** 2)
    norm_k = g.dk_measure * np.sum(np.abs(tilde) ** 2)
    assert np.allclose(norm_x, norm_k)


def test_plane_wave_maps_to_single_mode():
    g = make_grid(GridSpec(1, 21, 10.0, 1.0))
    j = 3
    wave = np.exp(1j * g.k_axis[j] * g.x_axis)[None]
    tilde = g.to_momentum(wave)
    # a unit plane wave concentrates all weight L/sqrt(2 pi) in one mode
    expected = np.zeros_like(tilde)
    expected[0, j] = g.spec.box_length / np.sqrt(2.0 * np.pi)
    assert np.allclose(tilde, expected, atol=1e-13)


def test_negate_k_is_exact_involution():
    g = make_grid(GridSpec(3, 5, 4.0, 1.0))
    rng = np.random.default_rng(0)
    data = rng.normal(size=(4,) + g.shape)
    assert np.array_equal(g.negate_k(g.negate_k(data)), data)
    # k-axis reverses exactly under the same re-indexing
    assert np.array_equal(g.negate_k(np.broadcast_to(g.k_mesh(2), g.shape)),
                          np.broadcast_to(-g.k_mesh(2), g.shape))


def test_conjugate_transform_negates_momentum():
    # conj in position space is conj plus k -> -k in momentum space
    g = make_grid(GridSpec(1, 31, 12.0, 1.0))
    rng = np.random.default_rng(3)
    data = rng.normal(size=(4, 31)) + 1j * rng.normal(size=(4, 31))
    lhs = g.to_momentum(np.conj(data))
    rhs = g.negate_k(np.conj(g.to_momentum(data)))
    assert np.allclose(lhs, rhs, atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=10), st.floats(min_value=0.5, max_value=20.0))
def test_roundtrip_property_1d(half_n, length):
    g = make_grid(GridSpec(1, 2 * half_n + 1, length, 1.0))
    rng = np.random.default_rng(half_n)
    data = rng.normal(size=(4,) + g.shape) + 1j * rng.normal(size=(4,) + g.shape)
    assert np.allclose(g.to_position(g.to_momentum(data)), data, atol=1e-12)
