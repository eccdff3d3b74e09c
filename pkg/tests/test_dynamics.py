import numpy as np
import pytest
from scipy.linalg import expm

from rcqm import dynamics, states, transforms
from rcqm.dynamics import (apply_dirac_hamiltonian, apply_omega,
                           dirac_hamiltonian_mode, evolution_kernel, evolve,
                           evolve_dirac, evolve_fw, evolve_sf,
                           omega_series_multiplier)
from rcqm.grid import GridSpec, make_grid
from rcqm.states import Picture, gaussian_packet, norm, random_state


@pytest.fixture(scope="module")
def g1():
    return make_grid(GridSpec(1, 41, 20.0, 1.0))


def test_evolution_group_law_and_unitarity(g1):
    f = random_state(g1, 5)
    a = evolve_sf(evolve_sf(f, 1.3), 0.7)
    b = evolve_sf(f, 2.0)
    assert np.allclose(a.data, b.data, atol=1e-14)
    assert np.allclose(norm(b), 1.0)
    assert np.allclose(evolve_sf(b, -2.0).data, f.data, atol=1e-14)


@pytest.mark.parametrize("picture", [Picture.RCQM, Picture.FW, Picture.Dirac])
def test_closed_form_matches_matrix_exponential(g1, picture):
    """Per-mode evolution equals expm(-i H dt) for the picture Hamiltonian."""
    dt = 0.83
    kernel = evolution_kernel(g1, picture, dt)
    h_mode = dirac_hamiltonian_mode(g1)
    eta = np.diag([1.0, 1.0, -1.0, -1.0])
    rng = np.random.default_rng(11)
    for idx in rng.integers(0, g1.spec.n_per_axis, size=25):
        w = g1.omega[idx]
        if picture is Picture.RCQM:
            h = w * np.eye(4)
        elif picture is Picture.FW:
            h = w * eta
        else:
            h = h_mode[idx]
        assert np.allclose(kernel[idx], expm(-1j * dt * h), atol=1e-11)


def test_dirac_hamiltonian_squares_to_omega_sq(g1):
    h = dirac_hamiltonian_mode(g1)
    hh = np.einsum("...ab,...bc->...ac", h, h)
    want = (g1.omega**2)[..., None, None] * np.eye(4)
    assert np.allclose(hh, want, atol=1e-12)
    # hermitian per mode
    assert np.allclose(h, np.conj(np.swapaxes(h, -1, -2)))


def test_apply_omega_powers(g1):
    f = random_state(g1, 9)
    two = apply_omega(apply_omega(f, 1), 1)
    assert np.allclose(apply_omega(f, 2).data, two.data, atol=1e-13)


def test_apply_dirac_hamiltonian_generates_evolution(g1):
    f = random_state(g1, 3)
    psi = transforms.apply_w(f)
    eps = 1e-5
    fd = (evolve_dirac(psi, eps).data - evolve_dirac(psi, -eps).data) / (2 * eps)
    assert np.allclose(1j * fd, apply_dirac_hamiltonian(psi).data, atol=1e-9)


def test_omega_series_matches_spectral_on_narrow_band():
    # the binomial expansion of sqrt(m^2 + k^2) converges only when the
    # whole momentum lattice satisfies k^2 < m^2
    g = make_grid(GridSpec(1, 41, 480.0, 1.0))
    series = omega_series_multiplier(g, order=20)
    assert np.allclose(series, g.omega, atol=1e-8)


def test_omega_series_diverges_outside_band(g1):
    coarse = omega_series_multiplier(g1, order=30)
    assert np.abs(coarse - g1.omega).max() > 1.0


def test_evolve_dispatcher_matches_picture(g1):
    f = random_state(g1, 21)
    assert np.allclose(evolve(f, 0.4).data, evolve_sf(f, 0.4).data)
    phi = transforms.apply_v(f)
    assert np.allclose(evolve(phi, 0.4).data, evolve_fw(phi, 0.4).data)
    psi = transforms.apply_w(f)
    assert np.allclose(evolve(psi, 0.4).data, evolve_dirac(psi, 0.4).data)


def test_fw_blocks_counter_rotate(g1):
    f = gaussian_packet(g1, (0.0,), (0.5,), 1.5, (1, 0, 1, 0))
    phi = transforms.apply_v(f)
    t = 1.1
    tilde0 = states.to_momentum(phi)
    tilde1 = states.to_momentum(evolve_fw(phi, t))
    phase = np.exp(-1j * g1.omega * t)
    assert np.allclose(tilde1.data[:2], phase[None] * tilde0.data[:2], atol=1e-12)
    assert np.allclose(tilde1.data[2:],
                       np.conj(phase)[None] * tilde0.data[2:], atol=1e-12)
