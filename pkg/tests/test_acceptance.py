"""The nine acceptance criteria, each reported as one PASS/FAIL line.

Criteria 2 and 3 are evaluated exactly as stated -- same grid, packet,
horizon, and tolerances -- and are expected to fail at their stated
tolerances on the stated 31^3 / L = 40 lattice: the packet's momentum
tails at the Brillouin faces (criterion 2) and the wall-crossing of the
dispersing packet by t ~ 15 (criterion 3) put a floor under the
residuals that no correct spectral implementation of these operators
can undercut on that lattice.  Both checks converge to machine
precision on refined lattices (see the module tests), so the failures
are reported honestly rather than hidden behind loosened tolerances.
"""

import itertools
import time

import numpy as np
import pytest
from scipy.linalg import expm

from rcqm import cli, clifford, dynamics, poincare, states, transforms
from rcqm.clifford import Representation
from rcqm.grid import GridSpec, make_grid
from rcqm.poincare import GeneratorLabel, GeneratorRealization
from rcqm.states import Picture, decompose, gaussian_packet, random_state

from conftest import ACCEPTANCE_LINES

G = GeneratorRealization


def record(num: int, name: str, ok: bool, detail: str) -> None:
    verdict = "PASS" if ok else "FAIL"
    ACCEPTANCE_LINES.append(f"ACCEPTANCE {num} ({name}): {verdict} [{detail}]")
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_1_exact_clifford_suite():
    start = time.time()
    report = cli.clifford_report()
    elapsed = time.time() - start
    ok = report["pass"] and elapsed < 1.0
    record(1, "exact Clifford suite", ok,
           f"{len(report['identities'])} identities, {elapsed:.2f}s")


def test_criterion_2_poincare_algebra_residuals(grid3, packet3):
    by_picture = {
        G.CanonicalX: packet3,
        G.CanonicalK: packet3,
        G.FW: transforms.apply_v(packet3),
        G.DiracInduced: transforms.apply_w(packet3),
    }
    pairs = list(itertools.combinations(poincare.MAIN_NAMES, 2))
    worst = ("", "", "", 0.0)
    for realization, f in by_picture.items():
        for a, b, r in poincare.algebra_sweep(realization, pairs, f):
            if r > worst[3]:
                worst = (realization.value, a, b, r)
    ok = worst[3] <= 1e-7
    record(2, "Poincare algebra residuals", ok,
           f"worst [{worst[1]},{worst[2]}] in {worst[0]}: {worst[3]:.2e}, "
           f"tolerance 1e-07")


def test_criterion_3_conservation(grid3, packet3):
    worst = ("", 0.0)
    for to_picture in (lambda f: f, transforms.apply_v, transforms.apply_w):
        rep = poincare.conservation_sweep(to_picture(packet3), 20.0, 50)
        name, drift = max(rep.drift.items(), key=lambda kv: kv[1])
        if drift > worst[1]:
            worst = (f"{name} ({rep.picture})", drift)
    ok = worst[1] <= 1e-9
    record(3, "conservation over t in [0, 20]", ok,
           f"worst drift {worst[0]}: {worst[1]:.2e}, tolerance 1e-09")


def test_criterion_4_three_model_equivalence(grid3, packet3):
    phi0 = transforms.apply_v(packet3)
    psi0 = transforms.apply_w(packet3)
    worst_fw = worst_dirac = 0.0
    for t in (0.1, 1.0, 10.0, 20.0):
        ft = dynamics.evolve_sf(packet3, t)
        worst_fw = max(worst_fw, float(np.linalg.norm(
            dynamics.evolve_fw(phi0, t).data - transforms.apply_v(ft).data)))
        worst_dirac = max(worst_dirac, float(np.linalg.norm(
            dynamics.evolve_dirac(psi0, t).data - transforms.apply_w(ft).data)))
    ok = worst_dirac <= 1e-10 and worst_fw <= 1e-11
    record(4, "three-model equivalence", ok,
           f"FW {worst_fw:.2e} <= 1e-11, Dirac {worst_dirac:.2e} <= 1e-10")


def test_criterion_5_energy_sign_structure(grid3):
    m = grid3.spec.mass
    low = min(poincare.energy_rcqm(decompose(random_state(grid3, seed)))
              for seed in range(100))
    worst_fw = -np.inf
    for pol in ((0, 0, 1, 0), (0, 0, 0, 1), (0, 0, 1, 1j), (0, 0, 0.3, -0.7)):
        for k0 in (0.0, 0.3, -0.5):
            k = k0 / np.sqrt(3.0)
            f = gaussian_packet(grid3, (0, 0, 0), (k, k, k), 2.0, pol)
            worst_fw = max(worst_fw, poincare.energy_fw(decompose(f)))
    ok = low >= m - 1e-10 and worst_fw < 0.0
    record(5, "energy sign structure", ok,
           f"min energy_rcqm {low:.6f} >= m, max positron energy_fw "
           f"{worst_fw:.6f} < 0")


def test_criterion_6_cross_picture_equality(grid3, packet3):
    f = packet3
    phi = transforms.apply_v(f)
    psi = transforms.apply_w(f)
    delta = 0.0
    for name in poincare.MAIN_NAMES:
        q_amp = states.inner_product(f, poincare.apply_generator(
            GeneratorLabel(G.Amplitude, name), f)).real
        q_fw = states.inner_product(phi, poincare.apply_generator(
            GeneratorLabel(G.FW, name), phi)).real
        q_dirac = states.inner_product(psi, poincare.apply_generator(
            GeneratorLabel(G.DiracInduced, name), psi)).real
        delta = max(delta, abs(q_amp - q_fw), abs(q_fw - q_dirac))
    ok = delta <= 1e-8
    record(6, "cross-picture conserved values", ok,
           f"max delta {delta:.2e}, tolerance 1e-08")


def test_criterion_7_mode_level_oracles():
    grid = make_grid(GridSpec(1, 1001, 100.0, 1.0))
    v_plus, v_minus = transforms.build_vpm(grid)
    h_mode = dynamics.dirac_hamiltonian_mode(grid)
    prod = np.einsum("...ab,...bc->...ac", v_plus, v_minus)
    res_inv = np.abs(prod - np.eye(4)).max()
    eta = np.diag([1.0, 1.0, -1.0, -1.0])
    g0w = grid.omega[..., None, None] * eta
    conj = np.einsum("...ab,...bc,...cd->...ad", v_plus, g0w, v_minus)
    res_ham = np.abs(conj - h_mode).max()

    dt = 0.47
    kernel = dynamics.evolution_kernel(grid, Picture.Dirac, dt)
    rng = np.random.default_rng(2024)
    res_exp = max(np.abs(kernel[i] - expm(-1j * dt * h_mode[i])).max()
                  for i in rng.integers(0, grid.spec.n_per_axis, size=100))
    ok = res_inv <= 1e-12 and res_ham <= 1e-12 and res_exp <= 1e-11
    record(7, "mode-level oracles", ok,
           f"V+V-=I {res_inv:.1e}, conjugation {res_ham:.1e} on 1001 modes; "
           f"closed form vs expm {res_exp:.1e} on 100 modes")


def test_criterion_8_omega_series_cross_check():
    grid = make_grid(GridSpec(1, 41, 480.0, 1.0))
    series = dynamics.omega_series_multiplier(grid, order=20)
    f = gaussian_packet(grid, (0.0,), (0.05,), 30.0, (1, 0, 0, 0))
    tilde = states.to_momentum(f)
    delta = np.linalg.norm((series - grid.omega)[None] * tilde.data)
    ok = delta <= 1e-8
    record(8, "square-root series cross-check", ok,
           f"series vs spectral {delta:.2e} on a narrow-band packet")


def test_criterion_9_negative_controls(capsys):
    codes = (
        cli.main(["verify-clifford", "--corrupt-gamma"]),
        cli.main(["verify-algebra", "--quick", "--tolerance", "1e-15"]),
        cli.main(["equivalence", "--quick", "--flip-vminus"]),
    )
    capsys.readouterr()
    # dropped spin term, checked at the library level on a 3-d grid
    g = make_grid(GridSpec(3, 15, 40.0, 1.0))
    f = gaussian_packet(g, (0, 0, 0), (0.2, 0.2, 0.2), 3.0, (1, 0, 0, 0))
    dropped = poincare.commutator_residual(
        GeneratorLabel(G.CanonicalK, "j23"), GeneratorLabel(G.CanonicalK, "j31"),
        f, drop_spin_term=True)["residual"]
    ok = codes == (1, 2, 3) and dropped > 0.1
    record(9, "negative controls", ok,
           f"exit codes {codes}, dropped-spin residual {dropped:.2f}")
