"""Batch driver: configuration ingestion, experiment orchestration, reports.

Subcommands:
    verify-clifford   exact matrix-identity suite (exit 1 on failure)
    verify-algebra    commutator residual sweep (exit 2 on breach)
    equivalence       two-path evolution and cross-picture checks (exit 3)
    evolve            snapshot/marginal/drift emission

Exit code 4 flags an invalid configuration. All reports are CSV (tabular)
or JSON (pass/fail) and are byte-identical for identical config + seed.
"""

import argparse
import csv
import io
import itertools
import json
import os
import sys

import numpy as np

from . import clifford, dynamics, poincare, states, transforms
from .clifford import Representation
from .grid import GridSpec, make_grid
from .poincare import Convention, GeneratorLabel, GeneratorRealization
from .states import Picture

SCHEMA = "rcqm-config-v1"

_EXPERIMENTS = {"VerifyAlgebra", "VerifyClifford", "Evolve", "Equivalence",
                "Conservation"}

_GRID_KEYS = {"dim", "n", "L", "m"}
_PACKET_KEYS = {"center_x", "center_k", "width", "polarization"}
_TOP_KEYS = {"schema", "grid", "packet", "experiment", "time_horizon",
             "checkpoints", "tolerance", "seed", "output_dir"}


class ConfigError(ValueError):
    pass


def default_config(quick: bool = False) -> dict:
    """Full 3-d verification setup, or a 1-d smoke-scale variant."""
    if quick:
        grid = {"dim": 1, "n": 101, "L": 60.0, "m": 1.0}
        packet = {"center_x": [0.0], "center_k": [0.5], "width": 2.0,
                  "polarization": [1.0, 0.0, 0.0, 0.0]}
    else:
        k = 0.5 / np.sqrt(3.0)
        grid = {"dim": 3, "n": 31, "L": 40.0, "m": 1.0}
        packet = {"center_x": [0.0, 0.0, 0.0], "center_k": [k, k, k],
                  "width": 2.0, "polarization": [1.0, 0.0, 0.0, 0.0]}
    return {"schema": SCHEMA, "grid": grid, "packet": packet,
            "time_horizon": 10.0, "checkpoints": 20, "tolerance": None,
            "seed": 0, "output_dir": None}


def _check_keys(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} keys: {', '.join(unknown)}")


def load_config(path: str, quick: bool = False) -> dict:
    """Merge a JSON config file over the defaults, validating strictly."""
    cfg = default_config(quick)
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    if raw.get("schema") != SCHEMA:
        raise ConfigError(f"config schema must be {SCHEMA!r}")
    _check_keys(raw, _TOP_KEYS, "config")
    for section, keys in (("grid", _GRID_KEYS), ("packet", _PACKET_KEYS)):
        if section in raw:
            _check_keys(raw[section], keys, section)
            cfg[section].update(raw[section])
    for key in _TOP_KEYS - {"schema", "grid", "packet"}:
        if key in raw:
            cfg[key] = raw[key]
    if "experiment" in cfg and cfg.get("experiment") is not None:
        if cfg["experiment"] not in _EXPERIMENTS:
            raise ConfigError(f"unknown experiment {cfg['experiment']!r}")
    return cfg


def build_setup(cfg: dict):
    """Validated (grid, packet) pair from a merged config."""
    g = cfg["grid"]
    try:
        spec = GridSpec(int(g["dim"]), int(g["n"]), float(g["L"]),
                        float(g["m"]))
        grid = make_grid(spec)
        p = cfg["packet"]
        packet = states.gaussian_packet(grid, p["center_x"], p["center_k"],
                                        float(p["width"]), p["polarization"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc))
    horizon = float(cfg["time_horizon"])
    checkpoints = int(cfg["checkpoints"])
    if horizon < 0 or checkpoints < 1:
        raise ConfigError("time_horizon must be >= 0 and checkpoints >= 1")
    return grid, packet


# ---------------------------------------------------------------------------
# verify-clifford


def _corrupt_gamma_table(rep: Representation):
    gs = [clifford.gamma(mu, rep) for mu in range(5)]
    entries = [list(row) for row in gs[1].entries]
    entries[0][3] = clifford.ComplexRational(-1) * entries[0][3]
    gs[1] = clifford.MatrixOperator(tuple(tuple(r) for r in entries),
                                    antilinear=gs[1].antilinear)
    return gs


def clifford_report(corrupt_gamma: bool = False) -> dict:
    """Identity-by-identity results for both gamma representations."""
    identities = []

    for rep in (Representation.PauliDirac, Representation.QuantumMechanical):
        gammas = _corrupt_gamma_table(rep) if corrupt_gamma else None
        bad = clifford.verify_clifford(rep, gammas)
        table = bad and {pair for pair in bad}
        for mu in range(5):
            for nu in range(mu, 5):
                ok = not (bad and ((mu, nu) in table or (nu, mu) in table))
                identities.append(
                    {"name": f"{rep.value}:anticommutator({mu},{nu})",
                     "pass": ok})
        spins = clifford.spin(rep)
        i_unit = clifford.ComplexRational(0, 1)
        for j, (l, n) in enumerate([(1, 2), (2, 0), (0, 1)]):
            got = clifford.commutator(spins[l], spins[n])
            ok = clifford.equal(got, clifford.scale(spins[j], i_unit))
            identities.append({"name": f"{rep.value}:su2({l+1},{n+1})",
                               "pass": ok})

    v = clifford.involution_v()
    for mu in range(5):
        plain = clifford.gamma(mu, Representation.PauliDirac)
        if corrupt_gamma and mu == 1:
            plain = _corrupt_gamma_table(Representation.PauliDirac)[1]
        conjugated = clifford.compose(v, clifford.compose(plain, v))
        ok = clifford.equal(conjugated,
                            clifford.gamma(mu, Representation.QuantumMechanical))
        identities.append({"name": f"v-conjugation({mu})", "pass": ok})

    failed = [i["name"] for i in identities if not i["pass"]]
    return {"identities": identities, "failed": failed,
            "pass": not failed}


def cmd_verify_clifford(args) -> int:
    report = clifford_report(corrupt_gamma=args.corrupt_gamma)
    print(json.dumps(report, indent=2))
    if not report["pass"]:
        print(f"FAIL: {report['failed'][0]}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# verify-algebra

_SWEEP_REALIZATIONS = [GeneratorRealization.CanonicalX,
                       GeneratorRealization.CanonicalK,
                       GeneratorRealization.FW,
                       GeneratorRealization.DiracInduced]


def _names_for_dim(dim: int) -> list:
    """Main generators whose spatial axes all exist on a dim-d grid."""
    return [name for name in poincare.MAIN_NAMES
            if all(int(c) <= dim for c in name[1:] if c != "0")]


def algebra_csv(cfg: dict, tolerance: float,
                drop_spin_term: bool = False) -> tuple:
    """(csv_text, worst) over all main-generator pairs and realizations."""
    grid, f = build_setup(cfg)
    by_picture = {
        Picture.RCQM: f,
        Picture.FW: transforms.apply_v(f),
        Picture.Dirac: transforms.apply_w(f),
    }
    pairs = list(itertools.combinations(_names_for_dim(grid.spec.dim), 2))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["realization", "a", "b", "residual", "pass"])
    worst = ("", "", "", 0.0)
    for realization in _SWEEP_REALIZATIONS:
        state = by_picture[poincare._PICTURE_OF[realization]]
        rows = poincare.algebra_sweep(realization, pairs, state,
                                      drop_spin_term=drop_spin_term)
        for a, b, residual in rows:
            writer.writerow([realization.value, a, b, f"{residual:.17g}",
                             "yes" if residual <= tolerance else "no"])
            if residual > worst[3]:
                worst = (realization.value, a, b, residual)
    return buf.getvalue(), worst


def cmd_verify_algebra(args) -> int:
    cfg = load_config(args.config, args.quick)
    tolerance = args.tolerance if args.tolerance is not None \
        else (cfg["tolerance"] or 1e-7)
    text, worst = algebra_csv(cfg, tolerance,
                              drop_spin_term=args.drop_spin_term)
    sys.stdout.write(text)
    if worst[3] > tolerance:
        print(f"FAIL: [{worst[1]}, {worst[2]}] in {worst[0]}: "
              f"residual {worst[3]:.3e} > {tolerance:.3e}", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# equivalence


def equivalence_report(cfg: dict, evolution_tol: float, cross_tol: float,
                       flip_vminus: bool = False) -> dict:
    grid, f = build_setup(cfg)
    horizon, n_cp = float(cfg["time_horizon"]), int(cfg["checkpoints"])
    times = [horizon * i / max(n_cp - 1, 1) for i in range(n_cp)]

    modes = transforms.check_intertwinings(grid, flip_vminus=flip_vminus)
    phi0 = transforms.apply_v(f)
    psi0 = transforms.apply_w(f, flip_vminus=flip_vminus)
    worst_fw = worst_dirac = 0.0
    for t in times:
        ft = dynamics.evolve_sf(f, t)
        d_fw = dynamics.evolve_fw(phi0, t).data - transforms.apply_v(ft).data
        d_di = dynamics.evolve_dirac(psi0, t).data \
            - transforms.apply_w(ft, flip_vminus=flip_vminus).data
        worst_fw = max(worst_fw, float(np.linalg.norm(d_fw)))
        worst_dirac = max(worst_dirac, float(np.linalg.norm(d_di)))

    amp = GeneratorRealization.Amplitude
    fw = GeneratorRealization.FW
    induced = GeneratorRealization.DiracInduced
    cross = 0.0
    for name in _names_for_dim(grid.spec.dim):
        q_r = states.inner_product(
            f, poincare.apply_generator(GeneratorLabel(amp, name), f)).real
        q_f = states.inner_product(
            phi0, poincare.apply_generator(GeneratorLabel(fw, name), phi0)).real
        q_d = states.inner_product(
            psi0,
            poincare.apply_generator(GeneratorLabel(induced, name), psi0)).real
        cross = max(cross, abs(q_r - q_f), abs(q_f - q_d))

    modes = {name: float(r) for name, r in modes.items()}
    ok = bool(worst_fw <= evolution_tol and worst_dirac <= evolution_tol
              and cross <= cross_tol
              and all(r <= 1e-12 for r in modes.values()))
    return {"mode_residuals": modes, "evolution_fw": worst_fw,
            "evolution_dirac": worst_dirac, "cross_picture": float(cross),
            "pass": ok}


def cmd_equivalence(args) -> int:
    cfg = load_config(args.config, args.quick)
    evolution_tol = args.tolerance if args.tolerance is not None \
        else (cfg["tolerance"] or 1e-10)
    cross_tol = args.tolerance if args.tolerance is not None else 1e-8
    report = equivalence_report(cfg, evolution_tol, cross_tol,
                                flip_vminus=args.flip_vminus)
    print(json.dumps(report, indent=2))
    if not report["pass"]:
        print("FAIL: model equivalence breached", file=sys.stderr)
        return 3
    return 0


# ---------------------------------------------------------------------------
# evolve


def cmd_evolve(args) -> int:
    cfg = load_config(args.config, args.quick)
    grid, f = build_setup(cfg)
    picture = {"rcqm": Picture.RCQM, "fw": Picture.FW,
               "dirac": Picture.Dirac}[args.picture]
    if picture is Picture.FW:
        f = transforms.apply_v(f)
    elif picture is Picture.Dirac:
        f = transforms.apply_w(f)
    out_dir = args.out or cfg["output_dir"] or "."
    try:
        os.makedirs(out_dir, exist_ok=True)
        horizon, n_cp = float(cfg["time_horizon"]), int(cfg["checkpoints"])
        report = poincare.conservation_sweep(f, horizon, n_cp)
        for i, t in enumerate(report.times):
            ft = dynamics.evolve(f, t)
            stem = os.path.join(out_dir, f"snapshot_{i:03d}")
            with open(stem + ".json", "w") as fh:
                fh.write(states.state_to_json(ft))
            with open(stem + "_marginals.csv", "w") as fh:
                fh.write(states.density_marginals_csv(ft))
        with open(os.path.join(out_dir, "conserved.csv"), "w") as fh:
            fh.write(report.to_csv())
        with open(os.path.join(out_dir, "conserved.json"), "w") as fh:
            fh.write(report.to_json())
    except OSError as exc:
        print(f"I/O failure under {out_dir}: {exc}", file=sys.stderr)
        return 4
    print(f"wrote {2 * len(report.times) + 2} files to {out_dir}; "
          f"max drift {max(report.drift.values()):.3e}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcqm",
        description="verification and evolution driver for the three-model "
                    "spin-1/2 doublet suite")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--quick", action="store_true",
                       help="1-d smoke-scale grid")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the pass/fail threshold")

    p = sub.add_parser("verify-clifford", help="exact matrix identities")
    p.add_argument("--corrupt-gamma", action="store_true",
                   help="negative control: flip one gamma entry")
    p.set_defaults(func=cmd_verify_clifford)

    p = sub.add_parser("verify-algebra", help="commutator residual sweep")
    common(p)
    p.add_argument("--drop-spin-term", action="store_true",
                   help="negative control: omit the spin part of the "
                        "z-rotation generator")
    p.set_defaults(func=cmd_verify_algebra)

    p = sub.add_parser("equivalence", help="three-model equivalence checks")
    common(p)
    p.add_argument("--flip-vminus", action="store_true",
                   help="negative control: wrong relative sign in the "
                        "momentum-space diagonalizer")
    p.set_defaults(func=cmd_equivalence)

    p = sub.add_parser("evolve", help="evolution snapshots and drift report")
    common(p)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--picture", choices=["rcqm", "fw", "dirac"],
                   default="rcqm")
    p.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
