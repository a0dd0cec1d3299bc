"""Command-line entry points.

Subcommands: hankel (eval/verify), modal (norms), direct (solve), far2near
(sweep), geometry (pack), instability (table), calibrate.  Every run is
deterministic given its config and seed; CSV output uses full round-trip
float formatting.  Exit codes: 0 success, 2 config/schema error, 3
hypothesis failure under --strict.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import far2near as f2n
from . import instability as inst
from .direct2d import IncidentWave, assemble_cfie, eval_farfield, solve_density
from .experiments import (
    CalibrationReport,
    ConfigError,
    default_report,
    disc_truth,
    fit_lipschitz_c2,
    parse_config,
    parse_grid,
    run_full_calibration,
    run_reconstruction_trial,
    write_csv,
)
from .geometry import (
    BumpProfile,
    ObstacleClass,
    StarBoundary,
    TrigProfile,
    build_delta_discrete,
    hausdorff_distance,
    packing_lower_bound,
)
from .modal import load_spectrum, nearfield_norm
from .specfun import EnvelopeConstants, besseljy, classify_regime, envelope_log_bounds

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_HYPOTHESIS = 3


# ---------------------------------------------------------------------------
# Shape files: 'm beta r0 delta' class line, 'j a_j b_j' trig lines, and
# 'bump center half_width amplitude power' lines for packing members.
# ---------------------------------------------------------------------------


def load_shape(path: str) -> StarBoundary:
    cls = None
    trig: dict[int, tuple[float, float]] = {}
    bumps = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "bump":
                bumps.append(tuple(float(v) for v in parts[1:5]))
            elif len(parts) == 4:
                cls = ObstacleClass(int(parts[0]), float(parts[1]), float(parts[2]), float(parts[3]))
            elif len(parts) == 3:
                trig[int(parts[0])] = (float(parts[1]), float(parts[2]))
            else:
                raise ConfigError(f"unrecognized shape line: {raw!r}")
    if cls is None:
        raise ConfigError("shape file lacks the 'm beta R0 delta' class line")
    if bumps and trig:
        raise ConfigError("shape file mixes trig and bump records")
    if bumps:
        centers = np.array([b[0] for b in bumps])
        widths = {b[1] for b in bumps}
        amps = {b[2] for b in bumps}
        powers = {int(b[3]) for b in bumps}
        if len(widths) != 1 or len(amps) != 1 or len(powers) != 1:
            raise ConfigError("bump records must share half_width, amplitude, power")
        profile = BumpProfile(cls.r0, centers, widths.pop(), amps.pop(), powers.pop())
        return StarBoundary(profile, cls)
    degree = max(trig) if trig else 0
    a = np.zeros(degree + 1)
    b = np.zeros(degree)
    for j, (aj, bj) in trig.items():
        a[j] = aj
        if j >= 1:
            b[j - 1] = bj
        elif bj != 0.0:
            raise ConfigError("the j=0 line must have b_0 = 0")
    return StarBoundary(TrigProfile(a, b), cls)


def save_shape(path: str, boundary: StarBoundary) -> None:
    cls = boundary.obstacle_class
    lines = [f"{cls.m} {cls.beta!r} {cls.r0!r} {cls.delta!r}"]
    profile = boundary.profile
    if isinstance(profile, TrigProfile):
        for j, aj in enumerate(profile.cos_coeffs):
            bj = profile.sin_coeffs[j - 1] if j >= 1 else 0.0
            lines.append(f"{j} {float(aj)!r} {float(bj)!r}")
    elif isinstance(profile, BumpProfile):
        for c in profile.centers:
            lines.append(
                f"bump {float(c)!r} {profile.half_width!r} {profile.amplitude!r} {profile.power}"
            )
    else:
        raise ConfigError(f"cannot serialize profile type {type(profile).__name__}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_shape_arg(spec: str) -> StarBoundary:
    if spec.startswith("disc:"):
        return StarBoundary.circle(float(spec[5:]))
    return load_shape(spec)


def _load_report(args) -> CalibrationReport:
    if getattr(args, "constants", None):
        with open(args.constants) as fh:
            return CalibrationReport.from_json(fh.read())
    return default_report()


def _load_envelope(args) -> EnvelopeConstants:
    return _load_report(args).envelope()


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def cmd_hankel_eval(args) -> int:
    rec = besseljy(args.nu, args.z)
    re = rec.j.to_float()
    im = rec.y.to_float()
    mag = math.exp(rec.hankel_log_abs()) if rec.hankel_log_abs() < 709 else math.inf
    print(f"{re!r} {im!r} {mag!r}")
    return EXIT_OK


def cmd_hankel_verify(args) -> int:
    envelope = _load_envelope(args)
    rows = []
    with open(args.grid) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            nu, z = (float(v) for v in line.split())
            log_abs = besseljy(nu, z).hankel_log_abs()
            lo, hi = envelope_log_bounds(nu, z, envelope)
            regime = classify_regime(nu, z, envelope)
            ok = lo <= log_abs <= hi
            rows.append(
                [nu, z, math.exp(log_abs), math.exp(lo), math.exp(hi), regime, ok]
            )
    write_csv(
        args.out or sys.stdout, ["nu", "z", "abs", "lower", "upper", "regime", "ok"], rows
    )
    return EXIT_OK


def cmd_modal_norms(args) -> int:
    spectrum = load_spectrum(args.spectrum)
    radii = parse_grid(args.radii)
    rows = [[r, nearfield_norm(spectrum, r)] for r in radii]
    write_csv(args.out or sys.stdout, ["r", "l2_norm"], rows)
    return EXIT_OK


def cmd_direct_solve(args) -> int:
    boundary = parse_shape_arg(args.shape)
    k = args.k
    n_points = args.n_points or max(64, 2 * int(math.ceil(6.0 * k * (boundary.obstacle_class.r0 + boundary.obstacle_class.delta))) + 64)
    system = assemble_cfie(boundary, k, n_points)
    wave = IncidentWave.from_angle(k, math.radians(args.omega_deg))
    density = solve_density(system, wave)
    angles = 2.0 * math.pi * np.arange(args.angles) / args.angles
    ff = eval_farfield(density, angles)
    with open(args.out, "w") as fh:
        fh.write(f"# direct solve k={k!r} omega_deg={args.omega_deg!r} n_points={n_points}\n")
        fh.write(f"# shape={args.shape} residual_inf={float(density.residual_inf)!r}\n")
        write_csv(
            fh,
            ["theta", "re", "im"],
            [[float(t), float(v.real), float(v.imag)] for t, v in zip(angles, ff)],
        )
    return EXIT_OK


_SWEEP_SCHEMA = {
    "seed": "0",
    "r0": "1.0",
    "b0": "8.5",
    "b1": "9.5",
    "r": "auto",
    "alpha": "1.0",
    "b0_decay": "auto",
    "k0": "auto",
    "k_grid": "",
    "eps_grid": "",
    "disc_radius": "0.5",
    "omega_deg": "0.0",
    "amplitude": "1.0",
    "noise_degree": "auto",
    "tau": "none",
}


def cmd_far2near_sweep(args) -> int:
    with open(args.config) as fh:
        cfg = parse_config(fh.read(), _SWEEP_SCHEMA)
    envelope = _load_envelope(args)
    geometry = f2n.AnnulusGeometry(
        r0=float(cfg["r0"]), b0=float(cfg["b0"]), b1=float(cfg["b1"])
    )
    constants = f2n.derive_constants(
        envelope,
        geometry,
        alpha=float(cfg["alpha"]),
        b0_decay=None if cfg["b0_decay"] == "auto" else float(cfg["b0_decay"]),
        k0=None if cfg["k0"] == "auto" else float(cfg["k0"]),
    )
    r = 0.5 * (geometry.r_min + geometry.r_max) if cfg["r"] == "auto" else float(cfg["r"])
    k_values = parse_grid(cfg["k_grid"])
    eps_values = parse_grid(cfg["eps_grid"])
    seed = int(cfg["seed"])
    amplitude = float(cfg["amplitude"])
    disc_radius = float(cfg["disc_radius"])
    omega = math.radians(float(cfg["omega_deg"]))
    noise_degree = None if cfg["noise_degree"] == "auto" else int(cfg["noise_degree"])
    tau = None if cfg["tau"] == "none" else float(cfg["tau"])
    c2 = None
    if tau is not None:
        c2 = fit_lipschitz_c2(k_values, disc_radius, omega, amplitude, geometry.r0, tau)
    rows = []
    any_fail = False
    index = 0
    for k in k_values:
        truth = disc_truth(k, disc_radius, omega, amplitude)
        for eps in eps_values:
            row = run_reconstruction_trial(
                truth,
                constants,
                eps,
                r,
                seed=seed,
                row_index=index,
                noise_degree=noise_degree,
                tau=tau,
                c2=c2,
            )
            any_fail |= not row.hypothesis_ok
            rows.append(
                [
                    row.k,
                    row.epsilon,
                    row.regime,
                    row.n,
                    row.j0,
                    row.bound,
                    row.measured_error,
                    row.hypothesis_ok,
                ]
            )
            index += 1
    write_csv(
        args.out or sys.stdout,
        ["k", "epsilon", "regime", "n", "j0", "bound", "measured_error", "ok"],
        rows,
    )
    if args.strict and any_fail:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_geometry_pack(args) -> int:
    cls = ObstacleClass(m=args.m, beta=args.beta, r0=args.r0, delta=args.delta0)
    packing = build_delta_discrete(args.delta, cls, target_count=args.count)
    os.makedirs(args.out_dir, exist_ok=True)
    names = []
    for i, member in enumerate(packing.members):
        name = f"member_{i:04d}.shape"
        save_shape(os.path.join(args.out_dir, name), member)
        names.append(name)
    rows = []
    for i in range(len(packing.members)):
        for j in range(i + 1, len(packing.members)):
            d = hausdorff_distance(
                packing.members[i], packing.members[j], n_coarse=1024, n_dense=16384
            )
            rows.append([names[i], names[j], d])
    manifest = os.path.join(args.out_dir, "separation.csv")
    write_csv(manifest, ["member_a", "member_b", "hausdorff"], rows)
    print(
        f"wrote {len(packing.members)} members to {args.out_dir} "
        f"(cells={packing.n_cells}, separation>={packing.bump_peak!r}, "
        f"log family size={packing.log_family_size!r}, "
        f"packing log bound={packing_lower_bound(args.delta, args.delta0, 2, args.m)!r})"
    )
    return EXIT_OK


def cmd_instability_table(args) -> int:
    report = _load_report(args)
    envelope = report.envelope()
    c_tilde = args.c_tilde if args.c_tilde is not None else report.c_tilde_norm
    cfg = inst.InstabilityConfig(
        s=args.s,
        n_dim=2,
        m=args.m,
        beta=args.beta,
        r0=args.r0,
        delta0=args.delta0,
        k0=args.k0 if args.k0 is not None else envelope.z0,
        c_tilde_norm=c_tilde,
        a_decay=inst.alternate_decay_base() if args.a_parse == "alternate" else 0.0,
        c_small=args.c_small,
    )
    rows = []
    for eps in parse_grid(args.eps_grid):
        k_threshold = None
        try:
            k_threshold = inst.first_k_at_crossover(eps, cfg)
        except ArithmeticError:
            pass
        for k in parse_grid(args.k_grid):
            rep = inst.delta_of_eps(eps, k, cfg)
            pack_log = packing_lower_bound(rep.delta, cfg.delta0, cfg.n_dim, cfg.m) if rep.delta > 0 else float("inf")
            rows.append(
                [
                    k,
                    eps,
                    math.exp(rep.log_eps_tilde_k) if rep.log_eps_tilde_k > -700 else 0.0,
                    rep.branch,
                    rep.t_tilde if rep.t_tilde is not None else float("nan"),
                    rep.delta,
                    math.exp(rep.log_dh_lower) if rep.log_dh_lower > -700 else 0.0,
                    rep.net_log_size,
                    pack_log,
                    k_threshold if k_threshold is not None else float("nan"),
                ]
            )
    write_csv(
        args.out or sys.stdout,
        [
            "k",
            "eps",
            "eps_tilde",
            "branch",
            "t_tilde",
            "delta",
            "dh_lower",
            "net_log",
            "pack_log",
            "k_threshold",
        ],
        rows,
    )
    return EXIT_OK


def cmd_calibrate(args) -> int:
    report = run_full_calibration(quick=args.quick)
    out = args.out or "calibration.json"
    with open(out, "w") as fh:
        fh.write(report.to_json() + "\n")
    # verify the derived stability constants exist for a standard annulus
    geometry = f2n.AnnulusGeometry(r0=1.0, b0=1.5, b1=2.0)
    constants = f2n.derive_constants(report.envelope(), geometry)
    print(
        f"calibration written to {out}: z0={report.z0} c0={report.c0} a0={report.a0} "
        f"c1={report.c1:.6f} C~={report.c_tilde_norm:.4f} E0={report.e0_disc:.4f} "
        f"(C={constants.c_const:.4f}, B~={constants.b_tilde:.4f})"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="helmstab",
        description="Wavenumber-explicit stability laboratory for outgoing Helmholtz waves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    hankel = sub.add_parser("hankel", help="Hankel magnitudes and envelopes")
    hsub = hankel.add_subparsers(dest="sub", required=True)
    he = hsub.add_parser("eval", help="print 're im abs' of H^(1)_nu(z)")
    he.add_argument("--nu", type=float, required=True)
    he.add_argument("--z", type=float, required=True)
    he.set_defaults(func=cmd_hankel_eval)
    hv = hsub.add_parser("verify", help="check the envelope on a 'nu z' grid file")
    hv.add_argument("--grid", required=True)
    hv.add_argument("--constants", help="calibration JSON (default: shipped)")
    hv.add_argument("--out")
    hv.set_defaults(func=cmd_hankel_verify)

    modal_p = sub.add_parser("modal", help="spectrum file utilities")
    msub = modal_p.add_subparsers(dest="sub", required=True)
    mn = msub.add_parser("norms", help="near-field L2 norms along a radius grid")
    mn.add_argument("--spectrum", required=True)
    mn.add_argument("--radii", required=True, help="grid spec a:b:n or geom:a:b:n")
    mn.add_argument("--out")
    mn.set_defaults(func=cmd_modal_norms)

    direct = sub.add_parser("direct", help="sound-soft direct scattering solver")
    dsub = direct.add_subparsers(dest="sub", required=True)
    ds = dsub.add_parser("solve", help="solve and write far-field samples CSV")
    ds.add_argument("--shape", required=True, help="shape file path or disc:RADIUS")
    ds.add_argument("--k", type=float, required=True)
    ds.add_argument("--omega-deg", type=float, default=0.0)
    ds.add_argument("--out", required=True)
    ds.add_argument("--n-points", type=int, default=0)
    ds.add_argument("--angles", type=int, default=360)
    ds.set_defaults(func=cmd_direct_solve)

    f2np = sub.add_parser("far2near", help="certified far-field -> near-field sweeps")
    fsub = f2np.add_subparsers(dest="sub", required=True)
    fs = fsub.add_parser("sweep", help="run the reconstruction sweep of a config file")
    fs.add_argument("--config", required=True)
    fs.add_argument("--constants", help="calibration JSON (default: shipped)")
    fs.add_argument("--out")
    fs.add_argument("--strict", action="store_true")
    fs.set_defaults(func=cmd_far2near_sweep)

    geo = sub.add_parser("geometry", help="obstacle class constructions")
    gsub = geo.add_subparsers(dest="sub", required=True)
    gp = gsub.add_parser("pack", help="emit a delta-discrete family of shape files")
    gp.add_argument("--delta", type=float, required=True)
    gp.add_argument("--count", type=int, required=True)
    gp.add_argument("--out-dir", required=True)
    gp.add_argument("--m", type=int, default=2)
    gp.add_argument("--beta", type=float, default=3.0)
    gp.add_argument("--r0", type=float, default=1.0)
    gp.add_argument("--delta0", type=float, default=0.5)
    gp.set_defaults(func=cmd_geometry_pack)

    instp = sub.add_parser("instability", help="inverse-problem instability tables")
    isub = instp.add_subparsers(dest="sub", required=True)
    it = isub.add_parser("table", help="emit the delta(eps, k) table")
    it.add_argument("--s", type=float, required=True)
    it.add_argument("--eps-grid", required=True)
    it.add_argument("--k-grid", required=True)
    it.add_argument("--m", type=int, default=2)
    it.add_argument("--beta", type=float, default=3.0)
    it.add_argument("--r0", type=float, default=1.0)
    it.add_argument("--delta0", type=float, default=0.5)
    it.add_argument("--k0", type=float, default=None)
    it.add_argument("--c-tilde", type=float, default=None)
    it.add_argument("--c-small", type=float, default=1.0)
    it.add_argument("--a-parse", choices=["default", "alternate"], default="default")
    it.add_argument("--constants", help="calibration JSON (default: shipped)")
    it.add_argument("--out")
    it.set_defaults(func=cmd_instability_table)

    cal = sub.add_parser("calibrate", help="run the envelope calibration, write JSON")
    cal.add_argument("--out")
    cal.add_argument("--quick", action="store_true")
    cal.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
