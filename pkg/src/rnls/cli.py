"""Command-line front end: runs, CSV/plot artifacts, and figure presets.

Commands: simulate, convergence, spectrum, threshold, oracle-check.
Every command writes its artifacts plus a flat key=value manifest into the
output directory.  All numeric output is emitted with 17 significant digits,
so CSV files round-trip float64 exactly and repeated runs are bit-identical.
Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

import rnls
from rnls.conserved import conserved_log
from rnls.evolve import BlowUpError, SchemeConfig, Trajectory, run
from rnls.grid import Grid, SolverError, build_grid
from rnls.oracle import QuadratureError, error_function, evaluate_exact, fourier_solution
from rnls.soliton import black_soliton
from rnls.spectral import assemble_pencil, essential_spectrum, find_threshold, solve_pencil

PRESETS: dict[str, dict[str, float]] = {
    "fig2": {"eps": 0.5, "L": 10.0, "K": 200, "tfinal": 5.0},
    "fig3": {"eps": 0.5, "L": 20.0, "K": 400, "amp": 0.01, "tfinal": 50.0},
    "fig4": {"eps": 1.0, "L": 20.0, "K": 400, "amp": 0.01, "tfinal": 10.0},
    "fig5": {"eps": 0.0, "L": 20.0, "K": 400, "amp": 0.01, "tfinal": 50.0},
}

DEFAULTS: dict[str, float] = {
    "eps": 0.5,
    "L": 20.0,
    "K": 400,
    "amp": 0.01,
    "tfinal": 50.0,
    "nmax": 2000,
}


def _format(value) -> str:
    if isinstance(value, float) or isinstance(value, np.floating):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path: Path, header: list[str], columns: list) -> None:
    rows = zip(*columns)
    with open(path, "w") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(_format(v) for v in row) + "\n")


def read_csv(path: Path) -> dict[str, np.ndarray]:
    """Read a CSV written by write_csv; float columns round-trip exactly."""
    with open(path) as handle:
        header = handle.readline().strip().split(",")
        raw = [line.strip().split(",") for line in handle if line.strip()]
    columns: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        cells = [row[j] for row in raw]
        try:
            columns[name] = np.array([float(c) for c in cells])
        except ValueError:
            columns[name] = np.array(cells, dtype=object)
    return columns


@dataclass
class RunManifest:
    """What a command ran and what it produced."""

    command: str
    params: dict
    out_dir: Path
    artifacts: list[str]
    duration_seconds: float
    version: str = rnls.__version__

    def write(self) -> Path:
        path = self.out_dir / "manifest.txt"
        with open(path, "w") as handle:
            handle.write(f"command={self.command}\n")
            handle.write(f"version={self.version}\n")
            for key in sorted(self.params):
                handle.write(f"{key}={_format(self.params[key])}\n")
            handle.write(f"artifacts={','.join(self.artifacts)}\n")
            handle.write(f"duration_seconds={self.duration_seconds:.3f}\n")
        return path


def read_manifest(path: Path) -> dict[str, str]:
    entries: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            entries[key] = value
    return entries


def _resolve(args: argparse.Namespace, names: list[str]) -> dict:
    """Fill unset flags from the preset (if any), then from global defaults."""
    preset = PRESETS.get(args.preset or "", {})
    if args.preset and args.preset not in PRESETS:
        raise ValueError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
    resolved = {}
    for name in names:
        value = getattr(args, name, None)
        if value is None:
            value = preset.get(name, DEFAULTS.get(name))
        resolved[name] = value
    return resolved


def _grid(params: dict) -> Grid:
    return build_grid(params["L"], int(params["K"]))


def _out_dir(args: argparse.Namespace, command: str) -> Path:
    out = Path(args.out) if args.out else Path(f"rnls-{command}")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _maybe_plot(enabled: bool, fn, *fn_args) -> list[str]:
    if not enabled:
        return []
    import matplotlib

    matplotlib.use("Agg")
    return fn(*fn_args)


# ---------------------------------------------------------------------------
# simulate


def _plot_simulation(out: Path, traj: Trajectory) -> list[str]:
    import matplotlib.pyplot as plt

    xi = traj.config.grid.nodes
    files = []

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xi, np.abs(traj.fields[0].values), "b-", label="t = 0")
    ax.plot(xi, np.abs(traj.final.values), "k.", ms=2, label=f"t = {traj.times[-1]:g}")
    ax.set(xlabel="xi", ylabel="|u|")
    ax.legend()
    fig.savefig(out / "profile.pdf")
    plt.close(fig)
    files.append("profile.pdf")

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(traj.diag_times, traj.max_imag)
    ax.set(xlabel="t", ylabel="max |Im u|")
    fig.savefig(out / "max_imag.pdf")
    plt.close(fig)
    files.append("max_imag.pdf")

    surface = np.array([f.values.imag for f in traj.fields])
    fig, ax = plt.subplots(figsize=(7, 4))
    mesh = ax.pcolormesh(xi, traj.times, surface, shading="auto", cmap="RdBu_r")
    fig.colorbar(mesh, ax=ax, label="Im u")
    ax.set(xlabel="xi", ylabel="t")
    fig.savefig(out / "surface_im.pdf")
    plt.close(fig)
    files.append("surface_im.pdf")
    return files


def cmd_simulate(args: argparse.Namespace) -> int:
    t_start = time.perf_counter()
    params = _resolve(args, ["eps", "L", "K", "amp", "tfinal"])
    grid = _grid(params)
    tau = args.tau if args.tau is not None else grid.h
    n_steps = int(round(params["tfinal"] / tau))
    stride = args.stride if args.stride else max(1, n_steps // 100)
    cfg = SchemeConfig(
        eps=params["eps"],
        grid=grid,
        tau=tau,
        t_final=params["tfinal"],
        amp=params["amp"],
        scheme=args.scheme,
        snapshot_stride=stride,
    )
    traj = run(cfg)
    log = conserved_log(traj)
    out = _out_dir(args, "simulate")

    n_nodes = grid.size
    t_long = np.repeat(traj.times, n_nodes)
    xi_long = np.tile(grid.nodes, len(traj.times))
    u_long = np.concatenate([f.values for f in traj.fields])
    write_csv(
        out / "snapshots.csv",
        ["t", "xi", "re_u", "im_u"],
        [t_long, xi_long, u_long.real, u_long.imag],
    )
    write_csv(
        out / "diagnostics.csv",
        ["t", "max_im_u", "max_abs_u"],
        [traj.diag_times, traj.max_imag, traj.max_abs],
    )
    write_csv(
        out / "conserved.csv",
        ["t", "energy", "momentum", "mass", "wall_activity"],
        [log.times, log.energy_values, log.momentum_values, log.mass_values, log.wall],
    )
    artifacts = ["snapshots.csv", "diagnostics.csv", "conserved.csv"]
    artifacts += _maybe_plot(args.plot, _plot_simulation, out, traj)

    params.update(tau=tau, scheme=args.scheme, stride=stride, steps=n_steps)
    RunManifest(
        command="simulate",
        params=params,
        out_dir=out,
        artifacts=artifacts,
        duration_seconds=time.perf_counter() - t_start,
    ).write()
    print(
        f"simulate: eps={params['eps']:g} t_final={params['tfinal']:g} "
        f"peak max|Im u| = {np.max(traj.max_imag):.6g} -> {out}"
    )
    return 0


# ---------------------------------------------------------------------------
# convergence


def _plot_convergence(out: Path, rows: np.ndarray) -> list[str]:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(rows[:, 0], rows[:, 1], "r-", label="coarse")
    ax.semilogy(rows[:, 0], rows[:, 2], "b-", label="fine")
    ax.set(xlabel="t", ylabel="max-norm error")
    ax.legend()
    fig.savefig(out / "convergence.pdf")
    plt.close(fig)
    return ["convergence.pdf"]


def cmd_convergence(args: argparse.Namespace) -> int:
    t_start = time.perf_counter()
    args.preset = args.preset or "fig2"
    params = _resolve(args, ["eps", "L", "K", "tfinal", "nmax"])
    k_coarse = int(params["K"])
    sol = fourier_solution(params["L"], params["eps"], int(params["nmax"]))

    errors = {}
    for refine, k in enumerate((k_coarse, 2 * k_coarse)):
        grid = build_grid(params["L"], k)
        cfg = SchemeConfig(
            eps=params["eps"],
            grid=grid,
            tau=grid.h,
            t_final=params["tfinal"],
            amp=0.0,
            scheme="linear",
            snapshot_stride=2**refine,
        )
        traj = run(cfg, initial=black_soliton(grid))
        errors[k] = error_function(traj, sol)

    coarse, fine = errors[k_coarse], errors[2 * k_coarse]
    if coarse.shape != fine.shape or not np.allclose(coarse[:, 0], fine[:, 0]):
        raise ValueError("snapshot times of the two resolutions do not align")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = coarse[:, 1] / fine[:, 1]
    mean_ratio = float(np.mean(ratio[1:]))

    out = _out_dir(args, "convergence")
    write_csv(
        out / "error.csv",
        ["t", "err_coarse", "err_fine", "ratio"],
        [coarse[:, 0], coarse[:, 1], fine[:, 1], ratio],
    )
    rows = np.column_stack([coarse[:, 0], coarse[:, 1], fine[:, 1]])
    artifacts = ["error.csv"] + _maybe_plot(args.plot, _plot_convergence, out, rows)

    params.update(K_fine=2 * k_coarse, mean_ratio=mean_ratio)
    RunManifest(
        command="convergence",
        params=params,
        out_dir=out,
        artifacts=artifacts,
        duration_seconds=time.perf_counter() - t_start,
    ).write()
    print(
        f"convergence: K={k_coarse} vs {2 * k_coarse}, "
        f"time-averaged error ratio = {mean_ratio:.4f}"
    )
    return 0


# ---------------------------------------------------------------------------
# spectrum


def _plot_spectrum(out: Path, eigenvalues: np.ndarray) -> list[str]:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(eigenvalues.real, eigenvalues.imag, ".", ms=3)
    ax.set(xlabel="Re lambda", ylabel="Im lambda")
    ax.axvline(0.0, color="gray", lw=0.5)
    fig.savefig(out / "spectrum.pdf")
    plt.close(fig)
    return ["spectrum.pdf"]


def cmd_spectrum(args: argparse.Namespace) -> int:
    t_start = time.perf_counter()
    params = _resolve(args, ["eps", "L", "K"])
    if params["eps"] == 0.0:
        print(
            "warning: essential spectrum is unbounded at eps = 0; "
            "the discrete spectrum still fills a bounded band",
            file=sys.stderr,
        )
    else:
        band = essential_spectrum(params["eps"])
        print(
            f"essential spectrum: i[-{band.endpoint:g}, {band.endpoint:g}]"
            + (
                f" (curve peaks at {band.peak_modulus:.6g})"
                if np.isfinite(band.peak_wavenumber)
                else ""
            )
        )
    grid = _grid(params)
    report = solve_pencil(
        assemble_pencil(params["eps"], grid),
        tol_unstable=args.tol_unstable,
        want_eigenvectors=True,
    )
    out = _out_dir(args, "spectrum")
    order = np.argsort(report.eigenvalues.imag, kind="stable")
    ev = report.eigenvalues[order]
    write_csv(out / "eigenvalues.csv", ["re_lambda", "im_lambda"], [ev.real, ev.imag])
    artifacts = ["eigenvalues.csv"] + _maybe_plot(args.plot, _plot_spectrum, out, ev)

    params.update(
        tol_unstable=args.tol_unstable,
        verdict=report.verdict,
        max_real_axis_part=report.max_real_axis_part,
        max_real_part=report.max_real_part,
        dominant_re=report.dominant.real,
        dominant_im=report.dominant.imag,
        symmetry_defect=report.symmetry_defect,
        dominant_parity="/".join(report.dominant_parity or ()),
    )
    RunManifest(
        command="spectrum",
        params=params,
        out_dir=out,
        artifacts=artifacts,
        duration_seconds=time.perf_counter() - t_start,
    ).write()
    print(
        f"spectrum: eps={params['eps']:g} verdict={report.verdict} "
        f"dominant real-axis eigenvalue = {report.max_real_axis_part:.6g}"
    )
    return 0


# ---------------------------------------------------------------------------
# threshold


def cmd_threshold(args: argparse.Namespace) -> int:
    t_start = time.perf_counter()
    params = _resolve(args, ["L", "K"])
    grid = _grid(params)
    result = find_threshold(
        grid,
        args.lo,
        args.hi,
        bisect_tol=args.bisect_tol,
        tol_unstable=args.tol_unstable,
    )
    out = _out_dir(args, "threshold")
    trace = result.trace
    write_csv(
        out / "bisection.csv",
        ["iteration", "lo", "hi", "mid", "verdict"],
        [
            [row[0] for row in trace],
            [row[1] for row in trace],
            [row[2] for row in trace],
            [row[3] for row in trace],
            [row[4] for row in trace],
        ],
    )
    params.update(
        lo=args.lo,
        hi=args.hi,
        bisect_tol=args.bisect_tol,
        tol_unstable=args.tol_unstable,
        estimate=result.estimate,
        closed_form_root=result.closed_form_root,
        gap=result.gap,
        n_solves=result.n_solves,
    )
    RunManifest(
        command="threshold",
        params=params,
        out_dir=out,
        artifacts=["bisection.csv"],
        duration_seconds=time.perf_counter() - t_start,
    ).write()
    print(f"threshold estimate: {result.estimate:.6f} ({result.n_solves} eigensolves)")
    print(f"closed-form root (5/8)^(1/4): {result.closed_form_root:.12f}")
    print(f"gap: {result.gap:.6f}")
    return 0


# ---------------------------------------------------------------------------
# oracle-check


def cmd_oracle_check(args: argparse.Namespace) -> int:
    t_start = time.perf_counter()
    params = _resolve(args, ["eps", "L", "K", "nmax"])
    sol = fourier_solution(params["L"], params["eps"], int(params["nmax"]))
    grid = _grid(params)
    reconstruction = evaluate_exact(sol, 0.0, grid)
    error = float(np.max(np.abs(reconstruction.values - np.tanh(grid.nodes))))

    out = _out_dir(args, "oracle-check")
    n_index = np.arange(sol.n_max + 1)
    write_csv(
        out / "coefficients.csv",
        ["n", "k", "a"],
        [n_index, sol.wavenumbers, sol.coefficients],
    )
    params.update(
        reconstruction_error=error,
        a0=sol.coefficients[0],
        max_even_coefficient=float(np.max(np.abs(sol.coefficients[2::2]))),
        tol=args.tol,
    )
    RunManifest(
        command="oracle-check",
        params=params,
        out_dir=out,
        artifacts=["coefficients.csv"],
        duration_seconds=time.perf_counter() - t_start,
    ).write()
    print(f"oracle-check: a0 = {sol.coefficients[0]:.3e}, t=0 reconstruction error = {error:.3e}")
    if error > args.tol:
        print(f"reconstruction error exceeds tolerance {args.tol:g}", file=sys.stderr)
        return 3
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnls",
        description="Black-soliton dynamics and stability for the regularized defocusing NLS equation",
    )
    parser.add_argument("--version", action="version", version=rnls.__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=None, help="regularization parameter")
    common.add_argument("--L", type=float, default=None, help="domain half length")
    common.add_argument("--K", type=int, default=None, help="grid intervals per half domain")
    common.add_argument("--out", type=str, default=None, help="output directory")
    common.add_argument("--preset", type=str, default=None, help="fig2|fig3|fig4|fig5")
    common.add_argument("--plot", action="store_true", help="also write PDF plots")
    common.add_argument("--seed", type=int, default=None,
                        help="accepted for interface compatibility; the pipeline is deterministic")

    sim = sub.add_parser("simulate", parents=[common], help="nonlinear (or linear) time evolution")
    sim.add_argument("--tau", type=float, default=None, help="time step (default: h)")
    sim.add_argument("--tfinal", type=float, default=None)
    sim.add_argument("--amp", type=float, default=None, help="imaginary perturbation amplitude")
    sim.add_argument("--scheme", choices=["linear", "nonlinear"], default="nonlinear")
    sim.add_argument("--stride", type=int, default=None, help="snapshot stride (default: ~100 snapshots)")
    sim.set_defaults(func=cmd_simulate)

    conv = sub.add_parser("convergence", parents=[common], help="linear scheme vs Fourier series")
    conv.add_argument("--tfinal", type=float, default=None)
    conv.add_argument("--nmax", type=int, default=None, help="Fourier series length")
    conv.set_defaults(func=cmd_convergence)

    spct = sub.add_parser("spectrum", parents=[common], help="eigenvalues of the stability pencil")
    spct.add_argument("--tol-unstable", type=float, default=5e-3, dest="tol_unstable")
    spct.set_defaults(func=cmd_spectrum)

    thr = sub.add_parser("threshold", parents=[common], help="bisection for the stability threshold")
    thr.add_argument("--lo", type=float, default=0.5)
    thr.add_argument("--hi", type=float, default=1.2)
    thr.add_argument("--bisect-tol", type=float, default=1e-3, dest="bisect_tol")
    thr.add_argument("--tol-unstable", type=float, default=5e-3, dest="tol_unstable")
    thr.set_defaults(func=cmd_threshold)

    chk = sub.add_parser("oracle-check", parents=[common], help="Fourier coefficient sanity checks")
    chk.add_argument("--nmax", type=int, default=None)
    chk.add_argument("--tol", type=float, default=1e-6, help="reconstruction error tolerance")
    chk.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, BlowUpError, QuadratureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
