"""Command-line front end.

Subcommands: run, converge, check-system, probe-jn, list-presets.
Configuration is flat key-value text (see README); command-line flags
override config-file values, which override preset values.  Exit codes:
0 success (a detected blow-up is still success), 1 usage or configuration
error, 2 unexpected numerical fault.
"""

from __future__ import annotations

import argparse
import os
import sys as _sys
from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    convergence_study,
    jn_study,
    report_csv,
    report_table,
    second_derivative_max,
)
from .initial import build_initial
from .presets import PRESETS, get_preset, preset_names
from .semidisc import SCHEME_KINDS, SchemeSpec
from .spectral import (
    FilterSpec,
    StateField,
    apply_filter,
    differentiate,
    make_grid,
    sobolev_norm,
    to_samples,
)
from .sysio import SystemFormatError, parse_system
from .systems import (
    BUILTIN_SYSTEMS,
    SystemDef,
    builtin_system,
    check_compatibility_AS,
    check_factorization,
    check_symmetrizer,
)
from .timeint import EvolveConfig, evolve, monitor_csv

__all__ = ["main"]


class ConfigError(ValueError):
    pass


_KNOWN_KEYS = {
    "system", "scheme", "initial", "M", "M_list", "M_ref", "dt", "T",
    "s_norms", "out", "jobs", "blowup_threshold", "monitor_stride",
    "N_list", "p", "q",
}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{line_no}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not (key in _KNOWN_KEYS or key.startswith("init.")):
            raise ConfigError(f"{source}:{line_no}: unknown key {key!r}")
        out[key] = value
    return out


@dataclass
class ExperimentConfig:
    system: str = "saint-venant-1d"
    schemes: list[str] = field(default_factory=lambda: ["sharp"])
    initial: str = "init1"
    init_params: dict = field(default_factory=dict)
    M: int | None = None
    M_list: list[int] | None = None
    M_ref: int | None = None
    dt: float = 1e-4
    T: float = 0.1
    s_norms: tuple[float, ...] = (0.0, 1.0)
    out: str = "out"
    jobs: int = 1
    blowup_threshold: float = 1e6
    monitor_stride: int | None = None
    N_list: list[int] | None = None
    p: int = 1
    q: int = 0


def _build_config(raw: dict[str, str]) -> ExperimentConfig:
    cfg = ExperimentConfig()
    try:
        for key, value in raw.items():
            if key == "system":
                cfg.system = value
            elif key == "scheme":
                cfg.schemes = value.replace(",", " ").split()
            elif key == "initial":
                cfg.initial = value
            elif key.startswith("init."):
                cfg.init_params[key[5:]] = float(value)
            elif key == "M":
                cfg.M = int(value)
            elif key == "M_list":
                cfg.M_list = [int(v) for v in value.replace(",", " ").split()]
            elif key == "M_ref":
                cfg.M_ref = int(value)
            elif key == "dt":
                cfg.dt = float(value)
            elif key == "T":
                cfg.T = float(value)
            elif key == "s_norms":
                cfg.s_norms = tuple(float(v) for v in value.replace(",", " ").split())
            elif key == "out":
                cfg.out = value
            elif key == "jobs":
                cfg.jobs = int(value)
            elif key == "blowup_threshold":
                cfg.blowup_threshold = float(value)
            elif key == "monitor_stride":
                cfg.monitor_stride = int(value)
            elif key == "N_list":
                cfg.N_list = [int(v) for v in value.replace(",", " ").split()]
            elif key == "p":
                cfg.p = int(value)
            elif key == "q":
                cfg.q = int(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key!r}: {exc}") from None
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig) -> None:
    for kind in cfg.schemes:
        if kind not in SCHEME_KINDS:
            raise ConfigError(f"unknown scheme {kind!r}; choices: {', '.join(SCHEME_KINDS)}")
    if cfg.dt <= 0 or cfg.T < 0:
        raise ConfigError("dt must be positive and T nonnegative")
    for m in [cfg.M, cfg.M_ref, *(cfg.M_list or [])]:
        if m is None:
            continue
        if m < 4:
            raise ConfigError(f"M must be >= 4, got {m}")
        if m & (m - 1):
            print(f"warning: M={m} is not a power of two", file=_sys.stderr)


def _resolve_system(name_or_path: str) -> SystemDef:
    if name_or_path in BUILTIN_SYSTEMS:
        return builtin_system(name_or_path)
    if os.path.exists(name_or_path):
        return parse_system(name_or_path)
    known = ", ".join(sorted(BUILTIN_SYSTEMS))
    raise ConfigError(f"{name_or_path!r} is neither a built-in system ({known}) nor a file")


def _write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _spectrum_csv(state: StateField) -> str:
    grid = state.grid
    n_cut = grid.dealias_N
    header = ["k" if grid.d == 1 else "k1,k2"]
    for i in range(state.n):
        header.append(f"c{i}_re,c{i}_im")
    lines = [",".join(header)]
    modes = np.asarray(grid.modes)
    order = np.argsort(modes)
    if grid.d == 1:
        for idx in order:
            k = int(modes[idx])
            if abs(k) > n_cut:
                continue
            cells = [str(k)]
            for i in range(state.n):
                c = state.coeffs[i][idx]
                cells.append(f"{repr(c.real)},{repr(c.imag)}")
            lines.append(",".join(cells))
    else:
        for idx1 in order:
            k1 = int(modes[idx1])
            if abs(k1) > n_cut:
                continue
            for idx2 in order:
                k2 = int(modes[idx2])
                if abs(k2) > n_cut:
                    continue
                cells = [f"{k1},{k2}"]
                for i in range(state.n):
                    c = state.coeffs[i][idx1, idx2]
                    cells.append(f"{repr(c.real)},{repr(c.imag)}")
                lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _snapshot_csv(states: list[tuple[float, StateField]]) -> str:
    grid = states[0][1].grid
    n = states[0][1].n
    coord_cols = "x" if grid.d == 1 else "x,y"
    header = f"time,{coord_cols}," + ",".join(f"comp{i}" for i in range(n)) + ",d2_comp1"
    lines = [header]
    for t, state in states:
        samples = to_samples(state)
        d2 = to_samples(differentiate(differentiate(state.component(1), 0), 0))
        if grid.d == 1:
            xs = grid.mesh[0]
            for j in range(grid.two_m):
                vals = ",".join(repr(samples[i][j]) for i in range(n))
                lines.append(f"{repr(t)},{repr(xs[j])},{vals},{repr(d2[j])}")
        else:
            xs, ys = grid.mesh
            for j1 in range(grid.two_m):
                for j2 in range(grid.two_m):
                    vals = ",".join(repr(samples[i][j1, j2]) for i in range(n))
                    lines.append(
                        f"{repr(t)},{repr(xs[j1, j2])},{repr(ys[j1, j2])},{vals},{repr(d2[j1, j2])}"
                    )
    return "\n".join(lines) + "\n"


def cmd_run(cfg: ExperimentConfig) -> int:
    if cfg.M is None:
        raise ConfigError("run requires M")
    system = _resolve_system(cfg.system)
    grid = make_grid(system.d, cfg.M)
    state0 = build_initial(cfg.initial, cfg.init_params, grid)
    summary = ["scheme,status,blowup_time,Hs0,Hs1,max_d2u"]
    for kind in cfg.schemes:
        result = evolve(
            SchemeSpec(kind),
            system,
            state0,
            EvolveConfig(
                dt=cfg.dt,
                T=cfg.T,
                monitor_stride=cfg.monitor_stride,
                blowup_threshold=cfg.blowup_threshold,
            ),
        )
        outdir = os.path.join(cfg.out, kind)
        _write(os.path.join(outdir, "monitors.csv"), monitor_csv(result))
        _write(os.path.join(outdir, "spectrum.csv"), _spectrum_csv(result.final_state))
        projected0 = apply_filter(
            state0, FilterSpec("sharp", SchemeSpec(kind).cutoff(grid))
        )
        _write(
            os.path.join(outdir, "snapshots.csv"),
            _snapshot_csv([(0.0, projected0), (cfg.T, result.final_state)]),
        )
        final = result.final_state
        summary.append(
            ",".join(
                [
                    kind,
                    result.status,
                    repr(result.blowup_time) if result.blowup_time is not None else "",
                    repr(sobolev_norm(final, 0)),
                    repr(sobolev_norm(final, 1)),
                    repr(second_derivative_max(final)),
                ]
            )
        )
        print(f"{kind}: {result.status}"
              + (f" at t={result.blowup_time}" if result.blowup_time is not None else ""))
    _write(os.path.join(cfg.out, "summary.csv"), "\n".join(summary) + "\n")
    return 0


def cmd_converge(cfg: ExperimentConfig) -> int:
    if not cfg.M_list or cfg.M_ref is None:
        raise ConfigError("converge requires M_list and M_ref")
    system = _resolve_system(cfg.system)
    report = convergence_study(
        system,
        cfg.schemes,
        cfg.initial,
        cfg.init_params,
        cfg.M_list,
        cfg.M_ref,
        cfg.dt,
        cfg.T,
        s_norms=cfg.s_norms,
        jobs=cfg.jobs,
    )
    _write(os.path.join(cfg.out, "report.csv"), report_csv(report))
    table = report_table(report)
    _write(os.path.join(cfg.out, "report.txt"), table)
    print(table, end="")
    return 0


def cmd_check_system(cfg: ExperimentConfig) -> int:
    system = _resolve_system(cfg.system)
    failed = False

    degree = max(Aj.max_degree() for Aj in system.A)
    print(f"polynomial-entries: PASS (max degree {degree})")

    if system.S is None:
        print("symmetrizer: SKIP (none registered)")
        print("compatibility-split: SKIP (none registered)")
    else:
        rep = check_symmetrizer(system)
        _print_report("symmetrizer", rep)
        failed |= not rep.passed
        rep = check_compatibility_AS(system)
        _print_report("compatibility-split", rep)
        failed |= not rep.passed

    if system.SJ0 is None:
        print("constant-factorization: SKIP (no factor matrices registered)")
    else:
        rep = check_factorization(system)
        _print_report("constant-factorization", rep)
        failed |= not rep.passed
    return 1 if failed else 0


def _print_report(label: str, rep) -> None:
    status = "PASS" if rep.passed else "FAIL"
    suffix = f" ({rep.n_samples} samples)" if rep.n_samples else ""
    print(f"{label}: {status}{suffix}")
    for msg in rep.failures[:5]:
        print(f"  {msg}")
    if len(rep.failures) > 5:
        print(f"  ... {len(rep.failures) - 5} more failures")


def cmd_probe_jn(cfg: ExperimentConfig) -> int:
    if not cfg.N_list:
        raise ConfigError("probe-jn requires N_list")
    system = _resolve_system(cfg.system)
    study = jn_study(system, cfg.N_list, p=cfg.p, q=cfg.q)
    lines = ["N,J"]
    for n_val, j_val in zip(study["N"], study["J"]):
        lines.append(f"{n_val},{repr(j_val)}")
    _write(os.path.join(cfg.out, "jn.csv"), "\n".join(lines) + "\n")
    if study["slope"] is not None:
        _write(os.path.join(cfg.out, "slope.txt"), repr(study["slope"]) + "\n")
        print(f"fitted slope: {study['slope']}")
    for n_val, j_val in zip(study["N"], study["J"]):
        print(f"N={n_val}  J={j_val}")
    return 0


def cmd_list_presets() -> int:
    for name in preset_names():
        preset = PRESETS[name]
        print(f"{name:28} [{preset.kind}]  {preset.description}")
    return 0


def _gather_config(args: argparse.Namespace) -> ExperimentConfig:
    raw: dict[str, str] = {}
    if getattr(args, "preset", None):
        preset = get_preset(args.preset)
        if preset.kind != args.command:
            raise ConfigError(
                f"preset {preset.name!r} belongs to subcommand {preset.kind!r}"
            )
        raw.update(preset.config)
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                raw.update(parse_config_text(fh.read(), source=args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    for flag, key in [
        ("system", "system"), ("scheme", "scheme"), ("initial", "initial"),
        ("M", "M"), ("M_ref", "M_ref"), ("M_list", "M_list"), ("dt", "dt"),
        ("T", "T"), ("out", "out"), ("jobs", "jobs"), ("N_list", "N_list"),
        ("p", "p"), ("q", "q"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            raw[key] = str(value)
    return _build_config(raw)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key-value config file")
    sub.add_argument("--preset", help="named preset from the catalog")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--jobs", type=int, help="worker processes for independent runs")
    sub.add_argument("--system", help="built-in system name or definition file path")
    sub.add_argument("--scheme", help="scheme(s): sharp | smooth-all | smooth-nl")
    sub.add_argument("--initial", help="initial data catalog name")
    sub.add_argument("--M", type=int, help="grid half-resolution (2M points per axis)")
    sub.add_argument("--M-ref", dest="M_ref", type=int, help="reference half-resolution")
    sub.add_argument("--M-list", dest="M_list", help="space/comma separated half-resolutions")
    sub.add_argument("--dt", type=float, help="time step")
    sub.add_argument("--T", type=float, help="final time")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="specwave",
        description="pseudospectral experiments for quasilinear hyperbolic systems",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub_run = subs.add_parser("run", help="single evolution with monitors")
    _add_common(sub_run)
    sub_conv = subs.add_parser("converge", help="convergence/EOC study")
    _add_common(sub_conv)
    sub_check = subs.add_parser("check-system", help="verify structural assumptions")
    sub_check.add_argument("system", help="built-in name or definition file path")
    sub_probe = subs.add_parser("probe-jn", help="sharp-projection pairing growth probe")
    _add_common(sub_probe)
    sub_probe.add_argument("--N-list", dest="N_list", help="ascending cutoffs")
    sub_probe.add_argument("--p", type=int, help="bandwidth of the background state")
    sub_probe.add_argument("--q", type=int, help="offset of the probe mode (0 <= q < p)")
    subs.add_parser("list-presets", help="show the experiment catalog")

    args = parser.parse_args(argv)
    try:
        if args.command == "list-presets":
            return cmd_list_presets()
        if args.command == "check-system":
            cfg = ExperimentConfig(system=args.system)
            return cmd_check_system(cfg)
        cfg = _gather_config(args)
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "converge":
            return cmd_converge(cfg)
        if args.command == "probe-jn":
            return cmd_probe_jn(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, SystemFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1
    except Exception as exc:  # numerical faults outside the detector
        print(f"internal error: {exc}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
