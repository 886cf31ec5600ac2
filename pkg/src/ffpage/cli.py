"""Command-line front end.

``ffpage run <config> [--seed S] [--threads T] [--out DIR]`` executes one
experiment described by a YAML config and writes a CSV result table plus a
JSON metadata sidecar.  ``ffpage compare <a> <b> --tol X`` diffs two curve
tables in entropy density.  ``ffpage list-experiments`` enumerates the
experiment kinds.

Result tables are deterministic: the same config, seed and version produce
byte-identical CSV bytes at any thread count.  Wall-clock metadata lives
only in the sidecar so the table itself stays diffable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .errors import ValidationError
from .rfg import (
    BOUND_KINDS,
    EnsembleConfig,
    concentration_experiment,
    default_epsilon_grid,
    deviation_samples,
    rfg_page_curve,
    variance_scaling,
)
from .curves import (
    dynamical_page_curve,
    moment_prediction,
    quasiparticle_entropy,
    time_averaged_moments,
)
from .quench import HamiltonianSpec, TimeGrid, conserved_occupations

OUT_DIR_ENV = "FFPAGE_OUT_DIR"

EXPERIMENTS = {
    "rfg-curve": "Monte-Carlo Page curve of the random-Gaussian ensemble",
    "dyn-curve": "long-time-averaged Page curve of a density-wave quench",
    "typicality": "empirical concentration tails vs the analytic bounds",
    "variance": "log-log scaling fit of the entropy variance in system size",
    "moments": "time-averaged Tr X_A^p vs the closed-form predictions",
    "classify": "conserved eigenmode occupations and the balance verdict",
    "qp": "quasiparticle lower bound on the long-time entropy",
    "oracle-check": "covariance entropy vs brute-force Fock entropy",
}


class ConfigError(ValidationError):
    """Config problem carrying the best-effort line number of the culprit."""

    def __init__(self, message: str, line: int = 1):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _key_line(text: str, key: str) -> int:
    """1-based line of the first occurrence of a top-level-ish key."""
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#")[0].strip()
        if stripped.startswith(f"{key}:") or stripped.startswith(f"- {key}:"):
            return i
    return 1


def _require(cfg: dict, key: str, text: str):
    if key not in cfg:
        raise ConfigError(f"missing required key {key!r}", _key_line(text, "experiment"))
    return cfg[key]


def _int_field(cfg, key, text, minimum=None):
    value = _require(cfg, key, text)
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key!r} must be an integer", _key_line(text, key)) from None
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key!r} must be >= {minimum}", _key_line(text, key))
    return value


def _parse_hamiltonian(cfg: dict, text: str) -> HamiltonianSpec:
    n = _int_field(cfg, "n_modes", text, minimum=2)
    hops = cfg.get("hoppings", [])
    if not isinstance(hops, list):
        raise ConfigError("'hoppings' must be a list", _key_line(text, "hoppings"))
    parsed = []
    for hop in hops:
        if isinstance(hop, dict):
            hop = [hop.get("range"), hop.get("even", 0), hop.get("odd", 0)]
        if not isinstance(hop, (list, tuple)) or len(hop) != 3:
            raise ConfigError(
                "each hopping must be [range, amp_even, amp_odd]", _key_line(text, "hoppings")
            )
        parsed.append((int(hop[0]), complex(hop[1]), complex(hop[2])))
    try:
        return HamiltonianSpec(n, tuple(parsed))
    except ValidationError as exc:
        raise ConfigError(str(exc), _key_line(text, "hoppings")) from exc


def _parse_time_grid(cfg: dict, seed: int, text: str) -> TimeGrid:
    grid = cfg.get("time_grid", {})
    if not isinstance(grid, dict):
        raise ConfigError("'time_grid' must be a mapping", _key_line(text, "time_grid"))
    try:
        return TimeGrid(
            t_min=float(grid.get("t_min", 1e3)),
            t_max=float(grid.get("t_max", 1e4)),
            sample_count=int(grid.get("samples", 1024)),
            seed=seed,
            scheme=grid.get("scheme", "uniform-window"),
        )
    except ValidationError as exc:
        raise ConfigError(str(exc), _key_line(text, "time_grid")) from exc


def _float_cell(x) -> str:
    return repr(float(x))


class ResultTable:
    """Deterministic CSV table with a commented provenance header."""

    def __init__(self, experiment: str, config_sha: str, seed: int, columns):
        self.columns = list(columns)
        self.header = [
            f"# ffpage {__version__}",
            f"# experiment: {experiment}",
            f"# config-sha256: {config_sha}",
            f"# seed: {seed}",
            f"# columns: {','.join(self.columns)}",
        ]
        self.rows = []

    def comment(self, text: str):
        self.header.append(f"# {text}")

    def add(self, *cells):
        if len(cells) != len(self.columns):
            raise ValidationError("row width must match the declared columns")
        out = []
        for c in cells:
            if isinstance(c, bool):
                out.append("true" if c else "false")
            elif isinstance(c, (int, np.integer)):
                out.append(str(int(c)))
            elif isinstance(c, (float, np.floating)):
                out.append(_float_cell(c))
            else:
                out.append(str(c))
        self.rows.append(out)

    def render(self) -> str:
        lines = list(self.header)
        lines.append(",".join(self.columns))
        lines.extend(",".join(r) for r in self.rows)
        return "\n".join(lines) + "\n"


def parse_table(path) -> dict:
    """Parse a result table back into header metadata, columns and rows.

    Numeric cells come back as int or float; ``true``/``false`` as bool.
    The round trip ``parse_table(write(table))`` is lossless.
    """
    text = Path(path).read_text()
    meta, columns, rows = {}, None, []
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            else:
                meta.setdefault("banner", body)
            continue
        cells = line.split(",")
        if columns is None:
            columns = cells
            continue
        parsed = []
        for c in cells:
            if c == "true":
                parsed.append(True)
            elif c == "false":
                parsed.append(False)
            else:
                try:
                    parsed.append(int(c))
                except ValueError:
                    try:
                        parsed.append(float(c))
                    except ValueError:
                        parsed.append(c)
        rows.append(parsed)
    if columns is None:
        raise ValidationError(f"{path}: no column header found")
    return {"meta": meta, "columns": columns, "rows": rows}


def _curve_table(table: ResultTable, curve) -> ResultTable:
    table.columns = ["subsystem_size", "mean_entropy_bits", "stderr_bits", "density"]
    table.header[-1] = f"# columns: {','.join(table.columns)}"
    for p in curve.points:
        table.add(p.subsystem_size, p.mean, p.stderr, p.mean / curve.n_modes)
    return table


def _run_rfg_curve(cfg, seed, threads, text, table):
    n = _int_field(cfg, "n_modes", text, minimum=2)
    samples = _int_field(cfg, "samples", text, minimum=1)
    particles = int(cfg.get("particles", n // 2))
    sizes = _require(cfg, "sizes", text)
    ens = EnsembleConfig(n, particles, samples, seed)
    return _curve_table(table, rfg_page_curve(ens, sizes, threads))


def _run_dyn_curve(cfg, seed, threads, text, table):
    spec = _parse_hamiltonian(cfg, text)
    grid = _parse_time_grid(cfg, seed, text)
    sizes = _require(cfg, "sizes", text)
    return _curve_table(table, dynamical_page_curve(spec, grid, sizes, threads))


def _run_typicality(cfg, seed, threads, text, table):
    cases = _require(cfg, "cases", text)
    samples = _int_field(cfg, "samples", text, minimum=1)
    kinds = cfg.get("bounds", list(BOUND_KINDS))
    table.columns = [
        "n_modes", "subsystem_size", "bound_kind", "epsilon",
        "empirical_tail", "analytic_bound", "binomial_stderr", "flagged",
    ]
    table.header[-1] = f"# columns: {','.join(table.columns)}"
    for pos, case in enumerate(cases):
        n = int(case["n_modes"])
        na = int(case["subsystem_size"])
        ens = EnsembleConfig.half_filling(n, samples, seed + pos)
        draws = deviation_samples(ens, na, threads)
        for kind in kinds:
            eps = case.get("epsilon_grid") or default_epsilon_grid(kind, n, na)
            report = concentration_experiment(ens, na, eps, kind, threads, _samples=draws)
            for j, e in enumerate(report.epsilon_grid):
                table.add(
                    n, na, kind, float(e),
                    float(report.empirical_tail[j]),
                    float(report.analytic_bound[j]),
                    float(report.binomial_stderr[j]),
                    bool(report.flagged[j]),
                )
    return table


def _run_variance(cfg, seed, threads, text, table):
    n_values = _require(cfg, "n_values", text)
    na = _int_field(cfg, "subsystem_size", text, minimum=1)
    samples = _int_field(cfg, "samples", text, minimum=2)
    fit = variance_scaling(n_values, na, samples, seed, threads)
    table.columns = ["n_modes", "variance_bits2", "variance_stderr"]
    table.header[-1] = f"# columns: {','.join(table.columns)}"
    table.comment(f"slope: {_float_cell(fit.slope)}")
    table.comment(f"slope-stderr: {_float_cell(fit.slope_stderr)}")
    for i, n in enumerate(fit.n_values):
        table.add(int(n), float(fit.variances[i]), float(fit.variance_stderr[i]))
    return table


def _run_moments(cfg, seed, threads, text, table):
    spec = _parse_hamiltonian(cfg, text)
    grid = _parse_time_grid(cfg, seed, text)
    sizes = _require(cfg, "sizes", text)
    powers = tuple(int(p) for p in cfg.get("powers", (2, 3, 4, 6)))
    table.columns = ["subsystem_size", "power", "time_average", "prediction"]
    table.header[-1] = f"# columns: {','.join(table.columns)}"
    order = {2: 1, 4: 2, 6: 3}
    for na in sorted(int(s) for s in sizes):
        averaged = time_averaged_moments(spec, grid, na, powers, threads)
        for p in powers:
            pred = ""
            if p in order:
                try:
                    pred = _float_cell(
                        moment_prediction(order[p], spec.n_modes, na, model_term=(p == 2))
                    )
                except ValidationError:
                    pred = ""
            table.add(na, p, float(averaged[p]), pred)
    return table


def _run_classify(cfg, seed, threads, text, table):
    spec = _parse_hamiltonian(cfg, text)
    profile = conserved_occupations(spec)
    table.columns = ["momentum", "occupation", "eta"]
    table.header[-1] = f"# columns: {','.join(table.columns)}"
    table.comment(f"occupations_balanced: {'true' if profile.occupations_balanced else 'false'}")
    momenta = np.concatenate([profile.momenta, profile.momenta + np.pi])
    for k, nk, eta in zip(momenta, profile.occupations, profile.eta):
        table.add(float(k), float(nk), float(eta))
    return table


def _run_qp(cfg, seed, threads, text, table):
    spec = _parse_hamiltonian(cfg, text)
    profile = conserved_occupations(spec)
    sizes = _require(cfg, "sizes", text)
    table.columns = ["subsystem_size", "qp_entropy_bits", "density"]
    table.header[-1] = f"# columns: {','.join(table.columns)}"
    for na in sorted(int(s) for s in sizes):
        s_qp = quasiparticle_entropy(profile, spec.n_modes, na)
        table.add(na, s_qp, s_qp / spec.n_modes)
    return table


def _run_oracle_check(cfg, seed, threads, text, table):
    from .gaussian import entropy, reduce_covariance
    from .linalg import split_rng
    from .oracle import build_density_wave, covariance_from_fock, evolve_fock, fock_entropy
    from .quench import build_single_particle, density_wave_covariance, evolve_covariance

    sizes = cfg.get("n_modes_list", [4, 6, 8])
    n_times = _int_field(cfg, "times", text, minimum=1) if "times" in cfg else 20
    t_max = float(cfg.get("t_max", 50.0))
    models = cfg.get("models")
    table.columns = ["model", "n_modes", "max_abs_diff", "passed"]
    table.header[-1] = f"# columns: {','.join(table.columns)}"
    rng = split_rng(seed)
    for n in sorted(int(s) for s in sizes):
        if models is None:
            model_specs = {
                "minimal": HamiltonianSpec.minimal(n),
                "odd-range": HamiltonianSpec(n, ((1, 1.0, 1.0), (3, 0.4, -0.4))),
                "even-range": HamiltonianSpec(n, ((1, 1.0, 1.0), (2, 0.3, -0.3))),
            }
        else:
            model_specs = {
                m["name"]: _parse_hamiltonian({**m, "n_modes": n}, text) for m in models
            }
        times = rng.uniform(0.0, t_max, size=n_times)
        for name, spec in model_specs.items():
            h = build_single_particle(spec)
            psi0 = build_density_wave(n)
            c0 = density_wave_covariance(n)
            worst = 0.0
            for t in times:
                psi = evolve_fock(psi0, h, t)
                c = evolve_covariance(h, c0, t)
                cov_dev = float(np.max(np.abs(covariance_from_fock(psi) - c)))
                worst = max(worst, cov_dev)
                for na in range(1, n + 1):
                    idx = list(range(na))
                    s_cov = entropy(reduce_covariance(c, idx))
                    s_fock = fock_entropy(psi, idx)
                    worst = max(worst, abs(s_cov - s_fock))
            table.add(name, n, worst, worst < 1e-8)
    return table


_RUNNERS = {
    "rfg-curve": _run_rfg_curve,
    "dyn-curve": _run_dyn_curve,
    "typicality": _run_typicality,
    "variance": _run_variance,
    "moments": _run_moments,
    "classify": _run_classify,
    "qp": _run_qp,
    "oracle-check": _run_oracle_check,
}


def _load_config(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        cfg = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        line = getattr(getattr(exc, "problem_mark", None), "line", 0) + 1
        raise ConfigError(f"YAML parse error: {exc}", line) from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a mapping at top level")
    return cfg, text


def run_config(path, seed=None, threads=None, out_dir=None) -> Path:
    """Execute a config file and return the path of the written CSV."""
    path = Path(path)
    cfg, text = _load_config(path)
    kind = _require(cfg, "experiment", text)
    if kind not in _RUNNERS:
        raise ConfigError(
            f"unknown experiment {kind!r}; known: {sorted(_RUNNERS)}",
            _key_line(text, "experiment"),
        )
    if seed is None:
        if "seed" not in cfg:
            raise ConfigError("'seed' is required (no silent nondeterminism)",
                              _key_line(text, "experiment"))
        seed = int(cfg["seed"])
    if threads is None:
        threads = int(cfg.get("threads", 0))
    if threads < 0:
        raise ConfigError("'threads' must be >= 0", _key_line(text, "threads"))
    out_dir = Path(
        out_dir
        or os.environ.get(OUT_DIR_ENV)
        or cfg.get("out_dir")
        or "."
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    name = cfg.get("output", path.stem)
    sha = hashlib.sha256(text.encode()).hexdigest()
    table = ResultTable(kind, sha, seed, columns=[])
    started = time.monotonic()
    table = _RUNNERS[kind](cfg, seed, threads, text, table)
    duration = time.monotonic() - started
    csv_path = out_dir / f"{name}.csv"
    csv_path.write_text(table.render())
    meta = {
        "experiment": kind,
        "version": __version__,
        "seed": seed,
        "threads": threads,
        "config_path": str(path),
        "config_sha256": sha,
        "config_text": text,
        "duration_seconds": duration,
        "completed_at": datetime.now(timezone.utc).isoformat(),
        "result_csv": csv_path.name,
    }
    (out_dir / f"{name}.meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    plot = cfg.get("plot")
    if plot:
        _write_plot(table, out_dir / plot, kind)
    return csv_path


def _write_plot(table: ResultTable, path: Path, kind: str):
    """Render a static vector-graphics plot of a curve table."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.4))
    if table.columns[:2] == ["subsystem_size", "mean_entropy_bits"]:
        x = [int(r[0]) for r in table.rows]
        y = [float(r[1]) for r in table.rows]
        err = [float(r[2]) for r in table.rows]
        ax.errorbar(x, y, yerr=err, fmt="o-", ms=3, capsize=2)
        ax.set_xlabel("subsystem size")
        ax.set_ylabel("entropy (bits)")
    else:
        ax.axis("off")
        ax.text(0.5, 0.5, f"{kind}: no curve columns to plot", ha="center")
    ax.set_title(kind)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def compare_tables(path_a, path_b, tol: float) -> dict:
    """Per-point density comparison of two curve tables.

    Both tables must expose ``subsystem_size`` and ``density`` columns over
    the same size grid.  Returns the per-point and maximum absolute density
    differences plus the verdict against ``tol``.
    """
    result = []
    for path in (path_a, path_b):
        t = parse_table(path)
        cols = t["columns"]
        if "subsystem_size" not in cols or "density" not in cols:
            raise ValidationError(f"{path}: not a curve table (need subsystem_size, density)")
        i_na, i_d = cols.index("subsystem_size"), cols.index("density")
        result.append({int(r[i_na]): float(r[i_d]) for r in t["rows"]})
    a, b = result
    if sorted(a) != sorted(b):
        raise ValidationError("subsystem-size grids differ between the two tables")
    diffs = {na: abs(a[na] - b[na]) for na in sorted(a)}
    max_diff = max(diffs.values())
    return {"diffs": diffs, "max_diff": max_diff, "passed": max_diff <= tol}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ffpage",
        description="Free-fermion Page-curve experiments: run, compare, enumerate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment config")
    p_run.add_argument("config", type=Path)
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--threads", type=int, default=None, help="worker threads (0 = auto)")
    p_run.add_argument("--out", type=Path, default=None, help="output directory")

    p_cmp = sub.add_parser("compare", help="diff two curve tables in entropy density")
    p_cmp.add_argument("table_a", type=Path)
    p_cmp.add_argument("table_b", type=Path)
    p_cmp.add_argument("--tol", type=float, required=True)

    sub.add_parser("list-experiments", help="list the available experiment kinds")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            csv_path = run_config(args.config, args.seed, args.threads, args.out)
            print(f"wrote {csv_path}")
            return 0
        if args.command == "compare":
            report = compare_tables(args.table_a, args.table_b, args.tol)
            for na, d in report["diffs"].items():
                print(f"N_A={na}: |density diff| = {d:.6e}")
            verdict = "PASS" if report["passed"] else "FAIL"
            print(f"max |density diff| = {report['max_diff']:.6e} (tol {args.tol:g}): {verdict}")
            return 0 if report["passed"] else 1
        for kind in EXPERIMENTS:
            print(f"{kind:14s} {EXPERIMENTS[kind]}")
        return 0
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
