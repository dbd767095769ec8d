"""Command-line front end.

Subcommands: spectrum, overlap, sweep-sigmaz, sweep-snr, freeze, cluster,
project. Common flags: --config PATH (flat key=value file, see
:mod:`lossgeom.config`), --out DIR (overrides the config's output_dir),
--seed INT (overrides the config's seed), --json (print a summary to
stdout). Exit codes: 0 success, 1 validation error (bad arguments, config,
parameters or dump contents), 2 I/O error.

All CSVs are written with 17 significant digits so they re-parse to the
exact values computed; identical config + seed gives byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .clustering import clustering_report, predicted_q_sl
from .config import ConfigError, RunConfig, parse_config
from .dumps import DumpError, read_dump
from .experiments import (
    SweepSpec,
    run_freezing_experiment,
    run_overlap_experiment,
    run_sigma_z_sweep,
    run_snr_sweep,
    run_spectrum_experiment,
    _sample_instance,
)
from .gradients import model_hessian, weight_gradient
from .params import ModelParams
from .rng import substream
from .spectra import (
    detect_outliers,
    eigh,
    gradient_overlaps,
    project_hessian,
    random_orthonormal_basis,
    spectral_norm,
    trace_norm_ratio,
)
from .svgplot import emit_svg

DEFAULT_SNR_GRID = (10.0, 2.04, 0.5, 0.1, 0.01)

SWEEP_CSV_HEADER = (
    "sigma_z,sigma_c,top_eigenvalue,trace,spectral_norm,trace_ratio,"
    "projected_trace_ratio,mean_entropy,mean_max_prob,n_outliers,"
    "grad_power_top10,repeat"
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep usage problems on exit code 1
        raise _UsageError(message)


def _format(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_format(v) for v in row) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_spectrum(cfg: RunConfig, outdir: str, args) -> dict:
    spectrum, report = run_spectrum_experiment(cfg.params)
    _write_csv(
        os.path.join(outdir, "spectrum.csv"),
        "index,eigenvalue",
        ((i, v) for i, v in enumerate(spectrum.eigenvalues)),
    )
    payload = {
        "n_outliers": report.n_outliers,
        "bulk_edge": report.bulk_edge,
        "outlier_values": [float(v) for v in report.outlier_values],
        "top_eigenvalue": float(spectrum.eigenvalues[0]),
        "trace": float(spectrum.eigenvalues.sum()),
        "trace_ratio": trace_norm_ratio(spectrum),
    }
    _write_json(os.path.join(outdir, "outliers.json"), payload)
    if cfg.emit_svg:
        emit_svg(spectrum, "spectrum", os.path.join(outdir, "spectrum.svg"))
    return payload


def _cmd_overlap(cfg: RunConfig, outdir: str, args) -> dict:
    cosines, cumulative = run_overlap_experiment(cfg.params)
    _write_csv(
        os.path.join(outdir, "overlaps.csv"),
        "index,cosine,cumulative_power",
        ((i, c, p) for i, (c, p) in enumerate(zip(cosines, cumulative))),
    )
    top10 = float(cumulative[min(10, cumulative.shape[0]) - 1])
    payload = {"grad_power_top10": top10}
    _write_json(os.path.join(outdir, "overlap.json"), payload)
    return payload


def _cmd_sweep_sigmaz(cfg: RunConfig, outdir: str, args) -> dict:
    records = run_sigma_z_sweep(cfg.params, cfg.sweep, fixed_sigma_e=cfg.fixed_sigma_e)
    _write_csv(
        os.path.join(outdir, "sweep.csv"),
        SWEEP_CSV_HEADER,
        (
            (
                r.sigma_z, r.sigma_c, r.top_eigenvalue, r.trace, r.spectral_norm,
                r.trace_ratio, r.projected_trace_ratio, r.mean_entropy,
                r.mean_max_prob, r.n_outliers, r.grad_power_top10, r.repeat,
            )
            for r in records
        ),
    )
    if cfg.emit_svg:
        emit_svg(records, "sweep", os.path.join(outdir, "sweep.svg"))
    grid = cfg.sweep.grid()
    tops = np.array([r.top_eigenvalue for r in records]).reshape(
        cfg.sweep.points, cfg.sweep.repeats
    ).mean(axis=1)
    ratios = np.array([r.trace_ratio for r in records]).reshape(
        cfg.sweep.points, cfg.sweep.repeats
    ).mean(axis=1)
    return {
        "points": cfg.sweep.points,
        "repeats": cfg.sweep.repeats,
        "fixed_sigma_e": cfg.fixed_sigma_e,
        "peak_sigma_z": float(grid[int(np.argmax(tops))]),
        "trace_ratio_first": float(ratios[0]),
        "trace_ratio_last": float(ratios[-1]),
    }


def _cmd_sweep_snr(cfg: RunConfig, outdir: str, args) -> dict:
    results = run_snr_sweep(cfg.params, DEFAULT_SNR_GRID)
    _write_csv(os.path.join(outdir, "snr_sweep.csv"), "snr,n_outliers,q_sl", results)
    return {
        "rows": [
            {"snr": snr, "n_outliers": n, "q_sl": q} for snr, n, q in results
        ]
    }


def _cmd_freeze(cfg: RunConfig, outdir: str, args) -> dict:
    results = run_freezing_experiment(cfg.params, cfg.sweep.grid())
    _write_csv(
        os.path.join(outdir, "freezing.csv"),
        "sigma_z,mean_entropy,mean_max_prob",
        ((sz, ent, mx) for sz, ent, mx, _ in results),
    )
    simplex_rows = [
        (sz, x, y) for sz, _, _, pts in results for x, y in pts
    ]
    if simplex_rows:
        _write_csv(os.path.join(outdir, "simplex.csv"), "sigma_z,x,y", simplex_rows)
    return {
        "points": len(results),
        "final_mean_entropy": results[-1][1],
        "final_mean_max_prob": results[-1][2],
        "simplex_rows": len(simplex_rows),
    }


def _cmd_cluster(cfg: RunConfig, outdir: str, args) -> dict:
    if args.input is not None:
        dump = read_dump(args.input)
        report = clustering_report(dump.data, dump.labels)
        payload = {"source": args.input}
    else:
        ensemble, grads = _sample_instance(cfg.params)
        report = clustering_report(grads, ensemble.labels)
        payload = {
            "source": "model",
            "predicted_q_sl": predicted_q_sl(cfg.params.sigma_c, cfg.params.sigma_e),
        }
    payload.update(
        q_slsc=report.q_slsc,
        q_sl=report.q_sl,
        q_dl=report.q_dl,
        per_class_q=[float(v) for v in report.per_class_q],
    )
    _write_json(os.path.join(outdir, "clustering.json"), payload)
    return payload


def _cmd_project(cfg: RunConfig, outdir: str, args) -> dict:
    params = cfg.params
    ensemble, grads = _sample_instance(params)
    hessian = model_hessian(grads, ensemble)
    spectrum = eigh(hessian)
    basis = random_orthonormal_basis(params, substream(params.seed, "hyperplane"))
    projected = eigh(project_hessian(hessian, basis))
    _write_csv(
        os.path.join(outdir, "projected_spectrum.csv"),
        "index,eigenvalue",
        ((i, v) for i, v in enumerate(projected.eigenvalues)),
    )
    tol = 1e-9 * max(spectral_norm(spectrum), 1e-300)
    payload = {
        "hyperplane_dim": params.hyperplane_dim,
        "top_full": float(spectrum.eigenvalues[0]),
        "top_projected": float(projected.eigenvalues[0]),
        "full_trace_ratio": trace_norm_ratio(spectrum),
        "projected_trace_ratio": trace_norm_ratio(projected),
        "interlacing_ok": bool(
            projected.eigenvalues[0] <= spectrum.eigenvalues[0] + tol
            and projected.eigenvalues[-1] >= spectrum.eigenvalues[-1] - tol
        ),
    }
    _write_json(os.path.join(outdir, "projection.json"), payload)
    return payload


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "overlap": _cmd_overlap,
    "sweep-sigmaz": _cmd_sweep_sigmaz,
    "sweep-snr": _cmd_sweep_snr,
    "freeze": _cmd_freeze,
    "cluster": _cmd_cluster,
    "project": _cmd_project,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="lossgeom", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="key=value config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the seed")
        p.add_argument("--json", action="store_true", help="print a JSON summary")
        if name == "cluster":
            p.add_argument(
                "--input", default=None,
                help="gradient dump (.lgrd binary or .csv) to score instead "
                     "of a model-sampled ensemble",
            )
    return parser


def run_command(argv) -> int:
    """Run one subcommand; returns the process exit code (0/1/2)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config is not None:
            cfg = parse_config(args.config)
        else:
            cfg = RunConfig(params=ModelParams(), sweep=SweepSpec())
        if args.seed is not None:
            cfg = replace(cfg, params=replace(cfg.params, seed=args.seed))
        outdir = args.out if args.out is not None else cfg.output_dir
        os.makedirs(outdir, exist_ok=True)
        payload = _COMMANDS[args.command](cfg, outdir, args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, DumpError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
