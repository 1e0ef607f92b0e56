"""Batch front end: ``qhhg run.cfg [--out DIR] [--threads N]``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import cutoff_order, perturbative_limit, scaling_curve
from .appcheck import app_report
from .config import ConfigError, parse_config
from .drive import time_grid
from .efield import generated_field_stats
from .phasespace import DrivingField, moments, phase_space_grid, radial_grid
from .spectrum import floquet_peaks, harmonic_peak_heights, quantum_spectrum


def fmt(x):
    """17 significant digits, stable across runs."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(path, header, columns):
    rows = zip(*columns)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_json(path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_plain(payload), fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(format(float(obj), ".17g"))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _radial(cfg, field, nodes=None):
    return radial_grid(field, rel_tail=cfg.rel_tail, nodes=nodes or cfg.radial_nodes)


def _max_rel_delta(a, b, floor_rel=1e-12):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    keep = np.abs(a) > floor_rel * np.max(np.abs(a)) if a.size and np.max(np.abs(a)) > 0 else np.zeros(a.shape, bool)
    if not np.any(keep):
        return 0.0
    return float(np.max(np.abs(b[keep] - a[keep]) / np.abs(a[keep])))


def _grid_info(radial):
    return {
        "radial_nodes": len(radial),
        "tail_mass": radial.tail_mass,
        "weight_sum": radial.weight_sum,
        "span_sigmas": radial.span,
    }


def run_spectrum(cfg, out, threads):
    grid = time_grid(cfg.pulse, cfg.samples_per_cycle)
    radial = _radial(cfg, cfg.field)
    spec = quantum_spectrum(cfg.band, cfg.pulse, cfg.field, grid, radial, threads=threads)
    w0 = cfg.pulse.omega0
    write_csv(out / "spectrum.csv", ["omega_au", "harmonic_order", "density"],
              [spec.omega, spec.omega / w0, spec.density])
    n_max = cfg.get("run.n_max")
    n_top = min(n_max, int(spec.omega[-1] / w0 - 0.5))
    heights = [h for _, h in harmonic_peak_heights(spec, w0, n_top)]
    conv = _grid_info(radial)
    if not radial.is_point_mass:
        fine = _radial(cfg, cfg.field, 2 * cfg.radial_nodes)
        spec2 = quantum_spectrum(cfg.band, cfg.pulse, cfg.field, grid, fine, threads=threads)
        heights2 = [h for _, h in harmonic_peak_heights(spec2, w0, n_top)]
        conv["radial_doubling_max_rel_delta"] = _max_rel_delta(heights, heights2)
    return {"convergence": conv, "peak_heights": dict(zip(range(1, n_top + 1), heights))}


def run_floquet(cfg, out, threads):
    radial = _radial(cfg, cfg.field)
    n_max = cfg.get("run.n_max")
    peaks = floquet_peaks(cfg.band, cfg.field, cfg.pulse.g0, cfg.pulse.omega0, n_max, radial)
    write_csv(out / "floquet.csv", ["n", "weight"], [peaks.orders, peaks.weights])
    conv = _grid_info(radial)
    if not radial.is_point_mass:
        fine = _radial(cfg, cfg.field, 2 * cfg.radial_nodes)
        p2 = floquet_peaks(cfg.band, cfg.field, cfg.pulse.g0, cfg.pulse.omega0, n_max, fine)
        conv["radial_doubling_max_rel_delta"] = _max_rel_delta(peaks.weights, p2.weights)
    return {"convergence": conv}


def run_cutoff(cfg, out, threads):
    mean = cfg.get("field.mean_photons")
    r = cfg.get("field.r")
    result, conv = {}, {}
    for kind in ("coherent", "fock", "thermal", "bsv"):
        field = DrivingField.bsv(r) if (kind == "bsv" and r is not None) else DrivingField.from_mean_photons(kind, mean)
        radial = _radial(cfg, field)
        mu, sigma = moments(field, radial)
        value = cutoff_order(cfg.band, field, cfg.pulse.g0, cfg.pulse.omega0, radial)
        result[kind] = {"cutoff_order": value, "mu_p": mu, "sigma_p": sigma}
        conv[kind] = _grid_info(radial)
        if not radial.is_point_mass:
            fine = _radial(cfg, field, 2 * cfg.radial_nodes)
            value2 = cutoff_order(cfg.band, field, cfg.pulse.g0, cfg.pulse.omega0, fine)
            conv[kind]["radial_doubling_rel_delta"] = abs(value2 - value) / value
    write_json(out / "cutoff.json", result)
    return {"convergence": conv}


def run_scaling(cfg, out, threads):
    kind = cfg.field.kind
    n = cfg.get("scaling.harmonic")
    g0, w0 = cfg.pulse.g0, cfg.pulse.omega0
    limit = perturbative_limit(cfg.band, kind, n, g0, w0)
    photons = limit.mean_photons * np.logspace(
        math.log10(cfg.get("scaling.min_factor")),
        math.log10(cfg.get("scaling.max_factor")),
        cfg.get("scaling.points"),
    )
    curve = scaling_curve(cfg.band, kind, n, g0, w0, photons, cfg.rel_tail, cfg.radial_nodes)
    write_csv(out / "scaling.csv", ["mean_photons", "exact", "perturbative", "inside_perturbative_range"],
              [curve.mean_photons, curve.exact_signal, curve.perturbative_signal, curve.inside_range])
    fine = scaling_curve(cfg.band, kind, n, g0, w0, photons, cfg.rel_tail, 2 * cfg.radial_nodes)
    conv = {"radial_doubling_max_rel_delta": _max_rel_delta(curve.exact_signal, fine.exact_signal)}
    return {"convergence": conv, "validity_threshold": limit.mean_photons, "safety_factor": limit.safety}


def run_efield(cfg, out, threads):
    grid = time_grid(cfg.pulse, cfg.samples_per_cycle)
    radial = _radial(cfg, cfg.field)
    quad = phase_space_grid(cfg.field, radial, cfg.angular_nodes)
    trace = generated_field_stats(cfg.band, cfg.pulse, cfg.field, grid, quad, threads=threads)
    write_csv(out / "efield.csv", ["t_au", "t_fs", "mean", "std"],
              [trace.times, trace.times_fs, trace.mean, trace.std])
    conv = _grid_info(radial)
    conv["phase_space_nodes"] = len(quad)
    conv["phase_weight_sum"] = float(math.fsum(quad.weights))
    return {"convergence": conv, "notes": trace.metadata.get("neglected")}


def run_validate_app(cfg, out, threads):
    report = app_report(cfg.get("app.fock_n"), cfg.get("app.bsv_r"))
    payload = report.to_dict()
    payload["modes"] = {
        "photon_number_app": "integral of Q|a|^2",
        "mandel_q_app": "app_integral",
        "min_quad_variance_app": "closed form, numeric twin in details",
    }
    write_json(out / "app_report.json", payload)
    return {"convergence": {"fock_second_moment_rel_err": abs(
        payload["details"]["fock_second_moment_app"] / payload["details"]["fock_second_moment_closed"] - 1.0)}}


RUNNERS = {
    "spectrum": run_spectrum,
    "floquet": run_floquet,
    "cutoff": run_cutoff,
    "scaling": run_scaling,
    "efield": run_efield,
    "validate-app": run_validate_app,
}


def run(cfg, out_dir=None, threads=1):
    """Execute one configured run; returns the manifest dict."""
    out = Path(out_dir or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    info = RUNNERS[cfg.run_kind](cfg, out, threads)
    manifest = {
        "code_version": __version__,
        "config": cfg.values,
        "run_kind": cfg.run_kind,
        "threads": threads,
        "wall_time_s": time.perf_counter() - start,
        **info,
    }
    write_json(out / "manifest.json", manifest)
    return manifest


def _threads(arg):
    if arg is not None:
        return arg
    env = os.environ.get("QHHG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"QHHG_THREADS must be an integer, got {env!r}") from None
    return 1


def main(argv=None):
    parser = argparse.ArgumentParser(prog="qhhg", description="Harmonic generation driven by quantum light.")
    parser.add_argument("config", help="run file with section.key = value lines")
    parser.add_argument("--out", help="output directory (overrides out.dir)")
    parser.add_argument("--threads", type=int, help="worker threads (default: $QHHG_THREADS or 1)")
    args = parser.parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
        cfg = parse_config(text)
        threads = _threads(args.threads)
        if threads < 1:
            raise ConfigError("--threads must be >= 1")
        manifest = run(cfg, args.out, threads)
    except (OSError, ConfigError, ValueError, ArithmeticError) as exc:
        print(f"qhhg: error: {exc}", file=sys.stderr)
        return 2
    print(f"qhhg: {cfg.run_kind} done in {manifest['wall_time_s']:.2f} s -> {args.out or cfg.out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
