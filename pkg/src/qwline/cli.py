"""Config-driven command-line front end.

Subcommands: ``simulate`` (run an engine, emit distribution CSVs plus a
JSON result record), ``dispersion`` (export the dispersion curve and
group velocity), ``predict`` (closed-form predictions), and ``compare``
(distance between two distribution files).  Errors leave exit code 1 and
a machine-readable JSON object on stderr.  There is no randomness
anywhere: identical configs reproduce identical data files.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__, analysis, kernels
from . import envelope as env_mod
from . import initial as init_mod
from . import io as io_mod
from . import spectral, walk
from .errors import SchemaError
from .io import RunConfig
from .walk import CoinParameter, ProbabilityDistribution

PRESETS = ("fig1", "fig2a", "fig2b", "fig2c")


def _load_preset(name: str) -> dict:
    if name not in PRESETS:
        raise SchemaError(f"unknown preset {name!r}; available: {PRESETS}")
    ref = resources.files("qwline").joinpath("presets", f"{name}.json")
    return json.loads(ref.read_text())


# ---------------------------------------------------------------------------
# dispersion


def cmd_dispersion(theta: float, samples: int, output) -> Path:
    """Write k, omega, vg sampled uniformly (inclusive) on [-pi, pi]."""
    if samples < 16:
        raise ValueError("samples must be at least 16")
    coin = CoinParameter(theta)
    k = np.linspace(-math.pi, math.pi, samples)
    w = np.asarray(spectral.omega(k, coin))
    vg = np.asarray(spectral.omega_derivative(k, coin, 1))
    output = Path(output)
    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "omega", "vg"])
        for row in zip(k, w, vg):
            writer.writerow([format(v, ".17g") for v in row])
    return output


# ---------------------------------------------------------------------------
# predict


def cmd_predict(kind: str, **params) -> dict:
    """Closed-form predictions; echoes the inputs."""

    def need(*names):
        missing = [n for n in names if params.get(n) is None]
        if missing:
            raise ValueError(f"predict {kind} requires {missing}")

    if kind == "gaussian-width":
        need("sigma0", "theta", "t")
        coin = CoinParameter(params["theta"])
        w = env_mod.width_law(params["t"], params["sigma0"], coin)
        return {"kind": kind, "sigma0": params["sigma0"], "theta": params["theta"],
                "t": params["t"], "w": float(w)}
    if kind == "flat-top":
        need("sigma0", "theta", "t")
        coin = CoinParameter(params["theta"])
        pred = env_mod.flat_top_prediction(params["sigma0"], coin, params["t"])
        return {"kind": kind, "sigma0": pred.sigma0, "theta": pred.theta,
                "t": pred.t, "w": pred.w, "level": pred.level, "std": pred.std,
                "transient": pred.transient}
    if kind == "talbot":
        need("lam", "theta")
        coin = CoinParameter(params["theta"])
        return {"kind": kind, "lambda": params["lam"], "theta": params["theta"],
                "T": env_mod.talbot_period(params["lam"], coin)}
    raise ValueError(f"unknown prediction kind {kind!r}")


# ---------------------------------------------------------------------------
# compare


def cmd_compare(file_a, file_b, metric: str = "L1") -> dict:
    """Distance between two distribution CSVs plus per-file totals."""
    dist_a, _ = io_mod.read_distribution_csv(file_a)
    dist_b, _ = io_mod.read_distribution_csv(file_b)
    return {
        "file_a": str(file_a),
        "file_b": str(file_b),
        "metric": metric,
        "distance": analysis.distance(dist_a, dist_b, metric),
        "total_a": dist_a.total(),
        "total_b": dist_b.total(),
    }


# ---------------------------------------------------------------------------
# simulate


def _walk_samples(cfg: RunConfig, coin: CoinParameter):
    """(t, state, distribution) triples for the map and spectral engines."""
    state0 = init_mod.build(cfg.initial, coin)
    out = []
    if cfg.engine == "map":
        current = state0
        for t in sorted(set(cfg.sample_times)):
            current = walk.evolve(current, coin, t - current.t)
            out.append((t, current, walk.probability(current)))
    else:
        for t in sorted(set(cfg.sample_times)):
            st = spectral.exact_evolve(state0, coin, t)
            out.append((t, st, walk.probability(st)))
    return out


def _continuum_band(cfg: RunConfig) -> float:
    """Half-width of the populated spectral band, for grid sizing."""
    env = cfg.initial.envelope
    qp = 2.0 * abs(env.quad_phase) * init_mod.envelope_support(env) \
        if env.quad_phase else 0.0
    if env.family == "gaussian":
        band = 10.0 / env.sigma0 + qp
    elif env.family == "sinc_gaussian":
        band = math.pi / env.sigma0 + 10.0 / env.sigmaG + qp
    elif env.family == "periodic":
        band = 6.0 * math.pi / env.lambda_ + 0.05
    else:
        # delta and hard-truncated sinc populate the whole band
        band = math.pi
    return min(math.pi, band)


def _continuum_speed(cfg: RunConfig, coin: CoinParameter) -> float:
    band = _continuum_band(cfg)
    K = np.linspace(-band, band, 1025)
    k0 = cfg.initial.carrier_k0
    if cfg.truncation == "exact":
        speed = np.abs(spectral.omega_derivative(k0 + K, coin, 1))
    else:
        speed = np.zeros_like(K)
        fact = 1.0
        for n in range(1, int(cfg.truncation) + 1):
            speed = speed + spectral.omega_derivative(k0, coin, n) * K ** (n - 1) / fact
            fact *= n
        speed = np.abs(speed)
    return float(np.max(speed))


def _continuum_samples(cfg: RunConfig, coin: CoinParameter):
    """(t, None, distribution) triples for the continuum engine."""
    spec = cfg.initial
    env = spec.envelope
    if spec.coin.s is None:
        raise SchemaError(
            "engine=continuum needs an eigenspinor coin so the branch is defined"
        )
    s = spec.coin.s
    x0 = int(round(env.x0))
    if cfg.periodic_grid:
        if env.family != "periodic":
            raise SchemaError("periodic_grid requires the periodic envelope family")
        n = cfg.n_periods * int(env.lambda_)
        x = np.arange(n) - n // 2 + x0
        f = init_mod.sample_envelope(env, x)
    else:
        support = init_mod.envelope_support(env)
        if cfg.grid_halfwidth is not None:
            half = int(cfg.grid_halfwidth)
        else:
            speed = _continuum_speed(cfg, coin)
            half = int(math.ceil(support + 1.15 * speed * cfg.t_max)) + 64
        x = np.arange(-half, half + 1) + x0
        f = init_mod.sample_envelope(env, x)
        f[np.abs(x - env.x0) > support] = 0.0
    field0 = env_mod.EnvelopeField.from_samples(
        x.astype(np.float64), f, carrier=spec.carrier_k0, branch=s
    )
    out = []
    for t in sorted(set(cfg.sample_times)):
        ft = env_mod.propagate_envelope(
            field0, coin, float(t), cfg.truncation, periodic=cfg.periodic_grid
        )
        P = ft.h * ft.density()
        dist = ProbabilityDistribution(t=t, x_min=int(x[0]), P=P)
        out.append((t, None, dist))
    return out


def cmd_simulate(cfg: RunConfig, base_dir=".") -> dict:
    """Run one configured simulation and write its outputs.

    Returns the result record (also written as ``result.json`` inside the
    run's output directory).
    """
    start = time.perf_counter()
    coin = CoinParameter(cfg.theta)
    if cfg.engine == "continuum":
        samples = _continuum_samples(cfg, coin)
    else:
        samples = _walk_samples(cfg, coin)

    outdir = Path(base_dir) / cfg.output_path
    outdir.mkdir(parents=True, exist_ok=True)
    sample_records = []
    dists = []
    for t, state, dist in samples:
        dists.append(dist)
        rec: dict = {"t": t}
        if "distribution" in cfg.outputs:
            fname = f"distribution_t{t}.csv"
            io_mod.write_distribution_csv(outdir / fname, dist, state)
            rec["file"] = fname
            rec["rows"] = int(dist.P.size)
        if "moments" in cfg.outputs:
            m = analysis.moments(dist)
            rec["moments"] = {"mean": m.mean, "std": m.std, "total": m.total}
        if "flatness" in cfg.outputs:
            rec["flatness"] = _flatness_record(cfg, coin, dist, t)
        sample_records.append(rec)

    record = {
        "config": io_mod.run_config_to_dict(cfg),
        "engine": {
            "name": cfg.engine,
            "kernel": kernels.kernel_name(),
            "package": "qwline",
            "version": __version__,
        },
        "samples": sample_records,
    }
    if "packets" in cfg.outputs:
        tracks = analysis.track_packets(dists)
        record["packets"] = [
            {"velocity": tr.velocity, "intercept": tr.intercept,
             "residual_rms": tr.residual_rms, "mass": tr.mass}
            for tr in tracks
        ]
    if "dispersion" in cfg.outputs:
        cmd_dispersion(cfg.theta, 1025, outdir / "dispersion.csv")
        record["dispersion_file"] = "dispersion.csv"
    record["timing_seconds"] = time.perf_counter() - start
    io_mod.write_result_record(outdir / "result.json", record)
    return record


def _flatness_record(cfg, coin, dist, t):
    sigma0 = cfg.initial.envelope.sigma0
    if sigma0 is None:
        raise SchemaError("flatness output requires an envelope with sigma0")
    if t <= 0:
        return {"transient": True}
    pred = env_mod.flat_top_prediction(sigma0, coin, float(t))
    if pred.transient:
        return {"transient": True, "predicted_w": pred.w}
    rep = analysis.flatness(dist, pred)
    return {
        "transient": False,
        "predicted_w": rep.predicted_w,
        "plateau_window": rep.plateau_window,
        "plateau_mean": rep.plateau_mean,
        "ripple_rms": rep.ripple_rms,
        "level_error": rep.level_error,
        "edge_sharpness": rep.edge_sharpness,
    }


def _run_configs(configs: list[RunConfig], base_dir, parallel: int) -> list[dict]:
    paths = [c.output_path for c in configs]
    if len(set(paths)) != len(paths):
        raise SchemaError("runs must use distinct output_path values")
    if parallel > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(lambda c: cmd_simulate(c, base_dir), configs))
    return [cmd_simulate(c, base_dir) for c in configs]


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwline",
        description="Coined quantum walk on the line: simulation and analysis",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a configured simulation")
    src = p_sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="path to a run config JSON")
    src.add_argument("--preset", help=f"bundled preset, one of {PRESETS[1:]}")
    p_sim.add_argument("--output-dir", default=".", help="base directory for outputs")
    p_sim.add_argument("--parallel", type=int, default=1,
                       help="worker threads for multi-run configs")

    p_disp = sub.add_parser("dispersion", help="export omega(k) and vg(k) as CSV")
    p_disp.add_argument("--preset", help="bundled preset (fig1)")
    p_disp.add_argument("--theta", type=float, help="bias angle in radians")
    p_disp.add_argument("--samples", type=int, help="number of rows (default 1025)")
    p_disp.add_argument("--output", help="CSV path (default dispersion.csv)")

    p_pred = sub.add_parser("predict", help="closed-form predictions as JSON")
    p_pred.add_argument("--kind", required=True,
                        choices=["gaussian-width", "flat-top", "talbot"])
    p_pred.add_argument("--sigma0", type=float)
    p_pred.add_argument("--theta", type=float)
    p_pred.add_argument("--t", type=float)
    p_pred.add_argument("--lambda", dest="lam", type=float)
    p_pred.add_argument("--output", help="also write the JSON to this path")

    p_cmp = sub.add_parser("compare", help="distance between two distribution CSVs")
    p_cmp.add_argument("file_a")
    p_cmp.add_argument("file_b")
    p_cmp.add_argument("--metric", default="L1", choices=["L1", "Linf"])
    return parser


def _dispatch(args) -> int:
    if args.command == "simulate":
        if args.preset:
            raw = _load_preset(args.preset)
            if raw.get("command") == "dispersion":
                raise SchemaError(
                    f"preset {args.preset!r} is a dispersion preset"
                )
            configs = ([io_mod.run_config_from_dict(r) for r in raw["runs"]]
                       if "runs" in raw else [io_mod.run_config_from_dict(raw)])
        else:
            configs = io_mod.load_config(args.config)
        records = _run_configs(configs, args.output_dir, args.parallel)
        for rec in records:
            print(json.dumps({
                "output_path": rec["config"]["output_path"],
                "samples": len(rec["samples"]),
                "timing_seconds": rec["timing_seconds"],
            }))
        return 0
    if args.command == "dispersion":
        theta, samples, output = args.theta, args.samples, args.output
        if args.preset:
            raw = _load_preset(args.preset)
            if raw.get("command") != "dispersion":
                raise SchemaError(f"preset {args.preset!r} is not a dispersion preset")
            theta = theta if theta is not None else raw["theta"]
            samples = samples if samples is not None else raw["samples"]
            output = output if output is not None else raw["output"]
        if theta is None:
            raise ValueError("dispersion requires --theta (or a preset)")
        path = cmd_dispersion(theta, samples or 1025, output or "dispersion.csv")
        print(json.dumps({"output": str(path), "samples": samples or 1025}))
        return 0
    if args.command == "predict":
        result = cmd_predict(args.kind, sigma0=args.sigma0, theta=args.theta,
                             t=args.t, lam=args.lam)
        text = json.dumps(result, indent=2)
        print(text)
        if args.output:
            Path(args.output).write_text(text + "\n")
        return 0
    if args.command == "compare":
        print(json.dumps(cmd_compare(args.file_a, args.file_b, args.metric),
                         indent=2))
        return 0
    raise ValueError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except Exception as exc:  # machine-readable failure contract
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr, indent=2)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
