"""File formats and run configuration.

Distribution CSV schema: header ``x,P,re_R,im_R,re_L,im_L``, one row per
site, numbers serialized with 17 significant digits so a read-back
reproduces every double exactly.  Amplitude fields are left empty for
engines that only produce densities.  Run configs and result records are
JSON; config field names follow the domain types verbatim.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .initial import CoinChoice, EnvelopeSpec, InitialConditionSpec
from .walk import ProbabilityDistribution, WalkerState

CSV_HEADER = ["x", "P", "re_R", "im_R", "re_L", "im_L"]

ENGINES = ("map", "spectral", "continuum")
OUTPUTS = ("distribution", "moments", "flatness", "dispersion", "packets")


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_distribution_csv(
    path, dist: ProbabilityDistribution, state: WalkerState | None = None
) -> None:
    """Write one site per row; amplitudes included when a state is given."""
    if state is not None and (
        state.x_min != dist.x_min or state.R.size != dist.P.size
    ):
        raise ValueError("state window does not match the distribution")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for i, x in enumerate(dist.positions):
            row = [str(int(x)), _fmt(dist.P[i])]
            if state is not None:
                row += [
                    _fmt(state.R[i].real), _fmt(state.R[i].imag),
                    _fmt(state.L[i].real), _fmt(state.L[i].imag),
                ]
            else:
                row += ["", "", "", ""]
            writer.writerow(row)


def read_distribution_csv(
    path, t: int = 0
) -> tuple[ProbabilityDistribution, WalkerState | None]:
    """Read a distribution CSV; returns the state too if amplitudes present."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise SchemaError(f"unexpected CSV header {header!r} in {path}")
        xs, Ps, amps = [], [], []
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise SchemaError(f"malformed row {row!r} in {path}")
            xs.append(int(row[0]))
            Ps.append(float(row[1]))
            if row[2] != "":
                amps.append([float(v) for v in row[2:6]])
            elif amps:
                raise SchemaError(f"mixed amplitude presence in {path}")
    if not xs:
        raise SchemaError(f"empty distribution file {path}")
    x0 = xs[0]
    if xs != list(range(x0, x0 + len(xs))):
        raise SchemaError(f"sites must be consecutive in {path}")
    dist = ProbabilityDistribution(t=t, x_min=x0, P=np.array(Ps))
    state = None
    if amps:
        if len(amps) != len(xs):
            raise SchemaError(f"mixed amplitude presence in {path}")
        a = np.array(amps)
        state = WalkerState(
            t=t, x_min=x0, R=a[:, 0] + 1j * a[:, 1], L=a[:, 2] + 1j * a[:, 3]
        )
    return dist, state


def coin_choice_from_dict(d: dict) -> CoinChoice:
    if not isinstance(d, dict):
        raise SchemaError("coin must be an object")
    if "spinor" in d:
        pair = d["spinor"]
        try:
            a, b = pair
            return CoinChoice(spinor=(complex(a[0], a[1]), complex(b[0], b[1])))
        except (TypeError, ValueError, IndexError) as exc:
            raise SchemaError(
                "coin.spinor must be [[re, im], [re, im]]"
            ) from exc
    if "eigen" in d:
        sel = d["eigen"]
        if not isinstance(sel, dict) or "k0" not in sel or "s" not in sel:
            raise SchemaError("coin.eigen must carry k0 and s")
        return CoinChoice(k0=float(sel["k0"]), s=int(sel["s"]))
    raise SchemaError("coin must contain either 'spinor' or 'eigen'")


def coin_choice_to_dict(coin: CoinChoice) -> dict:
    if coin.spinor is not None:
        a, b = coin.spinor
        return {"spinor": [[a.real, a.imag], [b.real, b.imag]]}
    return {"eigen": {"k0": coin.k0, "s": coin.s}}


def envelope_spec_from_dict(d: dict) -> EnvelopeSpec:
    if not isinstance(d, dict) or "family" not in d:
        raise SchemaError("envelope must be an object with a 'family'")
    known = {"family", "sigma0", "sigmaG", "lambda", "x0", "quad_phase", "support"}
    extra = set(d) - known
    if extra:
        raise SchemaError(f"unknown envelope fields {sorted(extra)}")
    return EnvelopeSpec(
        family=d["family"],
        sigma0=d.get("sigma0"),
        sigmaG=d.get("sigmaG"),
        lambda_=d.get("lambda"),
        x0=float(d.get("x0", 0.0)),
        quad_phase=d.get("quad_phase"),
        support=d.get("support"),
    )


def envelope_spec_to_dict(env: EnvelopeSpec) -> dict:
    out = {"family": env.family}
    for key, val in (
        ("sigma0", env.sigma0), ("sigmaG", env.sigmaG), ("lambda", env.lambda_),
        ("quad_phase", env.quad_phase), ("support", env.support),
    ):
        if val is not None:
            out[key] = val
    out["x0"] = env.x0
    return out


def initial_spec_from_dict(d: dict) -> InitialConditionSpec:
    if not isinstance(d, dict):
        raise SchemaError("initial must be an object")
    for key in ("envelope", "carrier_k0", "coin"):
        if key not in d:
            raise SchemaError(f"initial.{key} is required")
    return InitialConditionSpec(
        envelope=envelope_spec_from_dict(d["envelope"]),
        carrier_k0=float(d["carrier_k0"]),
        coin=coin_choice_from_dict(d["coin"]),
    )


def initial_spec_to_dict(spec: InitialConditionSpec) -> dict:
    return {
        "envelope": envelope_spec_to_dict(spec.envelope),
        "carrier_k0": spec.carrier_k0,
        "coin": coin_choice_to_dict(spec.coin),
    }


@dataclass(frozen=True)
class RunConfig:
    """One simulation run: engine, bias angle, initial state, and outputs."""

    theta: float
    engine: str
    initial: InitialConditionSpec
    t_max: int
    sample_times: tuple[int, ...]
    outputs: tuple[str, ...]
    output_path: str
    truncation: object | None = None  # continuum engine only: 1|2|3|"exact"
    grid_halfwidth: int | None = None  # continuum engine grid override
    periodic_grid: bool = False
    n_periods: int = 8

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise SchemaError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.t_max < 0:
            raise SchemaError("t_max must be non-negative")
        bad = [t for t in self.sample_times if not 0 <= t <= self.t_max]
        if bad:
            raise SchemaError(f"sample_times outside [0, t_max]: {bad}")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise SchemaError(f"unknown outputs {sorted(unknown)}")
        if self.engine == "continuum" and self.truncation is None:
            raise SchemaError("engine=continuum requires a truncation field")


def run_config_from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise SchemaError("config must be an object")
    required = {"theta", "engine", "initial", "t_max", "sample_times",
                "outputs", "output_path"}
    missing = required - set(d)
    if missing:
        raise SchemaError(f"config missing fields {sorted(missing)}")
    known = required | {"truncation", "grid_halfwidth", "periodic_grid", "n_periods"}
    extra = set(d) - known
    if extra:
        raise SchemaError(f"unknown config fields {sorted(extra)}")
    return RunConfig(
        theta=float(d["theta"]),
        engine=str(d["engine"]),
        initial=initial_spec_from_dict(d["initial"]),
        t_max=int(d["t_max"]),
        sample_times=tuple(int(t) for t in d["sample_times"]),
        outputs=tuple(str(o) for o in d["outputs"]),
        output_path=str(d["output_path"]),
        truncation=d.get("truncation"),
        grid_halfwidth=d.get("grid_halfwidth"),
        periodic_grid=bool(d.get("periodic_grid", False)),
        n_periods=int(d.get("n_periods", 8)),
    )


def run_config_to_dict(cfg: RunConfig) -> dict:
    out = {
        "theta": cfg.theta,
        "engine": cfg.engine,
        "initial": initial_spec_to_dict(cfg.initial),
        "t_max": cfg.t_max,
        "sample_times": list(cfg.sample_times),
        "outputs": list(cfg.outputs),
        "output_path": cfg.output_path,
    }
    if cfg.truncation is not None:
        out["truncation"] = cfg.truncation
    if cfg.grid_halfwidth is not None:
        out["grid_halfwidth"] = cfg.grid_halfwidth
    if cfg.periodic_grid:
        out["periodic_grid"] = True
        out["n_periods"] = cfg.n_periods
    return out


def load_config(path) -> list[RunConfig]:
    """Load a config file; a top-level {"runs": [...]} yields several runs."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config {path} is not valid JSON: {exc}") from exc
    if isinstance(raw, dict) and "runs" in raw:
        return [run_config_from_dict(r) for r in raw["runs"]]
    return [run_config_from_dict(raw)]


def write_result_record(path, record: dict) -> None:
    with open(path, "w") as fh:
        json.dump(record, fh, indent=2)
        fh.write("\n")


def read_result_record(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
