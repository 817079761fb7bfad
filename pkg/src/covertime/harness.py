"""Experiment runner: validated configs, seeded replicates, summaries and CSV output.

Replicate ``i`` always runs on ``substream_seed(master_seed, i)``, and records
are written in replicate order, so the output bytes do not depend on the
worker count or on scheduling. ``runtime_ms`` is written as 0 unless
``record_runtime`` is set, since wall-clock time would break that guarantee.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import predictors
from .rng import MASK64, substream_seed

EXPERIMENTS = (
    "cover-torus",
    "gamma-cover",
    "alpha-radius",
    "cover-disk",
    "bm-cover",
    "chain-mc",
    "chain-exact",
    "green-selftest",
    "predict-table",
)
DETERMINISTIC = ("chain-exact", "green-selftest", "predict-table")
STATISTICS = ("mean", "median", "stderr", "quantile")
RECORD_HEADER = ["experiment", "replicate", "seed", "params_json", "value", "runtime_ms"]
SUMMARY_HEADER = ["experiment", "statistic", "value", "predictor", "ratio", "band_low", "band_high", "pass"]


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    replicates: int = 1
    master_seed: int = 0
    output_path: str = ""
    record_runtime: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {"experiment", "params", "replicates", "master_seed", "output_path", "record_runtime"}
        extra = set(data) - known - {"band", "jsonl_path", "summary_path"}
        if extra:
            raise ConfigError(sorted(extra)[0], "unknown config key")
        if "experiment" not in data:
            raise ConfigError("experiment", "missing")
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass(frozen=True)
class ResultRecord:
    experiment: str
    replicate: int
    seed: int
    params: dict
    value: float
    runtime_ms: int = 0


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    statistic: str
    value: float
    predictor_value: float | None = None
    ratio: float | None = None


@dataclass(frozen=True)
class ReportRow:
    summary: SummaryRow
    band: tuple[float, float]
    passed: bool


# -- experiments -----------------------------------------------------------------

def _int_param(params, name, default=None, low=None):
    if name not in params:
        if default is None:
            raise ConfigError(f"params.{name}", "missing")
        return default
    v = params[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"params.{name}", "must be an integer")
    if low is not None and v < low:
        raise ConfigError(f"params.{name}", f"must be >= {low}")
    return v


def _float_param(params, name, default=None):
    if name not in params:
        if default is None:
            raise ConfigError(f"params.{name}", "missing")
        return float(default)
    v = params[name]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"params.{name}", "must be a number")
    return float(v)


def _chain_params(p):
    from .excursion_chain import ChainParams

    try:
        return ChainParams(_int_param(p, "n"), _float_param(p, "a"))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError("params", str(exc)) from None


def _bm_settings(p):
    eps = _float_param(p, "eps")
    if not 0 < eps < 0.5:
        raise ConfigError("params.eps", "must lie in (0, 1/2)")
    dt = _float_param(p, "dt", (eps / 8.0) ** 2)
    if not 0 < dt <= (eps / 8.0) ** 2:
        raise ConfigError("params.dt", "must lie in (0, (eps/8)^2]")
    res = _int_param(p, "resolution", math.ceil(4.0 / eps))
    if res < math.ceil(4.0 / eps):
        raise ConfigError("params.resolution", "must be >= ceil(4/eps)")
    margin = p.get("margin")
    if margin is not None and not 0 <= margin < eps:
        raise ConfigError("params.margin", "must lie in [0, eps)")
    return eps, dt, res, margin


def validate(config: ExperimentConfig) -> None:
    """Check every field against the target module's preconditions."""
    if config.experiment not in EXPERIMENTS:
        raise ConfigError("experiment", f"unknown experiment {config.experiment!r}")
    if isinstance(config.replicates, bool) or not isinstance(config.replicates, int) or config.replicates < 1:
        raise ConfigError("replicates", "must be a positive integer")
    if not isinstance(config.master_seed, int) or not 0 <= config.master_seed <= MASK64:
        raise ConfigError("master_seed", "must be a 64-bit unsigned integer")
    if not isinstance(config.params, dict):
        raise ConfigError("params", "must be an object")
    p = config.params
    exp = config.experiment
    if exp == "cover-torus":
        _int_param(p, "n", low=1)
    elif exp == "gamma-cover":
        _int_param(p, "n", low=4)
        g = _float_param(p, "gamma")
        if not 0 < g < 1:
            raise ConfigError("params.gamma", "must lie in (0, 1)")
    elif exp == "alpha-radius":
        _int_param(p, "n", low=4)
        a = _float_param(p, "alpha")
        if not 0 < a <= 1:
            raise ConfigError("params.alpha", "must lie in (0, 1]")
    elif exp == "cover-disk":
        _int_param(p, "n", low=4)
        if p.get("measure", "log-time") not in ("log-time", "excursions"):
            raise ConfigError("params.measure", "must be 'log-time' or 'excursions'")
    elif exp == "bm-cover":
        _bm_settings(p)
    elif exp == "chain-mc":
        cp = _chain_params(p)
        if p.get("method", "NB-chain") not in ("NB-chain", "Y-chain"):
            raise ConfigError("params.method", "must be 'NB-chain' or 'Y-chain'")
        if "level" in p:
            _int_param(p, "level")
            if not 2 <= p["level"] <= cp.n:
                raise ConfigError("params.level", f"must lie in 2..{cp.n}")
    elif exp == "chain-exact":
        _chain_params(p)
    elif exp == "green-selftest":
        side = _int_param(p, "grid_side", 1024)
        if side < 256 or side & (side - 1):
            raise ConfigError("params.grid_side", "must be a power of two >= 256")
        cutoff = p.get("cutoff", [0.15, 0.35])
        if not (isinstance(cutoff, (list, tuple)) and len(cutoff) == 2 and 0 < cutoff[0] < cutoff[1] < 0.5):
            raise ConfigError("params.cutoff", "must be [r1, r2] with 0 < r1 < r2 < 1/2")
    elif exp == "predict-table":
        kind = p.get("kind", "torus-cover")
        if kind not in predictors.KINDS:
            raise ConfigError("params.kind", f"unknown prediction kind {kind!r}")
        try:
            _predict_table(p)
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError("params", str(exc)) from None


def _predict_table(p) -> float:
    args = {k: v for k, v in p.items() if k != "kind"}
    if p.get("kind", "torus-cover") in ("torus-cover", "gamma-cover") and "n" not in args:
        raise ConfigError("params.n", "missing")
    return predictors.predict(predictors.PredictionKind(p.get("kind", "torus-cover"), args))


def _green_residual(p) -> float:
    from .green_fn import build_green, grid_coords

    side = p.get("grid_side", 1024)
    table = build_green(side, tuple(p.get("cutoff", [0.15, 0.35])))
    return laplacian_residual(table.g_values, table.grid_side, grid_coords(side), p.get("min_radius", 0.05))


def laplacian_residual(g: np.ndarray, side: int, coords: np.ndarray, min_radius: float) -> float:
    """Largest ``|Δg - 1|`` over grid points farther than ``min_radius`` from the origin.

    Fourth-order five-point stencil in each direction.
    """
    h2 = (1.0 / side) ** 2
    gf = np.where(np.isfinite(g), g, 0.0)
    lap = np.zeros_like(gf)
    for axis in (0, 1):
        lap += (
            -np.roll(gf, 2, axis) + 16 * np.roll(gf, 1, axis) - 30 * gf
            + 16 * np.roll(gf, -1, axis) - np.roll(gf, -2, axis)
        ) / (12.0 * h2)
    r = np.hypot(coords[:, None], coords[None, :])
    return float(np.abs(lap - 1.0)[r > min_radius].max())


def _simulate(experiment: str, p: dict, seed: int):
    if experiment == "cover-torus":
        from .lattice_walk import cover_time_torus

        return cover_time_torus(p["n"], seed).cover_steps
    if experiment == "gamma-cover":
        from .lattice_walk import time_to_uncovered_radius

        return time_to_uncovered_radius(p["n"], p["gamma"], seed)
    if experiment == "alpha-radius":
        from .lattice_walk import radius_at_fraction

        radius = radius_at_fraction(p["n"], p["alpha"], seed)
        return math.log(radius) / math.log(p["n"]) if radius > 0 else -math.inf
    if experiment == "cover-disk":
        from .lattice_walk import disk_cover_z2

        res = disk_cover_z2(p["n"], seed)
        if p.get("measure", "log-time") == "excursions":
            return res.n_excursions
        return res.log_t_n / math.log(p["n"]) ** 2
    if experiment == "bm-cover":
        from .torus_bm import BmConfig, cover_time_bm

        eps, dt, res, margin = _bm_settings(p)
        return cover_time_bm(eps, BmConfig(dt, seed), res, margin=margin)
    if experiment == "chain-mc":
        from .excursion_chain import is_n_successful, simulate_counts

        cp = _chain_params(p)
        counts = simulate_counts(cp, p.get("method", "NB-chain"), seed)
        if "level" in p:
            return counts.level(p["level"])
        return int(is_n_successful(counts, cp))
    if experiment == "chain-exact":
        from .excursion_chain import q_bar_exact

        return q_bar_exact(_chain_params(p))
    if experiment == "green-selftest":
        return _green_residual(p)
    if experiment == "predict-table":
        return _predict_table(p)
    raise ConfigError("experiment", f"unknown experiment {experiment!r}")  # pragma: no cover


def _run_one(task):
    experiment, params, replicate, seed, timed = task
    start = time.perf_counter()
    value = _simulate(experiment, params, seed)
    elapsed = int(round((time.perf_counter() - start) * 1000)) if timed else 0
    return ResultRecord(experiment, replicate, seed, params, value, elapsed)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list[ResultRecord]:
    """All replicates of ``config``, sorted by replicate index.

    Deterministic experiments produce a single record whatever ``replicates`` says.
    """
    validate(config)
    count = 1 if config.experiment in DETERMINISTIC else config.replicates
    tasks = [
        (config.experiment, config.params, i, substream_seed(config.master_seed, i), config.record_runtime)
        for i in range(count)
    ]
    if workers <= 1 or count == 1:
        records = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, tasks, chunksize=max(1, count // (4 * workers))))
    return sorted(records, key=lambda r: r.replicate)


# -- aggregation -----------------------------------------------------------------

def predictor_for(experiment: str, params: dict) -> float | None:
    """Reference value an experiment's mean (or median) is compared with, if any."""
    if experiment == "cover-torus":
        return predictors.torus_cover(params["n"]) if params["n"] >= 2 else None
    if experiment == "gamma-cover":
        return predictors.gamma_cover(params["n"], params["gamma"])
    if experiment == "alpha-radius":
        return predictors.alpha_exponent(params["alpha"])
    if experiment == "bm-cover":
        return predictors.bm_cover(params["eps"])
    if experiment == "chain-mc":
        from .excursion_chain import p_bar, q_bar_exact

        cp = _chain_params(params)
        if "level" in params:
            mean = float(cp.top)
            for j in range(params["level"], cp.n):
                mean *= p_bar(j) / (1.0 - p_bar(j))
            return mean
        return math.exp(q_bar_exact(cp))
    if experiment == "chain-exact":
        cp = _chain_params(params)
        return -cp.zeta * math.lgamma(cp.n + 1)
    if experiment == "predict-table":
        return _predict_table(params)
    return None


def aggregate(records: list[ResultRecord], statistic: str, q: float = 0.5) -> SummaryRow:
    if not records:
        raise ValueError("no records to aggregate")
    names = {r.experiment for r in records}
    if len(names) != 1:
        raise ValueError(f"mixed experiments: {sorted(names)}")
    if statistic not in STATISTICS:
        raise ValueError(f"unknown statistic {statistic!r}")
    ordered = sorted(records, key=lambda r: r.replicate)
    values = [float(r.value) for r in ordered]
    n = len(values)
    if statistic == "mean":
        value = math.fsum(values) / n
    elif statistic == "median":
        value = float(statistics.median(values))
    elif statistic == "stderr":
        if n == 1:
            value = 0.0
        else:
            mean = math.fsum(values) / n
            value = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1) / n)
    else:
        if not 0 <= q <= 1:
            raise ValueError("quantile level must lie in [0, 1]")
        value = float(np.quantile(np.array(values), q))
    experiment = ordered[0].experiment
    pred = predictor_for(experiment, ordered[0].params) if statistic != "stderr" else None
    ratio = value / pred if pred not in (None, 0) else None
    return SummaryRow(experiment, statistic, value, pred, ratio)


def compare_to_predictor(summary: SummaryRow, tolerance_band: tuple[float, float]) -> ReportRow:
    if summary.predictor_value is None or summary.ratio is None:
        raise ValueError("summary has no predictor value")
    low, high = tolerance_band
    return ReportRow(summary, (float(low), float(high)), bool(low <= summary.ratio <= high))


# -- output ----------------------------------------------------------------------

def format_value(v) -> str:
    """Shortest round-trip text for floats, plain digits for integers."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def params_json(params: dict) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def _open_out(path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="")


def write_records(records: list[ResultRecord], path, jsonl_path=None) -> None:
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_HEADER)
        for r in records:
            w.writerow([r.experiment, r.replicate, r.seed, params_json(r.params), format_value(r.value), r.runtime_ms])
    if jsonl_path:
        with _open_out(jsonl_path) as fh:
            for r in records:
                row = {
                    "experiment": r.experiment, "replicate": r.replicate, "seed": r.seed,
                    "params": r.params, "value": format_value(r.value), "runtime_ms": r.runtime_ms,
                }
                fh.write(json.dumps(row, sort_keys=True, separators=(",", ":")) + "\n")


def write_summary(rows, path) -> None:
    """Summary CSV; ``rows`` may mix SummaryRow and ReportRow."""
    with _open_out(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for row in rows:
            if isinstance(row, ReportRow):
                s, band, ok = row.summary, row.band, str(row.passed).lower()
            else:
                s, band, ok = row, (None, None), ""
            cells = [s.value, s.predictor_value, s.ratio, band[0], band[1]]
            w.writerow([s.experiment, s.statistic] + ["" if c is None else format_value(c) for c in cells] + [ok])
