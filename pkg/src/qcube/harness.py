"""Monte Carlo experiment runner.

A configuration names a parameter grid (n values x one probability family),
a trial count, a base seed, and a set of per-trial checks.  Each (n, trial)
pair gets the seed base_seed XOR hash(n, trial), so trials are decorrelated
while the whole run remains a pure function of the config.  Per-trial
failures become data in the trial record; they never abort the run.  The one
exception is the hard floor lambda_max >= sqrt(max degree) - tolerance: any
violating trial marks the whole run failed.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import analysis, spectral, theory
from ._rng import pair_hash
from .errors import ConfigError, DomainError
from .families import ProbabilityFamily, parse_family
from .sampler import EdgeProbability, sample_subgraph

THREADS_ENV_VAR = "QCUBE_THREADS"

CHECK_ORDER = (
    "lambda_vs_sqrt_delta",
    "delta_vs_kappa",
    "empty_prob",
    "decomposition_bound",
    "eigenvalue_count",
    "two_step_diagnostics",
    "subcube_census",
)

_CSV_COLUMNS = (
    "n", "trial", "seed", "edges", "max_degree", "kappa", "lambda_max",
    "lambda_sq_minus_delta", "components", "largest_component_edges",
)

# convergence tolerance for per-trial eigenvalue estimates (distinct from the
# check tolerance, which governs the inequality slack)
_SPECTRAL_TOL = 1e-10


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple[int, ...]
    family: ProbabilityFamily
    trials: int
    base_seed: int = 0
    checks: tuple[str, ...] = ("lambda_vs_sqrt_delta",)
    tolerance: float = 1e-8
    output_path: str | None = None
    output_format: str = "csv"
    alpha: float = 0.5
    certificate_min_degree: int = 3
    threads: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        for n in self.n_values:
            if not 1 <= n <= 30:
                raise ConfigError(f"n_values entry {n} outside [1, 30]")
        for check in self.checks:
            if check not in CHECK_ORDER:
                raise ConfigError(f"unknown check {check!r}; valid: {', '.join(CHECK_ORDER)}")


class _Required:
    pass


_REQUIRED = _Required()


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat key = value configuration format."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val.strip()

    def take(key, parser, default=_REQUIRED):
        if key not in values:
            if default is _REQUIRED:
                raise ConfigError(f"missing required field {key!r}")
            return default
        raw = values.pop(key)
        try:
            return parser(raw)
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(f"field {key!r}: {exc}") from exc

    n_values = take("n_values", lambda s: tuple(int(x) for x in s.split(",") if x.strip()))
    family = take("family", parse_family)
    trials = take("trials", int)
    base_seed = take("base_seed", int, 0)
    checks = take("checks", _parse_checks, ("lambda_vs_sqrt_delta",))
    tolerance = take("tolerance", float, 1e-8)
    output_path = take("output", str, None)
    output_format = take("format", _parse_format, "csv")
    alpha = take("alpha", float, 0.5)
    cert_min = take("certificate_min_degree", int, 3)
    threads = take("threads", int, None)
    if values:
        raise ConfigError(f"unknown field {sorted(values)[0]!r}")
    return ExperimentConfig(
        n_values=n_values, family=family, trials=trials, base_seed=base_seed,
        checks=checks, tolerance=tolerance, output_path=output_path,
        output_format=output_format, alpha=alpha, certificate_min_degree=cert_min,
        threads=threads,
    )


def _parse_checks(raw: str) -> tuple[str, ...]:
    names = [x.strip() for x in raw.split(",") if x.strip()]
    for name in names:
        if name not in CHECK_ORDER:
            raise ConfigError(f"unknown check {name!r}; valid: {', '.join(CHECK_ORDER)}")
    return tuple(sorted(set(names), key=CHECK_ORDER.index))


def _parse_format(raw: str) -> str:
    if raw not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {raw!r}")
    return raw


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial: int
    seed: int
    edges: int
    max_degree: int
    kappa: int
    lambda_max: float
    lambda_sq_minus_delta: float
    components: int
    largest_component_edges: int
    checks: dict[str, int] = field(default_factory=dict)
    all_trees: bool = False
    largest_is_star: bool = False
    diagnostic_counts: tuple[int, int, int, int] | None = None
    error: str | None = None

    @property
    def star_law_holds(self) -> bool:
        """Every component a tree, a star among the largest: lambda^2 = max degree."""
        return self.all_trees and self.largest_is_star


def trial_seed(base_seed: int, n: int, trial: int) -> int:
    return (base_seed ^ pair_hash(n, trial)) & ((1 << 64) - 1)


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    aggregates: list[dict]
    hard_failure: bool


def _run_one_trial(config: ExperimentConfig, n: int, trial: int, p: EdgeProbability,
                   kappa_n: int) -> TrialRecord:
    seed = trial_seed(config.base_seed, n, trial)
    sample = sample_subgraph(n, p, seed)
    profile = analysis.degree_profile(sample)
    census = analysis.components(sample)
    est = spectral.lambda_max_by_components(sample, tolerance=_SPECTRAL_TOL, seed=seed)
    delta = profile.max_degree
    largest = census.largest_component_edges()
    record = TrialRecord(
        n=n, trial=trial, seed=seed,
        edges=sample.edge_total,
        max_degree=delta,
        kappa=kappa_n,
        lambda_max=est.value,
        lambda_sq_minus_delta=est.value * est.value - delta,
        components=len(census.components),
        largest_component_edges=largest,
        all_trees=all(c.is_tree for c in census.components),
        largest_is_star=any(c.is_star and c.edge_count == largest
                            for c in census.components) or largest == 0,
    )

    checks: dict[str, int] = {}
    error = None
    diag = None
    for check in config.checks:
        try:
            if check == "lambda_vs_sqrt_delta":
                checks[check] = int(est.value >= math.sqrt(delta) - config.tolerance)
            elif check == "delta_vs_kappa":
                checks[check] = int(abs(delta - kappa_n) <= 2)
            elif check == "empty_prob":
                checks[check] = int(sample.edge_total == 0)
            elif check == "decomposition_bound":
                cuts = theory.thresholds(n, p.p)
                part = theory.vertex_partition(sample, cuts)
                result = spectral.decomposition_bound(sample, part, config.tolerance,
                                                      seed=seed)
                checks[check] = int(result.bound_holds)
            elif check == "eigenvalue_count":
                checks[check] = int(_certificate_check(sample, config))
            elif check == "two_step_diagnostics":
                cuts = theory.diagnostic_cuts(n, p.p)
                part = theory.vertex_partition(sample, theory.thresholds(n, p.p))
                diag = _diagnostic_counts(sample, part, cuts)
                checks[check] = int(all(c == 0 for c in diag))
            elif check == "subcube_census":
                checks[check] = int(_census_check(sample, config, p.p))
        except DomainError as exc:
            checks[check] = 0
            error = f"{check}: {exc}"
    return replace(record, checks=checks, diagnostic_counts=diag, error=error)


def _certificate_check(sample, config: ExperimentConfig) -> bool:
    family = spectral.select_distance3_family(sample, config.certificate_min_degree)
    cert = spectral.eigencount_certificate(sample, family)
    if cert.certified_count == 0:
        return True
    squared = np.sort(spectral.dense_spectrum(sample) ** 2)[::-1]
    count = spectral.eigenvalue_count_at_least(squared, cert.rayleigh_floor)
    return count >= cert.certified_count


def _census_check(sample, config: ExperimentConfig, p: float) -> bool:
    descriptors_dim = analysis.hypercube.subcube_decompose(sample.n, config.alpha)
    f = descriptors_dim[0].fixed_prefix_bits
    sub_n = sample.n - f
    threshold = theory.kappa(sub_n, p) - 2 if p > 0 else 0
    _, high_vertices = analysis.subcube_high_degree_census(sample, config.alpha, threshold)
    needed = (1 << f) / (2.0 * sample.n * sample.n)
    return high_vertices >= needed


def _diagnostic_counts(sample, part, cuts) -> tuple[int, int, int, int]:
    """Sizes of the four bounded vertex sets; all four are zero typically."""
    labels = part.labels
    deg = sample.degrees.astype(np.float64)
    if labels.size == 0:
        return (0, 0, 0, 0)
    matrix = sample.adjacency()
    in23 = (labels >= 2).astype(np.float64)
    in3 = (labels == 3).astype(np.float64)
    deg23 = matrix @ in23
    deg3 = matrix @ in3
    two23 = matrix @ deg23 - in23 * deg
    mask23 = labels >= 2
    mask1 = labels == 1
    mask3 = labels == 3
    c3 = int(np.count_nonzero(two23[mask23] > cuts.two_step_cut))
    row_sums = matrix @ deg
    c4 = int(np.count_nonzero(row_sums[mask1] > cuts.row_sum_cut))
    c5 = int(np.count_nonzero(deg23[mask3] > cuts.cross_degree_cut))
    c6 = int(np.count_nonzero(deg3[mask3] > cuts.top_degree_cut))
    return (c3, c4, c5, c6)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full grid; deterministic given the config at any thread count."""
    tasks = []
    for n in config.n_values:
        p = EdgeProbability.of(config.family.evaluate(n))
        kappa_n = theory.kappa(n, p.p) if p.p > 0 else 0
        for trial in range(config.trials):
            tasks.append((n, trial, p, kappa_n))

    threads = config.threads
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV_VAR, "1"))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(
                lambda t: _run_one_trial(config, t[0], t[1], t[2], t[3]), tasks))
    else:
        records = [_run_one_trial(config, n, t, p, k) for n, t, p, k in tasks]
    records.sort(key=lambda r: (r.n, r.trial))

    aggregates = [_aggregate(config, n, [r for r in records if r.n == n])
                  for n in config.n_values]
    hard_failure = any(
        r.checks.get("lambda_vs_sqrt_delta", 1) == 0 for r in records)
    return ExperimentResult(config, records, aggregates, hard_failure)


def _aggregate(config: ExperimentConfig, n: int, records: list[TrialRecord]) -> dict:
    trials = len(records)
    p = config.family.evaluate(n)
    edges = np.array([r.edges for r in records], dtype=np.float64)
    deltas = np.array([r.max_degree for r in records], dtype=np.float64)
    lams = np.array([r.lambda_max for r in records], dtype=np.float64)
    out = {
        "n": n,
        "p": p,
        "trials": trials,
        "kappa": records[0].kappa if records else None,
        "mean_edges": float(edges.mean()) if trials else 0.0,
        "se_edges": float(edges.std(ddof=0) / math.sqrt(trials)) if trials else 0.0,
        "mean_max_degree": float(deltas.mean()) if trials else 0.0,
        "mean_lambda_max": float(lams.mean()) if trials else 0.0,
        "star_law_frequency": float(np.mean([r.star_law_holds for r in records]))
        if trials else 0.0,
    }
    for check in config.checks:
        flags = np.array([r.checks.get(check, 0) for r in records], dtype=np.float64)
        freq = float(flags.mean()) if trials else 0.0
        out[f"{check}_frequency"] = freq
        out[f"{check}_se"] = float(math.sqrt(max(freq * (1 - freq), 0.0) / trials)) \
            if trials else 0.0
    if "empty_prob" in config.checks:
        out["empty_prob_oracle"] = theory.empty_graph_prob(n, p)
    return out


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit_csv(result: ExperimentResult, path) -> None:
    """Fixed column order; floats at 17 significant digits; '\\n' line ends."""
    columns = list(_CSV_COLUMNS) + list(result.config.checks)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for r in result.records:
            row = [r.n, r.trial, r.seed, r.edges, r.max_degree, r.kappa,
                   r.lambda_max, r.lambda_sq_minus_delta, r.components,
                   r.largest_component_edges]
            row += [r.checks.get(c, 0) for c in result.config.checks]
            fh.write(",".join(_format_value(v) for v in row) + "\n")


def emit_json(result: ExperimentResult, path) -> None:
    payload = {
        "config": {
            "n_values": list(result.config.n_values),
            "family": result.config.family.describe(),
            "trials": result.config.trials,
            "base_seed": result.config.base_seed,
            "checks": list(result.config.checks),
            "tolerance": result.config.tolerance,
        },
        "records": [
            {
                "n": r.n, "trial": r.trial, "seed": r.seed, "edges": r.edges,
                "max_degree": r.max_degree, "kappa": r.kappa,
                "lambda_max": r.lambda_max,
                "lambda_sq_minus_delta": r.lambda_sq_minus_delta,
                "components": r.components,
                "largest_component_edges": r.largest_component_edges,
                "checks": r.checks,
                "error": r.error,
            }
            for r in result.records
        ],
        "aggregates": result.aggregates,
        "hard_failure": result.hard_failure,
    }
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        json.dump(payload, fh, indent=1, sort_keys=False)
        fh.write("\n")


def load_result_json(path) -> dict:
    with open(path, "r", encoding="ascii") as fh:
        return json.load(fh)


def emit(result: ExperimentResult, output_format: str, path) -> None:
    if output_format == "csv":
        emit_csv(result, path)
    elif output_format == "json":
        emit_json(result, path)
    else:
        raise ConfigError(f"unknown output format {output_format!r}")
