"""Replication studies: event-history generation and estimator comparison.

One replication draws a history from known true parameters (per-cause Poisson
counts, then times as T * U^(1/beta) with U uniform), fits every requested
method under the distinct-shape model, and scores points by mean relative
error and mean squared error and intervals by coverage.

Determinism contract: replication r always uses the random stream with
stream_index r, partial sums are accumulated over fixed-size chunks of
replications, and chunks are combined in index order.  Worker count therefore
changes wall-clock time only; reports are bit-identical for any parallelism.
"""
from __future__ import annotations

import concurrent.futures
import json
from dataclasses import dataclass

import numpy as np

from .data import FailureHistory, FailureRecord, cause_stats
from .errors import DomainError, StudyError, ValidationError
from .inference import (
    ALL_METHODS,
    Method,
    Model,
    bayes_points,
    cmle,
    credible_interval,
    jeffreys_posterior,
    mle_distinct,
    reference_posterior,
    wald_interval,
)
from .model import PlpCauseParams, SystemParams
from .numerics import RandomSource, sample_poisson

_CHUNK = 512  # fixed accumulation granularity; part of the determinism contract


@dataclass(frozen=True)
class Scenario:
    """True parameters plus study size, master seed, and interval level."""

    params: SystemParams
    replications: int
    master_seed: int
    level: float = 0.95
    name: str | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.replications, int) and self.replications >= 1):
            raise DomainError(f"replications must be a positive integer, got {self.replications!r}")
        if not (isinstance(self.master_seed, int) and 0 <= self.master_seed < 2**64):
            raise DomainError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed!r}")
        if not (0.0 < self.level < 1.0):
            raise DomainError(f"level must lie in (0, 1), got {self.level!r}")


@dataclass(frozen=True)
class McRow:
    parameter: str
    method: Method
    mre: float
    mse: float
    cp: float


@dataclass(frozen=True)
class McReport:
    """Study results: one row per parameter and method, plus usage counters.

    Replications where any cause has fewer than two failures are discarded
    from every method's accumulators alike, keeping the comparison paired;
    the discard count is reported rather than hidden.
    """

    scenario_name: str
    master_seed: int
    replications: int
    replications_used: int
    replications_discarded: int
    level: float
    true_values: tuple[tuple[str, float], ...]
    rows: tuple[McRow, ...]

    def to_csv(self) -> str:
        lines = [
            f"# scenario={self.scenario_name}",
            f"# seed={self.master_seed}",
            f"# replications={self.replications}",
            f"# used={self.replications_used}",
            f"# discarded={self.replications_discarded}",
            f"# level={self.level!r}",
            "# true: " + " ".join(f"{k}={v!r}" for k, v in self.true_values),
            "parameter,method,mre,mse,cp",
        ]
        lines.extend(f"{r.parameter},{r.method.value},{r.mre!r},{r.mse!r},{r.cp!r}"
                     for r in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "scenario": self.scenario_name,
            "seed": self.master_seed,
            "replications": self.replications,
            "used": self.replications_used,
            "discarded": self.replications_discarded,
            "level": self.level,
            "true": {k: v for k, v in self.true_values},
            "rows": [
                {"parameter": r.parameter, "method": r.method.value,
                 "mre": r.mre, "mse": r.mse, "cp": r.cp}
                for r in self.rows
            ],
        }
        return json.dumps(payload, indent=2) + "\n"

    def row(self, parameter: str, method: Method) -> McRow:
        for r in self.rows:
            if r.parameter == parameter and r.method == method:
                return r
        raise KeyError(f"no row for ({parameter}, {method})")


def make_scenario(betas, alphas, T, replications=10_000, seed=42, level=0.95,
                  name=None) -> Scenario:
    """Convenience constructor from parallel beta/alpha sequences."""
    if len(betas) != len(alphas):
        raise DomainError("beta and alpha sequences must have equal length")
    causes = tuple(PlpCauseParams(float(b), float(a), j)
                   for j, (b, a) in enumerate(zip(betas, alphas), start=1))
    return Scenario(SystemParams(causes, float(T)), int(replications), int(seed),
                    float(level), name)


#: The five study presets exercised throughout the package's reports.
PRESET_SCENARIOS: dict[str, Scenario] = {
    "scenario1": make_scenario((1.5, 1.0), (6.45, 2.75), 5.5, name="scenario1"),
    "scenario2": make_scenario((1.75, 1.25), (26.46, 3.11), 6.5, name="scenario2"),
    "scenario3": make_scenario((1.5, 0.8), (5.59, 14.50), 5.0, name="scenario3"),
    "scenario4": make_scenario((1.6, 0.7), (6.59, 15.12), 5.0, name="scenario4"),
    "scenario5": make_scenario((0.25, 2.0), (8.46, 100.0), 20.0, name="scenario5"),
}


def parse_scenario(text: str, name: str | None = None) -> Scenario:
    """Parse the flat key-value scenario format.

    Keys: ``beta`` and ``alpha`` (bracketed lists), ``T``, and optional
    ``replications``, ``seed``, ``level``.  Lines starting with ``#`` are
    comments.
    """
    import ast

    values: dict[str, object] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, _, rhs = line.partition("=")
        key = key.strip()
        try:
            values[key] = ast.literal_eval(rhs.strip())
        except (ValueError, SyntaxError):
            raise ValidationError(f"line {line_no}: cannot parse value {rhs.strip()!r}") from None
    missing = [k for k in ("beta", "alpha", "T") if k not in values]
    if missing:
        raise ValidationError(f"scenario file is missing keys: {', '.join(missing)}")
    betas, alphas = values["beta"], values["alpha"]
    if not isinstance(betas, (list, tuple)) or not isinstance(alphas, (list, tuple)):
        raise ValidationError("beta and alpha must be bracketed lists, e.g. beta = [1.5, 1.0]")
    return make_scenario(betas, alphas, values["T"],
                         replications=values.get("replications", 10_000),
                         seed=values.get("seed", 42),
                         level=values.get("level", 0.95),
                         name=name)


def simulate_history(scenario: Scenario, rng: RandomSource) -> FailureHistory:
    """Draw one failure history from the scenario's true parameters.

    Per cause: a Poisson(alpha_j) count, then that many times T * U^(1/beta_j)
    with U uniform on (0, 1); the merged, time-sorted record is returned.
    Empty histories are valid outputs.
    """
    system = scenario.params
    T = system.truncation_time
    all_times: list[np.ndarray] = []
    all_causes: list[np.ndarray] = []
    for cause in system.causes:
        count = sample_poisson(cause.alpha, rng)
        if count == 0:
            continue
        u = rng.uniforms(count)
        all_times.append(T * u ** (1.0 / cause.beta))
        all_causes.append(np.full(count, cause.cause_id, dtype=np.int64))
    if not all_times:
        return FailureHistory((), T, system.num_causes)
    times = np.concatenate(all_times)
    causes = np.concatenate(all_causes)
    order = np.argsort(times)
    records = tuple(FailureRecord(float(t), int(c))
                    for t, c in zip(times[order], causes[order]))
    return FailureHistory(records, T, system.num_causes)


def _parameter_names(system: SystemParams) -> list[str]:
    p = system.num_causes
    return [f"beta_{j}" for j in range(1, p + 1)] + [f"alpha_{j}" for j in range(1, p + 1)]


def _true_vector(system: SystemParams) -> list[float]:
    return [c.beta for c in system.causes] + [c.alpha for c in system.causes]


def _chunk_sums(scenario: Scenario, methods: tuple[Method, ...],
                start: int, stop: int):
    """Accumulate sums of theta_hat/theta, (theta_hat-theta)^2, and coverage
    hits for replications [start, stop), in replication order."""
    system = scenario.params
    p = system.num_causes
    truth = _true_vector(system)
    names = _parameter_names(system)
    level = scenario.level
    n_params = 2 * p
    n_methods = len(methods)
    rel = np.zeros((n_methods, n_params))
    sq = np.zeros((n_methods, n_params))
    cover = np.zeros((n_methods, n_params))
    used = 0
    discarded = 0
    for r in range(start, stop):
        rng = RandomSource(scenario.master_seed, r)
        history = simulate_history(scenario, rng)
        stats = cause_stats(history)
        if min(stats.counts) < 2:
            discarded += 1
            continue
        used += 1
        for m, method in enumerate(methods):
            if method in (Method.MLE, Method.CMLE):
                est = mle_distinct(stats) if method is Method.MLE else cmle(stats, Model.DISTINCT)
                points = list(est.beta) + list(est.alpha)
                intervals = [wald_interval(stats, method, name, level) for name in names]
            else:
                post = (jeffreys_posterior(stats) if method is Method.JEFFREYS
                        else reference_posterior(stats))
                pts = bayes_points(post)
                points = list(pts.beta) + list(pts.alpha)
                intervals = [credible_interval(post, name, level) for name in names]
            for k in range(n_params):
                theta = truth[k]
                theta_hat = points[k]
                rel[m, k] += theta_hat / theta
                sq[m, k] += (theta_hat - theta) ** 2
                lo, hi = intervals[k]
                cover[m, k] += 1.0 if lo <= theta <= hi else 0.0
    return rel, sq, cover, used, discarded


def run_study(scenario: Scenario, methods: tuple[Method, ...] = ALL_METHODS,
              workers: int = 1) -> McReport:
    """Run the full replication study and assemble the report.

    Raises StudyError when every replication was discarded.  Results are a
    pure function of the scenario (including master_seed) and the method set;
    see the module docstring for why worker count cannot change them.
    """
    if not methods:
        raise DomainError("at least one method is required")
    if not (isinstance(workers, int) and workers >= 1):
        raise DomainError(f"workers must be a positive integer, got {workers!r}")
    methods = tuple(methods)
    M = scenario.replications
    chunks = [(start, min(start + _CHUNK, M)) for start in range(0, M, _CHUNK)]
    if workers == 1 or len(chunks) == 1:
        partials = [_chunk_sums(scenario, methods, a, b) for a, b in chunks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_chunk_sums, scenario, methods, a, b) for a, b in chunks]
            partials = [f.result() for f in futures]
    p = scenario.params.num_causes
    rel = np.zeros((len(methods), 2 * p))
    sq = np.zeros_like(rel)
    cover = np.zeros_like(rel)
    used = 0
    discarded = 0
    for c_rel, c_sq, c_cover, c_used, c_discarded in partials:
        rel += c_rel
        sq += c_sq
        cover += c_cover
        used += c_used
        discarded += c_discarded
    if used == 0:
        raise StudyError("every replication was discarded (some cause below 2 failures); "
                         "increase the expected counts or the replication budget")
    names = _parameter_names(scenario.params)
    truth = _true_vector(scenario.params)
    rows = tuple(
        McRow(names[k], method, float(rel[m, k] / used), float(sq[m, k] / used),
              float(cover[m, k] / used))
        for k in range(2 * p)
        for m, method in enumerate(methods)
    )
    return McReport(
        scenario_name=scenario.name or "custom",
        master_seed=scenario.master_seed,
        replications=M,
        replications_used=used,
        replications_discarded=discarded,
        level=scenario.level,
        true_values=tuple(zip(names, truth)),
        rows=rows,
    )
