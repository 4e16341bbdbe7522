"""Estimators for competing-risk power-law processes.

Four methods share one sufficient-statistics input (CauseStats):

* ``mle`` - closed-form maximum likelihood, beta_j = n_j / S_j, alpha_j = n_j;
* ``cmle`` - the bias-corrected point ((n_j - 1) / n_j) * beta_j with Wald
  intervals rebuilt around it;
* ``jeffreys`` / ``reference`` - closed-form objective-Bayes posteriors.  Both
  are products of independent gamma laws; they share the beta marginals
  Gamma(n_j, n_j / beta_hat_j) and differ only in the alpha shapes
  (n_j + 1 for Jeffreys, n_j + 1/2 for the overall-reference prior).

The gamma MAP of the shared beta marginal reproduces the bias-corrected point
exactly, so the Bayes and CMLE point estimates coincide for beta; for alpha
all methods use the unbiased count n_j.  Under the shared-shape model the
Jeffreys posterior has no closed form and is refused explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .data import CauseStats, FailureHistory, cause_stats
from .errors import (
    DomainError,
    EstimationError,
    ImproperPosteriorError,
    UnsupportedModelError,
    ValidationError,
)
from .model import SystemParams, mu_from_alpha
from .numerics import GammaParams, gamma_quantile, normal_quantile


class Model(str, Enum):
    DISTINCT = "distinct"
    SHARED = "shared"


class PriorFamily(str, Enum):
    JEFFREYS = "jeffreys"
    REFERENCE = "reference"


class Method(str, Enum):
    MLE = "mle"
    CMLE = "cmle"
    JEFFREYS = "jeffreys"
    REFERENCE = "reference"


class PointConvention(str, Enum):
    """Bayes point rule for beta: posterior mode (map) or posterior mean."""

    MAP = "map"
    MEAN = "mean"


ALL_METHODS: tuple[Method, ...] = (Method.MLE, Method.CMLE, Method.JEFFREYS, Method.REFERENCE)


@dataclass(frozen=True)
class MlEstimates:
    """Point estimates per cause; beta has one entry per cause, or a single
    pooled entry under the shared-shape model."""

    model: Model
    beta: tuple[float, ...]
    alpha: tuple[float, ...]
    mu: tuple[float, ...]


@dataclass(frozen=True)
class PosteriorSpec:
    """Closed-form posterior: independent gamma laws, one per parameter."""

    prior_family: PriorFamily
    model: Model
    beta_laws: tuple[GammaParams, ...]
    alpha_laws: tuple[GammaParams, ...]

    def law_for(self, parameter: str) -> GammaParams:
        kind, index = _resolve_parameter(parameter, len(self.alpha_laws),
                                         pooled_beta=self.model is Model.SHARED)
        if kind == "beta":
            return self.beta_laws[0 if self.model is Model.SHARED else index - 1]
        return self.alpha_laws[index - 1]

    def counts(self) -> tuple[int, ...]:
        # alpha shapes are n_j + 1/2 (reference) or n_j + 1 (Jeffreys); both
        # offsets are exact in binary, so the counts recover exactly.
        offset = 0.5 if self.prior_family is PriorFamily.REFERENCE else 1.0
        return tuple(int(law.shape - offset) for law in self.alpha_laws)


@dataclass(frozen=True)
class BayesPoints:
    """Bayes point estimates; beta_degenerate flags causes where the
    posterior mode sits at 0 (gamma shape <= 1, i.e. a single failure)."""

    convention: PointConvention
    beta: tuple[float, ...]
    alpha: tuple[float, ...]
    beta_degenerate: tuple[bool, ...]


@dataclass(frozen=True)
class EstimateRow:
    parameter: str
    method: Method
    point: float
    sd: float
    sd_paper_compat: float
    ci_lo: float
    ci_hi: float
    level: float


@dataclass(frozen=True)
class EstimateTable:
    """Per-parameter estimate rows plus any per-cause exclusion warnings."""

    rows: tuple[EstimateRow, ...]
    warnings: tuple[str, ...] = ()


def _check_level(level: float) -> None:
    if not (isinstance(level, (int, float)) and 0.0 < level < 1.0):
        raise DomainError(f"level must lie in (0, 1), got {level!r}")


def _resolve_parameter(parameter: str, p: int, *, pooled_beta: bool) -> tuple[str, int]:
    """Turn 'beta_2' / 'alpha_1' / pooled 'beta' into (kind, cause index)."""
    name = parameter.strip().lower()
    if pooled_beta and name == "beta":
        return "beta", 0
    for kind in ("beta", "alpha"):
        prefix = kind + "_"
        if name.startswith(prefix):
            try:
                index = int(name[len(prefix):])
            except ValueError:
                break
            if not 1 <= index <= p:
                raise DomainError(f"parameter {parameter!r} indexes a cause outside 1..{p}")
            if kind == "beta" and pooled_beta:
                raise DomainError("the shared-shape model has a single pooled 'beta'")
            return kind, index
    raise DomainError(f"unknown parameter name {parameter!r}")


def _require_counts(stats: CauseStats, minimum: int, what: str) -> None:
    bad = [j + 1 for j, n in enumerate(stats.counts) if n < minimum]
    if bad:
        plural = "s" if len(bad) > 1 else ""
        raise EstimationError(
            f"{what} requires at least {minimum} failure(s) per cause; "
            f"cause{plural} {', '.join(map(str, bad))} fall short")


def mle_distinct(stats: CauseStats) -> MlEstimates:
    """Per-cause MLEs beta_j = n_j / S_j, alpha_j = n_j, mu_j = T n_j^(-1/beta_j).

    Exists only when every cause has at least one failure.
    """
    _require_counts(stats, 1, "the distinct-shape MLE")
    T = stats.truncation_time
    beta = tuple(n / s for n, s in zip(stats.counts, stats.log_sums))
    alpha = tuple(float(n) for n in stats.counts)
    mu = tuple(mu_from_alpha(b, a, T) for b, a in zip(beta, alpha))
    return MlEstimates(Model.DISTINCT, beta, alpha, mu)


def mle_shared_shape(stats: CauseStats) -> MlEstimates:
    """Pooled-shape MLE beta = n / S with per-cause alpha_j = n_j.

    Causes without failures get alpha 0 and an infinite scale; their entries
    are placeholders, not estimates, and callers reporting per-cause scales
    must restrict to causes with at least one failure.
    """
    if stats.n == 0:
        raise EstimationError("the shared-shape MLE requires at least one failure")
    T = stats.truncation_time
    beta = stats.n / stats.log_sum_total
    alpha = tuple(float(n) for n in stats.counts)
    mu = tuple(mu_from_alpha(beta, a, T) if a > 0 else math.inf for a in alpha)
    return MlEstimates(Model.SHARED, (beta,), alpha, mu)


def cmle(stats: CauseStats, model: Model = Model.DISTINCT) -> MlEstimates:
    """Bias-corrected MLE: beta scaled by (n - 1) / n, alpha unchanged at n_j.

    The correction makes the beta estimator conditionally unbiased given the
    counts; it degenerates to 0 at a single failure, hence the n >= 2 floor.
    """
    if model is Model.DISTINCT:
        _require_counts(stats, 2, "the bias-corrected MLE")
        base = mle_distinct(stats)
        # (n - 1) / S rather than ((n - 1) / n) * (n / S): same estimator, and
        # bit-identical to the gamma posterior mode it coincides with.
        beta = tuple((n - 1) / s for n, s in zip(stats.counts, stats.log_sums))
    else:
        if stats.n < 2:
            raise EstimationError("the pooled bias-corrected MLE requires at least 2 failures")
        base = mle_shared_shape(stats)
        beta = ((stats.n - 1) / stats.log_sum_total,)
    return MlEstimates(model, beta, base.alpha, base.mu)


def _beta_laws(stats: CauseStats, model: Model) -> tuple[GammaParams, ...]:
    # Gamma(n_j, n_j / beta_hat_j); the rate n_j / beta_hat_j is exactly S_j.
    if model is Model.SHARED:
        return (GammaParams(float(stats.n), stats.log_sum_total),)
    return tuple(GammaParams(float(n), s) for n, s in zip(stats.counts, stats.log_sums))


def _check_proper(stats: CauseStats, family: str) -> None:
    bad = [j + 1 for j, n in enumerate(stats.counts) if n < 1]
    if bad:
        raise ImproperPosteriorError(
            f"the {family} posterior is improper: no failures for cause(s) "
            f"{', '.join(map(str, bad))}")


def reference_posterior(stats: CauseStats, model: Model = Model.DISTINCT) -> PosteriorSpec:
    """Posterior under the overall reference prior.

    A product of independent gamma laws: Gamma(n_j, n_j / beta_hat_j) for each
    beta (pooled to Gamma(n, n / beta_hat) under the shared-shape model) and
    Gamma(n_j + 1/2, 1) for each alpha.  Proper whenever every cause has at
    least one failure.
    """
    _check_proper(stats, "reference")
    alpha_laws = tuple(GammaParams(n + 0.5, 1.0) for n in stats.counts)
    return PosteriorSpec(PriorFamily.REFERENCE, model, _beta_laws(stats, model), alpha_laws)


def jeffreys_posterior(stats: CauseStats, model: Model = Model.DISTINCT) -> PosteriorSpec:
    """Posterior under the Jeffreys prior (distinct-shape model only).

    Shares the beta marginals with the reference posterior; the alpha laws are
    Gamma(n_j + 1, 1).  Under a shared shape the Jeffreys posterior is not a
    product of gamma laws, so that request is refused rather than approximated.
    """
    if model is Model.SHARED:
        raise UnsupportedModelError(
            "the shared-shape Jeffreys posterior has no closed form; "
            "use the reference posterior for pooled-shape inference")
    _check_proper(stats, "Jeffreys")
    alpha_laws = tuple(GammaParams(n + 1.0, 1.0) for n in stats.counts)
    return PosteriorSpec(PriorFamily.JEFFREYS, Model.DISTINCT, _beta_laws(stats, model), alpha_laws)


def alpha_laws_from_counts(counts: tuple[int, ...] | list[int],
                           prior_family: PriorFamily = PriorFamily.REFERENCE,
                           ) -> tuple[GammaParams, ...]:
    """Marginal alpha posteriors from failure counts alone.

    The alpha laws depend on the data only through the counts, so datasets
    whose raw failure times were never published (only totals per cause) still
    admit exact interval estimates for the expected counts.
    """
    offset = 0.5 if prior_family is PriorFamily.REFERENCE else 1.0
    laws = []
    for j, n in enumerate(counts, start=1):
        if not (isinstance(n, int) and n >= 1):
            raise ImproperPosteriorError(f"cause {j}: count must be an integer >= 1, got {n!r}")
        laws.append(GammaParams(n + offset, 1.0))
    return tuple(laws)


def bayes_points(post: PosteriorSpec,
                 convention: PointConvention = PointConvention.MAP) -> BayesPoints:
    """Bayes point estimates from a closed-form posterior.

    beta uses the posterior mode (default) or mean of its gamma marginal; the
    mode is ((n_j - 1) / n_j) * beta_hat_j and hits 0 when n_j = 1, which is
    reported via the degeneracy flags.  alpha always uses the unbiased count
    n_j, which sits between the posterior mode and mean.
    """
    if convention is PointConvention.MAP:
        beta = tuple(law.mode for law in post.beta_laws)
        degenerate = tuple(law.shape <= 1.0 for law in post.beta_laws)
    else:
        beta = tuple(law.mean for law in post.beta_laws)
        degenerate = tuple(False for _ in post.beta_laws)
    alpha = tuple(float(n) for n in post.counts())
    return BayesPoints(convention, beta, alpha, degenerate)


def credible_interval(post: PosteriorSpec, parameter: str, level: float) -> tuple[float, float]:
    """Equal-tail credible interval for one parameter of a posterior."""
    _check_level(level)
    law = post.law_for(parameter)
    lo = gamma_quantile(law, (1.0 - level) / 2.0)
    hi = gamma_quantile(law, (1.0 + level) / 2.0)
    return lo, hi


def wald_interval(stats: CauseStats, method: Method, parameter: str, level: float,
                  model: Model = Model.DISTINCT) -> tuple[float, float]:
    """Asymptotic normal interval around the ML or bias-corrected point.

    Standard errors come from the diagonal observed information evaluated at
    the point: se(beta) = point / sqrt(n_j) and se(alpha) = sqrt(n_j).  The
    interval is reported as-is, without truncation at 0.
    """
    if method not in (Method.MLE, Method.CMLE):
        raise DomainError(f"wald_interval supports mle/cmle, got {method!r}")
    _check_level(level)
    kind, index = _resolve_parameter(parameter, stats.num_causes,
                                     pooled_beta=model is Model.SHARED)
    if method is Method.MLE:
        estimates = mle_distinct(stats) if model is Model.DISTINCT else mle_shared_shape(stats)
    else:
        estimates = cmle(stats, model)
    if kind == "beta":
        point = estimates.beta[0 if model is Model.SHARED else index - 1]
        count = stats.n if model is Model.SHARED else stats.counts[index - 1]
        se = point / math.sqrt(count)
    else:
        point = estimates.alpha[index - 1]
        se = math.sqrt(stats.counts[index - 1])
    z = normal_quantile((1.0 + level) / 2.0)
    return point - z * se, point + z * se


def log_likelihood(params: SystemParams, history: FailureHistory) -> float:
    """Exact log-likelihood of a parameter vector for one observed history.

    In the (beta, alpha) parameterization this is
    sum_j [n_j log beta_j - beta_j S_j + n_j log alpha_j - alpha_j] minus the
    sum of log failure times; the last term does not involve the parameters
    but keeps values comparable across parameterizations.
    """
    if params.num_causes != history.num_causes:
        raise ValidationError(
            f"parameter vector has {params.num_causes} causes, history has {history.num_causes}")
    if params.truncation_time != history.truncation_time:
        raise ValidationError(
            f"truncation time mismatch: params {params.truncation_time}, "
            f"history {history.truncation_time}")
    stats = cause_stats(history)
    total = 0.0
    for cause, n, s in zip(params.causes, stats.counts, stats.log_sums):
        total += n * math.log(cause.beta) - cause.beta * s
        total += n * math.log(cause.alpha) - cause.alpha
    total -= math.fsum(math.log(r.time) for r in history.records)
    return total


def _posterior_for(method: Method, stats: CauseStats, model: Model) -> PosteriorSpec:
    if method is Method.JEFFREYS:
        return jeffreys_posterior(stats, model)
    return reference_posterior(stats, model)


def _restrict(stats: CauseStats, keep: list[int]) -> CauseStats:
    return CauseStats(tuple(stats.counts[j - 1] for j in keep),
                      tuple(stats.log_sums[j - 1] for j in keep),
                      stats.truncation_time)


def build_estimate_table(stats: CauseStats,
                         methods: tuple[Method, ...] = ALL_METHODS,
                         model: Model = Model.DISTINCT,
                         level: float = 0.95,
                         convention: PointConvention = PointConvention.MAP,
                         ) -> EstimateTable:
    """Assemble the full per-parameter estimate table for the chosen methods.

    Causes that fail a method's existence condition (no failures, or a single
    failure for the bias-corrected method) are excluded from that method's
    rows and reported in the warnings instead of aborting the other causes.
    Raises EstimationError when nothing at all is estimable.
    """
    _check_level(level)
    if stats.n == 0:
        raise EstimationError("no failures observed")
    warnings: list[str] = []
    usable = [j for j in range(1, stats.num_causes + 1) if stats.counts[j - 1] >= 1]
    for j in range(1, stats.num_causes + 1):
        if stats.counts[j - 1] == 0:
            warnings.append(f"cause {j}: no failures observed; excluded from estimation")
    method_causes: dict[Method, list[int]] = {}
    for method in methods:
        if method is Method.JEFFREYS and model is Model.SHARED:
            if set(methods) != set(ALL_METHODS):
                raise UnsupportedModelError(
                    "the shared-shape Jeffreys posterior has no closed form")
            warnings.append("jeffreys: no closed-form posterior under the shared-shape "
                            "model; rows omitted")
            method_causes[method] = []
            continue
        if method is Method.CMLE:
            if model is Model.SHARED:
                keep = usable if stats.n >= 2 else []
                if not keep:
                    warnings.append("fewer than 2 failures in total; bias-corrected "
                                    "rows omitted")
            else:
                keep = [j for j in usable if stats.counts[j - 1] >= 2]
                for j in usable:
                    if j not in keep:
                        warnings.append(f"cause {j}: single failure; bias-corrected "
                                        "estimate degenerates at 0; excluded from cmle rows")
            method_causes[method] = keep
        else:
            method_causes[method] = usable
    rows: list[EstimateRow] = []
    z = normal_quantile((1.0 + level) / 2.0)
    parameters: list[tuple[str, int]] = []
    if model is Model.SHARED:
        parameters.append(("beta", 0))
    else:
        parameters.extend(("beta", j) for j in usable)
    parameters.extend(("alpha", j) for j in usable)
    for kind, j in parameters:
        name = kind if j == 0 else f"{kind}_{j}"
        for method in methods:
            keep = method_causes[method]
            if not keep or (j != 0 and j not in keep):
                continue
            sub = _restrict(stats, keep)
            local = 0 if j == 0 else keep.index(j)
            n_j = sub.n if j == 0 else sub.counts[local]
            if method in (Method.MLE, Method.CMLE):
                est = (mle_distinct(sub) if model is Model.DISTINCT else
                       mle_shared_shape(sub)) if method is Method.MLE else cmle(sub, model)
                if kind == "beta":
                    point = est.beta[0 if model is Model.SHARED else local]
                    sd = point / math.sqrt(n_j)
                    compat = sd
                else:
                    point = est.alpha[local]
                    sd = math.sqrt(n_j)
                    compat = sd
                lo, hi = point - z * sd, point + z * sd
            else:
                post = _posterior_for(method, sub, model)
                points = bayes_points(post, convention)
                if kind == "beta":
                    law = post.beta_laws[0 if model is Model.SHARED else local]
                    point = points.beta[0 if model is Model.SHARED else local]
                    sd = law.sd
                    compat = sd
                else:
                    law = post.alpha_laws[local]
                    point = points.alpha[local]
                    sd = law.sd
                    compat = math.sqrt(n_j)
                lo = gamma_quantile(law, (1.0 - level) / 2.0)
                hi = gamma_quantile(law, (1.0 + level) / 2.0)
            rows.append(EstimateRow(name, method, point, sd, compat, lo, hi, level))
    return EstimateTable(tuple(rows), tuple(warnings))
