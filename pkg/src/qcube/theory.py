"""Closed-form quantities for the degree structure of G(Q^n, p).

Everything here is computed in log-space through lgamma: the combinatorial
factors span hundreds of orders of magnitude even at desk scale, while their
logs stay small.  The central object is kappa(n, p), the concentration point
of the maximum degree: the largest k whose expected number of degree-k
vertices, 2^n C(n,k) p^k (1-p)^(n-k), is still at least one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    AmbiguousFamilyError,
    DomainError,
    NotApplicableError,
    ThresholdUndefinedError,
)
from .families import FamilyKind, ProbabilityFamily, parse_family
from .sampler import SubgraphSample

LOG2 = math.log(2.0)


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def single_term_log(n: int, p: float, k: int) -> float:
    """log of 2^n C(n,k) p^k (1-p)^(n-k), the expected count of degree-k vertices."""
    if not 0 <= k <= n:
        raise DomainError(f"k must be in [0, {n}], got {k}")
    if p == 0.0:
        return n * LOG2 if k == 0 else -math.inf
    if p == 1.0:
        return n * LOG2 if k == n else -math.inf
    return n * LOG2 + _log_binom(n, k) + k * math.log(p) + (n - k) * math.log1p(-p)


def log_expected_tail_count(n: int, p: float, k: int) -> float:
    """Natural log of the expected number of vertices with degree >= k.

    Evaluated as a log-sum-exp over the binomial upper tail; -inf when the
    expectation is exactly zero.
    """
    if not 1 <= n:
        raise DomainError(f"n must be positive, got {n}")
    if not 0 <= k <= n + 1:
        raise DomainError(f"k must be in [0, {n + 1}], got {k}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must be in [0, 1], got {p}")
    if k > n:
        return -math.inf
    if p == 0.0:
        return n * LOG2 if k == 0 else -math.inf
    if p == 1.0:
        return n * LOG2
    logs = np.array([
        _log_binom(n, l) + l * math.log(p) + (n - l) * math.log1p(-p)
        for l in range(k, n + 1)
    ])
    peak = logs.max()
    return n * LOG2 + peak + math.log(np.exp(logs - peak).sum())


def kappa(n: int, p: float) -> int:
    """Largest k with 2^n C(n,k) p^k (1-p)^(n-k) >= 1; -1 if no k qualifies.

    The criterion uses the single degree-k term, not the tail expectation;
    the two can differ by one near boundaries and the single-term form is
    the definition used throughout this package.
    """
    if not 0.0 < p <= 1.0:
        raise DomainError(f"p must be in (0, 1], got {p}")
    best = -1
    for k in range(n + 1):
        if single_term_log(n, p, k) >= 0.0:
            best = k
    return best


def empty_graph_prob(n: int, p: float) -> float:
    """Exact probability that the sample has no edges: (1-p)^(n 2^(n-1))."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must be in [0, 1], got {p}")
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    edges = n << (n - 1)
    return math.exp(edges * math.log1p(-p))


def regime_one_rule(n: int, p: float) -> bool:
    """Finite-n cut separating polynomially small p from exponentially small."""
    if n < 2:
        raise DomainError("regime rule needs n >= 2")
    if p <= 0.0:
        return False
    return math.log(1.0 / p) <= n / math.log(n) if p < 1.0 else True


@dataclass(frozen=True)
class PartitionThresholds:
    """Degree cuts for the three-way vertex split.

    r_n applies when p is polynomially small, tau_n when exponentially
    small; v2_upper is the corresponding second cut.  At desk scale
    v2_upper can fall below the first cut (the asymptotic ordering has not
    kicked in), so t2 clamps it up to keep the split a partition.
    """

    r_n: float
    tau_n: float | None
    delta_star: float
    v2_upper: float
    uses_tau: bool

    @property
    def t1(self) -> float:
        return self.tau_n if self.uses_tau else self.r_n

    @property
    def t2(self) -> float:
        return max(self.t1, self.v2_upper)

    def to_json_dict(self) -> dict:
        return {
            "r_n": self.r_n,
            "tau_n": self.tau_n,
            "delta_star": self.delta_star,
            "v2_upper": self.v2_upper,
            "uses_tau": self.uses_tau,
        }


def thresholds(n: int, p: float) -> PartitionThresholds:
    """r_n, tau_n, delta_star and the second degree cut for (n, p)."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"p must be in (0, 1), got {p}")
    if n <= 2:
        raise ThresholdUndefinedError("n", f"log log n undefined for n={n}")
    log_pinv = math.log(1.0 / p)
    r_n = max(math.exp(5.0) * n * p, math.exp(math.log(n) / math.log(math.log(n))))
    delta_star = n * LOG2 / log_pinv
    tau_n = None
    if delta_star > math.e:
        tau_n = math.exp(math.log(delta_star) / math.log(math.log(delta_star)))
    uses_tau = not regime_one_rule(n, p)
    if uses_tau:
        if tau_n is None:
            raise ThresholdUndefinedError(
                "delta_star", f"log log undefined: delta_star={delta_star} <= e")
        v2_upper = (n / log_pinv) / (tau_n * tau_n)
    else:
        v2_upper = (n / log_pinv) / (r_n * r_n)
    return PartitionThresholds(r_n, tau_n, delta_star, v2_upper, uses_tau)


@dataclass(frozen=True)
class VertexPartition:
    """Three-way degree split of a sample's support.

    labels[i] in {1, 2, 3} classifies support[i]: degree <= t1, in (t1, t2],
    or above t2.  Isolated vertices implicitly belong to class 1.  The
    assignment is a function of the degree alone.
    """

    support: np.ndarray
    labels: np.ndarray
    thresholds: PartitionThresholds

    def class_members(self, label: int) -> np.ndarray:
        return self.support[self.labels == label]


def vertex_partition(sample: SubgraphSample, cuts: PartitionThresholds) -> VertexPartition:
    degrees = sample.degrees
    labels = np.ones(degrees.size, dtype=np.int8)
    labels[degrees > cuts.t1] = 2
    labels[degrees > cuts.t2] = 3
    return VertexPartition(sample.support, labels, cuts)


def concentration_bounds(n: int, p: float, j: int) -> tuple[float, float]:
    """Leading-order tail bounds for the maximum degree around kappa.

    Returns (bound on Pr(max degree < kappa - j), bound on Pr(max degree >
    kappa + j)); o(1) factors are dropped, so these are guides rather than
    exact bounds.  Only defined for polynomially small p.
    """
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    if not 0.0 < p < 1.0 or not regime_one_rule(n, p):
        raise NotApplicableError(f"(n={n}, p={p}) is not in the polynomially small range")
    q = p * math.log(1.0 / p) / LOG2
    upper_tail = q**j
    ratio = (1.0 / q) ** j
    lower_tail = math.exp(-ratio) if ratio < 700 else 0.0
    return lower_tail, upper_tail


@dataclass(frozen=True)
class DiagnosticCuts:
    """Cut values for the four two-step-count diagnostics.

    For x in the middle/top degree classes: the count of 2-step walks back
    into those classes should stay below two_step_cut; row sums of A^2 on
    the bottom class stay below row_sum_cut; top-class vertices have few
    edges into the middle/top classes (cross_degree_cut) and fewer still
    inside the top class (top_degree_cut).
    """

    two_step_cut: float
    row_sum_cut: float
    cross_degree_cut: float
    top_degree_cut: float
    uses_tau: bool


def diagnostic_cuts(n: int, p: float) -> DiagnosticCuts:
    cuts = thresholds(n, p)
    log_pinv = math.log(1.0 / p)
    if not cuts.uses_tau:
        loglog_n = math.log(math.log(n))
        two_step = (n / log_pinv) * (loglog_n / math.log(n))
        row_sum = cuts.delta_star * (1.0 + 4.0 / loglog_n
                                     + 2.0 * math.log(cuts.r_n) / math.log(n))
        cross = n * LOG2 / (log_pinv * math.log(n))
        top = math.sqrt(cross)
        return DiagnosticCuts(two_step, row_sum, cross, top, False)
    tau = cuts.tau_n
    two_step = n / (log_pinv * tau ** (1.0 / 3.0))
    loglog_pinv = math.log(log_pinv) if log_pinv > 1.0 else None
    if loglog_pinv is None:
        raise ThresholdUndefinedError("p", "log log(1/p) undefined")
    row_sum = cuts.delta_star * (1.0 + 1.0 / loglog_pinv)
    cross = n * LOG2 / (log_pinv * math.sqrt(tau))
    top = math.sqrt(n * LOG2 / (log_pinv * tau))
    return DiagnosticCuts(two_step, row_sum, cross, top, True)


class Regime(Enum):
    I_POLYNOMIAL = "I_polynomial"
    II_EXPONENTIAL_NONRESONANT = "II_exponential_nonresonant"
    III_EXPONENTIAL_RESONANT_K = "III_exponential_resonant_k"
    IV_CRITICAL_NU = "IV_critical_nu"
    V_SUBCRITICAL = "V_subcritical"


@dataclass(frozen=True)
class RegimePrediction:
    """Regime tag and the implied prediction for the largest eigenvalue."""

    regime: Regime
    kappa: int
    predicted_lambda_interval: tuple[float, float]
    expected_tail_at_kappa: float
    expected_tail_above_kappa: float
    resonance_k: int | None = None
    nu: float | None = None

    def to_json_dict(self) -> dict:
        low, high = self.predicted_lambda_interval
        return {
            "regime": self.regime.value,
            "kappa": self.kappa,
            "predicted_lambda_low": low,
            "predicted_lambda_high": high,
            "expected_tail_at_kappa": self.expected_tail_at_kappa,
            "expected_tail_above_kappa": self.expected_tail_above_kappa,
            "resonance_k": self.resonance_k,
            "nu": self.nu,
        }


def exponential_kappa_formula(n: int, p: float) -> int:
    """floor(n log 2 / (log(1/p) - log n)), the exponential-range closed form."""
    denom = math.log(1.0 / p) - math.log(n)
    if denom <= 0:
        raise DomainError("closed form requires p below 1/n")
    return int(math.floor(n * LOG2 / denom))


def classify_regime(n: int, p_family) -> RegimePrediction:
    """Classify a probability family at dimension n and predict lambda_max.

    Classification is family-based: resonance and the critical window are
    properties of the declared sequence p(n), undecidable from one literal
    value, so a bare number raises AmbiguousFamilyError.
    """
    if isinstance(p_family, str):
        p_family = parse_family(p_family)
    if not isinstance(p_family, ProbabilityFamily) or p_family.kind is FamilyKind.LITERAL:
        raise AmbiguousFamilyError(
            "regime classification needs a declared family, not a literal probability")
    if n < 3:
        raise DomainError(f"classification needs n >= 3, got {n}")
    p = p_family.evaluate(n)

    if p_family.kind is FamilyKind.CRITICAL:
        regime: Regime = Regime.IV_CRITICAL_NU
    elif p_family.kind is FamilyKind.SUBCRITICAL:
        regime = Regime.V_SUBCRITICAL
    elif p == 0.0 or p * n * 2.0**n < 1.0 / math.log(n):
        regime = Regime.V_SUBCRITICAL
    elif p_family.resonance() is not None:
        regime = Regime.III_EXPONENTIAL_RESONANT_K
    elif regime_one_rule(n, p):
        regime = Regime.I_POLYNOMIAL
    else:
        regime = Regime.II_EXPONENTIAL_NONRESONANT

    kap = kappa(n, p) if p > 0.0 else 0
    tail_at = math.exp(min(log_expected_tail_count(n, p, max(kap, 0)), 700.0))
    tail_above = math.exp(min(log_expected_tail_count(n, p, max(kap, 0) + 1), 700.0))

    resonance_k = None
    nu = None
    if regime is Regime.I_POLYNOMIAL:
        interval = _polynomial_interval(n, p, kap)
    elif regime is Regime.II_EXPONENTIAL_NONRESONANT:
        root = math.sqrt(exponential_kappa_formula(n, p))
        interval = (root, root)
    elif regime is Regime.III_EXPONENTIAL_RESONANT_K:
        resonance_k = p_family.resonance()
        interval = (math.sqrt(resonance_k - 1), math.sqrt(resonance_k + 1))
    elif regime is Regime.IV_CRITICAL_NU:
        nu = p_family.coefficient
        interval = (0.0, 1.0)
    else:
        interval = (0.0, 0.0)

    return RegimePrediction(
        regime=regime,
        kappa=kap,
        predicted_lambda_interval=interval,
        expected_tail_at_kappa=tail_at,
        expected_tail_above_kappa=tail_above,
        resonance_k=resonance_k,
        nu=nu,
    )


def _polynomial_interval(n: int, p: float, kap: int) -> tuple[float, float]:
    """sqrt(kappa) with the multiplicative slack the finite-n error terms allow."""
    root = math.sqrt(max(kap, 0))
    log_pinv = math.log(1.0 / p)
    if log_pinv <= 1.0 or n <= 2:
        return (0.0, math.inf)
    eps = 1.0 / math.log(log_pinv) + 2.0 * math.log(thresholds(n, p).r_n) / math.log(n)
    return (max(0.0, root * (1.0 - eps)), root * (1.0 + eps))
