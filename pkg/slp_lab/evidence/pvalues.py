"""
p 値によるエビデンス評価

成分実験の p 値（条件付き）、混合実験の凸結合（無条件）、
および評価同士の同値判定を提供します。
"""

import logging
import math
import numbers
from fractions import Fraction
from typing import Optional, Union

from slp_lab.config import LabConfig
from slp_lab.errors import InvalidInputError, UndefinedAssessmentError
from slp_lab.evidence.assessment import (
    Direction, EvidenceAssessment, HypothesisSpec, SamplingDistribution,
)
from slp_lab.evidence.normal import (
    normal_cdf, normal_log10_cdf, normal_log10_sf, normal_sf,
)
from slp_lab.experiment import (
    Binomial, Birnbaumized, ExperimentModel, ExperimentResult, Mixture, MixtureOutcome,
    NegBinomial, NormalFixedN, NormalOptionalStopping, Number, Outcome, as_fraction,
    canonical_outcome,
)

# ロガーの設定
logger = logging.getLogger(__name__)

_CONFIG = LabConfig()

Probability = Union[Fraction, float]


def _binomial_tail(n: int, theta: Fraction, lower: int, upper: int) -> Fraction:
    """Σ_{k=lower}^{upper} C(n,k) θ^k (1−θ)^{n−k}（厳密）"""
    total = Fraction(0)
    for k in range(max(lower, 0), min(upper, n) + 1):
        total += math.comb(n, k) * theta ** k * (1 - theta) ** (n - k)
    return total


def p_value(model: ExperimentModel, outcome: Outcome, hyp: HypothesisSpec) -> EvidenceAssessment:
    """
    成分実験の片側 p 値を計算する

    Binomial（less）は P(R ≤ r; θ₀)、NegBinomial（less）は P(N ≥ n; θ₀) を
    「最初の n−1 回の成功が r 回未満」の有限和で厳密に求めます。
    NormalFixedN（greater）は 1 − Φ(√n(x̄ − μ₀)/σ) です。

    Args:
        model: 成分実験（混合・Birnbaum化は不可）
        outcome: 観測結果
        hyp: 帰無仮説と方向

    Returns:
        distribution_used = component-conditional の EvidenceAssessment

    Raises:
        InvalidInputError: 混合実験、不正な仮説、結果の不適合
        UndefinedAssessmentError: 任意停止実験（閉形式がない）
    """
    if isinstance(model, (Mixture, Birnbaumized)):
        raise InvalidInputError(
            f"{model.describe()} is a mixture; use mixture_conditional or the audit assessments"
        )
    if isinstance(model, NormalOptionalStopping):
        raise UndefinedAssessmentError(
            "The optional-stopping p-value has no closed form; estimate it with the stopping simulator"
        )

    canonical = canonical_outcome(model, outcome)
    null = hyp.null_for(model.parameter_space)
    flags = ()

    if isinstance(model, Binomial):
        r, n = canonical.successes, canonical.trials
        if hyp.direction is Direction.LESS:
            p = _binomial_tail(n, null, 0, r)
            event = f"R <= {r}"
        else:
            p = _binomial_tail(n, null, r, n)
            event = f"R >= {r}"
    elif isinstance(model, NegBinomial):
        r, n = canonical.successes, canonical.trials
        if hyp.direction is Direction.LESS:
            # P(N ≥ n) = P(最初の n−1 回で成功が r 回未満)
            p = _binomial_tail(n - 1, null, 0, r - 1)
            event = f"N >= {n}"
        else:
            # P(N ≤ n) = P(n 回で成功が r 回以上)
            p = _binomial_tail(n, null, r, n)
            event = f"N <= {n}"
    else:
        z = math.sqrt(canonical.n) * (float(canonical.mean) - null) / float(model.sigma)
        if hyp.direction is Direction.GREATER:
            p = normal_sf(z)
            log10_p = normal_log10_sf(z)
            event = f"Z >= {z!r}"
        else:
            p = normal_cdf(z)
            log10_p = normal_log10_cdf(z)
            event = f"Z <= {z!r}"
        if p == 0.0:
            logger.warning(f"Normal tail underflows at z={z!r} (log10 p = {log10_p:.3f})")
            flags = ("underflow",)
            event += f", log10 p = {log10_p:.6f}"

    trace = f"P({event}; null={null}) under {model.describe()} = {p}"
    return EvidenceAssessment(
        p_value=p,
        distribution_used=SamplingDistribution.COMPONENT_CONDITIONAL,
        source=ExperimentResult(model, canonical),
        trace=trace,
        flags=flags,
    )


def _probability(name: str, value) -> Probability:
    if isinstance(value, EvidenceAssessment):
        value = value.p_value
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidInputError(f"{name} must be a probability, got {value!r}")
    if not 0 <= value <= 1:
        raise InvalidInputError(f"{name} must lie in [0,1], got {value!r}")
    return value if isinstance(value, Fraction) else float(value)


def mixture_unconditional(
    p_first: Probability,
    p_second: Probability,
    weight_first: Number,
    source: Optional[ExperimentResult] = None,
) -> EvidenceAssessment:
    """
    混合実験の無条件評価：w·p′ + (1−w)·p″

    両方の p 値が有理数なら結果も厳密な有理数になります。

    Raises:
        InvalidInputError: 確率または重みが範囲外の場合
    """
    p_first = _probability("p_first", p_first)
    p_second = _probability("p_second", p_second)
    weight = as_fraction(weight_first)
    if not 0 < weight < 1:
        raise InvalidInputError(f"weight_first must lie in (0,1), got {weight_first!r}")

    if isinstance(p_first, Fraction) and isinstance(p_second, Fraction):
        p = weight * p_first + (1 - weight) * p_second
    else:
        w = float(weight)
        p = w * float(p_first) + (1 - w) * float(p_second)
        p = min(max(p, 0.0), 1.0)

    return EvidenceAssessment(
        p_value=p,
        distribution_used=SamplingDistribution.MIXTURE_UNCONDITIONAL,
        source=source,
        trace=f"{weight} * {p_first} + {1 - weight} * {p_second} = {p}",
    )


def mixture_conditional(mix: Mixture, obs: MixtureOutcome, hyp: HypothesisSpec) -> EvidenceAssessment:
    """
    混合実験の条件付き評価：実際に行われた成分 E^j の標本分布だけを使う

    Returns:
        成分単独の p_value と同一の p 値を持つ評価（trace に j で条件付けたことを記録）

    Raises:
        InvalidInputError: 混合実験でない、成分番号が範囲外、成分結果の不適合
    """
    if not isinstance(mix, Mixture):
        raise InvalidInputError(f"mixture_conditional expects a Mixture, got {type(mix).__name__}")
    if not isinstance(obs, MixtureOutcome):
        raise InvalidInputError(f"mixture_conditional expects a MixtureOutcome, got {type(obs).__name__}")

    j = obs.component_index
    component = mix.components[j - 1]
    standalone = p_value(component, obs.inner, hyp)
    logger.debug(f"Conditioning on randomizer outcome j={j}: {component.describe()}")
    return EvidenceAssessment(
        p_value=standalone.p_value,
        distribution_used=SamplingDistribution.COMPONENT_CONDITIONAL,
        source=ExperimentResult(mix, canonical_outcome(mix, obs)),
        trace=f"conditioned on randomizer outcome j={j}; {standalone.trace}",
        flags=standalone.flags,
    )


def evidence_equivalent(a: EvidenceAssessment, b: EvidenceAssessment,
                        tol: float = _CONFIG.equivalence_tol) -> bool:
    """
    2 つの評価が同値か（|p_a − p_b| ≤ tol、両方が有理数なら厳密に一致）
    """
    if a.is_exact and b.is_exact:
        return a.p_value == b.p_value
    return abs(float(a.p_value) - float(b.p_value)) <= tol
