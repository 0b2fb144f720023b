"""
尤度の計算

結果の検証と要約への還元、確率（密度）、尤度カーネル、SLP ペアの判定を提供します。
ベルヌーイ族は有理数で厳密に、正規族は scipy の浮動小数点で計算します。
"""

import logging
import math
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from slp_lab.config import LabConfig
from slp_lab.errors import InvalidInputError, InvariantViolationError
from slp_lab.experiment.models import (
    BernoulliSeq, BernoulliSummary, Binomial, Birnbaumized, ExperimentModel,
    ExperimentResult, LikelihoodKernel, Mixture, MixtureOutcome, NegBinomial,
    NormalFixedN, NormalOptionalStopping, NormalSummary, Number, Outcome,
    ParameterSpace, SlpPair, as_fraction,
)

# ロガーの設定
logger = logging.getLogger(__name__)

ResultLike = Union[ExperimentResult, Tuple[ExperimentModel, Outcome]]

_CONFIG = LabConfig()


def _mismatch(model: ExperimentModel, outcome: Outcome, reason: str) -> InvalidInputError:
    return InvalidInputError(
        f"Outcome {outcome.describe()} does not match {model.describe()}: {reason}"
    )


def canonical_outcome(model: ExperimentModel, outcome: Outcome) -> Outcome:
    """
    結果をモデルに照らして検証し、正準形（要約）に還元する

    試行列は要約に還元され、混合実験の結果は成分ごとに再帰的に還元されます。

    Args:
        model: 実験モデル
        outcome: 観測結果

    Returns:
        正準化された結果

    Raises:
        InvalidInputError: 結果がモデルに適合しない場合
    """
    if isinstance(model, Binomial):
        if isinstance(outcome, BernoulliSeq):
            if outcome.trials != model.n_trials:
                raise _mismatch(model, outcome, f"expected {model.n_trials} trials")
            return BernoulliSummary(outcome.successes, outcome.trials)
        if isinstance(outcome, BernoulliSummary):
            if outcome.trials != model.n_trials:
                raise _mismatch(model, outcome, f"expected {model.n_trials} trials")
            return outcome
        raise _mismatch(model, outcome, "expected a Bernoulli outcome")

    if isinstance(model, NegBinomial):
        if isinstance(outcome, BernoulliSeq):
            if outcome.bits[-1] != 1:
                raise _mismatch(model, outcome, "sampling stops on a success")
            if outcome.successes != model.r_target:
                raise _mismatch(model, outcome, f"expected exactly {model.r_target} successes")
            return BernoulliSummary(outcome.successes, outcome.trials)
        if isinstance(outcome, BernoulliSummary):
            if outcome.successes != model.r_target:
                raise _mismatch(model, outcome, f"expected exactly {model.r_target} successes")
            return outcome
        raise _mismatch(model, outcome, "expected a Bernoulli outcome")

    if isinstance(model, NormalFixedN):
        if not isinstance(outcome, NormalSummary):
            raise _mismatch(model, outcome, "expected a normal summary")
        if outcome.n != model.n:
            raise _mismatch(model, outcome, f"expected n={model.n}")
        return outcome

    if isinstance(model, NormalOptionalStopping):
        if not isinstance(outcome, NormalSummary):
            raise _mismatch(model, outcome, "expected a normal summary")
        if outcome.n > model.n_max:
            raise _mismatch(model, outcome, f"n exceeds n_max={model.n_max}")
        boundary = model.boundary(outcome.n)
        # 境界値そのものは停止平均の下限として許容する
        if outcome.mean < boundary - 1e-12 * abs(boundary):
            raise _mismatch(model, outcome, f"mean lies below the stopping boundary {boundary!r}")
        return outcome

    if isinstance(model, (Mixture, Birnbaumized)):
        if not isinstance(outcome, MixtureOutcome):
            raise _mismatch(model, outcome, "expected a mixture outcome carrying its index j")
        component = model.components[outcome.component_index - 1]
        return MixtureOutcome(outcome.component_index, canonical_outcome(component, outcome.inner))

    raise InvalidInputError(f"Unknown experiment model: {model!r}")


def validate_param(space: ParameterSpace, param: Number) -> Number:
    """
    パラメータ値を検証する

    Returns:
        ベルヌーイ族では Fraction、正規族では float

    Raises:
        InvalidInputError: パラメータ空間の外にある場合
    """
    if isinstance(param, bool):
        raise InvalidInputError(f"Parameter must be numeric, got {param!r}")
    if space is ParameterSpace.BERNOULLI:
        theta = as_fraction(param)
        if not 0 < theta < 1:
            raise InvalidInputError(f"theta must lie in the open interval (0,1), got {param!r}")
        return theta
    try:
        mu = float(param)
    except (TypeError, ValueError):
        raise InvalidInputError(f"mu must be a real number, got {param!r}")
    if not math.isfinite(mu):
        raise InvalidInputError(f"mu must be finite, got {param!r}")
    return mu


def likelihood_kernel(model: ExperimentModel, outcome: Outcome) -> LikelihoodKernel:
    """
    尤度カーネルを抽出する

    pmf(model, outcome, θ) = kernel.evaluate(θ) がすべての θ で成り立ち、
    kernel.constant は θ を含みません。

    Raises:
        InvalidInputError: 結果がモデルに適合しない場合
    """
    canonical = canonical_outcome(model, outcome)

    if isinstance(model, (Mixture, Birnbaumized)):
        j = canonical.component_index
        component = model.components[j - 1]
        weight = model.weights[j - 1]
        return likelihood_kernel(component, outcome.inner).scaled(weight)

    if isinstance(model, (Binomial, NegBinomial)):
        r, n = canonical.successes, canonical.trials
        if isinstance(outcome, BernoulliSeq):
            # 試行列そのものの確率には係数が付かない
            constant = Fraction(1)
        elif isinstance(model, Binomial):
            constant = Fraction(math.comb(n, r))
        else:
            constant = Fraction(math.comb(n - 1, r - 1))
        return LikelihoodKernel(
            family=ParameterSpace.BERNOULLI, constant=constant, successes=r, failures=n - r,
        )

    # 正規族：x̄ の密度 N(μ, σ²/n) の正規化定数
    sigma = float(model.sigma)
    standard_error = sigma / math.sqrt(canonical.n)
    constant = float(stats.norm.pdf(0.0, loc=0.0, scale=standard_error))
    return LikelihoodKernel(
        family=ParameterSpace.NORMAL_MEAN, constant=constant,
        mean=float(canonical.mean), n=canonical.n, sigma=sigma,
    )


def pmf(model: ExperimentModel, outcome: Outcome, param: Number) -> Number:
    """
    f(outcome; param) を計算する

    ベルヌーイ族の要約・試行列では厳密な有理数、正規族では x̄ の密度（float）を返します。
    混合実験では w_j·f_j(x) を返します。

    Raises:
        InvalidInputError: 結果の不適合またはパラメータが空間外の場合
    """
    value = validate_param(model.parameter_space, param)
    canonical = canonical_outcome(model, outcome)

    if isinstance(model, (Mixture, Birnbaumized)):
        j = canonical.component_index
        weight = model.weights[j - 1]
        inner = pmf(model.components[j - 1], outcome.inner, value)
        if isinstance(inner, Fraction):
            return weight * inner
        return float(weight) * inner

    if model.parameter_space is ParameterSpace.BERNOULLI:
        return likelihood_kernel(model, outcome).evaluate(value)

    standard_error = float(model.sigma) / math.sqrt(canonical.n)
    return float(stats.norm.pdf(canonical.mean, loc=value, scale=standard_error))


def log_pmf(model: ExperimentModel, outcome: Outcome, param: Number) -> float:
    """log f(outcome; param)（正規族の裾でのアンダーフローを避ける）"""
    value = validate_param(model.parameter_space, param)
    canonical = canonical_outcome(model, outcome)

    if isinstance(model, (Mixture, Birnbaumized)):
        j = canonical.component_index
        weight = model.weights[j - 1]
        return math.log(weight) + log_pmf(model.components[j - 1], outcome.inner, value)

    if model.parameter_space is ParameterSpace.BERNOULLI:
        probability = likelihood_kernel(model, outcome).evaluate(value)
        if probability <= 0:
            return -math.inf
        return math.log(probability.numerator) - math.log(probability.denominator)

    standard_error = float(model.sigma) / math.sqrt(canonical.n)
    return float(stats.norm.logpdf(canonical.mean, loc=value, scale=standard_error))


def as_result(value: ResultLike) -> ExperimentResult:
    """(model, outcome) の組を ExperimentResult に変換する"""
    if isinstance(value, ExperimentResult):
        return value
    try:
        model, outcome = value
    except (TypeError, ValueError):
        raise InvalidInputError(f"Expected an (ExperimentModel, Outcome) pair, got {value!r}")
    return ExperimentResult(model, outcome)


def default_grid(space: ParameterSpace, points: int = _CONFIG.grid_points) -> Tuple[Number, ...]:
    """比例性チェックの既定グリッド（ベルヌーイ族は有理数、正規族は [-3, 3]）"""
    if points < 1:
        raise InvalidInputError(f"Grid needs at least one point, got {points}")
    if space is ParameterSpace.BERNOULLI:
        return tuple(Fraction(k, points + 1) for k in range(1, points + 1))
    return tuple(float(x) for x in np.linspace(-3.0, 3.0, points))


def check_slp_pair(
    a: ResultLike,
    b: ResultLike,
    grid: Optional[Sequence[Number]] = None,
    tol: float = _CONFIG.ratio_tol,
) -> Optional[SlpPair]:
    """
    2 つの (実験, 結果) の尤度が比例するかを判定する

    ベルヌーイ族同士はカーネルの厳密比較で判定し、それ以外はグリッド上の
    対数尤度比のばらつき（相対 tol 未満）で判定します。

    Args:
        a: 1 つ目の (実験, 結果)
        b: 2 つ目の (実験, 結果)
        grid: 判定に使うパラメータ値（Noneの場合は既定グリッド）
        tol: 比の相対ばらつきの許容値

    Returns:
        比例する場合は定数 c 付きの SlpPair、しない場合は None

    Raises:
        InvalidInputError: パラメータ空間の不一致、空のグリッド、pmf がゼロの点がある場合
    """
    first, second = as_result(a), as_result(b)
    space = first.model.parameter_space
    if second.model.parameter_space is not space:
        raise InvalidInputError(
            f"Parameter spaces differ: {first.model.describe()} vs {second.model.describe()}"
        )

    first = ExperimentResult(first.model, canonical_outcome(first.model, first.outcome))
    second = ExperimentResult(second.model, canonical_outcome(second.model, second.outcome))

    grid = default_grid(space) if grid is None else tuple(grid)
    if not grid:
        raise InvalidInputError("Grid must contain at least one parameter value")
    values = [validate_param(space, param) for param in grid]

    kernel_a = likelihood_kernel(first.model, first.outcome)
    kernel_b = likelihood_kernel(second.model, second.outcome)

    if kernel_a.is_exact and kernel_b.is_exact:
        if kernel_a.shape() != kernel_b.shape():
            logger.debug(f"Kernels differ: {kernel_a.describe()} vs {kernel_b.describe()}")
            return None
        constant = kernel_a.constant / kernel_b.constant
        for theta in values:
            if pmf(first.model, first.outcome, theta) != constant * pmf(second.model, second.outcome, theta):
                raise InvariantViolationError(f"Exact kernels agree but pmfs are not proportional at {theta}")
        return SlpPair(first=first, second=second, constant=constant)

    log_ratios = []
    for value in values:
        log_a = log_pmf(first.model, first.outcome, value)
        log_b = log_pmf(second.model, second.outcome, value)
        if not (math.isfinite(log_a) and math.isfinite(log_b)):
            raise InvalidInputError(f"Likelihoods must be strictly positive on the grid (at {value!r})")
        log_ratios.append(log_a - log_b)

    spread = max(log_ratios) - min(log_ratios)
    if math.expm1(spread) > tol:
        logger.debug(f"Likelihood ratio varies on the grid (log spread {spread!r})")
        return None

    constant = math.exp(float(np.mean(log_ratios)))
    return SlpPair(first=first, second=second, constant=constant)


def find_slp_partner(model: ExperimentModel, outcome: Outcome) -> SlpPair:
    """
    ベルヌーイ族の結果に対して、もう一方のサンプリング規則での SLP ペアを作る

    (Binomial{n}, r) ↔ (NegBinomial{r}, n)。r = 0 の二項結果にはペアがありません。

    Returns:
        元の結果を first、相手を second とする SlpPair

    Raises:
        InvalidInputError: ペアが存在しない場合
    """
    canonical = canonical_outcome(model, outcome)
    if isinstance(model, Binomial):
        if canonical.successes == 0:
            raise InvalidInputError("A binomial outcome with zero successes has no negative-binomial partner")
        partner = ExperimentResult(NegBinomial(canonical.successes), canonical)
    elif isinstance(model, NegBinomial):
        partner = ExperimentResult(Binomial(canonical.trials), canonical)
    else:
        raise InvalidInputError(f"No SLP partner construction for {model.describe()}")

    pair = check_slp_pair((model, canonical), partner)
    if pair is None:
        raise InvariantViolationError(f"Constructed partner is not proportional: {partner.describe()}")
    return pair
