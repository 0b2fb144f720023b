"""
十分統計量と因子分解

f(x;θ) = f_T(t;θ)·f_{x|T}(x|t) を全列挙で厳密に確認し、
各モデルの全確率（正規化）を検査します。
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Tuple

from scipy import integrate, stats

from slp_lab.config import LabConfig
from slp_lab.errors import EnumerationLimitError, InvalidInputError, UndefinedAssessmentError
from slp_lab.experiment.likelihood import (
    canonical_outcome, find_slp_partner, pmf, validate_param,
)
from slp_lab.experiment.models import (
    BernoulliSummary, Binomial, Birnbaumized, ExperimentModel, Mixture,
    MixtureOutcome, NegBinomial, NormalFixedN, NormalOptionalStopping,
    Number, Outcome, ParameterSpace,
)

# ロガーの設定
logger = logging.getLogger(__name__)

MAX_BINOMIAL_TRIALS = 24
MAX_SEQUENCES = 2 ** 24
MAX_NEGBINOMIAL_TERMS = 100_000

_CONFIG = LabConfig()


def sufficient_statistic(model: ExperimentModel, outcome: Outcome):
    """
    十分統計量の値を返す

    Binomial は R（成功数）、NegBinomial は N（試行数）、正規族は (x̄, n)。
    混合実験は (j, 成分の統計量)、Birnbaum化実験は T-B の値を返します。

    Raises:
        InvalidInputError: 結果がモデルに適合しない場合
    """
    canonical = canonical_outcome(model, outcome)

    if isinstance(model, Binomial):
        return canonical.successes
    if isinstance(model, NegBinomial):
        return canonical.trials
    if isinstance(model, (NormalFixedN, NormalOptionalStopping)):
        return (canonical.mean, canonical.n)
    if isinstance(model, Birnbaumized):
        from slp_lab.audit.birnbaumization import tb_statistic
        return tb_statistic(model, canonical)
    # Mixture
    j = canonical.component_index
    return (j, sufficient_statistic(model.components[j - 1], canonical.inner))


@dataclass(frozen=True)
class SliceReport:
    """十分統計量の 1 つの値 t に対する条件付き分布の検査結果"""
    statistic: int
    n_sequences: int
    uniform_value: Fraction
    passed: bool


@dataclass(frozen=True)
class FactorizationReport:
    """因子分解の検査結果"""
    model: ExperimentModel
    params: Tuple[Fraction, ...]
    slices: Tuple[SliceReport, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.slices)


def _slice_sequences(model: ExperimentModel, statistic: int) -> Iterator[Tuple[int, ...]]:
    """十分統計量が statistic となる全試行列を生成する"""
    if isinstance(model, Binomial):
        n, r = model.n_trials, statistic
        for positions in itertools.combinations(range(n), r):
            bits = [0] * n
            for position in positions:
                bits[position] = 1
            yield tuple(bits)
    else:
        # NegBinomial：最後の試行が r 回目の成功
        n, r = statistic, model.r_target
        for positions in itertools.combinations(range(n - 1), r - 1):
            bits = [0] * n
            for position in positions:
                bits[position] = 1
            bits[-1] = 1
            yield tuple(bits)


def _slice_size(model: ExperimentModel, statistic: int) -> int:
    if isinstance(model, Binomial):
        return math.comb(model.n_trials, statistic)
    return math.comb(statistic - 1, model.r_target - 1)


def _slice_summary(model: ExperimentModel, statistic: int) -> BernoulliSummary:
    if isinstance(model, Binomial):
        return BernoulliSummary(statistic, model.n_trials)
    return BernoulliSummary(model.r_target, statistic)


def verify_factorization(
    model: ExperimentModel,
    params: Sequence[Number],
    slices: Optional[Sequence[int]] = None,
    max_sequences: int = MAX_SEQUENCES,
) -> FactorizationReport:
    """
    十分統計量による因子分解を全列挙で検査する

    各スライス t の全試行列 x について f(x;θ) = f_T(t;θ)·f_{x|T}(x|t) を有理数で確認し、
    条件付き確率が 1/|スライス| に等しく θ に依存しないことを確かめます。

    Args:
        model: Binomial または NegBinomial
        params: 検査する θ の値（(0,1) の内部）
        slices: 検査する統計量の値（Binomial では省略時に全スライス、NegBinomial では必須）
        max_sequences: 列挙する試行列数の上限

    Returns:
        FactorizationReport

    Raises:
        EnumerationLimitError: 列挙サイズが上限を超える場合
        InvalidInputError: モデル・パラメータ・スライスが不正な場合
    """
    if not isinstance(model, (Binomial, NegBinomial)):
        raise InvalidInputError(f"Factorization is enumerated for Binomial/NegBinomial only, got {model.describe()}")
    if not params:
        raise InvalidInputError("At least one parameter value is required")
    thetas = tuple(validate_param(ParameterSpace.BERNOULLI, param) for param in params)

    if isinstance(model, Binomial):
        if model.n_trials > MAX_BINOMIAL_TRIALS:
            raise EnumerationLimitError(
                f"Binomial enumeration is capped at n_trials <= {MAX_BINOMIAL_TRIALS}, got {model.n_trials}"
            )
        slices = tuple(range(model.n_trials + 1)) if slices is None else tuple(slices)
        for statistic in slices:
            if not 0 <= statistic <= model.n_trials:
                raise InvalidInputError(f"Slice R={statistic} is outside 0..{model.n_trials}")
    else:
        if slices is None:
            raise InvalidInputError("NegBinomial has infinitely many slices; pass the N values to check")
        slices = tuple(slices)
        for statistic in slices:
            if statistic < model.r_target:
                raise InvalidInputError(f"Slice N={statistic} is below r_target={model.r_target}")

    total = sum(_slice_size(model, statistic) for statistic in slices)
    if total > max_sequences:
        raise EnumerationLimitError(f"Enumeration of {total} sequences exceeds the cap of {max_sequences}")

    logger.info(f"Verifying factorization of {model.describe()}: {len(slices)} slices, {total} sequences")

    reports = []
    for statistic in slices:
        size = _slice_size(model, statistic)
        uniform_value = Fraction(1, size)
        summary = _slice_summary(model, statistic)
        passed = True

        for theta in thetas:
            f_t = pmf(model, summary, theta)
            # 試行列の確率は成功・失敗の回数だけで決まる
            success_powers = [theta ** k for k in range(summary.trials + 1)]
            failure_powers = [(1 - theta) ** k for k in range(summary.trials + 1)]
            conditional_total = Fraction(0)
            count = 0
            for bits in _slice_sequences(model, statistic):
                r = sum(bits)
                observed = (r if isinstance(model, Binomial) else len(bits))
                if observed != statistic:
                    passed = False
                f_x = success_powers[r] * failure_powers[len(bits) - r]
                conditional = f_x / f_t
                if conditional != uniform_value or f_x != f_t * uniform_value:
                    passed = False
                conditional_total += conditional
                count += 1
            if count != size or conditional_total != 1:
                passed = False

        logger.debug(f"Slice {statistic}: {size} sequences, conditional {uniform_value}, passed={passed}")
        reports.append(SliceReport(statistic=statistic, n_sequences=size,
                                   uniform_value=uniform_value, passed=passed))

    return FactorizationReport(model=model, params=thetas, slices=tuple(reports))


@dataclass(frozen=True)
class NormalizationReport:
    """全確率の検査結果"""
    model: ExperimentModel
    param: Number
    total: Number
    exact: bool
    tol: float
    truncation_point: Optional[int] = None

    @property
    def passed(self) -> bool:
        if self.exact and self.truncation_point is None:
            return self.total == 1
        return abs(1 - float(self.total)) <= self.tol


def normalization_check(
    model: ExperimentModel,
    param: Number,
    tol: float = _CONFIG.normalization_tol,
) -> NormalizationReport:
    """
    モデルの全確率が 1 であることを検査する

    有限の標本空間では有理数で厳密に総和し、NegBinomial は N = r, r+1, … の部分和が
    1 − tol に達するまで加え、その打ち切り点を報告します。正規族は x̄ の密度を数値積分します。

    Raises:
        InvalidInputError: パラメータまたは tol が不正な場合
        UndefinedAssessmentError: 任意停止モデル（閉形式がない）の場合
    """
    if isinstance(tol, bool) or not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol!r}")
    value = validate_param(model.parameter_space, param)

    if isinstance(model, Binomial):
        total = sum(pmf(model, BernoulliSummary(k, model.n_trials), value)
                    for k in range(model.n_trials + 1))
        return NormalizationReport(model=model, param=value, total=total, exact=True, tol=tol)

    if isinstance(model, NegBinomial):
        total = Fraction(0)
        n = model.r_target
        while True:
            total += pmf(model, BernoulliSummary(model.r_target, n), value)
            if 1 - total <= tol:
                break
            n += 1
            if n - model.r_target > MAX_NEGBINOMIAL_TERMS:
                raise InvalidInputError(
                    f"Partial sum did not reach 1 - {tol} within {MAX_NEGBINOMIAL_TERMS} terms"
                )
        logger.debug(f"{model.describe()} partial sum truncated at N={n}")
        return NormalizationReport(model=model, param=value, total=total, exact=True,
                                   tol=tol, truncation_point=n)

    if isinstance(model, NormalFixedN):
        standard_error = float(model.sigma) / math.sqrt(model.n)
        lower, upper = value - 40 * standard_error, value + 40 * standard_error
        total, _ = integrate.quad(
            lambda x: stats.norm.pdf(x, loc=value, scale=standard_error),
            lower, upper, points=[value], epsabs=tol / 10, epsrel=tol / 10, limit=200,
        )
        return NormalizationReport(model=model, param=value, total=float(total), exact=False, tol=tol)

    if isinstance(model, NormalOptionalStopping):
        raise UndefinedAssessmentError(
            "The optional-stopping model has no closed-form normalization; use the stopping simulator"
        )

    # Mixture / Birnbaumized
    parts = [normalization_check(component, value, tol) for component in model.components]
    weights = model.weights
    exact = all(part.exact for part in parts)
    if exact:
        total = weights[0] * parts[0].total + weights[1] * parts[1].total
    else:
        total = float(weights[0]) * float(parts[0].total) + float(weights[1]) * float(parts[1].total)
    truncations = [part.truncation_point for part in parts if part.truncation_point is not None]
    return NormalizationReport(
        model=model, param=value, total=total, exact=exact, tol=tol,
        truncation_point=max(truncations) if truncations else None,
    )


def catalog(include_optional_stopping: bool = False) -> Dict[str, ExperimentModel]:
    """
    例に現れるモデルのカタログ

    任意停止モデルは閉形式の正規化を持たないため、既定では含めません。
    """
    binomial = Binomial(20)
    negbinomial = NegBinomial(6)
    example1_pair = find_slp_partner(binomial, BernoulliSummary(6, 20))
    models: Dict[str, ExperimentModel] = {
        "example1-binomial": binomial,
        "example1-negbinomial": negbinomial,
        "example2-fixed-n": NormalFixedN(169, 1.0),
        "example3-instruments": Mixture(Fraction(1, 2), NormalFixedN(1, 0.01), NormalFixedN(1, 100.0)),
        "binomial-mixture": Mixture(Fraction(1, 2), Binomial(20), Binomial(20)),
        "example1-birnbaumized": Birnbaumized(example1_pair, Fraction(1, 2)),
    }
    if include_optional_stopping:
        models["example2-optional-stopping"] = NormalOptionalStopping(1.0, 169)
    return models
