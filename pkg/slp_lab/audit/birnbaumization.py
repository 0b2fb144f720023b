"""
Birnbaum化：SLP ペアを成分とする拡大実験 E-B と統計量 T-B

T-B はペアの 2 つのメンバーを 1 つの正準な報告 (E′, x′*) にまとめ（添字 j を消去）、
それ以外の結果は添字付きのまま通します。
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from slp_lab.errors import InvalidInputError, InvariantViolationError
from slp_lab.experiment import (
    Birnbaumized, ExperimentResult, MixtureOutcome, NormalSummary, Number, Outcome,
    SlpPair, canonical_outcome, check_slp_pair, pmf,
)

# ロガーの設定
logger = logging.getLogger(__name__)

# 拡大実験 E-B は Birnbaumized バリアントそのもの
BirnbaumExperiment = Birnbaumized

Observation = Union[MixtureOutcome, Tuple[int, Outcome]]


@dataclass(frozen=True)
class CollapsedPair:
    """ペアのどちらのメンバーが観測されても同じ正準報告 (E′, x′*)"""
    canonical: ExperimentResult

    def describe(self) -> str:
        return f"collapsed {self.canonical.describe()}"


@dataclass(frozen=True)
class Plain:
    """ペア外の結果：添字 j を保持したまま報告する"""
    component_index: int
    outcome: Outcome

    def describe(self) -> str:
        return f"plain j={self.component_index}, {self.outcome.describe()}"


TBValue = Union[CollapsedPair, Plain]


def birnbaumize(pair: SlpPair, weight_first: Number = Fraction(1, 2)) -> BirnbaumExperiment:
    """
    SLP ペアから拡大実験 E-B を作る

    E-B 内での 2 つのメンバーの尤度 w·f′(x′*;θ) と (1−w)·f″(x″*;θ) が
    比例することを確認します。

    Raises:
        InvalidInputError: ペアまたは重みが不正な場合
    """
    if not isinstance(pair, SlpPair):
        raise InvalidInputError(f"birnbaumize expects an SlpPair, got {type(pair).__name__}")
    if check_slp_pair(pair.first, pair.second) is None:
        raise InvalidInputError(f"Not an SLP pair: {pair.describe()}")

    eb = Birnbaumized(pair=pair, weight_first=weight_first)

    weighted = check_slp_pair(
        (eb, MixtureOutcome(1, pair.first.outcome)),
        (eb, MixtureOutcome(2, pair.second.outcome)),
    )
    if weighted is None:
        logger.error(f"Weighted member likelihoods are not proportional in {eb.describe()}")
        raise InvariantViolationError("Weighted member likelihoods in E-B are not proportional")

    logger.info(f"Birnbaumized {pair.describe()} with weight_first={weight_first}")
    return eb


def as_observation(obs: Observation) -> MixtureOutcome:
    if isinstance(obs, MixtureOutcome):
        return obs
    try:
        j, outcome = obs
    except (TypeError, ValueError):
        raise InvalidInputError(f"Expected (component index, outcome), got {obs!r}")
    return MixtureOutcome(j, outcome)


def _same_outcome(a: Outcome, b: Outcome) -> bool:
    if isinstance(a, NormalSummary) and isinstance(b, NormalSummary):
        return a.n == b.n and math.isclose(a.mean, b.mean, rel_tol=1e-12, abs_tol=1e-15)
    return a == b


def tb_statistic(eb: BirnbaumExperiment, obs: Observation) -> TBValue:
    """
    統計量 T-B を計算する

    観測がペアのメンバー（j=1 で x′*、または j=2 で x″*）なら CollapsedPair(E′, x′*)、
    それ以外は Plain(j, x) を返します。

    Raises:
        InvalidInputError: 結果が成分 j に適合しない場合
    """
    if not isinstance(eb, Birnbaumized):
        raise InvalidInputError(f"tb_statistic expects a Birnbaumized experiment, got {type(eb).__name__}")
    observation = canonical_outcome(eb, as_observation(obs))
    j = observation.component_index
    member = eb.pair.members[j - 1]
    if _same_outcome(observation.inner, canonical_outcome(member.model, member.outcome)):
        return CollapsedPair(canonical=eb.pair.first)
    return Plain(component_index=j, outcome=observation.inner)


def tb_probability(eb: BirnbaumExperiment, tb: TBValue, param: Number) -> Number:
    """
    E-B における T-B の値の確率

    CollapsedPair は w·f′(x′*;θ) + (1−w)·f″(x″*;θ)、Plain は w_j·f_j(x;θ) です。
    """
    if isinstance(tb, CollapsedPair):
        if tb.canonical != eb.pair.first:
            raise InvalidInputError("Collapsed value does not belong to this experiment")
        return (pmf(eb, MixtureOutcome(1, eb.pair.first.outcome), param)
                + pmf(eb, MixtureOutcome(2, eb.pair.second.outcome), param))
    return pmf(eb, MixtureOutcome(tb.component_index, tb.outcome), param)
