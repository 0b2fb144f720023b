"""
Birnbaum の論証の監査

前提1（E-B 内での x′* と x″* の同値）、前提2（E-B と E^j での同値、j = 1, 2）、
結論（SLP の事例）を、明示した意味論のもとで評価し、数値の証拠付きで判定します。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, Tuple, Union

from slp_lab.audit.birnbaumization import (
    BirnbaumExperiment, CollapsedPair, Observation, Plain, TBValue,
    as_observation, birnbaumize, tb_statistic,
)
from slp_lab.errors import InvalidInputError
from slp_lab.evidence import (
    EvidenceAssessment, HypothesisSpec, SamplingDistribution,
    evidence_equivalent, mixture_unconditional, p_value,
)
from slp_lab.experiment import ExperimentResult, Number, SlpPair, canonical_outcome

# ロガーの設定
logger = logging.getLogger(__name__)


class Semantics(Enum):
    """Infr_{E-B} の読み方"""
    UNCONDITIONAL = "unconditional"
    CONDITIONAL = "conditional"


class EvaluationOrder(Enum):
    """前提を評価する順序"""
    P1_FIRST = "p1-first"
    P2_FIRST = "p2-first"


class Verdict(Enum):
    """監査の判定"""
    INVALID = "invalid"  # 前提が真で結論が偽
    BLOCKED_AT_PREMISE_1 = "blocked-at-premise-1"
    BLOCKED_AT_PREMISE_2 = "blocked-at-premise-2"
    NO_VIOLATION = "no-violation"  # 結論が真


@dataclass(frozen=True)
class SemanticsAssignment:
    """前提ごとの意味論と評価順序"""
    premise1: Union[Semantics, str]
    premise2: Union[Semantics, str]
    evaluation_order: Union[EvaluationOrder, str] = EvaluationOrder.P1_FIRST

    def __post_init__(self):
        try:
            object.__setattr__(self, "premise1", Semantics(self.premise1))
            object.__setattr__(self, "premise2", Semantics(self.premise2))
            object.__setattr__(self, "evaluation_order", EvaluationOrder(self.evaluation_order))
        except ValueError as e:
            raise InvalidInputError(f"Invalid semantics assignment: {e}")

    @classmethod
    def parse(cls, text: str) -> "SemanticsAssignment":
        """'unconditional,conditional[,p2-first]' 形式の文字列を解析する"""
        parts = [part.strip() for part in text.split(",") if part.strip()]
        if len(parts) not in (2, 3):
            raise InvalidInputError(
                f"Semantics must look like 'unconditional,conditional[,p1-first]', got {text!r}"
            )
        return cls(*parts)

    def describe(self) -> str:
        return f"{self.premise1.value},{self.premise2.value},{self.evaluation_order.value}"


# 標準の 3 通りの割り当て
STANDARD_ASSIGNMENTS = (
    SemanticsAssignment(Semantics.UNCONDITIONAL, Semantics.CONDITIONAL),
    SemanticsAssignment(Semantics.UNCONDITIONAL, Semantics.UNCONDITIONAL),
    SemanticsAssignment(Semantics.CONDITIONAL, Semantics.CONDITIONAL),
)


@dataclass(frozen=True)
class Witness:
    """同値性の判定に使った 2 つの評価"""
    label: str
    left: EvidenceAssessment
    right: EvidenceAssessment
    equivalent: bool

    @property
    def gap(self) -> float:
        return abs(float(self.left.p_value) - float(self.right.p_value))


@dataclass(frozen=True)
class PremiseResult:
    """前提（または結論）の真偽と証拠"""
    holds: bool
    witnesses: Tuple[Witness, ...]


@dataclass(frozen=True)
class AuditVerdict:
    """監査結果"""
    premise1: PremiseResult
    premise2: PremiseResult
    conclusion: PremiseResult
    verdict: Verdict
    semantics: SemanticsAssignment

    @property
    def premise1_true(self) -> bool:
        return self.premise1.holds

    @property
    def premise2_true(self) -> bool:
        return self.premise2.holds

    @property
    def conclusion_true(self) -> bool:
        return self.conclusion.holds


def classify(premise1_true: bool, premise2_true: bool, conclusion_true: bool) -> Verdict:
    """3 つの真偽値から判定を決める"""
    if conclusion_true:
        return Verdict.NO_VIOLATION
    if premise1_true and premise2_true:
        return Verdict.INVALID
    if not premise1_true:
        return Verdict.BLOCKED_AT_PREMISE_1
    return Verdict.BLOCKED_AT_PREMISE_2


def infr_unconditional(eb: BirnbaumExperiment, tb: TBValue, hyp: HypothesisSpec) -> EvidenceAssessment:
    """
    T-B の無条件標本分布による評価（前提1の読み方）

    CollapsedPair では w·p′ + (1−w)·p″、Plain では成分の p 値（non-collapsed フラグ付き）。

    Raises:
        InvalidInputError: T-B の値がこの E-B のものでない、または仮説が不正
    """
    if isinstance(tb, CollapsedPair):
        if tb.canonical != eb.pair.first:
            raise InvalidInputError("Collapsed value does not belong to this Birnbaum experiment")
        p_first = p_value(eb.pair.first.model, eb.pair.first.outcome, hyp)
        p_second = p_value(eb.pair.second.model, eb.pair.second.outcome, hyp)
        combined = mixture_unconditional(p_first, p_second, eb.weight_first)
        return EvidenceAssessment(
            p_value=combined.p_value,
            distribution_used=SamplingDistribution.BIRNBAUM_UNCONDITIONAL,
            source=tb.canonical,
            trace=f"T-B averaged over E' and E'': {combined.trace}",
        )

    if not isinstance(tb, Plain) or tb.component_index not in (1, 2):
        raise InvalidInputError(f"Not a T-B value: {tb!r}")
    component = eb.components[tb.component_index - 1]
    standalone = p_value(component, tb.outcome, hyp)
    return EvidenceAssessment(
        p_value=standalone.p_value,
        distribution_used=SamplingDistribution.COMPONENT_CONDITIONAL,
        source=standalone.source,
        trace=f"T-B keeps index j={tb.component_index}; {standalone.trace}",
        flags=standalone.flags + ("non-collapsed",),
    )


def infr_conditional(eb: BirnbaumExperiment, obs: Observation, hyp: HypothesisSpec) -> EvidenceAssessment:
    """
    実際に行われた成分 E^j の標本分布だけによる評価（前提2の読み方）

    Raises:
        InvalidInputError: 成分番号・結果が不正な場合
    """
    observation = canonical_outcome(eb, as_observation(obs))
    j = observation.component_index
    standalone = p_value(eb.components[j - 1], observation.inner, hyp)
    return EvidenceAssessment(
        p_value=standalone.p_value,
        distribution_used=SamplingDistribution.COMPONENT_CONDITIONAL,
        source=ExperimentResult(eb.components[j - 1], observation.inner),
        trace=f"as if E^{j} were known all along; {standalone.trace}",
        flags=standalone.flags,
    )


def audit(
    pair: SlpPair,
    hyp: HypothesisSpec,
    sem: SemanticsAssignment,
    weight_first: Number = Fraction(1, 2),
) -> AuditVerdict:
    """
    Birnbaum の論証を監査する

    前提1: Infr_{E-B}(x′*) ~ Infr_{E-B}(x″*)（sem.premise1 で評価）
    前提2: Infr_{E-B}(x^{j*}) ~ Infr_{E^j}(x^{j*})、j = 1, 2 の両方（sem.premise2 で評価）
    結論:  Infr_{E′}(x′*) ~ Infr_{E″}(x″*)

    Returns:
        AuditVerdict（評価順序はどの真偽値にも影響しない）

    Raises:
        InvalidInputError: ペア・仮説・意味論が不正な場合
    """
    if not isinstance(sem, SemanticsAssignment):
        raise InvalidInputError(f"audit expects a SemanticsAssignment, got {type(sem).__name__}")
    eb = birnbaumize(pair, weight_first)
    members = ((1, pair.first), (2, pair.second))

    component = {
        j: p_value(member.model, member.outcome, hyp) for j, member in members
    }

    def infr_eb(j: int, semantics: Semantics) -> EvidenceAssessment:
        obs = (j, pair.members[j - 1].outcome)
        if semantics is Semantics.UNCONDITIONAL:
            return infr_unconditional(eb, tb_statistic(eb, obs), hyp)
        return infr_conditional(eb, obs, hyp)

    def evaluate_premise1() -> PremiseResult:
        left, right = infr_eb(1, sem.premise1), infr_eb(2, sem.premise1)
        witness = Witness("Infr_E-B(x'*) vs Infr_E-B(x''*)", left, right, evidence_equivalent(left, right))
        return PremiseResult(witness.equivalent, (witness,))

    def evaluate_premise2() -> PremiseResult:
        witnesses = []
        for j, _ in members:
            left = infr_eb(j, sem.premise2)
            witnesses.append(Witness(f"Infr_E-B(x{j}*) vs Infr_E{j}(x{j}*)", left, component[j],
                                     evidence_equivalent(left, component[j])))
        return PremiseResult(all(w.equivalent for w in witnesses), tuple(witnesses))

    steps: Dict[str, Callable[[], PremiseResult]] = {
        "premise1": evaluate_premise1,
        "premise2": evaluate_premise2,
    }
    order = ("premise1", "premise2")
    if sem.evaluation_order is EvaluationOrder.P2_FIRST:
        order = ("premise2", "premise1")
    results = {name: steps[name]() for name in order}

    conclusion_witness = Witness("Infr_E'(x'*) vs Infr_E''(x''*)", component[1], component[2],
                                 evidence_equivalent(component[1], component[2]))
    conclusion = PremiseResult(conclusion_witness.equivalent, (conclusion_witness,))

    verdict = classify(results["premise1"].holds, results["premise2"].holds, conclusion.holds)
    logger.info(f"Audit under {sem.describe()}: P1={results['premise1'].holds} "
                f"P2={results['premise2'].holds} C={conclusion.holds} -> {verdict.value}")
    return AuditVerdict(
        premise1=results["premise1"],
        premise2=results["premise2"],
        conclusion=conclusion,
        verdict=verdict,
        semantics=sem,
    )
