"""ドメインの値をレポートのレコードに変換する"""

from fractions import Fraction
from typing import Optional

from slp_lab.audit import AuditVerdict, PremiseResult, Witness
from slp_lab.evidence import EvidenceAssessment
from slp_lab.schema import AssessmentRecord, PremiseRecord, StudyRecord, VerdictRecord, WitnessRecord
from slp_lab.stopping import StoppingStudy


def assessment_record(label: str, assessment: EvidenceAssessment) -> AssessmentRecord:
    source = assessment.source
    exact: Optional[str] = None
    if isinstance(assessment.p_value, Fraction):
        exact = str(assessment.p_value)
    return AssessmentRecord(
        label=label,
        p_value=float(assessment.p_value),
        p_value_exact=exact,
        distribution_used=assessment.distribution_used.value,
        model=source.model.describe() if source is not None else None,
        outcome=source.outcome.describe() if source is not None else None,
        trace=assessment.trace,
        flags=list(assessment.flags),
    )


def _witness_record(witness: Witness) -> WitnessRecord:
    return WitnessRecord(
        label=witness.label,
        left=assessment_record("left", witness.left),
        right=assessment_record("right", witness.right),
        equivalent=witness.equivalent,
        gap=witness.gap,
    )


def _premise_record(result: PremiseResult) -> PremiseRecord:
    return PremiseRecord(holds=result.holds, witnesses=[_witness_record(w) for w in result.witnesses])


def verdict_record(verdict: AuditVerdict) -> VerdictRecord:
    semantics = verdict.semantics
    return VerdictRecord(
        premise1_semantics=semantics.premise1.value,
        premise2_semantics=semantics.premise2.value,
        evaluation_order=semantics.evaluation_order.value,
        premise1=_premise_record(verdict.premise1),
        premise2=_premise_record(verdict.premise2),
        conclusion=_premise_record(verdict.conclusion),
        verdict=verdict.verdict.value,
    )


def study_record(label: str, study: StoppingStudy) -> StudyRecord:
    return StudyRecord(
        label=label,
        n_replications=study.n_replications,
        seed=study.seed,
        n_max=study.n_max,
        sigma=study.sigma,
        mu=study.mu,
        stop_fraction_by_n=study.stop_fraction_by_n,
        final_fraction=study.final_fraction,
        standard_error=study.standard_error,
    )
