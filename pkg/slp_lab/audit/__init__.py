"""
Birnbaum の論証の監査モジュール

SLP ペアの Birnbaum化（E-B、T-B）と、意味論を明示した前提・結論の判定を提供します。
"""

from slp_lab.audit.birnbaumization import (
    BirnbaumExperiment,
    CollapsedPair,
    Observation,
    Plain,
    TBValue,
    as_observation,
    birnbaumize,
    tb_probability,
    tb_statistic,
)
from slp_lab.audit.verdict import (
    STANDARD_ASSIGNMENTS,
    AuditVerdict,
    EvaluationOrder,
    PremiseResult,
    Semantics,
    SemanticsAssignment,
    Verdict,
    Witness,
    audit,
    classify,
    infr_conditional,
    infr_unconditional,
)

__all__ = [
    'BirnbaumExperiment', 'CollapsedPair', 'Observation', 'Plain', 'TBValue',
    'as_observation', 'birnbaumize', 'tb_probability', 'tb_statistic',
    'STANDARD_ASSIGNMENTS', 'AuditVerdict', 'EvaluationOrder', 'PremiseResult',
    'Semantics', 'SemanticsAssignment', 'Verdict', 'Witness',
    'audit', 'classify', 'infr_conditional', 'infr_unconditional',
]
