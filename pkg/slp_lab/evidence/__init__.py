"""
エビデンス評価モジュール

標本分布を明示した p 値（成分条件付き・混合無条件）と、その同値判定を提供します。
"""

from slp_lab.evidence.assessment import (
    Direction,
    EvidenceAssessment,
    HypothesisSpec,
    SamplingDistribution,
)
from slp_lab.evidence.normal import normal_cdf, normal_sf
from slp_lab.evidence.pvalues import (
    evidence_equivalent,
    mixture_conditional,
    mixture_unconditional,
    p_value,
)

__all__ = [
    'Direction', 'EvidenceAssessment', 'HypothesisSpec', 'SamplingDistribution',
    'normal_cdf', 'normal_sf',
    'evidence_equivalent', 'mixture_conditional', 'mixture_unconditional', 'p_value',
]
