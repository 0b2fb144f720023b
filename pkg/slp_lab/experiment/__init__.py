"""
実験モデルのコアモジュール

このパッケージには、実験モデル・観測結果・尤度・十分統計量の厳密な表現が含まれています。
"""

from slp_lab.experiment.models import (
    BOUNDARY_Z,
    BernoulliSeq,
    BernoulliSummary,
    Binomial,
    Birnbaumized,
    ExperimentModel,
    ExperimentResult,
    LikelihoodKernel,
    Mixture,
    MixtureOutcome,
    NegBinomial,
    NormalFixedN,
    NormalOptionalStopping,
    NormalSummary,
    Number,
    Outcome,
    ParameterSpace,
    SlpPair,
    as_fraction,
)
from slp_lab.experiment.likelihood import (
    as_result,
    canonical_outcome,
    check_slp_pair,
    default_grid,
    find_slp_partner,
    likelihood_kernel,
    log_pmf,
    pmf,
    validate_param,
)
from slp_lab.experiment.sufficiency import (
    FactorizationReport,
    NormalizationReport,
    SliceReport,
    catalog,
    normalization_check,
    sufficient_statistic,
    verify_factorization,
)

__all__ = [
    'BOUNDARY_Z', 'BernoulliSeq', 'BernoulliSummary', 'Binomial', 'Birnbaumized',
    'ExperimentModel', 'ExperimentResult', 'LikelihoodKernel', 'Mixture', 'MixtureOutcome',
    'NegBinomial', 'NormalFixedN', 'NormalOptionalStopping', 'NormalSummary', 'Number',
    'Outcome', 'ParameterSpace', 'SlpPair', 'as_fraction',
    'as_result', 'canonical_outcome', 'check_slp_pair', 'default_grid', 'find_slp_partner',
    'likelihood_kernel', 'log_pmf', 'pmf', 'validate_param',
    'FactorizationReport', 'NormalizationReport', 'SliceReport', 'catalog',
    'normalization_check', 'sufficient_statistic', 'verify_factorization',
]
