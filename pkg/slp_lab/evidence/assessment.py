"""
エビデンス評価のデータ型

すべての評価は、どの標本分布から計算されたかを必ず明示します。
"""

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple, Union

from slp_lab.errors import InvalidInputError, InvariantViolationError
from slp_lab.experiment import ExperimentResult, Number, ParameterSpace, validate_param


class Direction(Enum):
    """片側検定の方向"""
    LESS = "less"
    GREATER = "greater"


class SamplingDistribution(Enum):
    """p 値の計算に使われた標本分布"""
    COMPONENT_CONDITIONAL = "component-conditional"
    MIXTURE_UNCONDITIONAL = "mixture-unconditional"
    BIRNBAUM_UNCONDITIONAL = "birnbaum-unconditional"


@dataclass(frozen=True)
class HypothesisSpec:
    """帰無仮説の値と対立仮説の方向"""
    null_value: Number
    direction: Union[Direction, str] = Direction.LESS

    def __post_init__(self):
        try:
            direction = Direction(self.direction)
        except ValueError:
            raise InvalidInputError(f"direction must be 'less' or 'greater', got {self.direction!r}")
        object.__setattr__(self, "direction", direction)
        if isinstance(self.null_value, bool) or not isinstance(self.null_value, numbers.Real) \
                or not math.isfinite(float(self.null_value)):
            raise InvalidInputError(f"null_value must be a finite real, got {self.null_value!r}")

    def null_for(self, space: ParameterSpace) -> Number:
        """パラメータ空間に照らして帰無値を検証する"""
        return validate_param(space, self.null_value)


@dataclass(frozen=True)
class EvidenceAssessment:
    """
    エビデンス評価 Infr_E(x)

    p_value はベルヌーイ族では Fraction（厳密）、正規族では float です。
    """
    p_value: Union[Fraction, float]
    distribution_used: SamplingDistribution
    source: Optional[ExperimentResult]
    trace: str
    flags: Tuple[str, ...] = ()

    def __post_init__(self):
        if not isinstance(self.distribution_used, SamplingDistribution):
            raise InvariantViolationError(
                f"An assessment must name its sampling distribution, got {self.distribution_used!r}"
            )
        if isinstance(self.p_value, bool) or not isinstance(self.p_value, (Fraction, float, int)):
            raise InvariantViolationError(f"p_value must be numeric, got {self.p_value!r}")
        if not 0 <= self.p_value <= 1:
            raise InvariantViolationError(f"p_value must lie in [0,1], got {self.p_value!r}")
        object.__setattr__(self, "flags", tuple(self.flags))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.p_value, Fraction)

    def __float__(self) -> float:
        return float(self.p_value)
