"""
実験モデルと観測結果のデータ型

二項・負の二項・正規（固定n / 任意停止）・混合・Birnbaum化の各実験と、
それらに対応する観測結果を不変のデータクラスとして定義します。
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Tuple, Union

from slp_lab.config import LabConfig
from slp_lab.errors import InvalidInputError

Number = Union[Fraction, float, int]

# 任意停止の境界 z 値（X̄ > 1.96σ/√n）
BOUNDARY_Z = LabConfig.boundary_z


class ParameterSpace(Enum):
    """実験が共有するパラメータ空間"""
    BERNOULLI = "bernoulli"  # θ ∈ (0,1)
    NORMAL_MEAN = "normal-mean"  # μ ∈ ℝ（σ既知）


def as_fraction(value: Number) -> Fraction:
    """数値を厳密な有理数に変換する（浮動小数点は10進表記として解釈）"""
    if isinstance(value, bool):
        raise InvalidInputError(f"Expected a number, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Real):
        if not math.isfinite(float(value)):
            raise InvalidInputError(f"Expected a finite number, got {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise InvalidInputError(f"Cannot parse {value!r} as a rational number")
    raise InvalidInputError(f"Expected a number, got {value!r}")


def _require_positive_int(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")


def _require_positive_real(name: str, value: float) -> None:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidInputError(f"{name} must be a positive real, got {value!r}")
    if not math.isfinite(float(value)) or value <= 0:
        raise InvalidInputError(f"{name} must be a positive real, got {value!r}")


def _require_open_weight(value: Number) -> None:
    weight = as_fraction(value)
    if not 0 < weight < 1:
        raise InvalidInputError(f"weight_first must lie in (0,1), got {value!r}")


# ---------------------------------------------------------------------------
# 実験モデル
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Binomial:
    """試行回数 n を事前に固定したベルヌーイ試行（E′）"""
    n_trials: int

    def __post_init__(self):
        _require_positive_int("n_trials", self.n_trials)

    @property
    def parameter_space(self) -> ParameterSpace:
        return ParameterSpace.BERNOULLI

    def describe(self) -> str:
        return f"Binomial{{n_trials={self.n_trials}}}"


@dataclass(frozen=True)
class NegBinomial:
    """成功回数 r に達するまで続けるベルヌーイ試行（E″）"""
    r_target: int

    def __post_init__(self):
        _require_positive_int("r_target", self.r_target)

    @property
    def parameter_space(self) -> ParameterSpace:
        return ParameterSpace.BERNOULLI

    def describe(self) -> str:
        return f"NegBinomial{{r_target={self.r_target}}}"


@dataclass(frozen=True)
class NormalFixedN:
    """n を固定した N(μ, σ²) の標本（σ既知）"""
    n: int
    sigma: float

    def __post_init__(self):
        _require_positive_int("n", self.n)
        _require_positive_real("sigma", self.sigma)

    @property
    def parameter_space(self) -> ParameterSpace:
        return ParameterSpace.NORMAL_MEAN

    def describe(self) -> str:
        return f"NormalFixedN{{n={self.n}, sigma={self.sigma!r}}}"


@dataclass(frozen=True)
class NormalOptionalStopping:
    """X̄ₙ > 1.96σ/√n となるまで観測を続ける任意停止実験（上限 n_max）"""
    sigma: float
    n_max: int

    def __post_init__(self):
        _require_positive_real("sigma", self.sigma)
        _require_positive_int("n_max", self.n_max)

    @property
    def parameter_space(self) -> ParameterSpace:
        return ParameterSpace.NORMAL_MEAN

    def boundary(self, n: int) -> float:
        """n 時点の停止境界 1.96σ/√n"""
        return BOUNDARY_Z * self.sigma / math.sqrt(n)

    def describe(self) -> str:
        return f"NormalOptionalStopping{{sigma={self.sigma!r}, n_max={self.n_max}}}"


@dataclass(frozen=True)
class Mixture:
    """ランダム化装置で成分実験を選ぶ混合実験（E-mix）"""
    weight_first: Number
    first: "ExperimentModel"
    second: "ExperimentModel"

    def __post_init__(self):
        _require_open_weight(self.weight_first)
        if self.first.parameter_space is not self.second.parameter_space:
            raise InvalidInputError(
                f"Mixture components must share a parameter space: "
                f"{self.first.describe()} vs {self.second.describe()}"
            )

    @property
    def parameter_space(self) -> ParameterSpace:
        return self.first.parameter_space

    @property
    def components(self) -> Tuple["ExperimentModel", "ExperimentModel"]:
        return (self.first, self.second)

    @property
    def weights(self) -> Tuple[Fraction, Fraction]:
        weight = as_fraction(self.weight_first)
        return (weight, 1 - weight)

    def describe(self) -> str:
        return (f"Mixture{{weight_first={self.weight_first}, first={self.first.describe()}, "
                f"second={self.second.describe()}}}")


# ---------------------------------------------------------------------------
# 観測結果
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BernoulliSeq:
    """順序付きの 0/1 試行列"""
    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(self.bits)
        if not bits:
            raise InvalidInputError("A Bernoulli sequence needs at least one trial")
        for bit in bits:
            if isinstance(bit, bool) or bit not in (0, 1):
                raise InvalidInputError(f"Bernoulli bits must be 0 or 1, got {bit!r}")
        object.__setattr__(self, "bits", bits)

    @property
    def successes(self) -> int:
        return sum(self.bits)

    @property
    def trials(self) -> int:
        return len(self.bits)

    def describe(self) -> str:
        return "bits=" + "".join(str(bit) for bit in self.bits)


@dataclass(frozen=True)
class BernoulliSummary:
    """成功数 r と試行数 n の要約"""
    successes: int
    trials: int

    def __post_init__(self):
        _require_positive_int("trials", self.trials)
        if isinstance(self.successes, bool) or not isinstance(self.successes, numbers.Integral) \
                or self.successes < 0:
            raise InvalidInputError(f"successes must be a nonnegative integer, got {self.successes!r}")
        if self.successes > self.trials:
            raise InvalidInputError(
                f"successes ({self.successes}) cannot exceed trials ({self.trials})"
            )

    @property
    def failures(self) -> int:
        return self.trials - self.successes

    def describe(self) -> str:
        return f"r={self.successes}, n={self.trials}"


@dataclass(frozen=True)
class NormalSummary:
    """標本平均 x̄ と標本サイズ n"""
    mean: float
    n: int

    def __post_init__(self):
        _require_positive_int("n", self.n)
        if isinstance(self.mean, bool) or not isinstance(self.mean, numbers.Real) \
                or not math.isfinite(float(self.mean)):
            raise InvalidInputError(f"mean must be a finite real, got {self.mean!r}")

    def describe(self) -> str:
        return f"xbar={self.mean!r}, n={self.n}"


@dataclass(frozen=True)
class MixtureOutcome:
    """混合実験の結果 (E^j, x^j)：成分番号 j と成分の結果"""
    component_index: int
    inner: "Outcome"

    def __post_init__(self):
        if self.component_index not in (1, 2) or isinstance(self.component_index, bool):
            raise InvalidInputError(
                f"component_index must be 1 or 2, got {self.component_index!r}"
            )

    def describe(self) -> str:
        return f"j={self.component_index}, {self.inner.describe()}"


Outcome = Union[BernoulliSeq, BernoulliSummary, NormalSummary, MixtureOutcome]


# ---------------------------------------------------------------------------
# 尤度カーネルと SLP ペア
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentResult:
    """(実験, 結果) の組"""
    model: "ExperimentModel"
    outcome: Outcome

    def describe(self) -> str:
        return f"({self.model.describe()}, {self.outcome.describe()})"


@dataclass(frozen=True)
class LikelihoodKernel:
    """
    尤度カーネル

    ベルヌーイ族では constant·θ^r(1−θ)^f（constant は厳密な有理数）、
    正規族では constant·exp(−n(x̄−μ)²/(2σ²)) を表します。
    """
    family: ParameterSpace
    constant: Number
    successes: int = 0
    failures: int = 0
    mean: float = 0.0
    n: int = 0
    sigma: float = 1.0

    def __post_init__(self):
        if self.successes < 0 or self.failures < 0:
            raise InvalidInputError("Kernel exponents must be nonnegative")
        if self.constant <= 0:
            raise InvalidInputError(f"Kernel constant must be positive, got {self.constant!r}")

    @property
    def is_exact(self) -> bool:
        return self.family is ParameterSpace.BERNOULLI and isinstance(self.constant, Fraction)

    def shape(self) -> Tuple:
        """パラメータ依存部分の識別子（比例性判定に使う）"""
        if self.family is ParameterSpace.BERNOULLI:
            return (self.family, self.successes, self.failures)
        return (self.family, self.mean, self.n, self.sigma)

    def scaled(self, factor: Number) -> "LikelihoodKernel":
        """定数部分に factor を掛けたカーネルを返す"""
        if self.is_exact:
            constant = self.constant * as_fraction(factor)
        else:
            constant = float(self.constant) * float(factor)
        return LikelihoodKernel(
            family=self.family, constant=constant, successes=self.successes,
            failures=self.failures, mean=self.mean, n=self.n, sigma=self.sigma,
        )

    def evaluate(self, param: Number) -> Number:
        """パラメータ値でカーネル全体（定数込み）を評価する"""
        if self.family is ParameterSpace.BERNOULLI:
            theta = as_fraction(param)
            value = theta ** self.successes * (1 - theta) ** self.failures
            if self.is_exact:
                return self.constant * value
            return float(self.constant) * float(value)
        mu = float(param)
        return float(self.constant) * math.exp(-self.n * (self.mean - mu) ** 2 / (2 * self.sigma ** 2))

    def describe(self) -> str:
        if self.family is ParameterSpace.BERNOULLI:
            return f"{self.constant} * theta^{self.successes} (1-theta)^{self.failures}"
        return f"{self.constant!r} * exp(-{self.n}(xbar-mu)^2 / (2*{self.sigma!r}^2)), xbar={self.mean!r}"


@dataclass(frozen=True)
class SlpPair:
    """尤度が定数 c で比例する 2 つの (実験, 結果)：f′(x′;θ) = c·f″(x″;θ)"""
    first: ExperimentResult
    second: ExperimentResult
    constant: Number

    def __post_init__(self):
        if isinstance(self.constant, bool) or not isinstance(self.constant, numbers.Real):
            raise InvalidInputError(f"SLP constant must be a positive real, got {self.constant!r}")
        if not math.isfinite(float(self.constant)) or self.constant <= 0:
            raise InvalidInputError(f"SLP constant must be a positive real, got {self.constant!r}")
        if self.first.model.parameter_space is not self.second.model.parameter_space:
            raise InvalidInputError("SLP pair members must share a parameter space")

    @property
    def parameter_space(self) -> ParameterSpace:
        return self.first.model.parameter_space

    @property
    def members(self) -> Tuple[ExperimentResult, ExperimentResult]:
        return (self.first, self.second)

    def describe(self) -> str:
        return f"SlpPair{{{self.first.describe()} ~ {self.second.describe()}, c={self.constant}}}"


@dataclass(frozen=True)
class Birnbaumized:
    """SLP ペアを成分とする仮想的な混合実験 E-B"""
    pair: SlpPair
    weight_first: Number = Fraction(1, 2)

    def __post_init__(self):
        _require_open_weight(self.weight_first)
        if not isinstance(self.pair, SlpPair):
            raise InvalidInputError(f"Birnbaumized requires an SlpPair, got {type(self.pair).__name__}")

    @property
    def parameter_space(self) -> ParameterSpace:
        return self.pair.parameter_space

    @property
    def components(self) -> Tuple["ExperimentModel", "ExperimentModel"]:
        return (self.pair.first.model, self.pair.second.model)

    @property
    def weights(self) -> Tuple[Fraction, Fraction]:
        weight = as_fraction(self.weight_first)
        return (weight, 1 - weight)

    def describe(self) -> str:
        return f"Birnbaumized{{weight_first={self.weight_first}, pair={self.pair.describe()}}}"


ExperimentModel = Union[Binomial, NegBinomial, NormalFixedN, NormalOptionalStopping, Mixture, Birnbaumized]

COMPONENT_MODELS = (Binomial, NegBinomial, NormalFixedN, NormalOptionalStopping)
COMPOSITE_MODELS = (Mixture, Birnbaumized)
