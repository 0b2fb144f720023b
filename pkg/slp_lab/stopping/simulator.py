"""
任意停止のモンテカルロシミュレーション

X̄ₙ > 1.96σ/√n となった最初の n で停止する規則を、n_max で打ち切って再現します。
乱数は (seed, 反復番号) から導出した PCG64 サブストリームを使うため、
並列度によらず集計は同一になります。
"""

import itertools
import logging
import math
import numbers
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from slp_lab.config import LabConfig
from slp_lab.errors import InvalidInputError, InvariantViolationError
from slp_lab.experiment import (
    BOUNDARY_Z, NormalFixedN, NormalOptionalStopping, NormalSummary, SlpPair, check_slp_pair,
)
from slp_lab.utils.performance import parallel_map, timed_execution

# ロガーの設定
logger = logging.getLogger(__name__)

_CONFIG = LabConfig()

MIN_REPLICATIONS = 100
CHUNK_SIZE = 500  # 1 タスクあたりの反復数
PARTNER_GRID = (-1.0, 0.0, 1.0)

NoiseStream = Union[np.random.Generator, Iterable[float]]


@dataclass(frozen=True)
class StoppingPathResult:
    """1 本の標本路の結果"""
    stopped: bool
    stop_n: Optional[int]
    final_mean: float
    boundary_at_stop: float


@dataclass(frozen=True)
class StoppingStudy:
    """
    停止時刻の分布（帰無仮説のもとでの反復）

    stop_counts[k] は n = k+1 までに停止した標本路の累積数です。
    """
    n_replications: int
    seed: int
    n_max: int
    sigma: float
    mu: float
    stop_counts: tuple

    def __post_init__(self):
        if len(self.stop_counts) != self.n_max:
            raise InvariantViolationError("stop_counts must have one entry per n")
        if any(later < earlier for earlier, later in zip(self.stop_counts, self.stop_counts[1:])):
            raise InvariantViolationError("Cumulative stop counts must be nondecreasing")
        if self.stop_counts and not 0 <= self.stop_counts[-1] <= self.n_replications:
            raise InvariantViolationError("Stop counts exceed the number of replications")

    @property
    def stop_fraction_by_n(self) -> Dict[int, float]:
        return {n: count / self.n_replications for n, count in enumerate(self.stop_counts, start=1)}

    @property
    def n_stopped(self) -> int:
        return self.stop_counts[-1]

    @property
    def final_fraction(self) -> float:
        return self.n_stopped / self.n_replications

    @property
    def standard_error(self) -> float:
        """最終的な停止割合の二項標準誤差"""
        p = self.final_fraction
        return math.sqrt(p * (1 - p) / self.n_replications)


def _require_sigma(sigma: float) -> float:
    if isinstance(sigma, bool) or not isinstance(sigma, numbers.Real) \
            or not math.isfinite(float(sigma)) or sigma <= 0:
        raise InvalidInputError(f"sigma must be a positive real, got {sigma!r}")
    return float(sigma)


def _require_positive_int(name: str, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def boundary(n: int, sigma: float, z: float = BOUNDARY_Z) -> float:
    """n 時点の停止境界 z·σ/√n"""
    return z * sigma / math.sqrt(n)


def substream(seed: int, replication: int) -> np.random.Generator:
    """(seed, 反復番号) から独立な PCG64 ジェネレータを導出する"""
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or seed < 0:
        raise InvalidInputError(f"seed must be a nonnegative integer, got {seed!r}")
    sequence = np.random.SeedSequence(int(seed), spawn_key=(int(replication),))
    return np.random.Generator(np.random.PCG64(sequence))


def _draw(noise: NoiseStream, count: int) -> np.ndarray:
    if isinstance(noise, np.random.Generator):
        return noise.standard_normal(count)
    deviates = np.fromiter(itertools.islice(iter(noise), count), dtype=float)
    if deviates.size < count:
        raise InvalidInputError(f"Noise stream ended after {deviates.size} of {count} deviates")
    return deviates


def _running_means(mu: float, sigma: float, deviates: np.ndarray) -> np.ndarray:
    return np.cumsum(mu + sigma * deviates) / np.arange(1, deviates.size + 1)


def _stop_index(means: np.ndarray, sigma: float) -> int:
    """最初に境界を超えた n（超えなければ 0）"""
    n = np.arange(1, means.size + 1)
    crossed = means > BOUNDARY_Z * sigma / np.sqrt(n)
    if not crossed.any():
        return 0
    return int(np.argmax(crossed)) + 1


def simulate_path(mu: float, sigma: float, n_max: int, noise: NoiseStream) -> StoppingPathResult:
    """
    1 本の標本路を生成し、停止規則を適用する

    x_i = μ + σ·z_i を順に加え、X̄ₙ > 1.96σ/√n となる最初の n ≤ n_max で停止します。

    Args:
        mu: 真の平均
        sigma: 既知の標準偏差
        n_max: 打ち切りの標本サイズ
        noise: 標準正規乱数の供給元（Generator または数値の反復可能オブジェクト）

    Returns:
        StoppingPathResult（停止しなければ n_max 時点の平均と境界）

    Raises:
        InvalidInputError: sigma, n_max, 乱数列が不正な場合
    """
    sigma = _require_sigma(sigma)
    n_max = _require_positive_int("n_max", n_max)
    if isinstance(mu, bool) or not isinstance(mu, numbers.Real) or not math.isfinite(float(mu)):
        raise InvalidInputError(f"mu must be a finite real, got {mu!r}")
    mu = float(mu)

    deviates = _draw(noise, n_max)
    means = _running_means(mu, sigma, deviates)
    stop_n = _stop_index(means, sigma)
    if stop_n:
        return StoppingPathResult(
            stopped=True, stop_n=stop_n, final_mean=float(means[stop_n - 1]),
            boundary_at_stop=boundary(stop_n, sigma),
        )
    return StoppingPathResult(
        stopped=False, stop_n=None, final_mean=float(means[-1]),
        boundary_at_stop=boundary(n_max, sigma),
    )


def _run_chunk(seed: int, replications: Sequence[int], mu: float, sigma: float, n_max: int) -> List[int]:
    stops = [
        _stop_index(_running_means(mu, sigma, substream(seed, rep).standard_normal(n_max)), sigma)
        for rep in replications
    ]
    logger.debug(f"Replications {replications[0]}..{replications[-1]} done")
    return stops


@timed_execution
def stop_fraction(
    sigma: float,
    n_max: int,
    reps: int,
    seed: int,
    mu: float = 0.0,
    workers: Optional[int] = _CONFIG.workers,
) -> StoppingStudy:
    """
    停止割合を n ごとに推定する

    反復 i は substream(seed, i) だけを使うので、反復を並列に実行しても
    結果は逐次実行とビット単位で一致します。

    Args:
        sigma: 既知の標準偏差
        n_max: 打ち切りの標本サイズ
        reps: 反復数（100 以上）
        seed: シード
        mu: 真の平均（既定は帰無仮説の 0）
        workers: 並列ワーカー数

    Returns:
        StoppingStudy

    Raises:
        InvalidInputError: 入力が不正な場合
    """
    sigma = _require_sigma(sigma)
    n_max = _require_positive_int("n_max", n_max)
    reps = _require_positive_int("reps", reps)
    if reps < MIN_REPLICATIONS:
        raise InvalidInputError(f"reps must be at least {MIN_REPLICATIONS}, got {reps}")
    substream(seed, 0)  # シードの検証
    if isinstance(mu, bool) or not isinstance(mu, numbers.Real) or not math.isfinite(float(mu)):
        raise InvalidInputError(f"mu must be a finite real, got {mu!r}")
    mu = float(mu)

    logger.info(f"Simulating {reps} optional-stopping paths (n_max={n_max}, sigma={sigma}, mu={mu}, seed={seed})")
    chunks = [range(start, min(start + CHUNK_SIZE, reps)) for start in range(0, reps, CHUNK_SIZE)]
    results = parallel_map(lambda chunk: _run_chunk(seed, chunk, mu, sigma, n_max), chunks, workers)

    stops = np.fromiter(itertools.chain.from_iterable(results), dtype=np.int64, count=reps)
    counts = np.bincount(stops, minlength=n_max + 1)[1:]
    cumulative = tuple(int(count) for count in np.cumsum(counts))

    study = StoppingStudy(
        n_replications=reps, seed=int(seed), n_max=n_max, sigma=sigma, mu=mu, stop_counts=cumulative,
    )
    logger.info(f"{study.n_stopped}/{reps} paths stopped by n={n_max} "
                f"(fraction {study.final_fraction:.4f}, SE {study.standard_error:.4f})")
    return study


def slp_partner_for_stop(stop_n: int, sigma: float, n_max: Optional[int] = None) -> SlpPair:
    """
    観測された停止に対する固定 n の SLP ペアを作る

    x̄ は停止境界 1.96σ/√stop_n に置き、(NormalFixedN{stop_n, σ}, x̄) と
    (NormalOptionalStopping{σ, n_max}, x̄) の尤度比を μ ∈ {−1, 0, 1} で確認します。

    Raises:
        InvalidInputError: stop_n, sigma, n_max が不正な場合
        InvariantViolationError: 構成したペアが比例しない場合
    """
    stop_n = _require_positive_int("stop_n", stop_n)
    sigma = _require_sigma(sigma)
    n_max = stop_n if n_max is None else _require_positive_int("n_max", n_max)
    if n_max < stop_n:
        raise InvalidInputError(f"n_max ({n_max}) must be at least stop_n ({stop_n})")

    data = NormalSummary(mean=boundary(stop_n, sigma), n=stop_n)
    pair = check_slp_pair(
        (NormalFixedN(stop_n, sigma), data),
        (NormalOptionalStopping(sigma, n_max), data),
        grid=PARTNER_GRID,
    )
    if pair is None:
        logger.error(f"Fixed-n partner for stop_n={stop_n} failed the proportionality check")
        raise InvariantViolationError(f"Fixed-n partner for stop_n={stop_n} is not proportional")
    return pair
