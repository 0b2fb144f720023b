"""
slp-lab の設定

既定値は標準的な例（Example 1〜4）を再現するように選ばれています。
環境変数で上書きできるのは既定シード（SLP_LAB_SEED）のみです。
"""

import os
import logging
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from slp_lab.errors import InvalidInputError

# ロガーの設定
logger = logging.getLogger(__name__)

SEED_ENV_VAR = "SLP_LAB_SEED"
DEFAULT_SEED = 20240917


@dataclass(frozen=True)
class LabConfig:
    """実験室全体の設定を保持するデータクラス"""
    seed: int = DEFAULT_SEED
    workers: int = 4  # モンテカルロの並列ワーカー数
    equivalence_tol: float = 1e-12  # 評価同値性の絶対許容誤差
    ratio_tol: float = 1e-12  # 尤度比の相対ばらつき許容誤差
    boundary_z: float = 1.96  # 任意停止の境界 z 値
    grid_points: int = 11  # 比例性チェックの既定グリッド点数
    normalization_tol: float = 1e-9


def load_config(environ: Optional[Mapping[str, str]] = None) -> LabConfig:
    """
    環境変数を反映した設定を読み込む

    Args:
        environ: 参照する環境（Noneの場合はos.environ）

    Returns:
        LabConfig

    Raises:
        InvalidInputError: SLP_LAB_SEED が整数でない場合
    """
    environ = os.environ if environ is None else environ
    config = LabConfig()

    raw_seed = environ.get(SEED_ENV_VAR)
    if raw_seed is not None and raw_seed.strip():
        try:
            seed = int(raw_seed)
        except ValueError:
            raise InvalidInputError(f"{SEED_ENV_VAR} must be an integer, got {raw_seed!r}")
        if seed < 0:
            raise InvalidInputError(f"{SEED_ENV_VAR} must be nonnegative, got {seed}")
        logger.debug(f"Default seed overridden from environment: {seed}")
        config = replace(config, seed=seed)

    return config
