"""
並列実行と計測のユーティリティ

モンテカルロのチャンク実行とデモの実行時間ログに使います。
"""

import concurrent.futures
import functools
import logging
import os
import time
from typing import Any, Callable, Iterable, List, Optional, TypeVar

# 型変数
T = TypeVar('T')
R = TypeVar('R')

# ロガーの設定
logger = logging.getLogger(__name__)


def default_workers() -> int:
    """既定のワーカー数（CPUコア数、取得できなければ4）"""
    return os.cpu_count() or 4


def parallel_map(func: Callable[[T], R], items: Iterable[T], max_workers: Optional[int] = None) -> List[R]:
    """
    各要素に関数を並列適用する

    結果は入力と同じ順序で返るため、ワーカー数によらず集計は決定的です。

    Args:
        func: 適用する関数
        items: 入力
        max_workers: 最大ワーカー数（Noneの場合はCPUコア数）

    Returns:
        関数適用結果のリスト（入力順）
    """
    items = list(items)
    if max_workers is None:
        max_workers = default_workers()
    max_workers = max(1, min(max_workers, len(items) or 1))

    if max_workers == 1:
        return [func(item) for item in items]

    with concurrent.futures.ThreadPoolExecutor(max_workers=max_workers) as executor:
        results = list(executor.map(func, items))

    return results


def timed_execution(func: Callable[..., T]) -> Callable[..., T]:
    """
    関数の実行時間を計測するデコレータ

    Args:
        func: 計測する関数

    Returns:
        時間計測機能を持つ関数
    """
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> T:
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        execution_time = time.perf_counter() - start_time
        logger.info(f"{func.__name__} executed in {execution_time:.4f} seconds")
        return result

    return wrapper
