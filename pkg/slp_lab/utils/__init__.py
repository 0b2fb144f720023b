"""
slp_lab ユーティリティモジュール
"""

from slp_lab.utils.performance import (
    default_workers,
    parallel_map,
    timed_execution,
)

__all__ = [
    'default_workers',
    'parallel_map',
    'timed_execution',
]
