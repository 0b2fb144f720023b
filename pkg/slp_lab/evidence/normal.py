"""正規分布の CDF と裾確率（scipy.special.ndtr、Cephes 実装）"""

import math

from scipy import special, stats


def normal_cdf(x: float) -> float:
    """Φ(x)"""
    return float(special.ndtr(x))


def normal_sf(x: float) -> float:
    """1 − Φ(x)（裾での桁落ちを避けるため Φ(−x) として計算）"""
    return float(special.ndtr(-x))


def normal_log10_sf(x: float) -> float:
    """log10(1 − Φ(x))。p 値がアンダーフローしたときの報告に使う"""
    return float(stats.norm.logsf(x)) / math.log(10)


def normal_log10_cdf(x: float) -> float:
    """log10 Φ(x)"""
    return float(stats.norm.logcdf(x)) / math.log(10)
