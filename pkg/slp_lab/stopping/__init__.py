"""
任意停止シミュレーションモジュール
"""

from slp_lab.stopping.simulator import (
    StoppingPathResult,
    StoppingStudy,
    boundary,
    simulate_path,
    slp_partner_for_stop,
    stop_fraction,
    substream,
)

__all__ = [
    'StoppingPathResult',
    'StoppingStudy',
    'boundary',
    'simulate_path',
    'slp_partner_for_stop',
    'stop_fraction',
    'substream',
]
