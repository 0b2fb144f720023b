"""
デモとレポートのモジュール
"""

from slp_lab.report.demos import DEMOS, DemoOptions, check_report, demo_names, parse_options, run_demo
from slp_lab.report.serialize import FORMATS, parse_report, serialize

__all__ = [
    'DEMOS', 'DemoOptions', 'check_report', 'demo_names', 'parse_options', 'run_demo',
    'FORMATS', 'parse_report', 'serialize',
]
