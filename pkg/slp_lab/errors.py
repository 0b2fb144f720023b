"""
slp-lab の例外階層

InvalidInputError は CLI で終了コード 2、InvariantViolationError は 3 に対応します。
"""


class SlpLabError(Exception):
    """slp-lab の基底例外"""


class InvalidInputError(SlpLabError, ValueError):
    """入力（モデル、結果、パラメータ、オプション）が不正"""


class EnumerationLimitError(InvalidInputError):
    """列挙サイズが上限を超えた"""


class UndefinedAssessmentError(InvalidInputError):
    """閉形式を持たない評価が要求された"""


class InvariantViolationError(SlpLabError, RuntimeError):
    """内部不変条件の違反"""
