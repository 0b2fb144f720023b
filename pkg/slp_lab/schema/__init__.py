# レポートのスキーマ定義
from importlib import resources
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = "1.0.0"
SCHEMA_DOCUMENT = f"report-{SCHEMA_VERSION}.schema.json"

DistributionTag = Literal["component-conditional", "mixture-unconditional", "birnbaum-unconditional"]


class _Record(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class AssessmentRecord(_Record):
    """エビデンス評価（p 値と標本分布のタグ）"""
    label: str = Field(..., description="評価の名前")
    p_value: float = Field(..., ge=0.0, le=1.0)
    p_value_exact: Optional[str] = Field(None, description="厳密な有理数（ベルヌーイ族のみ）")
    distribution_used: DistributionTag
    model: Optional[str] = None
    outcome: Optional[str] = None
    trace: str = ""
    flags: List[str] = Field(default_factory=list)


class WitnessRecord(_Record):
    """同値判定の証拠"""
    label: str
    left: AssessmentRecord
    right: AssessmentRecord
    equivalent: bool
    gap: float


class PremiseRecord(_Record):
    """前提または結論の真偽"""
    holds: bool
    witnesses: List[WitnessRecord]


class VerdictRecord(_Record):
    """監査結果"""
    premise1_semantics: Literal["unconditional", "conditional"]
    premise2_semantics: Literal["unconditional", "conditional"]
    evaluation_order: Literal["p1-first", "p2-first"]
    premise1: PremiseRecord
    premise2: PremiseRecord
    conclusion: PremiseRecord
    verdict: Literal["invalid", "blocked-at-premise-1", "blocked-at-premise-2", "no-violation"]


class StudyRecord(_Record):
    """任意停止のモンテカルロ結果"""
    label: str
    n_replications: int = Field(..., ge=1)
    seed: int = Field(..., ge=0)
    n_max: int = Field(..., ge=1)
    sigma: float = Field(..., gt=0.0)
    mu: float
    stop_fraction_by_n: Dict[int, float]
    final_fraction: float = Field(..., ge=0.0, le=1.0)
    standard_error: float = Field(..., ge=0.0)
    oracle: Literal["monte-carlo"] = "monte-carlo"


class Finding(_Record):
    """デモの個別の結論（数値には必ず出所のタグを付ける）"""
    name: str
    value: str
    numeric: Optional[float] = None
    tag: str = Field(..., min_length=1)


class Report(_Record):
    """デモのレポート"""
    schema_version: str = SCHEMA_VERSION
    demo_name: str
    inputs: Dict[str, str] = Field(default_factory=dict)
    assessments: List[AssessmentRecord] = Field(default_factory=list)
    verdicts: List[VerdictRecord] = Field(default_factory=list)
    studies: List[StudyRecord] = Field(default_factory=list)
    findings: List[Finding] = Field(default_factory=list)


def schema_document() -> str:
    """リポジトリに固定された JSON スキーマ文書を返す"""
    return resources.files(__name__).joinpath(SCHEMA_DOCUMENT).read_text(encoding="utf-8")


__all__ = [
    'SCHEMA_VERSION', 'SCHEMA_DOCUMENT', 'DistributionTag',
    'AssessmentRecord', 'WitnessRecord', 'PremiseRecord', 'VerdictRecord',
    'StudyRecord', 'Finding', 'Report', 'schema_document',
]
