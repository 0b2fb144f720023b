"""
デモの実行

各デモは標準的な例を 1 つ再現し、評価・監査結果・シミュレーション結果を
Report にまとめます。オプションは DemoOptions で一括して検証されます。
"""

import logging
from fractions import Fraction
from typing import Any, Callable, Dict, List, Literal, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from slp_lab.audit import (
    STANDARD_ASSIGNMENTS, CollapsedPair, SemanticsAssignment, audit, birnbaumize,
    infr_conditional, tb_statistic,
)
from slp_lab.config import LabConfig, load_config
from slp_lab.errors import InvalidInputError, InvariantViolationError
from slp_lab.evidence import (
    Direction, EvidenceAssessment, HypothesisSpec, evidence_equivalent, mixture_conditional,
    mixture_unconditional, normal_sf, p_value,
)
from slp_lab.experiment import (
    BOUNDARY_Z, BernoulliSummary, Binomial, Mixture, MixtureOutcome, NegBinomial,
    NormalFixedN, NormalSummary, as_fraction, find_slp_partner, verify_factorization,
)
from slp_lab.report.records import assessment_record, study_record, verdict_record
from slp_lab.schema import SCHEMA_VERSION, AssessmentRecord, Finding, Report
from slp_lab.stopping import boundary, slp_partner_for_stop, stop_fraction
from slp_lab.utils.performance import timed_execution

# ロガーの設定
logger = logging.getLogger(__name__)

# 例を再現する既定値
EXAMPLE1_TRIALS = 20
EXAMPLE1_SUCCESSES = 6
EXAMPLE2_N = 169
INSTRUMENT_SIGMAS = (0.01, 100.0)  # 分散 10^-4 と 10^4
FACTORIZATION_THETAS = (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10))
DEFAULT_REPLICATIONS = 10_000


class DemoOptions(BaseModel):
    """デモのオプション（CLI フラグと run_demo の共通の検証層）"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    theta0: Optional[float] = Field(None, gt=0.0, lt=1.0)
    mu0: Optional[float] = None
    direction: Optional[Literal["less", "greater"]] = None
    sigma: Optional[float] = Field(None, gt=0.0)
    n: Optional[int] = Field(None, ge=1)
    r: Optional[int] = Field(None, ge=0)
    n_max: Optional[int] = Field(None, ge=1)
    reps: Optional[int] = Field(None, ge=100)
    seed: Optional[int] = Field(None, ge=0)
    weight: Optional[float] = Field(None, gt=0.0, lt=1.0)
    semantics: Optional[str] = None
    xbar: Optional[float] = None
    j: Optional[int] = Field(None, ge=1, le=2)
    sampling: Optional[Literal["binomial", "negative-binomial"]] = None
    workers: Optional[int] = Field(None, ge=1)


def parse_options(options: Optional[Mapping[str, Any]]) -> DemoOptions:
    """
    オプションを検証する

    Raises:
        InvalidInputError: 未知のキーまたは不正な値
    """
    try:
        return DemoOptions.model_validate(dict(options or {}))
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}" for error in e.errors()
        )
        raise InvalidInputError(f"Malformed demo options: {problems}")


class _Builder:
    """Report の組み立て"""

    def __init__(self, name: str):
        self.name = name
        self.inputs: Dict[str, str] = {}
        self.assessments: List[AssessmentRecord] = []
        self.verdicts = []
        self.studies = []
        self.findings: List[Finding] = []

    def use(self, key: str, value: Any) -> Any:
        self.inputs[key] = str(value)
        return value

    def assess(self, label: str, assessment: EvidenceAssessment) -> EvidenceAssessment:
        self.assessments.append(assessment_record(label, assessment))
        return assessment

    def find(self, name: str, value: Any, tag: str, numeric: Optional[float] = None) -> None:
        if isinstance(value, bool):
            value = str(value).lower()
        self.findings.append(Finding(name=name, value=str(value), numeric=numeric, tag=tag))

    def build(self) -> Report:
        return Report(
            schema_version=SCHEMA_VERSION,
            demo_name=self.name,
            inputs=self.inputs,
            assessments=self.assessments,
            verdicts=self.verdicts,
            studies=self.studies,
            findings=self.findings,
        )


def _hypothesis(report: _Builder, null: Any, direction: Optional[str], default: Direction) -> HypothesisSpec:
    direction = report.use("direction", direction or default.value)
    return HypothesisSpec(null_value=null, direction=direction)


def _bernoulli_null(report: _Builder, options: DemoOptions) -> Fraction:
    theta0 = Fraction(1, 2) if options.theta0 is None else as_fraction(options.theta0)
    return report.use("theta0", theta0)


def _example1_pair(report: _Builder, options: DemoOptions):
    n = report.use("n", options.n or EXAMPLE1_TRIALS)
    r = report.use("r", EXAMPLE1_SUCCESSES if options.r is None else options.r)
    if r > n:
        raise InvalidInputError(f"r ({r}) cannot exceed n ({n})")
    return find_slp_partner(Binomial(n), BernoulliSummary(r, n))


def _demo_example1(report: _Builder, options: DemoOptions, config: LabConfig) -> None:
    """二項実験と負の二項実験：尤度は比例するが p 値は異なる"""
    null = _bernoulli_null(report, options)
    pair = _example1_pair(report, options)
    hyp = _hypothesis(report, null, options.direction, Direction.LESS)

    binomial = report.assess("p_binomial", p_value(pair.first.model, pair.first.outcome, hyp))
    negbinomial = report.assess("p_negbinomial", p_value(pair.second.model, pair.second.outcome, hyp))

    report.find("likelihood_ratio_constant", pair.constant, "likelihood-ratio", float(pair.constant))
    report.find("slp_violation", not evidence_equivalent(binomial, negbinomial), "exact")


def _stopping_inputs(report: _Builder, options: DemoOptions, config: LabConfig) -> Tuple:
    sigma = report.use("sigma", 1.0 if options.sigma is None else options.sigma)
    n = report.use("n", options.n or EXAMPLE2_N)
    n_max = report.use("n_max", options.n_max or n)
    if n_max < n:
        raise InvalidInputError(f"n_max ({n_max}) must be at least n ({n})")
    reps = report.use("reps", options.reps or DEFAULT_REPLICATIONS)
    seed = report.use("seed", config.seed if options.seed is None else options.seed)
    return sigma, n, n_max, reps, seed


def _demo_example2(report: _Builder, options: DemoOptions, config: LabConfig) -> None:
    """任意停止：固定 n の条件付き p 値と停止規則の棄却率"""
    mu0 = report.use("mu0", 0.0 if options.mu0 is None else options.mu0)
    sigma, n, n_max, reps, seed = _stopping_inputs(report, options, config)
    hyp = _hypothesis(report, mu0, options.direction, Direction.GREATER)

    pair = slp_partner_for_stop(n, sigma, n_max)
    fixed = report.assess("p_fixed_n", p_value(pair.first.model, pair.first.outcome, hyp))

    study = stop_fraction(sigma, n_max, reps, seed, mu=mu0, workers=options.workers or config.workers)
    report.studies.append(study_record("optional_stopping_null", study))

    report.find("likelihood_ratio_constant", pair.constant, "likelihood-ratio", float(pair.constant))
    report.find("nominal_level", normal_sf(BOUNDARY_Z), "normal-tail", normal_sf(BOUNDARY_Z))
    # n_max 時点の棄却率と、観測された停止 n までの停止割合 P(N ≤ n) は別物
    report.find("optional_stopping_rejection_rate", study.final_fraction, "monte-carlo", study.final_fraction)
    stopped_by_n = study.stop_fraction_by_n[n]
    report.find("stop_fraction_at_n", stopped_by_n, "monte-carlo", stopped_by_n)
    excess = stopped_by_n - float(fixed.p_value)
    report.find("rate_minus_fixed_n_p", excess, "monte-carlo", excess)


def _demo_example3(report: _Builder, options: DemoOptions, config: LabConfig) -> None:
    """2 つの測定器の混合実験：条件付き評価と無条件評価"""
    mu0 = report.use("mu0", 0.0 if options.mu0 is None else options.mu0)
    weight = report.use("weight", Fraction(1, 2) if options.weight is None else as_fraction(options.weight))
    j = report.use("j", options.j or 2)
    xbar = report.use("xbar", 3.9 if options.xbar is None else options.xbar)
    hyp = _hypothesis(report, mu0, options.direction, Direction.GREATER)

    mixture = Mixture(weight, NormalFixedN(1, INSTRUMENT_SIGMAS[0]), NormalFixedN(1, INSTRUMENT_SIGMAS[1]))
    data = NormalSummary(mean=xbar, n=1)

    conditional = report.assess(
        "conditional", mixture_conditional(mixture, MixtureOutcome(j, data), hyp)
    )
    p_first = p_value(mixture.first, data, hyp)
    p_second = p_value(mixture.second, data, hyp)
    unconditional = mixture_unconditional(p_first, p_second, weight)
    report.assess("unconditional", EvidenceAssessment(
        p_value=unconditional.p_value,
        distribution_used=unconditional.distribution_used,
        source=conditional.source,
        trace=unconditional.trace,
        flags=p_first.flags + p_second.flags,
    ))

    gap = abs(float(conditional.p_value) - float(unconditional.p_value))
    report.find("conditional_minus_unconditional", gap, "component-conditional vs mixture-unconditional", gap)


def _demo_example4(report: _Builder, options: DemoOptions, config: LabConfig) -> None:
    """任意停止の Birnbaum化：T-B による崩壊と無条件評価のモンテカルロ推定"""
    mu0 = report.use("mu0", 0.0 if options.mu0 is None else options.mu0)
    sigma, n, n_max, reps, seed = _stopping_inputs(report, options, config)
    weight = report.use("weight", Fraction(1, 2) if options.weight is None else as_fraction(options.weight))
    hyp = _hypothesis(report, mu0, options.direction, Direction.GREATER)

    pair = slp_partner_for_stop(n, sigma, n_max)
    eb = birnbaumize(pair, weight)
    data = pair.first.outcome

    tb_first = tb_statistic(eb, (1, data))
    tb_second = tb_statistic(eb, (2, pair.second.outcome))
    collapses = isinstance(tb_first, CollapsedPair) and tb_first == tb_second

    fixed = report.assess("p_fixed_n_given_j1", infr_conditional(eb, (1, data), hyp))
    study = stop_fraction(sigma, n_max, reps, seed, mu=mu0, workers=options.workers or config.workers)
    report.studies.append(study_record("optional_stopping_null", study))

    w = float(weight)
    stopped_by_n = study.stop_fraction_by_n[n]
    estimate = w * float(fixed.p_value) + (1 - w) * stopped_by_n
    report.find("tb_collapses_pair", collapses, "exact")
    report.find("optional_stopping_rejection_rate", study.final_fraction, "monte-carlo", study.final_fraction)
    report.find("stop_fraction_at_n", stopped_by_n, "monte-carlo", stopped_by_n)
    report.find("birnbaum_unconditional_estimate", estimate, "monte-carlo", estimate)


def _demo_audit(report: _Builder, options: DemoOptions, config: LabConfig) -> None:
    """SP + WCP → SLP の論証を意味論ごとに監査する"""
    null = _bernoulli_null(report, options)
    pair = _example1_pair(report, options)
    hyp = _hypothesis(report, null, options.direction, Direction.LESS)
    weight = report.use("weight", Fraction(1, 2) if options.weight is None else as_fraction(options.weight))

    if options.semantics is None:
        assignments = STANDARD_ASSIGNMENTS
    else:
        assignments = (SemanticsAssignment.parse(options.semantics),)
    report.use("semantics", "; ".join(sem.describe() for sem in assignments))

    report.assess("p_first", p_value(pair.first.model, pair.first.outcome, hyp))
    report.assess("p_second", p_value(pair.second.model, pair.second.outcome, hyp))

    for sem in assignments:
        verdict = audit(pair, hyp, sem, weight)
        report.verdicts.append(verdict_record(verdict))
        report.find(f"verdict[{sem.describe()}]", verdict.verdict.value, "audit")


def _demo_factorize(report: _Builder, options: DemoOptions, config: LabConfig) -> None:
    """十分統計量による因子分解を全列挙で確認する"""
    sampling = report.use("sampling", options.sampling or "binomial")
    n = report.use("n", options.n or EXAMPLE1_TRIALS)
    r = report.use("r", EXAMPLE1_SUCCESSES if options.r is None else options.r)
    if sampling == "binomial":
        model, statistic, name = Binomial(n), r, "R"
    else:
        if r < 1:
            raise InvalidInputError("Negative-binomial sampling needs r >= 1")
        model, statistic, name = NegBinomial(r), n, "N"
    report.use("thetas", ",".join(str(theta) for theta in FACTORIZATION_THETAS))

    result = verify_factorization(model, FACTORIZATION_THETAS, slices=[statistic])
    for item in result.slices:
        report.find(f"conditional[{name}={item.statistic}]", item.uniform_value,
                    "exact-enumeration", float(item.uniform_value))
        report.find(f"sequences[{name}={item.statistic}]", item.n_sequences,
                    "exact-enumeration", float(item.n_sequences))
    if not result.passed:
        logger.error(f"Factorization failed for {model.describe()}")
        raise InvariantViolationError(f"Factorization check failed for {model.describe()}")
    report.find("factorization_holds", True, "exact-enumeration")


def _demo_simulate_stopping(report: _Builder, options: DemoOptions, config: LabConfig) -> None:
    """帰無仮説のもとでの停止時刻の分布"""
    mu = report.use("mu0", 0.0 if options.mu0 is None else options.mu0)
    sigma = report.use("sigma", 1.0 if options.sigma is None else options.sigma)
    n_max = report.use("n_max", options.n_max or EXAMPLE2_N)
    reps = report.use("reps", options.reps or DEFAULT_REPLICATIONS)
    seed = report.use("seed", config.seed if options.seed is None else options.seed)

    study = stop_fraction(sigma, n_max, reps, seed, mu=mu, workers=options.workers or config.workers)
    report.studies.append(study_record("optional_stopping", study))

    nominal = normal_sf(BOUNDARY_Z)
    report.find("nominal_level", nominal, "normal-tail", nominal)
    report.find("final_fraction", study.final_fraction, "monte-carlo", study.final_fraction)
    if study.standard_error > 0:
        z = (study.final_fraction - nominal) / study.standard_error
        report.find("excess_in_standard_errors", z, "monte-carlo", z)
    report.find("boundary_at_n_max", boundary(n_max, sigma), "exact-formula", boundary(n_max, sigma))


DemoFunction = Callable[[_Builder, DemoOptions, LabConfig], None]

# デモ名 → (関数, 受け付けるオプション)
DEMOS: Dict[str, Tuple[DemoFunction, frozenset]] = {
    "example1": (_demo_example1, frozenset({"theta0", "direction", "n", "r"})),
    "example2": (_demo_example2, frozenset({"mu0", "direction", "sigma", "n", "n_max", "reps", "seed", "workers"})),
    "example3": (_demo_example3, frozenset({"mu0", "direction", "weight", "xbar", "j"})),
    "example4": (_demo_example4, frozenset({"mu0", "direction", "sigma", "n", "n_max", "reps", "seed",
                                            "workers", "weight"})),
    "audit": (_demo_audit, frozenset({"theta0", "direction", "n", "r", "weight", "semantics"})),
    "factorize": (_demo_factorize, frozenset({"n", "r", "sampling"})),
    "simulate-stopping": (_demo_simulate_stopping, frozenset({"mu0", "sigma", "n_max", "reps", "seed", "workers"})),
}


def demo_names() -> List[str]:
    return list(DEMOS)


def check_report(report: Report) -> Report:
    """
    レポートの不変条件を確認する

    Raises:
        InvariantViolationError: スキーマ版やタグが欠けている場合
    """
    if report.schema_version != SCHEMA_VERSION:
        raise InvariantViolationError(f"Unexpected schema version {report.schema_version!r}")
    for record in report.assessments:
        if not record.distribution_used:
            raise InvariantViolationError(f"Assessment {record.label!r} has no distribution tag")
    for study in report.studies:
        if study.oracle != "monte-carlo":
            raise InvariantViolationError(f"Study {study.label!r} has no oracle tag")
        fractions = [study.stop_fraction_by_n[n] for n in sorted(study.stop_fraction_by_n)]
        if any(later < earlier for earlier, later in zip(fractions, fractions[1:])):
            raise InvariantViolationError(f"Stop fractions of {study.label!r} decrease in n")
    for finding in report.findings:
        if not finding.tag:
            raise InvariantViolationError(f"Finding {finding.name!r} has no tag")
    return report


@timed_execution
def run_demo(name: str, options: Optional[Mapping[str, Any]] = None) -> Report:
    """
    デモを実行してレポートを返す

    Args:
        name: デモ名（example1, example2, example3, example4, audit, factorize, simulate-stopping）
        options: デモのオプション

    Returns:
        Report（同じオプションとシードなら同一）

    Raises:
        InvalidInputError: 未知のデモ名、不正なオプション
        InvariantViolationError: レポートの不変条件違反
    """
    if name not in DEMOS:
        raise InvalidInputError(f"Unknown demo {name!r}; choose one of {', '.join(DEMOS)}")
    demo, accepted = DEMOS[name]
    parsed = parse_options(options)

    unused = sorted(
        field for field in parsed.model_fields_set - accepted if getattr(parsed, field) is not None
    )
    if unused:
        raise InvalidInputError(f"Demo {name!r} does not take option(s): {', '.join(unused)}")

    logger.info(f"Running demo {name}")
    report = _Builder(name)
    demo(report, parsed, load_config())
    return check_report(report.build())
