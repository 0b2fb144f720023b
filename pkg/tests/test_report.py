import json
import unittest
from fractions import Fraction

from slp_lab.errors import InvalidInputError
from slp_lab.report import DEMOS, demo_names, parse_report, run_demo, serialize
from slp_lab.schema import (
    SCHEMA_VERSION, AssessmentRecord, Finding, PremiseRecord, Report, StudyRecord,
    VerdictRecord, WitnessRecord, schema_document,
)


def finding(report: Report, name: str) -> Finding:
    return next(item for item in report.findings if item.name == name)


class TestDemos(unittest.TestCase):
    """デモのテスト"""

    def test_names(self):
        """デモ名の一覧"""
        self.assertEqual(demo_names(), ["example1", "example2", "example3", "example4",
                                        "audit", "factorize", "simulate-stopping"])

    def test_example1(self):
        """p_binomial ≈ 0.05766, p_negbinomial ≈ 0.03178, c = 10/3"""
        report = run_demo("example1", {"theta0": 0.5})
        self.assertEqual(report.schema_version, SCHEMA_VERSION)
        binomial, negbinomial = report.assessments
        self.assertEqual(binomial.p_value_exact, str(Fraction(60460, 2 ** 20)))
        self.assertEqual(negbinomial.p_value_exact, str(Fraction(16664, 2 ** 19)))
        self.assertAlmostEqual(binomial.p_value, 0.05766, places=5)
        self.assertAlmostEqual(negbinomial.p_value, 0.03178, places=5)
        self.assertEqual(finding(report, "likelihood_ratio_constant").value, "10/3")
        self.assertEqual(finding(report, "slp_violation").value, "true")
        self.assertEqual(report.inputs["theta0"], "1/2")

    def test_audit_single_semantics(self):
        """(無条件, 条件付き) は invalid、証拠は (0.05766, 0.03178)"""
        report = run_demo("audit", {"semantics": "unconditional,conditional"})
        self.assertEqual(len(report.verdicts), 1)
        verdict = report.verdicts[0]
        self.assertEqual(verdict.verdict, "invalid")
        witness = verdict.conclusion.witnesses[0]
        self.assertAlmostEqual(witness.left.p_value, 0.05766, places=5)
        self.assertAlmostEqual(witness.right.p_value, 0.03178, places=5)

    def test_audit_default(self):
        """既定では 3 つの割り当てすべてを監査する"""
        report = run_demo("audit")
        self.assertEqual([v.verdict for v in report.verdicts],
                         ["invalid", "blocked-at-premise-2", "blocked-at-premise-1"])
        self.assertEqual(report.verdicts[1].premise2.witnesses[0].left.distribution_used,
                         "birnbaum-unconditional")

    def test_example3_symmetry(self):
        """x̄ = 0, j = 1 では条件付きも無条件も 0.5"""
        report = run_demo("example3", {"xbar": 0, "j": 1})
        conditional, unconditional = report.assessments
        self.assertEqual(conditional.p_value, 0.5)
        self.assertEqual(conditional.distribution_used, "component-conditional")
        self.assertEqual(unconditional.p_value, 0.5)
        self.assertEqual(unconditional.distribution_used, "mixture-unconditional")

    def test_example3_default(self):
        """既定では精密な測定器の裾がアンダーフローする"""
        report = run_demo("example3")
        conditional, unconditional = report.assessments
        self.assertIn("underflow", unconditional.flags)
        self.assertAlmostEqual(unconditional.p_value, conditional.p_value / 2, delta=1e-15)

    def test_factorize(self):
        """二項 R=6 と負の二項 N=20 のスライス"""
        report = run_demo("factorize")
        self.assertEqual(finding(report, "conditional[R=6]").value, "1/38760")
        self.assertEqual(finding(report, "factorization_holds").value, "true")
        self.assertEqual(report.assessments, [])
        negative = run_demo("factorize", {"sampling": "negative-binomial", "n": 20, "r": 6})
        self.assertEqual(finding(negative, "conditional[N=20]").value, "1/11628")

    def test_example2(self):
        """固定 n の p 値と任意停止の棄却率"""
        report = run_demo("example2", {"reps": 2000, "seed": 11})
        self.assertAlmostEqual(report.assessments[0].p_value, 0.025, delta=1e-4)
        self.assertEqual(report.studies[0].oracle, "monte-carlo")
        self.assertEqual(report.studies[0].n_max, 169)
        rate = finding(report, "optional_stopping_rejection_rate")
        self.assertEqual(rate.tag, "monte-carlo")
        self.assertGreater(rate.numeric, 0.025)

    def test_example4(self):
        """T-B は任意停止のペアを崩壊させる"""
        report = run_demo("example4", {"reps": 1000, "n": 25, "seed": 3})
        self.assertEqual(finding(report, "tb_collapses_pair").value, "true")
        self.assertAlmostEqual(report.assessments[0].p_value, 0.025, delta=1e-4)

    def test_example4_uses_tail_at_observed_n(self):
        """n_max > n でも推定値は観測された n までの停止割合を使う"""
        report = run_demo("example4", {"reps": 1000, "n": 25, "n_max": 200, "seed": 3})
        study = report.studies[0]
        stopped_by_n = study.stop_fraction_by_n[25]
        self.assertEqual(finding(report, "stop_fraction_at_n").numeric, stopped_by_n)
        expected = 0.5 * report.assessments[0].p_value + 0.5 * stopped_by_n
        self.assertAlmostEqual(finding(report, "birnbaum_unconditional_estimate").numeric, expected, delta=1e-15)
        self.assertLess(stopped_by_n, study.final_fraction)

    def test_example2_excess_uses_tail_at_observed_n(self):
        """固定 n の p 値との差は P(N ≤ n) から計算する"""
        report = run_demo("example2", {"reps": 1000, "n": 25, "n_max": 200, "seed": 3})
        study = report.studies[0]
        excess = study.stop_fraction_by_n[25] - report.assessments[0].p_value
        self.assertAlmostEqual(finding(report, "rate_minus_fixed_n_p").numeric, excess, delta=1e-15)

    def test_simulate_stopping_deterministic(self):
        """同じシードなら同じバイト列"""
        options = {"reps": 500, "n_max": 40, "seed": 5}
        first = serialize(run_demo("simulate-stopping", options), "json")
        second = serialize(run_demo("simulate-stopping", dict(options, workers=1)), "json")
        self.assertEqual(first, second)

    def test_invalid_options(self):
        """未知のデモ・不正な値・使わないオプション"""
        with self.assertRaises(InvalidInputError):
            run_demo("example9")
        with self.assertRaises(InvalidInputError):
            run_demo("example1", {"theta0": 2})
        with self.assertRaises(InvalidInputError):
            run_demo("example1", {"xbar": 1.0})
        with self.assertRaises(InvalidInputError):
            run_demo("example1", {"colour": "blue"})
        with self.assertRaises(InvalidInputError):
            run_demo("simulate-stopping", {"reps": 10})
        with self.assertRaises(InvalidInputError):
            run_demo("audit", {"semantics": "unconditional"})


class TestSerialize(unittest.TestCase):
    """レポートの出力形式のテスト"""

    def setUp(self):
        self.report = run_demo("example1")

    def test_json_round_trip(self):
        """JSON は往復で同一"""
        self.assertEqual(parse_report(serialize(self.report, "json")), self.report)
        audit_report = run_demo("audit")
        self.assertEqual(parse_report(serialize(audit_report, "json")), audit_report)
        study_report = run_demo("simulate-stopping", {"reps": 200, "n_max": 15})
        self.assertEqual(parse_report(serialize(study_report, "json")), study_report)

    def test_empty_sections(self):
        """空の verdicts / studies も有効な出力"""
        data = json.loads(serialize(self.report, "json"))
        self.assertEqual(data["verdicts"], [])
        self.assertEqual(data["studies"], [])
        empty = Report(demo_name="empty")
        self.assertEqual(parse_report(serialize(empty, "json")), empty)

    def test_csv_rows(self):
        """Example 1 の CSV はヘッダーと 2 行"""
        lines = serialize(self.report, "csv").decode("utf-8").splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[0].startswith("label,p_value,p_value_exact,distribution_used"))
        self.assertTrue(lines[1].startswith("p_binomial,"))

    def test_text(self):
        """テキストは人が読む要約"""
        text = serialize(self.report, "text").decode("utf-8")
        self.assertIn("demo: example1", text)
        self.assertIn("component-conditional", text)

    def test_errors(self):
        """未対応の形式と壊れた JSON"""
        with self.assertRaises(InvalidInputError):
            serialize(self.report, "xml")
        with self.assertRaises(InvalidInputError):
            parse_report(b'{"demo_name": 3}')


class TestSchemaDocument(unittest.TestCase):
    """固定された JSON スキーマ文書のテスト"""

    def test_fields_match_models(self):
        """文書のフィールド名はモデルのフィールド名と一致する"""
        document = json.loads(schema_document())
        self.assertEqual(document["properties"]["schema_version"]["const"], SCHEMA_VERSION)
        self.assertEqual(set(document["properties"]), set(Report.model_fields))
        for model in (AssessmentRecord, WitnessRecord, PremiseRecord, VerdictRecord, StudyRecord, Finding):
            definition = document["$defs"][model.__name__]
            self.assertEqual(set(definition["properties"]), set(model.model_fields), model.__name__)
            self.assertEqual(set(definition["required"]), set(model.model_fields), model.__name__)

    def test_every_demo_is_registered(self):
        """デモの登録表"""
        self.assertEqual(set(DEMOS), set(demo_names()))


if __name__ == "__main__":
    unittest.main()
