import math
import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
import numpy as np

from slp_lab.errors import InvalidInputError, InvariantViolationError, UndefinedAssessmentError
from slp_lab.evidence import (
    EvidenceAssessment, HypothesisSpec, SamplingDistribution, evidence_equivalent,
    mixture_conditional, mixture_unconditional, normal_cdf, normal_sf, p_value,
)
from slp_lab.experiment import (
    BernoulliSummary, Binomial, Mixture, MixtureOutcome, NegBinomial, NormalFixedN,
    NormalOptionalStopping, NormalSummary,
)

P_BINOMIAL = Fraction(60460, 2 ** 20)
P_NEGBINOMIAL = Fraction(16664, 2 ** 19)


class TestExactPValues(unittest.TestCase):
    """ベルヌーイ族の厳密な p 値のテスト"""

    def setUp(self):
        self.data = BernoulliSummary(6, 20)
        self.hyp = HypothesisSpec(Fraction(1, 2))

    def test_example1_values(self):
        """p_binomial = 60460/2^20, p_negbinomial = 16664/2^19"""
        binomial = p_value(Binomial(20), self.data, self.hyp)
        negbinomial = p_value(NegBinomial(6), self.data, self.hyp)
        self.assertEqual(binomial.p_value, P_BINOMIAL)
        self.assertEqual(negbinomial.p_value, P_NEGBINOMIAL)
        self.assertAlmostEqual(float(binomial.p_value), 0.05766, places=5)
        self.assertAlmostEqual(float(negbinomial.p_value), 0.03178, places=5)
        self.assertIs(binomial.distribution_used, SamplingDistribution.COMPONENT_CONDITIONAL)
        self.assertTrue(binomial.is_exact)

    def test_binomial_brute_force(self):
        """2^20 個の全試行列の列挙と一致する"""
        count = sum(1 for x in range(2 ** 20) if bin(x).count("1") <= 6)
        self.assertEqual(Fraction(count, 2 ** 20), P_BINOMIAL)

    def test_negbinomial_brute_force(self):
        """N ≥ 20 は最初の 19 回で成功が 5 回以下の列の確率"""
        count = sum(1 for x in range(2 ** 19) if bin(x).count("1") <= 5)
        self.assertEqual(Fraction(count, 2 ** 19), P_NEGBINOMIAL)
        # 6 回目の成功が n ≤ 19 で起きる列の確率の補数
        stopped_early = sum(Fraction(math.comb(n - 1, 5), 2 ** n) for n in range(6, 20))
        self.assertEqual(1 - stopped_early, P_NEGBINOMIAL)

    def test_greater_direction(self):
        """greater では P(R ≥ r) と P(N ≤ n) が一致する"""
        hyp = HypothesisSpec(Fraction(1, 2), "greater")
        expected = Fraction(2 ** 20 - 21700, 2 ** 20)
        self.assertEqual(p_value(Binomial(20), self.data, hyp).p_value, expected)
        self.assertEqual(p_value(NegBinomial(6), self.data, hyp).p_value, expected)

    def test_invalid_inputs(self):
        """不正な仮説・モデル"""
        with self.assertRaises(InvalidInputError):
            HypothesisSpec(Fraction(1, 2), "two-sided")
        with self.assertRaises(InvalidInputError):
            p_value(Binomial(20), self.data, HypothesisSpec(1.5))
        with self.assertRaises(InvalidInputError):
            p_value(Mixture(Fraction(1, 2), Binomial(20), Binomial(20)), MixtureOutcome(1, self.data), self.hyp)
        with self.assertRaises(InvalidInputError):
            p_value(Binomial(19), self.data, self.hyp)

    def test_optional_stopping_undefined(self):
        """任意停止の p 値は閉形式を持たない"""
        with self.assertRaises(UndefinedAssessmentError):
            p_value(NormalOptionalStopping(1.0, 169), NormalSummary(1.0, 169), HypothesisSpec(0.0, "greater"))


class TestNormalPValues(unittest.TestCase):
    """正規族の p 値のテスト"""

    def test_boundary_p_value(self):
        """x̄ = 1.96σ/√n での固定 n の p 値は 1 − Φ(1.96)"""
        assessment = p_value(NormalFixedN(169, 1.0), NormalSummary(1.96 / 13, 169), HypothesisSpec(0.0, "greater"))
        self.assertAlmostEqual(assessment.p_value, normal_sf(1.96), delta=1e-12)
        self.assertAlmostEqual(assessment.p_value, 0.025, delta=1e-4)
        self.assertFalse(assessment.is_exact)

    def test_underflow_flag(self):
        """裾のアンダーフローはフラグと log10 p で報告される"""
        assessment = p_value(NormalFixedN(1, 0.01), NormalSummary(3.9, 1), HypothesisSpec(0.0, "greater"))
        self.assertEqual(assessment.p_value, 0.0)
        self.assertIn("underflow", assessment.flags)
        self.assertIn("log10 p", assessment.trace)

    def test_known_values(self):
        """Φ の既知の値"""
        self.assertEqual(normal_cdf(0.0), 0.5)
        self.assertAlmostEqual(normal_cdf(1.96), 0.9750021048517795, delta=1e-15)
        self.assertAlmostEqual(normal_sf(-1.0), 0.8413447460685429, delta=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-30, max_value=30, allow_nan=False))
    def test_symmetry(self, x):
        """Φ(x) + Φ(−x) = 1"""
        self.assertAlmostEqual(normal_cdf(x) + normal_cdf(-x), 1.0, delta=1e-14)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=-30, max_value=30, allow_nan=False),
           st.floats(min_value=-30, max_value=30, allow_nan=False))
    def test_monotone(self, a, b):
        """Φ は単調非減少"""
        low, high = min(a, b), max(a, b)
        self.assertLessEqual(normal_cdf(low), normal_cdf(high) + 1e-15)

    def test_monotone_on_dense_grid(self):
        """[-40, 40] の 10^5 区間のグリッドで Φ は単調非減少"""
        grid = np.linspace(-40.0, 40.0, 100_001)
        values = np.array([normal_cdf(x) for x in grid])
        self.assertTrue(np.all(np.diff(values) >= 0))
        self.assertEqual((values[0], values[-1]), (0.0, 1.0))


class TestMixtureAssessments(unittest.TestCase):
    """混合実験の条件付き・無条件評価のテスト"""

    def setUp(self):
        self.instruments = Mixture(Fraction(1, 2), NormalFixedN(1, 0.01), NormalFixedN(1, 100.0))
        self.hyp = HypothesisSpec(0.0, "greater")

    def test_conditional_equals_component(self):
        """条件付き評価は成分単独の p 値と一致する"""
        data = NormalSummary(3.9, 1)
        conditional = mixture_conditional(self.instruments, MixtureOutcome(2, data), self.hyp)
        standalone = p_value(NormalFixedN(1, 100.0), data, self.hyp)
        self.assertEqual(conditional.p_value, standalone.p_value)
        self.assertIs(conditional.distribution_used, SamplingDistribution.COMPONENT_CONDITIONAL)
        self.assertIn("j=2", conditional.trace)

    def test_unconditional_differs(self):
        """p′ ≠ p″ なら条件付きと無条件は異なる"""
        data = NormalSummary(3.9, 1)
        p_first = p_value(self.instruments.first, data, self.hyp)
        p_second = p_value(self.instruments.second, data, self.hyp)
        unconditional = mixture_unconditional(p_first, p_second, Fraction(1, 2))
        self.assertAlmostEqual(unconditional.p_value, 0.5 * p_second.p_value, delta=1e-15)
        self.assertIs(unconditional.distribution_used, SamplingDistribution.MIXTURE_UNCONDITIONAL)
        conditional = mixture_conditional(self.instruments, MixtureOutcome(2, data), self.hyp)
        self.assertFalse(evidence_equivalent(conditional, unconditional))

    def test_symmetry_at_null(self):
        """x̄ = 0 では両成分とも p = 0.5"""
        data = NormalSummary(0.0, 1)
        conditional = mixture_conditional(self.instruments, MixtureOutcome(1, data), self.hyp)
        unconditional = mixture_unconditional(
            p_value(self.instruments.first, data, self.hyp),
            p_value(self.instruments.second, data, self.hyp),
            Fraction(1, 2),
        )
        self.assertEqual(conditional.p_value, 0.5)
        self.assertEqual(unconditional.p_value, 0.5)

    def test_example1_unconditional(self):
        """Example 1 の等重み混合は 93788/2^21"""
        result = mixture_unconditional(P_BINOMIAL, P_NEGBINOMIAL, Fraction(1, 2))
        self.assertEqual(result.p_value, Fraction(93788, 2 ** 21))
        self.assertAlmostEqual(float(result.p_value), 0.04472, places=5)

    @settings(max_examples=100, deadline=None)
    @given(st.fractions(min_value=0, max_value=1), st.fractions(min_value=0, max_value=1),
           st.fractions(min_value=0, max_value=1).filter(lambda w: 0 < w < 1))
    def test_convex_combination(self, p1, p2, w):
        """無条件評価は p′ と p″ の間にある"""
        result = mixture_unconditional(p1, p2, w)
        self.assertEqual(result.p_value, w * p1 + (1 - w) * p2)
        self.assertLessEqual(min(p1, p2), result.p_value)
        self.assertLessEqual(result.p_value, max(p1, p2))

    def test_invalid_mixture_inputs(self):
        """範囲外の確率・重み"""
        with self.assertRaises(InvalidInputError):
            mixture_unconditional(Fraction(1, 2), Fraction(3, 2), Fraction(1, 2))
        with self.assertRaises(InvalidInputError):
            mixture_unconditional(0.1, 0.2, 1)
        with self.assertRaises(InvalidInputError):
            mixture_conditional(Binomial(3), MixtureOutcome(1, BernoulliSummary(1, 3)), self.hyp)


class TestAssessment(unittest.TestCase):
    """EvidenceAssessment の不変条件のテスト"""

    def test_requires_distribution_tag(self):
        """標本分布のタグがない評価は作れない"""
        with self.assertRaises(InvariantViolationError):
            EvidenceAssessment(p_value=0.5, distribution_used="conditional", source=None, trace="")
        with self.assertRaises(InvariantViolationError):
            EvidenceAssessment(p_value=1.5, distribution_used=SamplingDistribution.COMPONENT_CONDITIONAL,
                               source=None, trace="")

    def test_equivalence(self):
        """厳密な値は完全一致、浮動小数点は許容誤差で比較する"""
        tag = SamplingDistribution.COMPONENT_CONDITIONAL
        a = EvidenceAssessment(Fraction(1, 3), tag, None, "")
        b = EvidenceAssessment(Fraction(1, 3), tag, None, "")
        c = EvidenceAssessment(1 / 3 + 1e-13, tag, None, "")
        d = EvidenceAssessment(0.3, tag, None, "")
        self.assertTrue(evidence_equivalent(a, b))
        self.assertTrue(evidence_equivalent(a, c))
        self.assertFalse(evidence_equivalent(a, d))


if __name__ == "__main__":
    unittest.main()
