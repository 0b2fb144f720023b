import math
import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from slp_lab.errors import EnumerationLimitError, InvalidInputError, UndefinedAssessmentError
from slp_lab.experiment import (
    BernoulliSeq, BernoulliSummary, Binomial, Birnbaumized, Mixture, MixtureOutcome,
    NegBinomial, NormalFixedN, NormalOptionalStopping, NormalSummary, ParameterSpace,
    canonical_outcome, catalog, check_slp_pair, default_grid, find_slp_partner,
    likelihood_kernel, normalization_check, pmf, sufficient_statistic, verify_factorization,
)


class TestModels(unittest.TestCase):
    """実験モデルと結果のデータ型のテスト"""

    def test_invalid_models(self):
        """不正なパラメータはInvalidInputError"""
        with self.assertRaises(InvalidInputError):
            Binomial(0)
        with self.assertRaises(InvalidInputError):
            NegBinomial(-1)
        with self.assertRaises(InvalidInputError):
            NormalFixedN(10, 0.0)
        with self.assertRaises(InvalidInputError):
            Mixture(Fraction(1, 2), Binomial(3), NormalFixedN(1, 1.0))
        with self.assertRaises(InvalidInputError):
            Mixture(1, Binomial(3), Binomial(4))

    def test_invalid_outcomes(self):
        """不正な結果はInvalidInputError"""
        with self.assertRaises(InvalidInputError):
            BernoulliSeq((0, 2, 1))
        with self.assertRaises(InvalidInputError):
            BernoulliSummary(5, 4)
        with self.assertRaises(InvalidInputError):
            MixtureOutcome(3, BernoulliSummary(1, 2))

    def test_canonical_outcome(self):
        """試行列は要約に還元される"""
        self.assertEqual(canonical_outcome(Binomial(4), BernoulliSeq((1, 0, 1, 0))), BernoulliSummary(2, 4))
        self.assertEqual(canonical_outcome(NegBinomial(2), BernoulliSeq((0, 1, 0, 1))), BernoulliSummary(2, 4))

    def test_outcome_mismatch(self):
        """結果がモデルに合わない場合"""
        with self.assertRaises(InvalidInputError):
            canonical_outcome(Binomial(20), BernoulliSummary(6, 19))
        with self.assertRaises(InvalidInputError):
            canonical_outcome(NegBinomial(6), BernoulliSummary(5, 20))
        with self.assertRaises(InvalidInputError):
            # 負の二項では最後の試行が成功でなければならない
            canonical_outcome(NegBinomial(1), BernoulliSeq((1, 0)))
        with self.assertRaises(InvalidInputError):
            canonical_outcome(NormalOptionalStopping(1.0, 169), NormalSummary(0.0, 169))
        with self.assertRaises(InvalidInputError):
            canonical_outcome(NormalOptionalStopping(1.0, 10), NormalSummary(5.0, 11))


class TestLikelihood(unittest.TestCase):
    """尤度とSLPペアのテスト"""

    def setUp(self):
        self.binomial = Binomial(20)
        self.negbinomial = NegBinomial(6)
        self.data = BernoulliSummary(6, 20)

    def test_example1_pmf(self):
        """二項 C(20,6)/2^20、負の二項 C(19,5)/2^20"""
        half = Fraction(1, 2)
        self.assertEqual(pmf(self.binomial, self.data, half), Fraction(38760, 2 ** 20))
        self.assertEqual(pmf(self.negbinomial, self.data, half), Fraction(11628, 2 ** 20))

    def test_sequence_pmf(self):
        """特定の試行列の確率"""
        self.assertEqual(pmf(Binomial(3), BernoulliSeq((1, 0, 1)), Fraction(1, 2)), Fraction(1, 8))

    def test_kernels(self):
        """尤度カーネルの定数と指数"""
        kernel = likelihood_kernel(self.binomial, self.data)
        self.assertEqual(kernel.constant, 38760)
        self.assertEqual((kernel.successes, kernel.failures), (6, 14))
        self.assertEqual(likelihood_kernel(self.negbinomial, self.data).constant, 11628)

    def test_example1_pair(self):
        """c = 10/3 が 11 点のグリッドで厳密に成り立つ"""
        pair = check_slp_pair((self.binomial, self.data), (self.negbinomial, self.data))
        self.assertIsNotNone(pair)
        self.assertEqual(pair.constant, Fraction(10, 3))
        for theta in default_grid(ParameterSpace.BERNOULLI):
            self.assertEqual(pmf(self.binomial, self.data, theta),
                             Fraction(10, 3) * pmf(self.negbinomial, self.data, theta))

    def test_non_pair(self):
        """異なるカーネルはNone"""
        self.assertIsNone(check_slp_pair((Binomial(20), BernoulliSummary(7, 20)),
                                         (self.negbinomial, self.data)))

    def test_pair_space_mismatch(self):
        """パラメータ空間が異なるペアはInvalidInputError"""
        with self.assertRaises(InvalidInputError):
            check_slp_pair((self.binomial, self.data), (NormalFixedN(1, 1.0), NormalSummary(0.0, 1)))

    def test_empty_grid(self):
        """空のグリッドはInvalidInputError"""
        with self.assertRaises(InvalidInputError):
            check_slp_pair((self.binomial, self.data), (self.negbinomial, self.data), grid=[])

    def test_normal_pair(self):
        """同じ x̄ と n を持つ固定nと任意停止は c = 1"""
        data = NormalSummary(1.96 / 13, 169)
        pair = check_slp_pair((NormalFixedN(169, 1.0), data), (NormalOptionalStopping(1.0, 169), data))
        self.assertIsNotNone(pair)
        self.assertAlmostEqual(pair.constant, 1.0, places=12)

    def test_find_partner(self):
        """ペアの構成"""
        pair = find_slp_partner(self.binomial, self.data)
        self.assertEqual(pair.second.model, NegBinomial(6))
        back = find_slp_partner(self.negbinomial, self.data)
        self.assertEqual(back.second.model, Binomial(20))
        self.assertEqual(back.constant, Fraction(3, 10))
        with self.assertRaises(InvalidInputError):
            find_slp_partner(Binomial(5), BernoulliSummary(0, 5))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=40).flatmap(
        lambda n: st.tuples(st.just(n), st.integers(min_value=1, max_value=n))))
    def test_binomial_negbinomial_ratio(self, case):
        """任意の (n, r) で c = n/r"""
        n, r = case
        pair = check_slp_pair((Binomial(n), BernoulliSummary(r, n)), (NegBinomial(r), BernoulliSummary(r, n)))
        self.assertEqual(pair.constant, Fraction(n, r))

    def test_reflexive(self):
        """(E, x) は自分自身と c = 1 でペアになる"""
        for model in (self.binomial, self.negbinomial):
            pair = check_slp_pair((model, self.data), (model, self.data))
            self.assertIsNotNone(pair)
            self.assertEqual(pair.constant, 1)
        data = NormalSummary(0.3, 16)
        pair = check_slp_pair((NormalFixedN(16, 2.0), data), (NormalFixedN(16, 2.0), data))
        self.assertAlmostEqual(pair.constant, 1.0, delta=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(min_value=1, max_value=30).flatmap(
            lambda n: st.tuples(st.just(n), st.integers(min_value=1, max_value=n))),
        st.booleans(),
    )
    def test_pair_symmetry(self, case, first_is_binomial):
        """入れ替えると定数は 1/c になる"""
        n, r = case
        data = BernoulliSummary(r, n)
        a, b = (Binomial(n), data), (NegBinomial(r), data)
        if not first_is_binomial:
            a, b = b, a
        forward = check_slp_pair(a, b)
        backward = check_slp_pair(b, a)
        self.assertIsNotNone(forward)
        self.assertIsNotNone(backward)
        self.assertEqual(backward.constant, 1 / forward.constant)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(min_value=0, max_value=1), min_size=1, max_size=16), st.randoms())
    def test_permutation_invariance(self, bits, rng):
        """並べ替えた試行列は同じ確率と十分統計量を持つ"""
        model = Binomial(len(bits))
        shuffled = list(bits)
        rng.shuffle(shuffled)
        theta = Fraction(3, 7)
        self.assertEqual(pmf(model, BernoulliSeq(tuple(bits)), theta),
                         pmf(model, BernoulliSeq(tuple(shuffled)), theta))
        self.assertEqual(sufficient_statistic(model, BernoulliSeq(tuple(bits))),
                         sufficient_statistic(model, BernoulliSeq(tuple(shuffled))))

    def test_mixture_pmf(self):
        """混合実験の確率は w_j·f_j"""
        mixture = Mixture(Fraction(1, 4), Binomial(2), Binomial(3))
        value = pmf(mixture, MixtureOutcome(2, BernoulliSummary(1, 3)), Fraction(1, 2))
        self.assertEqual(value, Fraction(3, 4) * Fraction(3, 8))

    def test_parameter_outside_space(self):
        """θ は開区間 (0,1) の内部"""
        with self.assertRaises(InvalidInputError):
            pmf(self.binomial, self.data, 0)
        with self.assertRaises(InvalidInputError):
            pmf(self.binomial, self.data, 1.5)


class TestSufficiency(unittest.TestCase):
    """十分統計量と因子分解のテスト"""

    def test_sufficient_statistics(self):
        """各モデルの十分統計量"""
        self.assertEqual(sufficient_statistic(Binomial(4), BernoulliSeq((1, 1, 0, 0))), 2)
        self.assertEqual(sufficient_statistic(NegBinomial(2), BernoulliSeq((0, 1, 0, 1))), 4)
        mixture = Mixture(Fraction(1, 2), Binomial(2), Binomial(3))
        self.assertEqual(sufficient_statistic(mixture, MixtureOutcome(2, BernoulliSeq((1, 0, 1)))), (2, 2))

    def test_binomial_factorization_small_n(self):
        """n ≤ 12 のすべてのスライスが一様で θ に依存しない"""
        thetas = (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10))
        for n in range(1, 13):
            report = verify_factorization(Binomial(n), thetas)
            self.assertTrue(report.passed, f"n={n}")
            for item in report.slices:
                self.assertEqual(item.uniform_value, Fraction(1, math.comb(n, item.statistic)))

    def test_negbinomial_slice(self):
        """NegBinomial{6} の N=20 スライスは 11628 列、条件付き 1/11628"""
        report = verify_factorization(NegBinomial(6), (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)),
                                      slices=[20])
        self.assertTrue(report.passed)
        self.assertEqual(report.slices[0].n_sequences, 11628)
        self.assertEqual(report.slices[0].uniform_value, Fraction(1, 11628))

    def test_factorization_errors(self):
        """列挙上限と不正なスライス"""
        with self.assertRaises(EnumerationLimitError):
            verify_factorization(Binomial(30), (Fraction(1, 2),))
        with self.assertRaises(EnumerationLimitError):
            verify_factorization(Binomial(20), (Fraction(1, 2),), max_sequences=1000)
        with self.assertRaises(InvalidInputError):
            verify_factorization(NegBinomial(6), (Fraction(1, 2),))
        with self.assertRaises(InvalidInputError):
            verify_factorization(NegBinomial(6), (Fraction(1, 2),), slices=[5])

    def test_catalog_normalization(self):
        """カタログの全モデルが 5 つのパラメータ値で正規化されている"""
        for name, model in catalog().items():
            if model.parameter_space is ParameterSpace.BERNOULLI:
                params = (Fraction(1, 10), Fraction(3, 10), Fraction(1, 2), Fraction(7, 10), Fraction(9, 10))
            else:
                params = (-2.0, -1.0, 0.0, 1.0, 2.0)
            for param in params:
                report = normalization_check(model, param)
                self.assertTrue(report.passed, f"{name} at {param}: {report.total}")

    def test_binomial_normalization_exact(self):
        """有限の標本空間では厳密に 1"""
        report = normalization_check(Binomial(20), Fraction(1, 3))
        self.assertEqual(report.total, 1)
        self.assertIsNone(report.truncation_point)

    def test_negbinomial_truncation(self):
        """負の二項の部分和は打ち切り点を報告する"""
        report = normalization_check(NegBinomial(6), Fraction(1, 2), tol=1e-9)
        self.assertIsNotNone(report.truncation_point)
        self.assertGreaterEqual(report.truncation_point, 6)
        self.assertLessEqual(float(1 - report.total), 1e-9)

    def test_optional_stopping_normalization_undefined(self):
        """任意停止モデルの正規化は未定義"""
        self.assertIn("example2-optional-stopping", catalog(include_optional_stopping=True))
        with self.assertRaises(UndefinedAssessmentError):
            normalization_check(NormalOptionalStopping(1.0, 169), 0.0)

    def test_birnbaumized_in_catalog(self):
        """カタログのBirnbaum化実験"""
        model = catalog()["example1-birnbaumized"]
        self.assertIsInstance(model, Birnbaumized)
        self.assertEqual(model.pair.constant, Fraction(10, 3))


if __name__ == "__main__":
    unittest.main()
