import logging
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import benfordaudit as ba
from benfordaudit.conformance import _pearson_statistic
from benfordaudit.errors import DomainError, EmptyInput


class TestCounting:
    def test_counts_and_exclusions(self, caplog):
        values = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0,
                  10.0, 20.0, 0.0, -1.0, math.nan]
        with caplog.at_level(logging.WARNING, logger="benfordaudit.conformance"):
            table = ba.count_first_digits(values)
        assert table.counts.tolist() == [2, 2, 1, 1, 1, 1, 1, 1, 1]
        assert table.n == 11
        assert table.excluded == 3
        assert "excluded 3" in caplog.text

    def test_all_excluded_raises(self):
        with pytest.raises(EmptyInput):
            ba.count_first_digits([0.0, -2.0])

    def test_empty_raises(self):
        with pytest.raises(EmptyInput):
            ba.count_first_digits([])

    def test_frequencies(self):
        table = ba.count_first_digits([1.0, 1.5, 2.0, 30.0])
        freqs = table.frequencies
        assert freqs.tolist() == [0.5, 0.25, 0.25, 0, 0, 0, 0, 0, 0]
        assert abs(float(freqs.sum()) - 1.0) < 1e-12

    def test_table_validation(self):
        with pytest.raises(DomainError):
            ba.DigitFrequencyTable(counts=np.ones(8, dtype=np.int64), n=8)
        with pytest.raises(DomainError):
            ba.DigitFrequencyTable(counts=np.array([-1] + [1] * 8), n=7)
        with pytest.raises(DomainError):
            ba.DigitFrequencyTable(counts=np.ones(9, dtype=np.int64), n=10)


class TestChiSquare:
    def test_zero_iff_observed_equals_expected(self):
        expected = ba.expected_counts(90)
        assert _pearson_statistic(expected, expected) == 0.0
        bumped = expected.copy()
        bumped[0] += 1.0
        assert _pearson_statistic(bumped, expected) > 0.0

    def test_equidistributed_ninety(self):
        # independent brute-force evaluation of the same statistic
        table = ba.DigitFrequencyTable(counts=np.full(9, 10, dtype=np.int64), n=90)
        got = ba.chi_square_statistic(table)
        brute = 0.0
        for d in range(1, 10):
            e = 90.0 * math.log10(1.0 + 1.0 / d)
            brute += (10.0 - e) ** 2 / e
        assert abs(got - brute) < 1e-12
        assert got > ba.DEFAULT_THRESHOLDS.chi2_strict

    def test_statistic_is_scale_free_in_counts(self):
        # same frequencies at 10x the sample size give 10x the statistic
        small = ba.DigitFrequencyTable(counts=np.full(9, 10, dtype=np.int64), n=90)
        big = ba.DigitFrequencyTable(counts=np.full(9, 100, dtype=np.int64), n=900)
        ratio = ba.chi_square_statistic(big) / ba.chi_square_statistic(small)
        assert abs(ratio - 10.0) < 1e-9

    def test_df(self):
        assert ba.CHI_SQUARE_DF == 8


class TestClassification:
    @pytest.mark.parametrize("chi2,expected", [
        (0.0, ba.Conformity.CONFORMING),
        (13.362, ba.Conformity.CONFORMING),    # boundary takes the lower class
        (13.3621, ba.Conformity.MARGINAL),
        (15.507, ba.Conformity.MARGINAL),
        (15.5071, ba.Conformity.NONCONFORMING),
        (56.001, ba.Conformity.NONCONFORMING),
    ])
    def test_boundaries(self, chi2, expected):
        assert ba.classify(chi2) is expected

    @pytest.mark.parametrize("bad", [-0.1, math.nan, math.inf])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            ba.classify(bad)

    @given(a=st.floats(min_value=0.0, max_value=100.0),
           b=st.floats(min_value=0.0, max_value=100.0))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert ba.classify(lo) <= ba.classify(hi)

    def test_custom_thresholds(self):
        t = ba.Thresholds(chi2_strict=20.090, chi2_lenient=11.030,
                          alpha_strict=0.01, alpha_lenient=0.20)
        assert ba.classify(15.0, t) is ba.Conformity.MARGINAL
        with pytest.raises(DomainError):
            ba.Thresholds(chi2_strict=10.0, chi2_lenient=12.0)

    def test_thresholds_from_alphas(self):
        t = ba.Thresholds.from_alphas(0.05, 0.10)
        assert t == ba.DEFAULT_THRESHOLDS
        assert ba.critical_value_df8(0.05) == 15.507
        assert ba.critical_value_df8(0.10) == 13.362
        with pytest.raises(DomainError):
            ba.critical_value_df8(0.07)

    def test_labels(self):
        assert ba.Conformity.NONCONFORMING.label == "nonconforming"


class TestConfidenceBand:
    def test_half_width(self):
        band = ba.confidence_band(1546)
        assert abs(band.sigma - 1.0 / math.sqrt(1545)) < 1e-15
        band74 = ba.confidence_band(74)
        assert abs(band74.sigma - 0.11704114719613057) < 1e-15

    def test_multiplier_scales(self):
        assert ba.confidence_band(100, 2.0).sigma == 2.0 * ba.confidence_band(100).sigma

    def test_band_envelopes_law(self):
        band = ba.confidence_band(50)
        p = ba.bl1_probabilities()
        assert np.allclose(band.upper - p, band.sigma)
        assert np.allclose(p - band.lower, band.sigma)

    def test_lower_edge_not_clamped(self):
        band = ba.confidence_band(2)   # sigma = 1, far wider than any probability
        assert (band.lower < 0).all()

    def test_width_strictly_decreasing(self):
        sigmas = [ba.confidence_band(n).sigma for n in range(2, 40)]
        assert all(a > b for a, b in zip(sigmas, sigmas[1:]))

    @pytest.mark.parametrize("n", [0, 1])
    def test_needs_two(self, n):
        with pytest.raises(DomainError):
            ba.confidence_band(n)

    @pytest.mark.parametrize("mult", [0.0, -1.0, math.nan])
    def test_multiplier_domain(self, mult):
        with pytest.raises(DomainError):
            ba.confidence_band(10, mult)


class TestEvaluate:
    def test_full_result(self):
        table = ba.count_first_digits([1.0, 1.1, 2.0, 9.0])
        result = ba.evaluate_table(table)
        assert result.chi2 == ba.chi_square_statistic(table)
        assert result.df == 8
        assert result.classification is ba.classify(result.chi2)
        assert np.allclose(result.per_digit_deviation,
                           table.frequencies - ba.bl1_probabilities())
        assert result.band is not None and result.band.sigma == 1.0 / math.sqrt(3)

    def test_single_observation_has_no_band(self):
        table = ba.count_first_digits([7.0])
        result = ba.evaluate_table(table)
        assert result.band is None
        # a lone 7 is already well outside the law's expectations
        assert result.classification is ba.Conformity.NONCONFORMING


class TestMean:
    def test_known_window(self):
        yearly = [5.297, 9.692, 7.348, 4.674, 4.836]
        assert abs(ba.mean_chi2(yearly) - 6.3694) < 1e-9

    def test_singleton(self):
        assert ba.mean_chi2([4.2]) == 4.2

    def test_empty(self):
        with pytest.raises(EmptyInput):
            ba.mean_chi2([])

    def test_domain(self):
        with pytest.raises(DomainError):
            ba.mean_chi2([1.0, -2.0])


class TestSetSummary:
    def test_histogram_layout(self):
        s = ba.chi2_set_summary([1.0, 3.0, 5.0, 16.0], ["a", "b", "c", "d"])
        assert s.bin_edges[0] == 0.0 and s.bin_edges[-1] == 18.0
        assert s.bin_edges.shape[0] == 10
        assert int(s.bin_counts.sum()) == 4
        assert s.outliers == (("d", 16.0),)
        assert s.threshold == 15.507

    def test_half_open_bins(self):
        s = ba.chi2_set_summary([2.0], bin_width=2.0)
        # a value on an inner edge belongs to the bin it opens
        assert s.bin_counts.tolist() == [0, 1]

    def test_outliers_sorted_descending(self):
        s = ba.chi2_set_summary([56.001, 16.059, 1.0], ["x", "y", "z"], threshold=15.507)
        assert [label for label, _ in s.outliers] == ["x", "y"]

    def test_single_bin_when_everything_small(self):
        s = ba.chi2_set_summary([0.2, 1.9], bin_width=2.0)
        assert s.bin_counts.tolist() == [2]

    def test_validation(self):
        with pytest.raises(EmptyInput):
            ba.chi2_set_summary([])
        with pytest.raises(DomainError):
            ba.chi2_set_summary([1.0], labels=["a", "b"])
        with pytest.raises(DomainError):
            ba.chi2_set_summary([1.0], bin_width=0.0)
        with pytest.raises(DomainError):
            ba.chi2_set_summary([1.0], origin=2.0)
