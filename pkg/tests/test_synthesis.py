import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import benfordaudit as ba
from benfordaudit.errors import InvalidSpec

from conftest import load_power_seeds


def spec(kind="benford", n=100, **kw):
    return ba.GeneratorSpec(kind=kind, n=n, **kw)


class TestSpecValidation:
    def test_kind_coercion(self):
        s = spec(kind="mixture", tamper_fraction=0.5)
        assert s.kind is ba.GeneratorKind.MIXTURE

    @pytest.mark.parametrize("kw", [
        dict(n=0),
        dict(n=-3),
        dict(decades=0),
        dict(decades=19),
        dict(kind="mixture", tamper_fraction=-0.1),
        dict(kind="mixture", tamper_fraction=1.5),
        dict(kind="benford", tamper_fraction=0.2),   # tampering needs the mixture kind
        dict(seed=1.5),
    ])
    def test_rejects(self, kw):
        with pytest.raises(InvalidSpec):
            spec(**{"kind": "benford", "n": 10, **kw})

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            spec(kind="lognormal")


class TestDeterminism:
    def test_same_spec_same_values(self):
        a = ba.generate(spec(n=512, seed=99))
        b = ba.generate(spec(n=512, seed=99))
        assert (a == b).all()

    def test_different_seeds_differ(self):
        a = ba.generate(spec(n=512, seed=1))
        b = ba.generate(spec(n=512, seed=2))
        assert (a != b).any()

    def test_prefix_stability(self):
        # a longer run starts with exactly the shorter run
        short = ba.generate(spec(n=100, seed=5))
        long = ba.generate(spec(n=300, seed=5))
        assert (long[:100] == short).all()

    def test_frozen_stream_head(self):
        # locks the stream layout; any change to the sampling scheme trips this
        head = ba.generate(spec(n=3, seed=42, decades=6))
        assert head.tolist() == [
            9.108824975495082,
            161945.3413566491,
            5139.163066461735,
        ]

    def test_negative_year_index(self):
        with pytest.raises(InvalidSpec):
            ba.generate(spec(), year_index=-1)


class TestDistributions:
    def test_benford_digit_one_share(self):
        vals = ba.generate(spec(n=100_000, seed=42))
        table = ba.count_first_digits(vals)
        f1 = table.frequencies[0]
        assert abs(f1 - math.log10(2.0)) < 0.005
        assert table.excluded == 0
        assert (vals >= 1.0).all() and (vals < 1e6).all()

    def test_uniform_digits_equidistributed(self):
        vals = ba.generate(spec(kind="uniform", n=18_000, seed=7))
        freqs = ba.count_first_digits(vals).frequencies
        assert np.abs(freqs - 1.0 / 9.0).max() < 0.01

    def test_rounded_up_shifts_mass_off_digit_one(self):
        vals = ba.generate(spec(kind="rounded", n=20_000, seed=11))
        freqs = ba.count_first_digits(vals).frequencies
        # rounding mantissas up starves digit 1 and feeds digit 2
        assert freqs[0] < 0.12
        assert freqs[1] > 0.20
        table = ba.count_first_digits(vals)
        assert ba.classify(ba.chi_square_statistic(table)) is ba.Conformity.NONCONFORMING

    def test_rounded_up_mantissas_are_integral(self):
        vals = ba.generate(spec(kind="rounded", n=500, seed=3, decades=4))
        exponents = np.floor(np.log10(vals))
        mantissas = vals / 10.0 ** exponents
        assert np.allclose(mantissas, np.round(mantissas))

    @pytest.mark.parametrize("seed", [1, 42, 2024])
    def test_mixture_endpoints_reproduce_pure_kinds(self, seed):
        n = 4096
        benford = ba.generate(spec(n=n, seed=seed))
        uniform = ba.generate(spec(kind="uniform", n=n, seed=seed))
        mix0 = ba.generate(spec(kind="mixture", n=n, seed=seed, tamper_fraction=0.0))
        mix1 = ba.generate(spec(kind="mixture", n=n, seed=seed, tamper_fraction=1.0))
        assert (mix0 == benford).all()
        assert (mix1 == uniform).all()

    def test_mixture_interpolates(self):
        n = 50_000
        f1 = [ba.count_first_digits(
                  ba.generate(spec(kind="mixture", n=n, seed=8, tamper_fraction=f))
              ).frequencies[0]
              for f in (0.0, 0.5, 1.0)]
        assert f1[0] > f1[1] > f1[2]

    def test_all_values_positive_finite(self):
        for kind in ba.GeneratorKind:
            vals = ba.generate(spec(kind=kind, n=2000, seed=13,
                                    tamper_fraction=0.5 if kind is ba.GeneratorKind.MIXTURE else 0.0))
            assert np.isfinite(vals).all() and (vals > 0).all()


class TestLawConformityAtScale:
    def test_large_sample_statistic_stays_small(self):
        # frozen seed list; pass count locked after first calibration
        seeds = load_power_seeds()
        strict = ba.DEFAULT_THRESHOLDS.chi2_strict
        passed = 0
        for seed in seeds:
            vals = ba.generate(spec(n=100_000, seed=seed))
            if ba.chi_square_statistic(ba.count_first_digits(vals)) < strict:
                passed += 1
        assert passed >= 90
        assert passed == 90   # determinism: the exact count never moves

    def test_power_check_counts_are_frozen(self):
        seeds = load_power_seeds()
        t = ba.DEFAULT_THRESHOLDS
        conforming = sum(
            1 for seed in seeds
            if ba.classify(ba.chi_square_statistic(
                ba.count_first_digits(ba.generate(spec(n=1546, seed=seed)))), t)
            is ba.Conformity.CONFORMING
        )
        nonconforming = sum(
            1 for seed in seeds
            if ba.classify(ba.chi_square_statistic(
                ba.count_first_digits(ba.generate(spec(kind="uniform", n=300, seed=seed)))), t)
            is ba.Conformity.NONCONFORMING
        )
        assert (conforming, nonconforming) == (96, 100)


class TestPanelsAndFiles:
    def test_panel_blocks_are_disjoint_and_stable(self):
        s = spec(n=64, seed=21)
        records = ba.generate_panel(s, (2009, 2007, 2008))
        assert len(records) == 192
        years = sorted({r.year for r in records})
        assert years == [2007, 2008, 2009]
        for j, year in enumerate(years):
            block = np.array([r.amount for r in records if r.year == year])
            assert (block == ba.generate(s, year_index=j)).all()
        ids = {r.entity_id for r in records if r.year == 2007}
        assert ids == {r.entity_id for r in records if r.year == 2009}

    def test_panel_rejects_bad_years(self):
        with pytest.raises(InvalidSpec):
            ba.generate_panel(spec(), ())
        with pytest.raises(InvalidSpec):
            ba.generate_panel(spec(), (2001, 2001))

    def test_write_then_parse_round_trip(self, tmp_path):
        s = spec(kind="mixture", n=40, seed=77, tamper_fraction=0.25)
        records = ba.generate_panel(s, (2020, 2021), region_code="ZZZ")
        path = tmp_path / "synth.csv"
        ba.write_dataset(records, path)
        back = ba.parse_dataset(path)
        assert back == records   # repr round-trip keeps amounts exact


@settings(max_examples=25, deadline=None)
@given(n=st.integers(min_value=1, max_value=400),
       seed=st.integers(min_value=0, max_value=2**63),
       decades=st.integers(min_value=1, max_value=18))
def test_generate_properties(n, seed, decades):
    vals = ba.generate(ba.GeneratorSpec(kind="benford", n=n, seed=seed,
                                        decades=decades))
    assert vals.shape == (n,)
    assert (vals >= 1.0).all()
    assert (vals < 10.0 ** decades).all()
