import math

import numpy as np
import pytest

from distributions.catalog import scaled
from heaviness.heaviness_service import heaviness_service
from models.heaviness import GridPolicy
from utils.errors import ParameterError


class TestTruncatedMean:
    @pytest.mark.parametrize("a", [0.1, 0.5, 2.0])
    def test_symmetric_bernoulli(self, centered_law, a):
        assert heaviness_service.truncated_mean(centered_law("bernoulli", p=0.5), a) == pytest.approx(0.0, abs=1e-15)

    def test_centered_exponential(self, centered_law):
        value = heaviness_service.truncated_mean(centered_law("exponential", lam=1), 1.0)
        assert value == pytest.approx(-math.exp(-2), abs=1e-9)

    def test_vanishes_beyond_support(self, centered_law):
        assert heaviness_service.truncated_mean(centered_law("bernoulli", p=0.3), 5.0) == pytest.approx(0.0, abs=1e-10)

    def test_level_must_be_positive(self, centered_law):
        with pytest.raises(ParameterError):
            heaviness_service.truncated_mean(centered_law("bernoulli", p=0.3), 0.0)


class TestHFunction:
    def test_symmetric_bernoulli_is_zero(self, centered_law):
        x = centered_law("bernoulli", p=0.5)
        assert all(heaviness_service.h_function(x, a) == pytest.approx(0.0, abs=1e-15) for a in (0.2, 0.5, 0.7, 3.0))

    def test_centered_exponential(self, centered_law):
        assert heaviness_service.h_function(centered_law("exponential", lam=1), 1.0) == pytest.approx(math.exp(-2), abs=1e-9)

    def test_bernoulli_below_half_nonnegative(self, centered_law):
        x = centered_law("bernoulli", p=0.3)
        assert min(heaviness_service.h_curve(x, np.linspace(0.01, 3.0, 300))) >= -1e-12

    @pytest.mark.parametrize(
        "name, params",
        [("bernoulli", {"p": 0.3}), ("poisson", {"lam": 2}), ("exponential", {"lam": 1}), ("gamma", {"shape": 2, "lam": 1})],
    )
    def test_equals_minus_truncated_mean(self, centered_law, name, params):
        x = centered_law(name, **params)
        for a in (0.3, 1.0, 2.5):
            assert heaviness_service.h_function(x, a) == pytest.approx(-heaviness_service.truncated_mean(x, a), abs=1e-9)

    def test_vanishes_at_infinity(self, centered_law):
        x = centered_law("exponential", lam=1)
        assert heaviness_service.h_function(x, 1e3 * x.scale) == pytest.approx(0.0, abs=1e-6)


class TestClosedForms:
    def test_discrete_symmetric_bernoulli(self, law):
        assert heaviness_service.h_closed_form_discrete(law("bernoulli", p=0.5), 0.5) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("a", [0.25, 1.0, 1.5, 3.0])
    def test_discrete_matches_generic(self, law, centered_law, a):
        closed = heaviness_service.h_closed_form_discrete(law("geometric", p=0.5), a)
        generic = heaviness_service.h_function(centered_law("geometric", p=0.5), a)
        assert closed == pytest.approx(generic, abs=1e-9)

    def test_poisson_nonnegative(self, law):
        dist = law("poisson", lam=2)
        assert all(heaviness_service.h_closed_form_discrete(dist, a) >= -1e-12 for a in np.linspace(0.05, 6.0, 60))

    def test_continuous_exponential(self, law):
        check = heaviness_service.h_closed_form_continuous(law("exponential", lam=1), 1.0)
        assert check.value == pytest.approx(math.exp(-2), abs=1e-9)
        assert check.discrepancy or check.closed_form == pytest.approx(check.value, abs=1e-9)

    @pytest.mark.parametrize("name, params, a", [
        ("exponential", {"lam": 1}, 1.0),
        ("exponential", {"lam": 2}, 0.5),
        ("exponential", {"lam": 0.5}, 4.0),
        ("gamma", {"shape": 2, "lam": 1}, 2.5),
    ])
    def test_continuous_exact_above_mean(self, law, name, params, a):
        # a >= E[Y]: X = Y - E[Y] never falls below -a
        check = heaviness_service.h_closed_form_continuous(law(name, **params), a)
        assert not check.discrepancy
        assert check.closed_form == pytest.approx(check.value, abs=1e-9)

    def test_continuous_gamma_reports_generic_value(self, law, centered_law):
        check = heaviness_service.h_closed_form_continuous(law("gamma", shape=2, lam=1), 0.5)
        assert check.value == pytest.approx(heaviness_service.h_function(centered_law("gamma", shape=2, lam=1), 0.5), abs=1e-9)

    def test_continuous_small_level(self, law):
        assert heaviness_service.h_closed_form_continuous(law("exponential", lam=1), 1e-6).value == pytest.approx(0.0, abs=1e-6)

    def test_needs_nonnegative_law(self, law):
        with pytest.raises(ParameterError):
            heaviness_service.h_closed_form_continuous(law("normal"), 1.0)

    def test_discrete_needs_lattice(self, law):
        with pytest.raises(ParameterError):
            heaviness_service.h_closed_form_discrete(law("exponential", lam=1), 1.0)


class TestClassify:
    @pytest.mark.parametrize(
        "p, expected",
        [(0.3, "heavy-left"), (0.7, "heavy-right"), (0.5, "symmetric")],
    )
    def test_bernoulli(self, centered_law, p, expected):
        assert heaviness_service.classify(centered_law("bernoulli", p=p)).classification == expected

    @pytest.mark.parametrize(
        "name, params",
        [
            ("geometric", {"p": 0.5}),
            ("exponential", {"lam": 1}),
            ("gamma", {"shape": 2, "lam": 1}),
            ("pareto", {"scale": 1, "lam": 3}),
            ("lognormal", {"m": 0, "sigma2": 1}),
        ],
    )
    def test_heavy_left_catalog(self, centered_law, name, params):
        report = heaviness_service.classify(centered_law(name, **params))
        assert report.classification == "heavy-left"
        assert report.min_h >= -report.tolerance

    def test_normal_is_symmetric(self, centered_law):
        assert heaviness_service.classify(centered_law("normal", m=0, sigma2=2)).classification == "symmetric"

    def test_explicit_grid(self, centered_law):
        report = heaviness_service.classify(centered_law("bernoulli", p=0.5), GridPolicy(a_grid=[0.01, 1.0, 5.0]))
        assert report.a_grid == [0.01, 1.0, 5.0]
        assert [row["T_a_mean"] for row in report.rows()] == pytest.approx([0.0, 0.0, 0.0], abs=1e-15)

    def test_tolerance_must_be_positive(self, centered_law):
        with pytest.raises(ParameterError):
            heaviness_service.classify(centered_law("bernoulli", p=0.3), tolerance=0.0)


class TestPoissonCondition:
    @pytest.mark.parametrize("lam, expected", [(1.0, True), (0.7, False), (3.0, True)])
    def test_values(self, lam, expected):
        assert heaviness_service.poisson_heavy_left_condition(lam) is expected

    def test_positive_parameter(self):
        with pytest.raises(ParameterError):
            heaviness_service.poisson_heavy_left_condition(0.0)


class TestLemmaL:
    def test_one_at_zero(self, centered_law):
        assert heaviness_service.lemma_L(centered_law("exponential", lam=1), 0.0) == 1.0

    def test_symmetric_bernoulli(self, centered_law):
        expected = (math.exp(0.375) + math.exp(-0.625)) / 2
        assert heaviness_service.lemma_L(centered_law("bernoulli", p=0.5), 1.0) == pytest.approx(expected, rel=1e-12)
        assert expected <= 1

    def test_heavy_left_at_most_one(self, centered_law):
        assert heaviness_service.lemma_L(centered_law("exponential", lam=1), 0.5) <= 1.0

    @pytest.mark.parametrize(
        "name, params",
        [("bernoulli", {"p": 0.3}), ("poisson", {"lam": 2}), ("exponential", {"lam": 1}), ("normal", {})],
    )
    def test_quadratic_sandwich_and_pairing(self, centered_law, name, params):
        x = centered_law(name, **params)
        for t in np.linspace(0.25, 5.0, 20):
            slack = t * t * x.variance / 2
            left, right = heaviness_service.lemma_L(x, t), heaviness_service.lemma_L(x, -t)
            assert 1 - slack - 1e-8 <= left <= 1 + slack + 1e-8
            assert left + right <= 2 + 1e-8

    @pytest.mark.parametrize("name, params", [("geometric", {"p": 0.5}), ("gamma", {"shape": 2, "lam": 1})])
    def test_heavy_left_side(self, centered_law, name, params):
        x = centered_law(name, **params)
        assert all(heaviness_service.lemma_L(x, t) <= 1 + 1e-8 for t in np.linspace(0.0, 5.0, 21))


class TestScaleClosure:
    @pytest.mark.parametrize("c", [0.5, 2.0, 10.0])
    @pytest.mark.parametrize("name, params", [("bernoulli", {"p": 0.3}), ("bernoulli", {"p": 0.7}), ("exponential", {"lam": 1})])
    def test_same_classification(self, centered_law, name, params, c):
        x = centered_law(name, **params)
        expected = heaviness_service.classify(x).classification
        assert heaviness_service.classify(scaled(x, c)).classification == expected


HEAVY_LEFT_CATALOG = [
    ("geometric", {"p": 0.2}),
    ("geometric", {"p": 0.5}),
    ("geometric", {"p": 0.8}),
    ("exponential", {"lam": 0.5}),
    ("exponential", {"lam": 1}),
    ("exponential", {"lam": 2}),
    ("gamma", {"shape": 0.5, "lam": 1}),
    ("gamma", {"shape": 2, "lam": 1}),
    ("gamma", {"shape": 3, "lam": 2}),
    ("pareto", {"scale": 1, "lam": 1.5}),
    ("pareto", {"scale": 1, "lam": 3}),
    ("lognormal", {"m": 0, "sigma2": 1}),
    ("lognormal", {"m": 1, "sigma2": 0.25}),
]

SIDED_CATALOG = [
    ("bernoulli", {"p": 0.7}, "heavy-right"),
    ("bernoulli", {"p": 0.5}, "symmetric"),
    ("normal", {"m": 0, "sigma2": 1}, "symmetric"),
]


@pytest.mark.slow
class TestCatalogGrid:
    @pytest.mark.parametrize("name, params", HEAVY_LEFT_CATALOG)
    def test_heavy_left(self, centered_law, name, params):
        report = heaviness_service.classify(centered_law(name, **params))
        assert report.classification == "heavy-left"
        assert report.min_h >= -1e-9

    @pytest.mark.parametrize("name, params, expected", SIDED_CATALOG)
    def test_other_sides(self, centered_law, name, params, expected):
        assert heaviness_service.classify(centered_law(name, **params)).classification == expected

    @pytest.mark.parametrize("lam, expected", [(1, True), (2, True), (3, True), (5, True), (0.7, False)])
    def test_poisson_condition(self, lam, expected):
        assert heaviness_service.poisson_heavy_left_condition(lam) is expected

    @pytest.mark.parametrize(
        "name, params, side",
        [(name, params, "heavy-left") for name, params in HEAVY_LEFT_CATALOG]
        + [(name, params, side) for name, params, side in SIDED_CATALOG],
    )
    def test_lemma_bounds_on_t_grid(self, centered_law, name, params, side):
        x = centered_law(name, **params)
        ts = np.linspace(-5.0, 5.0, 41)
        values = {t: heaviness_service.lemma_L(x, t) for t in ts}
        for t in ts:
            # infinite-variance laws (Pareto lam <= 2) only meet the pairing bound
            slack = t * t * x.variance / 2 if t else 0.0
            assert 1 - slack - 1e-8 <= values[t] <= 1 + slack + 1e-8
            assert values[t] + values[-t] <= 2 + 1e-8
        if side in ("heavy-left", "symmetric"):
            assert all(values[t] <= 1 + 1e-8 for t in ts if t >= 0)
        if side in ("heavy-right", "symmetric"):
            assert all(values[t] <= 1 + 1e-8 for t in ts if t <= 0)
