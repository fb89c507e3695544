import math

import pytest

from applications.autoregressive import (
    ar1_bound_ls,
    ar1_bound_simple,
    ar1_bound_via_mgf,
    ar1_bound_yw,
    ar1_qv_mgf_bound,
    ar1_qv_mgf_handle,
)
from applications.branching import geometric_branching_bound, harris_bound, lotka_nagaev_bound, offspring_rate
from applications.regression import (
    noise_square_rate,
    regression_bernoulli_gaussian_bound,
    regression_bound,
    regressor_square_cgf,
)
from distributions.catalog import centered, make_distribution
from models.bounds import MgfHandle
from processes.population import geometric_population_mgf, population_mgf, total_population_mgf
from transforms.convex import solve_yx
from utils.errors import DomainError, ParameterError


@pytest.fixture(scope="module")
def geometric_rate():
    return offspring_rate(make_distribution("geometric", p=0.5))


class TestRegression:
    @pytest.fixture
    def gaussian_pieces(self):
        H = regressor_square_cgf(make_distribution("normal"))
        rate = noise_square_rate(make_distribution("normal"))
        return H, rate

    def test_zero_deviation(self, gaussian_pieces):
        H, rate = gaussian_pieces
        result = regression_bound(0.0, 2.0, 50, H, rate, 1.0)
        assert result.components["term1"] == 2.0
        assert result.value >= 2.0

    def test_term2_vanishes_for_bounded_noise(self):
        # eps^2 = 1/4 on every draw, so sum eps^2 <= n sigma2 < sigma2 y
        noise = centered(make_distribution("bernoulli", p=0.5))
        H = regressor_square_cgf(make_distribution("normal"))
        result = regression_bound(1.0, 20.0, 10, H, noise_square_rate(noise), 0.25)
        assert result.components["term2"] == 0.0
        assert any("rate infinite" in note for note in result.notes)

    def test_decreasing_in_n(self, gaussian_pieces):
        H, rate = gaussian_pieces
        values = [regression_bound(0.5, 20.0, n, H, rate, 1.0).value for n in (50, 100, 200)]
        assert values[0] > values[1] > values[2]

    def test_paired_uses_y(self, gaussian_pieces):
        H, rate = gaussian_pieces
        paired = regression_bound(0.5, 3.0, 100, H, rate, 1.0, paired=True)
        plain = regression_bound(0.5, 3.0, 100, H, rate, 1.0)
        assert paired.components["term1"] < plain.components["term1"]

    def test_invalid(self, gaussian_pieces):
        H, rate = gaussian_pieces
        with pytest.raises(ParameterError):
            regression_bound(0.5, 0.0, 10, H, rate, 1.0)

    def test_bernoulli_gaussian_zero(self):
        assert regression_bernoulli_gaussian_bound(0.0, 10, 0.3, 1.0).value == 2.0

    def test_bernoulli_gaussian_value(self):
        result = regression_bernoulli_gaussian_bound(1.0, 4, 0.5, 1.0)
        assert result.value == pytest.approx(2 / 3)
        assert result.components["r"] == 0.5

    @pytest.mark.parametrize("x", [0.2, 0.5, 1.5])
    @pytest.mark.parametrize("tau2", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_bernoulli_gaussian_generic_route(self, p, tau2, x):
        result = regression_bernoulli_gaussian_bound(x, 50, p, tau2)
        assert result.components["generic_h"] == pytest.approx(result.value, rel=1e-12)
        assert result.components["q"] == pytest.approx(1 - p)


class TestAR1:
    def test_least_squares_zero(self):
        assert ar1_bound_ls(0.0, 100).value == 2.0

    def test_least_squares_value(self):
        x, n = 0.3, 100
        y_x = solve_yx(x).value
        result = ar1_bound_ls(x, n)
        assert result.value == pytest.approx(2 * math.exp(-n * x * x / (2 * (1 + y_x))))
        assert result.components["y_x"] == y_x

    def test_simple(self):
        assert ar1_bound_simple(0.25, 100).value == pytest.approx(2 * math.exp(-100 * 0.0625 / 3))
        assert ar1_bound_simple(0.0, 100).value == 2.0

    @pytest.mark.parametrize("x", [0.05, 0.2, 0.4, 0.49])
    def test_simple_is_weaker(self, x):
        assert ar1_bound_simple(x, 100).value >= ar1_bound_ls(x, 100).value

    def test_simple_range(self):
        with pytest.raises(ParameterError):
            ar1_bound_simple(0.5, 100)

    def test_yule_walker(self):
        two_sided = ar1_bound_yw(0.3, 100, -0.5)
        assert two_sided.value == ar1_bound_ls(0.3, 100).value
        assert two_sided.components["threshold"] == pytest.approx(0.8)
        one_sided = ar1_bound_yw(0.3, 100, 0.5, one_sided=True)
        assert one_sided.value == pytest.approx(two_sided.value / 2)
        assert one_sided.components["threshold"] == 0.3

    def test_one_sided_needs_positive_theta(self):
        with pytest.raises(ParameterError):
            ar1_bound_yw(0.3, 100, -0.5, one_sided=True)

    def test_qv_mgf_bound(self):
        assert ar1_qv_mgf_bound(0.0, 10, 1.0) == 1.0
        assert ar1_qv_mgf_bound(-0.5, 2, 1.0) == pytest.approx(0.5)
        with pytest.raises(DomainError):
            ar1_qv_mgf_bound(0.5, 2, 1.0)

    def test_qv_handle(self):
        handle = ar1_qv_mgf_handle(2, 1.0)
        assert handle.evaluate(-0.5) == pytest.approx(0.5)
        assert handle.flavor == "upper-bound"
        with pytest.raises(DomainError):
            handle.log_value(0.1)

    @pytest.mark.parametrize("n", [10, 100])
    @pytest.mark.parametrize("x", [0.1, 0.3, 0.5, 1.0])
    def test_via_mgf_agrees(self, x, n):
        result = ar1_bound_via_mgf(x, n)
        assert result.value == pytest.approx(ar1_bound_ls(x, n).value, rel=1e-10)
        assert result.argmin == pytest.approx(solve_yx(x).value, rel=1e-6)
        assert result.method == "cross-check"
        assert math.isfinite(result.components["subgaussian_route"])

    def test_via_mgf_zero(self):
        assert ar1_bound_via_mgf(0.0, 100).value == 2.0


class TestBranching:
    def test_zero_rate(self, geometric_rate):
        handle = population_mgf(make_distribution("geometric", p=0.5), 4)
        result = lotka_nagaev_bound(0.0, 5, geometric_rate, handle)
        assert result.value == 2.0
        assert "J(x) = 0: trivial bound" in result.notes

    def test_deterministic_population(self, geometric_rate):
        K = 8.0
        result = lotka_nagaev_bound(0.5, 4, geometric_rate, MgfHandle.deterministic(K))
        J = result.components["J"]
        assert result.components["plain"] == pytest.approx(2 * math.exp(-J * K))

    def test_harris_deterministic_limit(self, geometric_rate):
        K = 15.0
        result = harris_bound(0.5, 4, geometric_rate, MgfHandle.deterministic(K))
        J = result.components["J"]
        assert result.value == pytest.approx(2 * math.exp(-J * K), rel=1.5e-6 * max(1.0, J * K))

    def test_harris_below_lotka_nagaev(self, geometric_rate):
        offspring = make_distribution("geometric", p=0.5)
        n = 6
        for x in (0.5, 1.0, 2.0):
            ln = lotka_nagaev_bound(x, n, geometric_rate, population_mgf(offspring, n - 1))
            harris = harris_bound(x, n, geometric_rate, total_population_mgf(offspring, n - 1))
            assert harris.value <= ln.value * (1 + 1e-9)

    def test_optimized_form_reported(self, geometric_rate):
        result = lotka_nagaev_bound(1.0, 10, geometric_rate, geometric_population_mgf(0.5, 9))
        assert result.value == result.components["optimized"]
        assert result.method == "optimized"
        assert result.argmin > 1

    @pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
    def test_geometric_closed_form_substitution(self, p, x):
        result = geometric_branching_bound(x, 10, p)
        assert result.value == pytest.approx(result.components["pgf_substitution"], rel=1e-12)
        assert result.components["m"] == pytest.approx(1 / p)

    def test_geometric_factor_p_per_generation(self):
        values = [geometric_branching_bound(3.0, n, 0.5).value for n in (5, 6, 7)]
        assert values[1] / values[0] == pytest.approx(0.5)
        assert values[2] / values[1] == pytest.approx(0.5)

    def test_geometric_dominates_exact_plain_form(self, geometric_rate):
        closed = geometric_branching_bound(1.0, 10, 0.5)
        plain = lotka_nagaev_bound(1.0, 10, geometric_rate, geometric_population_mgf(0.5, 9)).components["plain"]
        assert plain <= closed.value

    def test_geometric_needs_positive_rate(self):
        with pytest.raises(ParameterError):
            geometric_branching_bound(0.0, 10, 0.5)
        with pytest.raises(ParameterError):
            geometric_branching_bound(1.0, 10, 1.0)
