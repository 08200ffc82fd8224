import math

import numpy as np
import pytest
from scipy.special import zeta

from analysis.stats_fit import (
    APPROX,
    DISCRETE,
    CorrelationReport,
    correlation_matrix,
    degree_histogram,
    fit_power_law,
    pearson,
    sample_discrete_power_law,
    tree_centrality_correlation,
)
from graphs.core import degree_sequence, from_edges, largest_connected_component
from graphs.generators import erdos_renyi
from spanning.algorithms import build_tree
from spanning.tree import BFS, KRUSKAL, PRIM
from utils.errors import DegenerateFitError, InvalidParameterError, UndefinedCorrelationError


def power_law_samples(gamma, size, seed, support=10**6):
    """Inverse-CDF draws from p_k = k^-gamma / zeta(gamma), k >= 1."""
    k = np.arange(1, support + 1, dtype=float)
    cdf = np.cumsum(k**-gamma) / zeta(gamma)
    u = np.random.default_rng(seed).random(size)
    return np.minimum(np.searchsorted(cdf, u), support - 1) + 1


def test_pearson_values():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)


def test_pearson_is_affine_invariant():
    rng = np.random.default_rng(0)
    x, y = rng.random(50), rng.random(50)
    assert pearson(3 * x + 1, y) == pytest.approx(pearson(x, y), abs=1e-12)
    assert pearson(-2 * x, y) == pytest.approx(-pearson(x, y), abs=1e-12)


def test_pearson_rejects_bad_input():
    with pytest.raises(UndefinedCorrelationError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(InvalidParameterError):
        pearson([1, 2], [1, 2, 3])
    with pytest.raises(InvalidParameterError):
        pearson([1], [1])


def test_spanning_tree_of_a_tree_correlates_perfectly(star6):
    for measure in ("dc", "cc", "bc"):
        for algo in (PRIM, KRUSKAL, BFS):
            report = tree_centrality_correlation(star6, algo, measure, realizations=3, seed=1)
            assert report.r == pytest.approx(1.0)
            assert report.realizations == 3
            assert report.algorithm == algo
            assert report.measure == measure


def test_correlation_is_seeded():
    g = largest_connected_component(erdos_renyi(150, 6.0, seed=3))
    first = tree_centrality_correlation(g, KRUSKAL, "bc", realizations=3, seed=5)
    assert first == tree_centrality_correlation(g, KRUSKAL, "bc", realizations=3, seed=5)
    assert -1.0 <= first.r <= 1.0


def test_correlation_matrix_cells():
    g = largest_connected_component(erdos_renyi(150, 6.0, seed=3))
    cells = correlation_matrix(g, [PRIM, KRUSKAL, BFS], ["dc", "cc", "bc"], realizations=2, seed=0)
    assert len(cells) == 9
    assert set(cells) == {(a, m) for a in (PRIM, KRUSKAL, BFS) for m in ("dc", "cc", "bc")}
    assert all(-1.0 <= r <= 1.0 for r in cells.values())


def test_correlation_matrix_marks_constant_vectors(k4):
    cells = correlation_matrix(k4, [BFS], ["dc", "cc", "bc"], realizations=2, seed=0)
    assert all(math.isnan(r) for r in cells.values())


def test_report_serializes_networks():
    report = CorrelationReport("cc", BFS, 0.9, 25, (("net", 0.9),))
    assert report.to_dict()["per_network"] == [["net", 0.9]]


@pytest.mark.slow
def test_closeness_is_best_kept_by_bfs():
    g = largest_connected_component(erdos_renyi(2000, 10.0, seed=1))
    cells = correlation_matrix(g, [PRIM, KRUSKAL, BFS], ["cc"], realizations=25, seed=2)
    assert cells[(BFS, "cc")] > max(cells[(KRUSKAL, "cc")], cells[(PRIM, "cc")])


def test_degree_histogram(path5):
    assert degree_histogram(path5) == [(1, 0.4), (2, 0.6)]


def test_sampler_matches_the_discrete_law():
    draws = sample_discrete_power_law(2.5, 1, 100_000, np.random.default_rng(1))
    assert draws.min() >= 1
    assert np.mean(draws == 1) == pytest.approx(1 / zeta(2.5), abs=0.01)
    assert np.mean(draws == 2) == pytest.approx(2**-2.5 / zeta(2.5), abs=0.01)


def test_sampler_respects_k_min():
    draws = sample_discrete_power_law(3.0, 4, 1000, np.random.default_rng(2))
    assert draws.min() >= 4


def test_fit_recovers_the_exponent():
    fit = fit_power_law(power_law_samples(2.5, 10_000, seed=7), bootstraps=2, seed=1)
    assert 2.4 <= fit.gamma <= 2.6
    assert fit.method == DISCRETE
    assert fit.n_samples == 10_000
    assert 1 <= fit.n_tail <= fit.n_samples
    assert 0.0 <= fit.p_value <= 1.0
    assert not fit.low_power


def test_fit_is_seeded():
    data = power_law_samples(2.2, 2000, seed=3)
    assert fit_power_law(data, bootstraps=4, seed=9) == fit_power_law(data, bootstraps=4, seed=9)


def test_fit_stderr_follows_the_binomial_formula():
    fit = fit_power_law(power_law_samples(2.5, 1000, seed=4), bootstraps=10, seed=2)
    assert fit.bootstraps == 10
    assert fit.p_value_stderr == pytest.approx(math.sqrt(fit.p_value * (1 - fit.p_value) / 10))
    assert fit.plausible == (fit.p_value >= 0.1)


def test_approximate_estimator_is_available():
    fit = fit_power_law(power_law_samples(2.5, 5000, seed=5), bootstraps=2, seed=0, method=APPROX)
    assert fit.method == APPROX
    assert fit.gamma > 1.0


def test_small_samples_are_flagged():
    fit = fit_power_law([1] * 15 + [2] * 8 + [3] * 4 + [5, 8, 13], bootstraps=3, seed=0)
    assert fit.low_power
    assert fit.n_samples == 30


@pytest.mark.parametrize("degrees", [[3] * 100, [0] * 50, [0, 0, 4, 4, 4]])
def test_degenerate_input(degrees):
    with pytest.raises(DegenerateFitError):
        fit_power_law(degrees, bootstraps=2)


def test_fit_parameters_are_checked():
    with pytest.raises(InvalidParameterError):
        fit_power_law([1, 2, 3], bootstraps=0)
    with pytest.raises(InvalidParameterError):
        fit_power_law([1, 2, 3], method="mle")


def test_tree_degrees_can_be_fitted():
    g = largest_connected_component(erdos_renyi(1000, 10.0, seed=1))
    fit = fit_power_law(degree_sequence(build_tree(BFS, g, 3).tree), bootstraps=2, seed=3)
    assert fit.gamma > 1.0
    assert fit.k_min >= 1


@pytest.mark.slow
def test_power_law_sample_is_plausible():
    fit = fit_power_law(power_law_samples(2.5, 10_000, seed=11), bootstraps=250, seed=4)
    assert 2.4 <= fit.gamma <= 2.6
    assert fit.plausible


@pytest.mark.slow
def test_geometric_sample_is_not_plausible():
    data = np.random.default_rng(12).geometric(0.1, size=10_000)
    assert not fit_power_law(data, bootstraps=250, seed=4).plausible


def test_degree_histogram_of_a_three_node_path():
    assert degree_histogram(from_edges(3, [(0, 1), (1, 2)])) == [(1, 2 / 3), (2, 1 / 3)]
