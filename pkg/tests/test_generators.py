import math

import numpy as np
import pytest

from graphs.core import degree_sequence, is_connected, read_graph
from graphs.generators import (
    BARABASI_ALBERT,
    ERDOS_RENYI,
    TRIANGULAR_LATTICE,
    GenSpec,
    barabasi_albert,
    canonical_family,
    erdos_renyi,
    generate,
    triangular_lattice,
)
from harness.generate_benchmarks import write_suite
from utils.errors import InvalidParameterError


@pytest.mark.parametrize("alias, family", [("er", ERDOS_RENYI), ("ba", BARABASI_ALBERT), ("tri", TRIANGULAR_LATTICE)])
def test_family_aliases(alias, family):
    assert canonical_family(alias) == family
    assert canonical_family(family) == family


def test_unknown_family():
    with pytest.raises(InvalidParameterError):
        canonical_family("watts_strogatz")


def test_erdos_renyi_mean_degree():
    g = erdos_renyi(250, 10.0, seed=3)
    assert 9.0 <= g.k_avg <= 11.0


def test_erdos_renyi_is_seeded():
    assert erdos_renyi(300, 6.0, seed=11) == erdos_renyi(300, 6.0, seed=11)
    assert erdos_renyi(300, 6.0, seed=11) != erdos_renyi(300, 6.0, seed=12)


def test_erdos_renyi_large_n_uses_skipping_and_keeps_density():
    n = 20_000
    g = erdos_renyi(n, 4.0, seed=5)
    assert g.n == n
    assert abs(g.m - 2 * n) < 0.05 * 2 * n


def test_erdos_renyi_rejects_impossible_degree():
    with pytest.raises(InvalidParameterError):
        erdos_renyi(10, 12.0, seed=0)


def test_barabasi_albert_edge_count_and_min_degree():
    g = barabasi_albert(100, 10.0, seed=1)
    # seed clique on 6 nodes plus 5 edges per later node
    assert g.m == 15 + 94 * 5
    assert int(degree_sequence(g).min()) >= 5
    assert is_connected(g)


def test_barabasi_albert_grows_hubs():
    degrees = degree_sequence(barabasi_albert(3000, 4.0, seed=2))
    assert int(degrees.max()) > 5 * float(np.mean(degrees))


@pytest.mark.parametrize("k_avg", [3.0, 1.0, 4.5])
def test_barabasi_albert_needs_even_integer_degree(k_avg):
    with pytest.raises(InvalidParameterError):
        barabasi_albert(100, k_avg, seed=0)


def test_triangular_lattice_counts():
    g = triangular_lattice(16)
    assert g.n == 16
    assert g.m == 12 + 12 + 9
    assert int(degree_sequence(g).max()) == 6


def test_triangular_lattice_rounds_down_to_a_square():
    assert triangular_lattice(20).n == 16


def test_triangular_lattice_too_small():
    with pytest.raises(InvalidParameterError):
        triangular_lattice(3)


def test_genspec_validation():
    with pytest.raises(InvalidParameterError):
        GenSpec("er", 1)
    with pytest.raises(InvalidParameterError):
        GenSpec("er", 10, k_avg=10.0)
    assert GenSpec("tri", 9, k_avg=20.0).family == TRIANGULAR_LATTICE


def test_generate_dispatches():
    assert generate(GenSpec("tri", 25)).n == 25
    assert generate(GenSpec("ba", 50, 4.0, seed=1)) == barabasi_albert(50, 4.0, seed=1)


def test_benchmark_suite(tmp_path):
    written = write_suite(tmp_path, suite=[(ERDOS_RENYI, 60), (TRIANGULAR_LATTICE, 16)], instances=2, k_avg=6.0, seed=4)
    assert [path.name for path in written] == [
        "erdos_renyi_60n_01.txt",
        "erdos_renyi_60n_02.txt",
        "triangular_lattice_16n_01.txt",
    ]
    g, _ = read_graph(written[-1])
    assert g.m == 33


def test_erdos_renyi_edge_count_over_1000_seeds():
    n, k_avg = 100, 10.0
    p = k_avg / (n - 1)
    pairs = n * (n - 1) / 2
    counts = [erdos_renyi(n, k_avg, seed=seed).m for seed in range(1000)]
    sigma_of_mean = math.sqrt(pairs * p * (1 - p) / len(counts))
    assert abs(np.mean(counts) - pairs * p) <= 3 * sigma_of_mean
