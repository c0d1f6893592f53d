import numpy as np
import pytest

from markovtensor import generators
from markovtensor.errors import UncoveredRecurrentClassError, ValidationError
from markovtensor.graph import load_graph, transition_matrix
from markovtensor.simulate import TruncationError, alias_tables, simulate_walks


def test_alias_tables_reproduce_rows():
    rng = np.random.default_rng(0)
    p = rng.random((6, 6)) * (rng.random((6, 6)) < 0.6)
    p[:, 0] += 0.01
    p /= p.sum(axis=1, keepdims=True)
    prob, alias = alias_tables(p)
    n = p.shape[1]
    recon = np.zeros_like(p)
    for r in range(6):
        for k in range(n):
            recon[r, k] += prob[r, k] / n
            recon[r, alias[r, k]] += (1 - prob[r, k]) / n
    assert np.allclose(recon, p)


def test_path_hitting_time(path3_chain):
    res = simulate_walks(path3_chain, 0, [2], 20_000, rng_seed=1)
    mean, se = res.hitting_time
    assert abs(mean - 4) <= 3 * se


def test_path_absorption_symmetry(path3_chain):
    res = simulate_walks(path3_chain, 1, [0, 2], 20_000, rng_seed=2)
    assert (np.abs(res.absorption[0] - 0.5) <= 3 * res.absorption[1]).all()


def test_deterministic_cost():
    g = load_graph("1 2 1 5\n2 3 1 7\n3 1\n")
    res = simulate_walks(transition_matrix(g), 0, [2], 1000, cost=g.cost)
    assert res.hitting_cost == (12.0, 0.0)


def test_start_on_target(path3_chain):
    res = simulate_walks(path3_chain, 2, [2], 1000)
    assert res.hitting_time == (0.0, 0.0) and res.absorption[0, 0] == 1.0


def test_reproducible_and_thread_independent():
    p = transition_matrix(generators.random_strongly_connected(10, np.random.default_rng(3)))
    a = simulate_walks(p, 0, [4], 20_000, rng_seed=9)
    b = simulate_walks(p, 0, [4], 20_000, rng_seed=9, threads=3)
    assert a.hitting_time == b.hitting_time and np.array_equal(a.visits, b.visits)
    assert simulate_walks(p, 0, [4], 20_000, rng_seed=10).hitting_time != a.hitting_time


def test_truncation_fails_run():
    p = transition_matrix(generators.cycle(50))
    with pytest.raises(TruncationError):
        simulate_walks(p, 0, [25], 2000, max_steps=10)


def test_uncovered_targets():
    p = transition_matrix(load_graph("a b\nb b\n"))
    with pytest.raises(UncoveredRecurrentClassError):
        simulate_walks(p, 0, [0], 100)


def test_bad_arguments(path3_chain):
    with pytest.raises(ValidationError):
        simulate_walks(path3_chain, 0, [], 100)
    with pytest.raises(ValidationError):
        simulate_walks(path3_chain, 0, [2], 0)


def test_estimates_listing(path3_chain):
    est = simulate_walks(path3_chain, 0, [2], 1000).estimates()
    kinds = [e.kind for e in est]
    assert kinds.count("visits") == 2 and "hitting_time" in kinds and kinds[-1] == "absorption"
    assert all(e.num_walks == 1000 for e in est)
