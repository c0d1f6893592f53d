import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from markovtensor import generators
from markovtensor.graph import load_graph, transition_matrix

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def path3():
    return load_graph("1 2\n2 3\n", directed=False)


@pytest.fixture
def path3_chain(path3):
    return transition_matrix(path3).with_stationary()


def random_chain(seed: int, n_range=(4, 12), undirected=False):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(*n_range))
    g = (generators.random_connected_undirected(n, rng) if undirected
         else generators.random_strongly_connected(n, rng, density=rng.uniform(0.05, 0.4)))
    return g, transition_matrix(g).with_stationary()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(results):
        ok, detail = results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
