import numpy as np
import pytest
from hypothesis import given, strategies as st

from markovtensor import generators
from markovtensor.errors import GraphFormatError, NotStronglyConnectedError, ValidationError
from markovtensor.graph import (Graph, extend_graph, load_graph, reachability_matrix, recurrent_classes,
                                stationary_distribution, strongly_connected, to_edgelist, transition_matrix)

from oracles import reachability_table


def test_first_seen_order_and_comments():
    g = load_graph("# header\nb a\na c  # trailing\n\n")
    assert g.nodes == ("b", "a", "c")
    assert g.adjacency[0, 1] == 1 and g.adjacency[1, 2] == 1
    assert g.edge_count == 2


def test_undirected_stores_both_directions(path3):
    assert np.array_equal(path3.adjacency, path3.adjacency.T)
    assert path3.edge_count == 4


def test_weights_ignored_unless_weighted():
    text = "a b 3\nb a 2\n"
    assert load_graph(text).adjacency[0, 1] == 1
    assert load_graph(text, weighted=True).adjacency[0, 1] == 3


def test_duplicate_edges_sum_and_warn():
    g = load_graph("a b 1 2\na b 3 4\nb a\n", weighted=True)
    assert g.adjacency[0, 1] == 4
    assert g.cost[0, 1] == pytest.approx((1 * 2 + 3 * 4) / 4)
    assert g.cost[1, 0] == 1.0
    assert len(g.warnings) == 1 and "line 2" in g.warnings[0]


@pytest.mark.parametrize("text,lineno", [("a b\nc\n", 2), ("a b x\n", 1), ("a b 1 2 3\n", 1), ("a b nan\n", 1)])
def test_malformed_lines_report_line_number(text, lineno):
    with pytest.raises(GraphFormatError) as exc:
        load_graph(text)
    assert exc.value.lineno == lineno


def test_nonpositive_weight_rejected():
    with pytest.raises(ValidationError, match="line 1"):
        load_graph("a b 0\n", weighted=True)


def test_zero_out_degree_names_node():
    with pytest.raises(ValidationError, match="'c'") as exc:
        transition_matrix(load_graph("a b\nb c\n"))
    assert "extend_graph" in exc.value.hint


def test_graph_rejects_asymmetric_undirected():
    with pytest.raises(ValidationError):
        Graph.from_adjacency([[0, 1], [0, 0]], directed=False)


def test_arrays_are_read_only(path3):
    with pytest.raises(ValueError):
        path3.adjacency[0, 0] = 5


@given(st.integers(0, 10_000))
def test_edgelist_round_trip(seed):
    rng = np.random.default_rng(seed)
    g = generators.random_strongly_connected(int(rng.integers(2, 9)), rng)
    back = load_graph(to_edgelist(g), weighted=True)
    order = back.indices(g.nodes)
    assert sorted(back.nodes) == sorted(g.nodes)
    assert np.array_equal(back.adjacency[np.ix_(order, order)], g.adjacency)


@given(st.integers(0, 10_000))
def test_rows_sum_to_one(seed):
    rng = np.random.default_rng(seed)
    p = transition_matrix(generators.random_strongly_connected(int(rng.integers(2, 15)), rng))
    assert np.abs(p.p.sum(axis=1) - 1).max() <= 1e-12


def test_stationary_of_path(path3_chain):
    assert np.allclose(path3_chain.stationary, [0.25, 0.5, 0.25], atol=1e-12)


@given(st.integers(0, 10_000))
def test_stationary_residual(seed):
    rng = np.random.default_rng(seed)
    p = transition_matrix(generators.random_strongly_connected(int(rng.integers(2, 30)), rng))
    pi = stationary_distribution(p)
    assert np.abs(pi @ p.p - pi).max() <= 1e-10
    assert abs(pi.sum() - 1) <= 1e-12 and (pi > 0).all()


def test_stationary_needs_strong_connectivity():
    p = transition_matrix(load_graph("a b\nb b\n"))
    assert not strongly_connected(p)
    with pytest.raises(NotStronglyConnectedError):
        stationary_distribution(p)


def test_recurrent_classes():
    g = load_graph("a b\nb a\nb c\nc d\nd c\ne e\n")
    assert recurrent_classes(g) == [frozenset({2, 3}), frozenset({4})]


def test_extended_graph_rows():
    ext = extend_graph(load_graph("a b\nb c\n"), beta=2.0)
    p = ext.transition_matrix().p
    assert ext.nodes[-1] == "<o>" and p[-1, -1] == 1.0
    assert np.allclose(p[0], [0, 1 / 3, 0, 2 / 3])
    assert np.allclose(p[2], [0, 0, 0, 1])
    assert recurrent_classes(ext.transition_matrix()) == [frozenset({3})]


def test_extend_graph_rejects_bad_beta(path3):
    with pytest.raises(ValidationError):
        extend_graph(path3, beta=0)


@given(st.integers(0, 10_000), st.integers(0, 3))
def test_reachability_matrix_matches_bfs(seed, k):
    rng = np.random.default_rng(seed)
    g = generators.random_digraph(int(rng.integers(4, 12)), rng, density=0.2)
    removed = rng.choice(g.n, size=min(k, g.n), replace=False).tolist()
    assert np.array_equal(reachability_matrix(g, removed), reachability_table(g.adjacency, removed))
