import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossippower import graph
from gossippower.errors import GenerationError, ParameterError
from gossippower.graph import (ConsensusWeights, Topology, best_constant_weights, complete_graph,
                               generate_small_world, laplacian, path_graph, spectral_gap)


def test_p_zero_gives_ring():
    t = generate_small_world(4, 2, 0.0, seed=123)
    assert t.edges == {(0, 1), (1, 2), (2, 3), (0, 3)}
    assert list(t.degrees()) == [2, 2, 2, 2]


def test_ten_node_degree_four():
    t = generate_small_world(10, 4, 0.2, seed=1)
    assert t.is_connected()
    assert len(t.edges) == 20


@pytest.mark.parametrize("args", [(4, 3, 0.1), (4, 4, 0.1), (10, 4, -0.1), (10, 4, 1.5), (10, 0, 0.2)])
def test_bad_parameters(args):
    with pytest.raises(ParameterError):
        generate_small_world(*args, seed=0)


def test_retry_budget_exhausted(monkeypatch):
    monkeypatch.setattr(graph, "_watts_strogatz_edges", lambda n, k, p, rng: {(0, 1), (2, 3)})
    with pytest.raises(GenerationError):
        generate_small_world(4, 2, 0.5, seed=0)


@settings(max_examples=80, deadline=None)
@given(st.integers(5, 30), st.sampled_from([2, 4]), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_generated_graphs_are_valid(n, k, p, seed):
    try:
        t = generate_small_world(n, k, p, seed)
    except GenerationError:
        return  # legitimately possible for p near 1 with k = 2
    A = t.adjacency()
    assert np.array_equal(A, A.T) and np.all(np.diag(A) == 0)
    assert t.is_connected()
    assert len(t.edges) == n * k // 2
    w = best_constant_weights(t)
    W = w.matrix
    ones = np.ones(n)
    assert np.abs(W @ ones - 1).max() <= 1e-12 and np.abs(ones @ W - 1).max() <= 1e-12
    assert np.array_equal(W, W.T)
    assert spectral_gap(w) < 1
    assert w.is_valid()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
def test_p_zero_is_seed_independent(a, b):
    assert generate_small_world(12, 4, 0.0, a) == generate_small_world(12, 4, 0.0, b)


def test_generation_is_deterministic():
    assert generate_small_world(10, 4, 0.2, 7) == generate_small_world(10, 4, 0.2, 7)


def test_topology_rejects_bad_graphs():
    with pytest.raises(ParameterError):
        Topology.from_edges(3, [(0, 0), (1, 2)])
    with pytest.raises(ParameterError):
        Topology.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(ParameterError):
        Topology.from_edges(2, [(0, 5)])


def test_duplicate_edges_collapse():
    t = Topology.from_edges(3, [(0, 1), (1, 0), (1, 2)])
    assert t.edges == {(0, 1), (1, 2)}


def test_edge_list_round_trip():
    t = generate_small_world(10, 4, 0.2, 3)
    text = t.to_edge_list()
    assert Topology.from_edge_list(text, 10) == t
    assert text.splitlines()[0].count(" ") == 1


def test_laplacian_examples():
    np.testing.assert_array_equal(laplacian(path_graph(3)), [[1, -1, 0], [-1, 2, -1], [0, -1, 1]])
    np.testing.assert_array_equal(laplacian(complete_graph(3)), [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    L = laplacian(generate_small_world(10, 4, 0.2, 1))
    assert np.all(L.sum(axis=1) == 0)


def test_best_constant_path3():
    L = laplacian(path_graph(3))
    lam = np.linalg.eigvalsh(L)  # independent oracle: {0, 1, 3}
    np.testing.assert_allclose(lam, [0, 1, 3], atol=1e-14)
    c = 2 / (lam[-1] + lam[1])
    assert c == pytest.approx(0.5)
    w = best_constant_weights(path_graph(3))
    np.testing.assert_allclose(w.matrix, [[0.5, 0.5, 0], [0.5, 0, 0.5], [0, 0.5, 0.5]], atol=1e-15)
    assert spectral_gap(w) == pytest.approx(0.5, abs=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_best_constant_complete(n):
    w = best_constant_weights(complete_graph(n))
    np.testing.assert_allclose(w.matrix, np.full((n, n), 1 / n), atol=1e-14)
    assert spectral_gap(w) == pytest.approx(0.0, abs=1e-14)


def test_identity_weights_flagged():
    w = ConsensusWeights(np.eye(4))
    assert spectral_gap(w) >= 1
    assert "spectral_gap" in w.violations()
    with pytest.raises(ParameterError):
        w.validate()


def test_sparsity_violation_flagged():
    W = np.full((3, 3), 1 / 3)
    assert "sparsity" in ConsensusWeights(W, path_graph(3)).violations()


def test_csr_matches_dense():
    w = best_constant_weights(generate_small_world(10, 4, 0.2, 2))
    indptr, indices, data = w.csr
    dense = np.zeros((10, 10))
    for i in range(10):
        dense[i, indices[indptr[i]:indptr[i + 1]]] = data[indptr[i]:indptr[i + 1]]
    np.testing.assert_array_equal(dense, w.matrix)
