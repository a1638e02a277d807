import itertools

import numpy as np
import pytest

from syncgames import classical as C
from syncgames import games as G


def _brute_local(inst):
    """Independent oracle: enumerate both players' functions."""
    g = inst.game
    best = -1.0
    for fa in itertools.product(range(g.k_a), repeat=g.n_a):
        for fb in itertools.product(range(g.k_b), repeat=g.n_b):
            best = max(best, C.strategy_value(inst, fa, fb))
    return best


def _brute_sync(inst):
    g = inst.game
    return max(C.strategy_value(inst, f) for f in itertools.product(range(g.k_a), repeat=g.n_a))


def _random_instance(rng, n, k, density=0.5):
    rule = (rng.random((n, n, k, k)) < density).astype(np.uint8)
    pi = rng.random((n, n))
    pi[rng.random((n, n)) < 0.2] = 0.0
    pi /= pi.sum()
    return G.GameInstance(G.Game(rule), G.PriorDistribution(pi))


def test_chsh_values(backend):
    inst = G.chsh_game().to_instance()
    v, strat = C.local_value(inst, backend=backend)
    assert v == pytest.approx(0.75, abs=1e-12)
    assert C.strategy_value(inst, strat.f_a, strat.f_b) == pytest.approx(v)
    assert C.sync_local_value(inst, backend=backend)[0] == pytest.approx(0.75, abs=1e-12)


@pytest.mark.parametrize("seed", range(12))
def test_local_value_matches_brute_force(seed, backend):
    rng = np.random.default_rng(seed)
    inst = _random_instance(rng, n=3, k=2 + seed % 2)
    v, strat = C.local_value(inst, backend=backend)
    assert v == pytest.approx(_brute_local(inst), abs=1e-12)
    assert C.strategy_value(inst, strat.f_a, strat.f_b) == pytest.approx(v, abs=1e-12)


@pytest.mark.parametrize("seed", range(12))
def test_sync_value_matches_brute_force(seed, backend):
    rng = np.random.default_rng(1000 + seed)
    inst = _random_instance(rng, n=4, k=2 + seed % 3)
    v, f = C.sync_local_value(inst, backend=backend)
    assert v == pytest.approx(_brute_sync(inst), abs=1e-12)
    assert C.strategy_value(inst, f) == pytest.approx(v, abs=1e-12)


def test_rectangular_local_value(backend):
    rng = np.random.default_rng(3)
    rule = (rng.random((2, 4, 3, 2)) < 0.5).astype(np.uint8)
    inst = G.GameInstance(G.Game(rule), G.PriorDistribution.uniform(2, 4))
    assert C.local_value(inst, backend=backend)[0] == pytest.approx(_brute_local(inst))
    with pytest.raises(ValueError):
        C.sync_local_value(inst)


def test_sync_witness_is_lexicographically_first():
    # every function wins: the witness must be all zeros
    inst = G.GameInstance(G.Game(np.ones((3, 3, 2, 2), dtype=np.uint8)), G.PriorDistribution.uniform(3, 3))
    assert C.sync_local_value(inst)[1] == (0, 0, 0)


@pytest.mark.parametrize("n,expected", [(1, 0.5), (2, 0.75)])
def test_seyed_values(n, expected, backend):
    inst = G.seyed_game(n)
    assert C.sync_local_value(inst, backend=backend)[0] == expected
    assert C.local_value(inst, backend=backend)[0] == 1.0


def test_enumeration_cap():
    inst = G.seyed_game(2)
    with pytest.raises(C.EnumerationCapError):
        C.sync_local_value(inst, cap=100)


@pytest.mark.parametrize(
    "graph,c,cut",
    [(G.cycle_graph(5), 2, 4), (G.complete_graph(3), 2, 2), (G.complete_graph(5), 3, 8),
     (G.cycle_graph(6), 2, 6), (G.complete_graph(4), 2, 4)],
)
def test_max_cut(graph, c, cut, backend):
    value, part = C.max_c_cut(graph, c, backend=backend)
    assert value == cut
    assert sum(part[u] != part[v] for u, v in graph.edges) == cut


def test_max_cut_edgeless():
    assert C.max_c_cut(G.Graph(3), 2) == (0, (0, 0, 0))


def test_double_cover_of_odd_cycle_is_even_cycle():
    dc = C.bipartite_double_cover(G.cycle_graph(5))
    assert dc.n == 10 and dc.edge_count == 10 and dc.is_bipartite()
    assert all(dc.degree(v) == 2 for v in range(10))


def test_coloring_values_of_c5(backend):
    g = G.cycle_graph(5)
    inst = G.GameInstance(G.coloring_game(g, 2), G.uniform_edge_prior(g))
    assert C.local_value(inst, backend=backend)[0] == 1.0
    assert C.sync_local_value(inst, backend=backend)[0] == pytest.approx(0.8)


def test_complete_graph_crosscheck_flags_k5_c3():
    r = C.complete_graph_crosscheck(5, 3)
    assert r.brute_force == pytest.approx(0.8, abs=1e-12)
    assert r.closed_form == pytest.approx(1 + 1 / 5 - 1 / 3)
    assert r.discrepancy


@pytest.mark.parametrize("n,c", [(3, 2), (4, 2), (4, 3), (3, 3)])
def test_complete_graph_crosscheck_exact_cut_formula(n, c):
    # synchronous value of the colouring game = (cut edges) / (edges)
    g = G.complete_graph(n)
    cut, _ = C.max_c_cut(g, c)
    r = C.complete_graph_crosscheck(n, c)
    assert r.brute_force == pytest.approx(cut / g.edge_count, abs=1e-12)
