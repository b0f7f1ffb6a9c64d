import networkx as nx
import numpy as np
import pytest

from qsc import dynamics as dy

import oracles


def adjacency(g):
    return [list(g.indices[g.indptr[v]:g.indptr[v + 1]]) for v in range(g.num_vertices)]


def loop_energy(adj, now, nxt):
    return sum((nxt[v] - now[u]) ** 2 for u in range(len(adj)) for v in adj[u]) // 2


def test_graph_validation():
    with pytest.raises(ValueError, match="even degree"):
        dy.from_networkx(nx.cycle_graph(5))
    with pytest.raises(ValueError, match="self-loops"):
        dy.from_edges(2, [(0, 0), (0, 1)])
    with pytest.raises(ValueError, match="parallel"):
        dy.from_edges(2, [(0, 1), (1, 0)])


def test_generators_have_expected_degrees():
    assert set(dy.random_regular(3, 20, 1).degrees) == {3}
    assert set(dy.complete(6).degrees) == {5}
    assert set(dy.complete_bipartite(3, 5).degrees) == {3, 5}
    t = dy.torus_with_matching(6, 6)
    assert t.num_vertices == 36 and set(t.degrees) == {5}
    assert dy.from_spec("torus:rows=6,cols=4").num_vertices == 24


def test_edge_list_round_trip(tmp_path):
    g = dy.random_regular(3, 12, 2)
    path = tmp_path / "g.txt"
    dy.write_edge_list(g, path)
    h = dy.read_edge_list(path)
    assert np.array_equal(g.indptr, h.indptr) and np.array_equal(g.indices, h.indices)


def test_step_and_energy_match_loops():
    g = dy.from_networkx(nx.petersen_graph())
    adj = adjacency(g)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.choice([-1, 1], 10).astype(np.int8)
        nxt = dy.step(g, x)
        assert nxt.tolist() == oracles.majority_dynamics_loop(adj, x.tolist())
        assert dy.energy(g, x, nxt) == loop_energy(adj, x.tolist(), nxt.tolist())


def test_bipartite_alternation_has_period_two():
    g = dy.complete_bipartite(3, 3)
    x0 = np.array([1, 1, 1, -1, -1, -1], np.int8)
    tr = dy.run_to_period(g, x0)
    assert tr.period == 2 and tr.entry == 0 and tr.identity_ok


def test_exhaustive_small_graphs():
    for g in (dy.complete(4), dy.from_networkx(nx.petersen_graph())):
        for period, entry, ident, mono in dy.exhaustive_periods(g):
            assert period <= 2 and ident and mono


def test_trace_rows_and_csv():
    g = dy.random_regular(3, 40, 3)
    x0 = np.where(np.random.default_rng(1).random(40) < 0.5, 1, -1)
    tr = dy.run_to_period(g, x0)
    rows = tr.rows()
    assert rows[0]["J_t"] is None and rows[-1]["J_t"] == 0
    assert rows[-1]["hamming_to_final"] in (0, int(np.count_nonzero(tr.states[-2] != tr.limit_state())))
    assert tr.to_csv().splitlines()[0] == "t,L_t,J_t,hamming_to_final"
    for t in range(1, len(tr.energies)):
        assert tr.energies[t] - tr.energies[t - 1] == -tr.couplings[t]
        assert tr.couplings[t] >= 0


def test_torus_runs():
    g = dy.torus_with_matching()
    rng = np.random.default_rng(2)
    for _ in range(20):
        tr = dy.run_to_period(g, rng.choice([-1, 1], 36))
        assert tr.period <= 2 and tr.identity_ok and tr.nonincreasing


def test_retention_is_seeded_and_monotone():
    g = dy.random_regular(3, 60, 0)
    a, mono = dy.retention_experiment(g, [0.5, 0.7, 1.0], samples=60, seed=4)
    b, _ = dy.retention_experiment(g, [0.5, 0.7, 1.0], samples=60, seed=4)
    assert a == b and mono and a[-1].estimate == 1.0
