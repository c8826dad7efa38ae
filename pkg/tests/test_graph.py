import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metric_menger.generators import random_graph
from metric_menger.graph import (
    INF,
    Graph,
    MMInstance,
    MMPInstance,
    closed_ball,
    dist,
    max_degree,
    min_distance,
    paths_are_m_disjoint,
    shortcut_path,
    verify_mm_solution,
    verify_mmp_solution,
)
from oracles import floyd_warshall


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


@st.composite
def graphs(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph(n, edges)


class TestGraphModel:
    def test_adjacency_sorted_and_symmetric(self):
        g = Graph(4, [(3, 0), (1, 0), (2, 1)])
        assert g.adj == ((1, 3), (0, 2), (1,), (0,))
        for u in range(g.n):
            for v in g.adj[u]:
                assert u in g.adj[v]

    def test_equality_ignores_edge_order(self):
        assert Graph(3, [(0, 1), (1, 2)]) == Graph(3, [(2, 1), (1, 0)])
        assert hash(Graph(3, [(0, 1)])) == hash(Graph(3, [(1, 0)]))

    def test_parallel_edges_collapse(self):
        assert Graph(2, [(0, 1), (1, 0)]).num_edges == 1

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(2, [(1, 1)])

    def test_edge_outside_range_rejected(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 2)])

    def test_from_adjacency(self):
        assert Graph.from_adjacency([[1], [0, 2], [1]]) == path_graph(3)


class TestDistances:
    def test_antipodal_on_c4(self):
        assert dist(cycle(4), 0, 2) == 2

    def test_self_distance_zero(self):
        g = cycle(5)
        assert all(dist(g, v, v) == 0 for v in range(5))

    def test_disconnected_is_infinite(self):
        assert dist(Graph(2), 0, 1) == INF == math.inf

    def test_invalid_vertex(self):
        with pytest.raises(ValueError):
            dist(cycle(3), 0, 3)
        with pytest.raises(ValueError):
            dist(cycle(3), -1, 0)

    def test_ball_examples(self):
        p = path_graph(5)
        assert closed_ball(p, 2, 1) == {1, 2, 3}
        assert closed_ball(p, 0, 2) == {0, 1, 2}
        assert closed_ball(p, 3, 0) == {3}

    def test_ball_invalid_vertex(self):
        with pytest.raises(ValueError):
            closed_ball(path_graph(2), 5, 1)

    @settings(max_examples=80, deadline=None)
    @given(graphs())
    def test_matches_floyd_warshall(self, g):
        d = floyd_warshall(g)
        for u in range(g.n):
            for v in range(g.n):
                assert dist(g, u, v) == d[u][v]

    @settings(max_examples=60, deadline=None)
    @given(graphs(), st.data())
    def test_metric_axioms(self, g, data):
        u, v, w = (data.draw(st.integers(0, g.n - 1)) for _ in range(3))
        assert dist(g, u, v) == dist(g, v, u)
        assert dist(g, u, w) <= dist(g, u, v) + dist(g, v, w)

    @settings(max_examples=60, deadline=None)
    @given(graphs(), st.data())
    def test_ball_matches_distance_filter(self, g, data):
        v = data.draw(st.integers(0, g.n - 1))
        m = data.draw(st.integers(0, 4))
        d = floyd_warshall(g)
        assert closed_ball(g, v, m) == {u for u in range(g.n) if d[v][u] <= m}


class TestDisjointness:
    def test_adjacent_singletons_are_0_disjoint(self):
        g = path_graph(2)
        assert paths_are_m_disjoint(g, [0], [1], 0)
        assert not paths_are_m_disjoint(g, [0], [1], 1)

    def test_shared_vertex(self):
        g = path_graph(3)
        assert not paths_are_m_disjoint(g, [0, 1], [1, 2], 0)

    def test_invalid_path_raises(self):
        with pytest.raises(ValueError):
            paths_are_m_disjoint(path_graph(3), [0, 2], [1], 0)

    @settings(max_examples=60, deadline=None)
    @given(graphs(8), st.data())
    def test_zero_disjoint_means_vertex_disjoint(self, g, data):
        # walk random paths by extending from a start vertex
        def walk():
            v = data.draw(st.integers(0, g.n - 1))
            p = [v]
            for _ in range(data.draw(st.integers(0, 4))):
                options = [w for w in g.adj[p[-1]] if w not in p]
                if not options:
                    break
                p.append(data.draw(st.sampled_from(options)))
            return p

        p, q = walk(), walk()
        assert paths_are_m_disjoint(g, p, q, 0) == (not set(p) & set(q))
        d = floyd_warshall(g)
        m = data.draw(st.integers(0, 4))
        assert paths_are_m_disjoint(g, p, q, m) == (min(d[x][y] for x in p for y in q) >= m + 1)

    def test_min_distance_of_empty_side(self):
        assert min_distance(path_graph(2), [0], []) == INF


class TestMaxDegree:
    def test_examples(self):
        assert max_degree(path_graph(2)) == 1
        assert max_degree(cycle(4)) == 2
        assert max_degree(Graph(5, [(0, i) for i in range(1, 5)])) == 4
        assert max_degree(Graph(3)) == 0


class TestVerifier:
    def test_single_edge_ok(self):
        inst = MMInstance(path_graph(2), {0}, {1}, 3, 1)
        assert verify_mm_solution(inst, [[0, 1]]) is None

    def test_duplicate_path_not_disjoint(self):
        inst = MMInstance(path_graph(2), {0}, {1}, 3, 2)
        bad = verify_mm_solution(inst, [[0, 1], [0, 1]])
        assert bad.kind == "not disjoint" and bad.paths == (1, 2)
        assert "2-disjoint" in bad.detail

    def test_octagon_r2_ok(self):
        inst = MMInstance(cycle(8), {0, 4}, {2, 6}, 2, 2)
        assert verify_mm_solution(inst, [[0, 1, 2], [4, 5, 6]]) is None

    def test_octagon_r3_rejected(self):
        inst = MMInstance(cycle(8), {0, 4}, {2, 6}, 3, 2)
        assert verify_mm_solution(inst, [[0, 1, 2], [4, 5, 6]]).kind == "not disjoint"

    def test_named_violations(self):
        inst = MMInstance(path_graph(4), {0}, {3}, 1, 1)
        assert verify_mm_solution(inst, []).kind == "wrong path count"
        assert verify_mm_solution(inst, [[0, 2, 3]]).kind == "invalid path"
        assert verify_mm_solution(inst, [[0, 1, 0]]).kind == "invalid path"
        assert verify_mm_solution(inst, [[0, 9]]).kind == "invalid path"
        assert verify_mm_solution(inst, [[1, 2, 3]]).kind == "bad endpoint"
        assert verify_mm_solution(inst, [[0, 1, 2]]).kind == "bad endpoint"
        assert verify_mm_solution(inst, [[]]).kind == "invalid path"

    def test_zero_length_path(self):
        inst = MMInstance(Graph(1), {0}, {0}, 5, 1)
        assert verify_mm_solution(inst, [[0]]) is None

    def test_internal_terminals_allowed(self):
        inst = MMInstance(path_graph(3), {0, 1}, {1, 2}, 1, 1)
        assert verify_mm_solution(inst, [[0, 1, 2]]) is None

    def test_terminal_pair_variant(self):
        inst = MMPInstance(cycle(8), ((0, 2), (4, 6)), 2)
        assert verify_mmp_solution(inst, [[0, 1, 2], [4, 5, 6]]) is None
        assert verify_mmp_solution(inst, [[0, 1, 2], [6, 5, 4]]).kind == "bad endpoint"
        assert verify_mmp_solution(inst, [[0, 1, 2]]).kind == "wrong path count"

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            MMInstance(path_graph(2), {0}, {2}, 1, 1)
        with pytest.raises(ValueError):
            MMInstance(path_graph(2), {0}, {1}, 0, 1)
        with pytest.raises(ValueError):
            MMPInstance(path_graph(2), (), 1)


class TestShortcut:
    def test_removes_chord(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
        assert shortcut_path(g, [0, 1, 2, 3]) == (0, 2, 3)

    def test_random_paths_become_induced(self):
        rng = random.Random(3)
        for _ in range(200):
            g = random_graph(rng, 8, 0.5)
            p = [rng.randrange(8)]
            while True:
                options = [w for w in g.adj[p[-1]] if w not in p]
                if not options or rng.random() < 0.2:
                    break
                p.append(rng.choice(options))
            q = shortcut_path(g, p)
            assert q[0] == p[0] and q[-1] == p[-1] and set(q) <= set(p)
            pos = {v: i for i, v in enumerate(q)}
            for u, v in g.edges():
                if u in pos and v in pos:
                    assert abs(pos[u] - pos[v]) == 1
