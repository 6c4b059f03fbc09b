import json
import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import rng
from ncsync.topology import (
    SQRT2,
    Topology,
    TopologyGenerationError,
    complete_graph,
    from_edges,
    from_positions,
    generate_connected,
    generate_geometric,
    path_graph,
    star_graph,
)


class TestGenerateGeometric:
    def test_full_radius_gives_complete_graph(self):
        t = generate_geometric(5, SQRT2, rng(1))
        assert t is not None
        assert t.average_degree() == 4
        assert t.edge_count == 10

    def test_collinear_positions_force_path(self):
        t = from_positions([(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)], 0.6)
        assert t.edges == [(0, 1), (1, 2)]
        assert t.average_degree() == Fraction(4, 3)

    def test_tiny_radius_almost_always_rejected(self):
        # Monte Carlo oracle: disconnection probability at n=8, r=0.1.
        rejected = sum(generate_geometric(8, 0.1, rng(2)) is None for _ in range(10_000))
        assert rejected / 10_000 > 0.99

    @pytest.mark.parametrize("n,radius", [(1, 0.5), (0, 0.5), (5, 0.0), (5, -1.0), (5, 1.5)])
    def test_parameter_errors(self, n, radius):
        with pytest.raises(ValueError):
            generate_geometric(n, radius, rng(0))

    def test_accepted_samples_are_connected(self):
        for seed in range(50):
            t = generate_geometric(8, 0.6, rng(seed))
            if t is not None:
                assert t.is_connected()
                d = t.average_degree()
                assert Fraction(2 * 7, 8) <= d <= 7

    def test_bit_identical_across_runs(self):
        a = generate_geometric(10, 0.5, rng(7))
        b = generate_geometric(10, 0.5, rng(7))
        assert (a is None) == (b is None)
        if a is not None:
            assert np.array_equal(a.adj_masks, b.adj_masks)
            assert np.array_equal(a.positions, b.positions)

    def test_mean_degree_nondecreasing_in_radius(self):
        means = []
        for radius in (0.35, 0.55, 0.8):
            degs = []
            g = rng(11)
            while len(degs) < 1000:
                t = generate_geometric(8, radius, g)
                if t is not None:
                    degs.append(float(t.average_degree()))
            means.append(sum(degs) / len(degs))
        assert means == sorted(means)

    def test_rejection_cap(self):
        with pytest.raises(TopologyGenerationError):
            generate_connected(12, 0.02, rng(0), max_tries=50)


class TestFromEdges:
    def test_path(self):
        t = from_edges(3, [(0, 1), (1, 2)])
        assert t.is_connected()
        assert t.neighbors(1) == [0, 2]

    def test_disconnected_reported(self):
        t = from_edges(4, [(0, 1), (2, 3)])
        assert not t.is_connected()

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError, match="self-loop"):
            from_edges(2, [(0, 0)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            from_edges(3, [(0, 3)])

    def test_duplicates_and_symmetry(self):
        t = from_edges(3, [(0, 1), (1, 0), (0, 1)])
        assert t.edge_count == 1
        assert t.neighbors(0) == [1] and t.neighbors(1) == [0]


class TestQueries:
    def test_average_degree_exact(self):
        assert complete_graph(5).average_degree() == 4
        assert path_graph(3).average_degree() == Fraction(4, 3)
        # star on 5 nodes: 4 edges counted by hand
        assert star_graph(5).edge_count == 4
        assert star_graph(5).average_degree() == Fraction(8, 5)

    def test_is_connected(self):
        assert path_graph(3).is_connected()
        assert not from_edges(4, [(0, 1), (2, 3)]).is_connected()
        assert complete_graph(11).is_connected()


class TestSerialization:
    def test_json_schema_and_roundtrip(self, tmp_path):
        t = generate_connected(6, 0.8, rng(3))
        p = tmp_path / "topo.json"
        t.save(p)
        raw = json.loads(p.read_text())
        assert set(raw) == {"n", "edges", "positions"}
        back = Topology.load(p)
        assert np.array_equal(back.adj_masks, t.adj_masks)
        assert back.positions is not None
        assert np.allclose(back.positions, t.positions)

    def test_fixture_graph_roundtrip_without_positions(self, tmp_path):
        t = path_graph(3)
        p = tmp_path / "p3.json"
        t.save(p)
        raw = json.loads(p.read_text())
        assert raw == {"n": 3, "edges": [[0, 1], [1, 2]]}
        assert np.array_equal(Topology.load(p).adj_masks, t.adj_masks)
