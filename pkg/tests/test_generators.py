import pytest

from medianbv.convexity import is_monotone
from medianbv.errors import InvalidInput
from medianbv.generators import (
    all_free_trees,
    fixtures,
    random_closed_cover,
    random_function,
    random_monotone_function,
    random_monotone_map,
    random_product,
    random_topology,
    random_tree,
    relabel_tree,
    triod_colorings,
)
from medianbv.structures import Structure, check_median_axioms
from medianbv.topology import is_closed
from medianbv.variation import adjacency_gaps, total_variation


class TestTrees:
    def test_small(self):
        assert random_tree(1, 0).n == 1
        assert random_tree(2, 0).tree_edges == ((0, 1),)

    def test_deterministic_and_valid(self):
        t1, t2 = random_tree(9, 7), random_tree(9, 7)
        assert t1.tree_edges == t2.tree_edges
        assert len(t1.tree_edges) == 8  # constructor checks connectivity

    def test_invalid(self):
        with pytest.raises(InvalidInput):
            random_tree(0, 0)

    def test_free_tree_counts(self):
        # number of unlabelled trees on n vertices
        assert [len(all_free_trees(n)) for n in range(1, 11)] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]

    def test_relabel(self):
        t = Structure.tree(3, [(0, 1), (1, 2)])
        assert relabel_tree(t, [2, 0, 1]).adjacency[0] == (1, 2)


class TestFunctions:
    def test_range(self):
        f = random_function(Structure.chain(20), (-1, 2), 3)
        assert all(-1 <= v <= 2 for v in f) and f.range == (-1.0, 2.0)

    def test_degenerate_range(self):
        assert set(random_function(Structure.chain(5), (0, 0), 1)) == {0.0}

    def test_seeded(self):
        s = Structure.chain(5)
        assert random_function(s, (0, 1), 9) == random_function(s, (0, 1), 9)


class TestMonotone:
    def test_accepts_only_monotone(self):
        for seed in range(20):
            src, dst = random_tree(6, seed), random_tree(5, seed + 100)
            for proposal in ("uniform", "structured"):
                h = random_monotone_map(src, dst, seed, max_tries=500, proposal=proposal)
                if h is not None:
                    assert is_monotone(h, src, dst)

    def test_structured_usually_succeeds(self):
        hits = sum(
            random_monotone_map(random_tree(8, s), random_tree(8, s + 1), s, 100, "structured") is not None
            for s in range(20)
        )
        assert hits == 20

    def test_star_to_chain_rejects_hub_indicator(self):
        star, ch = Structure.star(4), Structure.chain(2)
        assert not is_monotone([1, 0, 0, 0], star, ch)
        h = random_monotone_map(star, ch, 0, 1000)
        assert h is not None and h != (1, 0, 0, 0)

    def test_gives_up(self):
        assert random_monotone_map(Structure.star(9), Structure.chain(9), 0, max_tries=0) is None
        with pytest.raises(InvalidInput):
            random_monotone_map(Structure.grid(2, 2), Structure.chain(2), 0, proposal="structured")
        with pytest.raises(InvalidInput):
            random_monotone_map(Structure.chain(2), Structure.chain(2), 0, proposal="other")

    def test_monotone_function(self):
        s = random_tree(7, 3)
        f = random_monotone_function(s, (0, 2), 4)
        assert f.range == (0.0, 2.0)
        assert total_variation(s, f).value <= 2 + 1e-12


class TestOtherGenerators:
    def test_products_are_median_algebras(self):
        for seed in range(8):
            assert check_median_axioms(random_product(seed)).passed

    def test_random_topology_and_cover(self):
        for seed in range(10):
            t = random_topology(6, seed)
            cover = random_closed_cover(t, seed)
            assert set().union(*cover) == set(range(6))
            assert all(is_closed(t, c) for c in cover)


class TestFixtures:
    def test_named(self):
        fx = fixtures(star_n=5, grid_k=3)
        assert fx["triod"].structure.n == 4
        assert len(adjacency_gaps(fx["star_5"].structure)) == 4
        grid = fx["grid_2x3_right_column"]
        assert total_variation(grid.structure, grid.function).value == 3
        assert fx["triod_function"].function.values == (1.0, 0.0, 1.0, 1.0)

    def test_colorings(self):
        cols = triod_colorings()
        assert len(cols) == 81
        assert all(set(c.values) <= {1.0, 2.0, 3.0} for c in cols)
