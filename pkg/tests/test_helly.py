import itertools
import math

import pytest

from medianbv.errors import InvalidInput, SourceExhausted
from medianbv.generators import star_hub_indicator
from medianbv.helly import (
    max_pairwise_gap,
    pigeonhole_bound,
    select_diagonal,
    select_finite,
    verify_limit_variation,
)
from medianbv.structures import Structure
from medianbv.variation import total_variation


class TestFinite:
    def test_majority_cell(self):
        res = select_finite([[0], [1], [0], [1], [0]], (0, 1), 0.5)
        assert res.indices == (0, 2, 4)
        assert res.cell == ((0.0, 0.5),)

    def test_constant(self):
        assert select_finite([[0.3, 0.1]] * 6, (0, 1), 0.2).indices == tuple(range(6))

    def test_single(self):
        assert select_finite([[0.7]], (0, 1), 0.1).indices == (0,)

    def test_top_endpoint_in_last_box(self):
        res = select_finite([[1.0], [0.95], [0.1]], (0, 1), 0.1)
        assert res.indices == (0, 1)
        assert res.cell == ((pytest.approx(0.9), 1.0),)

    def test_bound(self):
        assert pigeonhole_bound(10, 2, 0, 1, 0.5) == 3
        assert pigeonhole_bound(1, 3, 0, 1, 0.01) == 1

    def test_bound_on_grid_of_values(self):
        for n_fs, pts in itertools.product((1, 7, 30), (1, 2)):
            fs = [[((i * 37 + 11 * j) % 10) / 9 for j in range(pts)] for i in range(n_fs)]
            res = select_finite(fs, (0, 1), 0.3)
            assert len(res.indices) >= pigeonhole_bound(n_fs, pts, 0, 1, 0.3)
            assert max_pairwise_gap(fs, res.indices) <= 0.3

    def test_errors(self):
        with pytest.raises(InvalidInput):
            select_finite([], (0, 1), 0.5)
        with pytest.raises(InvalidInput):
            select_finite([[0.5]], (0, 1), 0)
        with pytest.raises(InvalidInput):
            select_finite([[2.0]], (0, 1), 0.5)
        with pytest.raises(InvalidInput):
            select_finite([[0.5], [0.5, 0.5]], (0, 1), 0.5)


class TestDiagonal:
    def test_chain_limit(self):
        s = Structure.chain(3)
        res = select_diagonal(lambda i: (1 / (i + 1), 0.0, 1.0), s, (0, 1), [0.5, 0.25, 0.1], 3)
        assert all(abs(a - b) <= 0.1 for a, b in zip(res.limit_estimate, (0, 0, 1)))
        assert len(res.indices) == 3 and list(res.indices) == sorted(res.indices)

    def test_alternating(self):
        s = Structure.chain(2)
        g, h = (0.1, 0.9), (0.8, 0.2)
        res = select_diagonal(lambda i: g if i % 2 == 0 else h, s, (0, 1), [0.5, 0.2], 2)
        assert all(i % 2 == 0 for i in res.indices)

    def test_nested_stages(self):
        s = Structure.chain(2)
        res = select_diagonal(lambda i: ((i * 0.37) % 1, (i * 0.61) % 1), s, (0, 1), [0.5, 0.25, 0.125], 3)
        for a, b in zip(res.stages, res.stages[1:]):
            assert set(b) <= set(a)

    def test_star_leaf_indicators(self):
        # cycling through the leaf indicators of star_N: one hub gap each, so variation 1
        n = 6
        star = Structure.star(n)

        def chi(i):
            leaf = 1 + i % (n - 1)
            return tuple(1.0 if p == leaf else 0.0 for p in range(n))

        assert all(total_variation(star, chi(i)).value == 1 for i in range(n - 1))
        res = select_diagonal(chi, star, (0, 1), [0.5], 1, horizon=n)
        assert len(res.stages[0]) >= 2

    def test_iterable_source_exhausted(self):
        s = Structure.chain(1)
        with pytest.raises(SourceExhausted):
            select_diagonal(iter([(0.0,), (1.0,)]), s, (0, 1), [0.5, 0.25], 2)
        with pytest.raises(SourceExhausted):
            select_diagonal(iter([]), s, (0, 1), [0.5], 1)

    def test_horizon_grows(self):
        s = Structure.chain(1)
        # values spread over many boxes until late
        res = select_diagonal(lambda i: (((i * 0.618) % 1) if i < 100 else 0.5,), s, (0, 1), [0.05, 0.04, 0.03, 0.02, 0.01], 5, horizon=8)
        assert len(res.indices) == 5

    def test_schedule_validation(self):
        s = Structure.chain(1)
        with pytest.raises(InvalidInput):
            select_diagonal(lambda i: (0.0,), s, (0, 1), [0.1, 0.2], 2)
        with pytest.raises(InvalidInput):
            select_diagonal(lambda i: (0.0,), s, (0, 1), [0.1], 2)
        with pytest.raises(InvalidInput):
            select_diagonal(lambda i: (0.0,), s, (0, 1), [0.1], 0)
        with pytest.raises(InvalidInput):
            select_diagonal(lambda i: (0.0, 0.0), s, (0, 1), [0.1], 1)


class TestLimitVariation:
    def test_constant_sequence(self):
        s = Structure.star(5)
        f = star_hub_indicator(5)
        assert verify_limit_variation(s, f, total_variation(s, f).value)

    def test_too_large(self):
        s = Structure.chain(2)
        assert not verify_limit_variation(s, (0.0, 2.0), 1.0, 0.0)

    def test_estimate_within_budget(self):
        s = Structure.chain(4)
        g = (0.2, 0.9, 0.1, 0.6)
        r = total_variation(s, g).value
        res = select_diagonal(lambda i: tuple(v * (1 - 1 / (i + 2)) for v in g), s, (0, 1), [0.3, 0.1, 0.05], 3)
        assert verify_limit_variation(s, res.limit_estimate, r, s.n * 0.05)
        assert not math.isnan(sum(res.limit_estimate))
