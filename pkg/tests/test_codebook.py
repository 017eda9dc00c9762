"""Magnitude grid, seed-derived codewords and the exhaustive search."""

import math
from fractions import Fraction

import numpy as np
import pytest

from core.codebook import (
    codebook_entry,
    codeword,
    codeword_block,
    codeword_count,
    decode_magnitude,
    direction_codebook,
    encode_magnitude,
    magnitude_grid,
    merge_candidates,
    partition,
    scan_range,
    search_direction,
)
from utils.errors import CapacityError, DomainError, UsageError


class TestCodewordCount:
    @pytest.mark.parametrize("n, rate, expected", [
        (4, Fraction(1, 2), 4),
        (15, Fraction(1, 10), 2),
        (3, Fraction(1, 3), 2),
        (10, Fraction(1, 3), 10),
        (8, 1, 256),
        (5, 0, 1),
        (3, Fraction(1, 10), 1),
        (62, 1, 2**62),
        (10, Fraction(1, 2), 32),
        (7, Fraction(1, 3), 5),
    ])
    def test_exact_floor(self, n, rate, expected):
        assert codeword_count(n, rate) == expected

    def test_decimal_rate(self):
        assert codeword_count(15, 0.1) == 2

    def test_over_capacity(self):
        with pytest.raises(CapacityError):
            codeword_count(63, 1)

    def test_bad_dimension(self):
        with pytest.raises(DomainError):
            codeword_count(0, 1)


class TestCodewords:
    def test_unit_norm_and_deterministic(self):
        a = codeword(7, 12, 9)
        assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_array_equal(a, codeword(7, 12, 9))

    def test_block_rows_match_single_codewords(self):
        block = codeword_block(11, 3, 10, 5)
        for k, row in enumerate(block):
            np.testing.assert_array_equal(row, codeword(11, 3 + k, 5))

    def test_thousand_codewords_have_unit_norm(self):
        norms = np.linalg.norm(codeword_block(23, 0, 1000, 13), axis=1)
        np.testing.assert_allclose(norms, 1.0, atol=1e-12)

    def test_seeds_give_different_codebooks(self):
        assert not np.array_equal(codeword(1, 0, 8), codeword(2, 0, 8))

    def test_sample_moments(self):
        n, count = 10, 20000
        rho = codeword_block(99, 0, count, n)[:, 0]
        se_mean = rho.std(ddof=1) / math.sqrt(count)
        se_square = (rho * rho).std(ddof=1) / math.sqrt(count)
        assert abs(rho.mean()) <= 4 * se_mean
        assert abs((rho * rho).mean() - 1 / n) <= 4 * se_square

    def test_index_out_of_range(self):
        with pytest.raises(UsageError):
            codeword(1, -1, 4)

    def test_direction_codebook(self):
        book = direction_codebook(4, Fraction(1, 2), 7)
        assert book.count == 4
        np.testing.assert_array_equal(codebook_entry(book, 3), codeword(7, 3, 4))
        with pytest.raises(UsageError):
            codebook_entry(book, 4)


class TestMagnitudeGrid:
    def test_size_and_values(self):
        grid = magnitude_grid(4, 2.0)
        assert grid.size == 4
        np.testing.assert_allclose(grid.values(), [0.5, 1.0, 1.5, 2.0])

    def test_size_rounds_up(self):
        assert magnitude_grid(4, 1.5).size == 3
        assert magnitude_grid(16, 1.1).size == 5

    def test_invalid_radius(self):
        with pytest.raises(DomainError):
            magnitude_grid(4, 0.0)

    def test_oversize_grid(self):
        with pytest.raises(CapacityError, match="magnitude grid"):
            magnitude_grid(4, 1e300).size

    def test_round_trip_on_grid(self):
        grid = magnitude_grid(9, 3.0)
        for index, value in enumerate(grid.values()):
            assert encode_magnitude(value, grid) == index
            assert decode_magnitude(index, grid) == pytest.approx(value)

    def test_clamps_outside_grid(self):
        grid = magnitude_grid(4, 2.0)
        assert encode_magnitude(-3.0, grid) == 0
        assert encode_magnitude(0.1, grid) == 0
        assert encode_magnitude(50.0, grid) == grid.size - 1

    def test_tie_goes_to_lower_index(self):
        assert encode_magnitude(0.75, magnitude_grid(4, 2.0)) == 0

    def test_quantization_error(self, rng):
        n = 25
        grid = magnitude_grid(n, 4.0)
        values = rng.uniform(1 / math.sqrt(n), grid.size / math.sqrt(n), size=2000)
        for v in values:
            error = abs(decode_magnitude(encode_magnitude(v, grid), grid) - v)
            assert error <= 1 / (2 * math.sqrt(n)) + 1e-12

    def test_non_finite(self):
        with pytest.raises(DomainError):
            encode_magnitude(math.nan, magnitude_grid(4, 2.0))

    def test_decode_out_of_range(self):
        with pytest.raises(UsageError):
            decode_magnitude(4, magnitude_grid(4, 2.0))


class TestSearchDirection:
    def test_matches_brute_force(self, rng):
        n, count, seed = 6, 500, 3
        x = rng.standard_normal(n)
        inner = codeword_block(seed, 0, count, n) @ x
        index, best = search_direction(x, seed, count)
        assert index == int(np.argmax(inner))
        assert best == pytest.approx(float(inner.max()), rel=1e-12)

    def test_scale_invariant(self, rng):
        x = rng.standard_normal(8)
        assert search_direction(x, 5, 300)[0] == search_direction(12.5 * x, 5, 300)[0]

    def test_block_size_does_not_matter(self, rng):
        x = rng.standard_normal(5)
        assert scan_range(x, 9, 0, 401, block_size=13)[0] == scan_range(x, 9, 0, 401, block_size=1000)[0]

    def test_worker_count_invariance(self, rng, parallel_settings):
        x = rng.standard_normal(7)
        serial = search_direction(x, 17, 1000, workers=1)
        parallel = search_direction(x, 17, 1000, workers=3)
        assert serial[0] == parallel[0]
        assert serial[1] == parallel[1]

    @pytest.mark.slow
    def test_parallel_matches_full_scan(self, rng, parallel_settings):
        for _ in range(50):
            n = int(rng.integers(2, 17))
            count = int(rng.integers(1, 4097))
            seed = int(rng.integers(0, 2**63))
            x = rng.standard_normal(n)
            inner = [float(np.sum(codeword(seed, i, n) * x)) for i in range(count)]
            index, best = search_direction(x, seed, count, workers=3)
            assert index == int(np.argmax(inner))
            assert best == pytest.approx(max(inner), rel=1e-12)

    def test_zero_vector(self):
        with pytest.raises(DomainError):
            search_direction(np.zeros(4), 1, 10)

    def test_over_capacity(self):
        with pytest.raises(CapacityError):
            search_direction(np.ones(4), 1, 2**62 + 1)


class TestMerge:
    def test_ties_go_to_lowest_index(self):
        assert merge_candidates([(5, 0.3), (2, 0.3), (7, 0.1)]) == (2, 0.3)

    def test_largest_inner_wins(self):
        assert merge_candidates([(0, 0.1), (9, 0.4)]) == (9, 0.4)

    def test_partition_is_contiguous(self):
        assert partition(10, 3) == [(0, 4), (4, 7), (7, 10)]
        assert partition(2, 5) == [(0, 1), (1, 2)]
