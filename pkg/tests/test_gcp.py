import math

import numpy as np
import pytest

from gbsval import (ClickMoments, DataError, DimensionError, GaussianInputSpec,
                    GcpDistribution, GcpSpec, NumericalGuardError, PatternSet,
                    PatternSource, Representation, Source, StateKind,
                    bin_patterns, click_moments, derive_moments,
                    draw_input_ensemble, partition_modes, permutation_count,
                    propagate, simulate_gcp)
from gbsval.network import TransmissionMatrix


def constant_click_moments(n_traj, n_modes, n_prime_value):
    n_prime = np.full((n_traj, n_modes), n_prime_value, dtype=complex)
    return ClickMoments(n_prime=n_prime, pi1=1.0 - np.exp(-n_prime),
                        representation=Representation.DIAGONAL_P)


def thermal_click_moments(n_traj, n_modes=1, seed=21, nbar=1.0):
    r = np.full(n_modes, np.arcsinh(np.sqrt(nbar)))
    m = derive_moments(GaussianInputSpec(kind=StateKind.THERMAL, r=r))
    e = draw_input_ensemble(m, Representation.DIAGONAL_P, n_traj, seed)
    out = propagate(e, TransmissionMatrix(entries=np.eye(n_modes, dtype=complex)))
    return click_moments(out)


class TestPartition:
    def test_single_group(self):
        assert partition_modes(4, 1).subsets == ((0, 1, 2, 3),)

    def test_contiguous_default(self):
        assert partition_modes(4, 2).subsets == ((0, 1), (2, 3))

    def test_seeded_partition_properties(self):
        spec = partition_modes(20, 2, permutation_seed=99)
        flat = [i for s in spec.subsets for i in s]
        assert sorted(flat) == list(range(20))
        assert len(spec.subsets[0]) == len(spec.subsets[1]) == 10
        # deterministic in seed
        assert spec.subsets == partition_modes(20, 2, permutation_seed=99).subsets

    def test_dimension_bounds(self):
        with pytest.raises(DimensionError):
            partition_modes(4, 5)
        with pytest.raises(DataError):
            GcpSpec(total_modes=10, subsets=tuple((i,) for i in range(5)))

    def test_disjointness_enforced(self):
        with pytest.raises(DataError):
            GcpSpec(total_modes=4, subsets=((0, 1), (1, 2)))


class TestPermutationCount:
    def test_small_enumeration(self):
        assert permutation_count(4, 2) == 3

    def test_single_group(self):
        assert permutation_count(17, 1) == 1

    def test_big_integer_exact(self):
        expected = math.factorial(100) // (math.factorial(50) ** 2) // 2
        assert permutation_count(100, 2) == expected

    def test_non_divisible_rejected(self):
        with pytest.raises(DataError):
            permutation_count(5, 2)


class TestSimulateGcp:
    def test_constructed_half_click(self):
        cm = constant_click_moments(64, 1, np.log(2.0))
        dist = simulate_gcp(cm, partition_modes(1, 1), blocks=4)
        np.testing.assert_allclose(dist.probabilities, [0.5, 0.5], atol=1e-12)
        assert np.all(dist.sigma <= 1e-12)

    def test_single_thermal_mode(self):
        # <1 - exp(-|a|^2)> over the thermal diagonal P is nbar / (1 + nbar)
        cm = thermal_click_moments(10**6)
        dist = simulate_gcp(cm, partition_modes(1, 1))
        assert abs(dist.probabilities[1] - 0.5) <= 5 * dist.sigma[1]

    def test_normalization(self):
        cm = thermal_click_moments(20_000, n_modes=4, seed=31)
        dist = simulate_gcp(cm, partition_modes(4, 2), blocks=10)
        assert abs(dist.probabilities.sum() - 1.0) <= 1e-10

    def test_marginal_consistency(self):
        cm = thermal_click_moments(20_000, n_modes=4, seed=32)
        d2 = simulate_gcp(cm, partition_modes(4, 2), blocks=10)
        d1 = simulate_gcp(cm, GcpSpec(total_modes=4, subsets=((0, 1),)), blocks=10)
        np.testing.assert_allclose(d2.probabilities.sum(axis=1), d1.probabilities,
                                   atol=1e-10)

    def test_subset_relabeling_invariance(self):
        cm = thermal_click_moments(5000, n_modes=4, seed=33)
        a = simulate_gcp(cm, GcpSpec(total_modes=4, subsets=((0, 1, 2, 3),)), blocks=5)
        b = simulate_gcp(cm, GcpSpec(total_modes=4, subsets=((2, 0, 3, 1),)), blocks=5)
        np.testing.assert_allclose(a.probabilities, b.probabilities, atol=1e-12)

    def test_partial_subsets_supported(self):
        cm = thermal_click_moments(5000, n_modes=4, seed=34)
        dist = simulate_gcp(cm, GcpSpec(total_modes=4, subsets=((1, 3),)), blocks=5)
        assert dist.probabilities.shape == (3,)
        assert abs(dist.probabilities.sum() - 1.0) <= 1e-10

    def test_exponent_guard(self):
        cm = constant_click_moments(16, 1, 800.0)
        with pytest.raises(NumericalGuardError):
            simulate_gcp(cm, partition_modes(1, 1), blocks=2)

    def test_blocks_lower_bound(self):
        cm = constant_click_moments(16, 1, 0.1)
        with pytest.raises(DataError):
            simulate_gcp(cm, partition_modes(1, 1), blocks=1)


class TestBinPatterns:
    def test_tiny_example(self):
        ps = PatternSet(mode_count=2,
                        patterns=np.array([[0, 0], [1, 1]], dtype=np.uint8),
                        source=PatternSource.EXPERIMENT)
        dist = bin_patterns(ps, partition_modes(2, 1))
        assert list(dist.raw_counts) == [1, 0, 1]
        assert dist.probabilities.sum() == 1.0

    def test_count_conservation(self):
        rng = np.random.default_rng(1)
        ps = PatternSet(mode_count=5,
                        patterns=rng.integers(0, 2, (1000, 5)).astype(np.uint8),
                        source=PatternSource.EXPERIMENT)
        dist = bin_patterns(ps, partition_modes(5, 1))
        assert dist.raw_counts.sum() == 1000

    def test_bernoulli_half_matches_binomial(self):
        # 4e6 random 20-bit patterns against the exact Binomial(20, 1/2)
        rng = np.random.default_rng(2)
        total = 4 * 10**6
        ps = PatternSet(mode_count=20,
                        patterns=(rng.random((total, 20)) < 0.5).astype(np.uint8),
                        source=PatternSource.EXPERIMENT)
        spec = partition_modes(20, 1)
        dist = bin_patterns(ps, spec)
        kk = np.arange(21)
        binom = np.array([math.comb(20, int(k)) for k in kk]) * 0.5**20
        oracle = GcpDistribution(spec=spec, probabilities=binom,
                                 sigma=np.zeros(21), source=Source.EXACT,
                                 ensembles_or_patterns=0)
        from gbsval import chi_square_test
        chi2, k, _ = chi_square_test(dist, oracle)
        assert 0.2 <= chi2 / k <= 3.0

    def test_length_mismatch(self):
        ps = PatternSet(mode_count=3, patterns=np.zeros((2, 3), dtype=np.uint8),
                        source=PatternSource.EXPERIMENT)
        with pytest.raises(DimensionError):
            bin_patterns(ps, partition_modes(4, 1))


def test_distribution_json_round_trip(tmp_path):
    cm = thermal_click_moments(4000, n_modes=4, seed=35)
    dist = simulate_gcp(cm, partition_modes(4, 2), blocks=4)
    path = tmp_path / "d.json"
    dist.to_json(path)
    back = GcpDistribution.from_json(path)
    assert np.array_equal(dist.probabilities, back.probabilities)
    assert np.array_equal(dist.sigma, back.sigma)
    assert back.spec.subsets == dist.spec.subsets
    assert back.source is Source.PHASE_SPACE


def test_distribution_csv_export(tmp_path):
    cm = thermal_click_moments(1000, n_modes=2, seed=36)
    dist = simulate_gcp(cm, partition_modes(2, 1), blocks=2)
    path = tmp_path / "d.csv"
    dist.to_csv(path, header_comment="hello")
    lines = path.read_text().splitlines()
    assert lines[0] == "# hello"
    assert lines[1] == "m1,probability,sigma,counts"
    assert len(lines) == 2 + 3
