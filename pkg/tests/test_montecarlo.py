import numpy as np
import pytest

from chancecheck.errors import DomainError
from chancecheck.montecarlo import (
    Comparison,
    ReplicateModel,
    SplitMix64,
    StreamBlock,
    derive_replicate_seed,
    derive_replicate_seeds,
    estimate_equal_or_better,
    run_replicates,
)
from chancecheck.probability import binom_sf, wilson_interval

# Published splitmix64 reference outputs for state 0.
SPLITMIX_ZERO = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


def reference_splitmix(state, count):
    """Textbook splitmix64, written independently of the library."""
    mask = (1 << 64) - 1
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        out.append(z ^ (z >> 31))
    return out


class TestSeeds:
    def test_reference_oracle(self):
        assert reference_splitmix(0, 3) == SPLITMIX_ZERO

    def test_golden_values(self):
        assert derive_replicate_seed(0, 0) == 0xE220A8397B1DCDAF
        assert derive_replicate_seed(0, 1) == 0x6E789E6AA1B965F4

    def test_stable_and_distinct(self):
        assert derive_replicate_seed(42, 7) == derive_replicate_seed(42, 7)
        seeds = {derive_replicate_seed(42, i) for i in range(10_000)}
        assert len(seeds) == 10_000

    def test_vectorised_agrees(self):
        for master in (0, 1, 2**63 + 5, 2**64 - 1):
            vec = derive_replicate_seeds(master, 3, 40)
            assert [int(x) for x in vec] == [derive_replicate_seed(master, i) for i in range(3, 40)]

    def test_negative_index(self):
        with pytest.raises(DomainError):
            derive_replicate_seed(0, -1)

    def test_scalar_stream_matches_reference(self):
        rng = SplitMix64(12345)
        assert [rng.next_u64() for _ in range(50)] == reference_splitmix(12345, 50)

    def test_block_stream_matches_scalar(self):
        seeds = derive_replicate_seeds(9, 0, 64)
        block = StreamBlock(seeds)
        draws = np.array([block.random() for _ in range(20)])
        for j, seed in enumerate(seeds):
            rng = SplitMix64(int(seed))
            np.testing.assert_array_equal(draws[:, j], [rng.random() for _ in range(20)])

    def test_uniforms_in_unit_interval(self):
        u = np.concatenate([StreamBlock(derive_replicate_seeds(1, 0, 4096)).random() for _ in range(4)])
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.01


class TestRunReplicates:
    def test_certain_success(self):
        model = ReplicateModel(10, 1.0, 10)
        assert run_replicates(model, 5000, master=3) == 5000

    def test_impossible_success(self):
        assert run_replicates(ReplicateModel(10, 0.0, 1), 5000, master=3) == 0

    def test_strict_comparison(self):
        model = ReplicateModel(5, 1.0, 5, Comparison.MORE_THAN)
        assert run_replicates(model, 100, master=0) == 0

    def test_exact_oracle(self):
        n = 100_000
        count = run_replicates(ReplicateModel(10, 0.5, 8), n, master=2024)
        lo, hi = wilson_interval(count, n, 0.99)
        assert lo <= 0.0546875 <= hi

    def test_worker_count_irrelevant(self):
        model = ReplicateModel(20, 0.3, 8)
        counts = {run_replicates(model, 70_000, master=77, workers=w) for w in (1, 2, 3, 8)}
        assert len(counts) == 1

    def test_deterministic(self):
        model = ReplicateModel(12, 0.41, 6)
        assert run_replicates(model, 20_000, 5) == run_replicates(model, 20_000, 5)

    def test_prefix_consistency(self):
        # Replicate i depends only on (master, i): a longer run extends a shorter one.
        model = ReplicateModel(1, 0.5, 1)
        seeds = derive_replicate_seeds(8, 0, 1000)
        first = np.array([SplitMix64(int(s)).random() < 0.5 for s in seeds])
        assert run_replicates(model, 1000, 8) == int(first.sum())

    def test_rejects_zero_replicates(self):
        with pytest.raises(DomainError):
            run_replicates(ReplicateModel(1, 0.5, 1), 0, 1)

    @pytest.mark.parametrize(
        "args", [(-1, 0.5, 0), (10, 1.1, 3), (10, 0.5, 11), (10, 0.5, -1)]
    )
    def test_model_validation(self, args):
        with pytest.raises(DomainError):
            ReplicateModel(*args)


class TestEstimate:
    def test_all_successes(self):
        est = estimate_equal_or_better(ReplicateModel(4, 1.0, 0), 100, master=1)
        assert est.point == 1.0
        assert est.upper == 1.0
        assert est.successes == 100

    def test_too_few_replicates(self):
        with pytest.raises(DomainError):
            estimate_equal_or_better(ReplicateModel(4, 0.5, 2), 99, master=1)

    def test_exact_agreement(self):
        est = estimate_equal_or_better(ReplicateModel(10, 0.5, 8), 100_000, master=3, confidence=0.99)
        assert est.lower <= binom_sf(8, 10, 0.5) <= est.upper

    def test_width_shrinks_like_root_two(self):
        model = ReplicateModel(10, 0.5, 8)
        small = estimate_equal_or_better(model, 50_000, master=11)
        large = estimate_equal_or_better(model, 100_000, master=11)
        ratio = (large.upper - large.lower) / (small.upper - small.lower)
        assert ratio == pytest.approx(2**-0.5, rel=0.2)

    def test_records_provenance(self):
        est = estimate_equal_or_better(ReplicateModel(3, 0.5, 2), 200, master=99, confidence=0.9)
        assert (est.replicates, est.master_seed, est.confidence) == (200, 99, 0.9)
        assert est.interval == (est.lower, est.upper)
