"""Sampling-based protocol simulation checked against the deterministic route."""

import math

import numpy as np
import pytest

from subplanck.density import log_interp, make_grid_density
from subplanck.distill import universal_distill
from subplanck.errors import NoAcceptedSamples, PreconditionError, TooFewSamples
from subplanck.oracle import (
    MAX_PROTOCOL_LAYERS,
    ProtocolRun,
    ks_distance,
    sample_density,
    simulate_protocol,
)
from subplanck.states import fock_density


def cumulative_on(d, grid):
    vals = d.values()
    steps = 0.5 * (vals[1:] + vals[:-1]) * d.x_step
    cdf = np.concatenate(([0.0], np.cumsum(steps)))
    cdf /= cdf[-1]
    return np.interp(grid, d.xs(), cdf, left=0.0, right=1.0)


class TestSampleDensity:
    def test_ground_moments(self):
        samples = sample_density(fock_density(0), 1_000_000, seed=1)
        assert abs(samples.mean()) <= 0.005
        assert abs(samples.var() - 0.5) <= 0.005

    def test_fock1_moments(self):
        samples = sample_density(fock_density(1), 1_000_000, seed=2)
        assert abs(samples.mean()) <= 0.005
        assert abs(samples.var() - 1.5) <= 0.01

    def test_deterministic_per_seed(self):
        a = sample_density(fock_density(1), 5000, seed=7)
        b = sample_density(fock_density(1), 5000, seed=7)
        c = sample_density(fock_density(1), 5000, seed=8)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_count_validated(self):
        with pytest.raises(PreconditionError):
            sample_density(fock_density(0), 0, seed=0)

    def test_samples_match_density(self):
        samples = sample_density(fock_density(1), 200_000, seed=3)
        assert ks_distance(samples, fock_density(1)) <= 0.01


class TestSimulateProtocol:
    def test_single_layer_matches_deterministic(self):
        # one ground-state layer conditioned at zero: the sum port is again
        # the ground state, up to the finite window bias measured by KS
        p = fock_density(0)
        run = simulate_protocol(p, 1, eps=0.02, batches=80, seed=4)
        assert run.accepted >= 100_000
        assert ks_distance(run.samples_out, universal_distill(p, 1)) <= 0.01

    def test_run_is_reproducible(self):
        p = fock_density(1)
        a = simulate_protocol(p, 2, eps=0.05, batches=4, seed=9)
        b = simulate_protocol(p, 2, eps=0.05, batches=4, seed=9)
        assert np.array_equal(a.samples_out, b.samples_out)
        assert a.attempted == b.attempted

    def test_window_bias_shrinks_with_eps(self):
        # the expectation of the accepted-sample distribution is the
        # window-averaged two-copy product; its distance to the exact-point
        # output is the pure bias, far below KS sampling noise at any
        # affordable sample count, so compare expectations directly
        p = fock_density(1)
        exact = universal_distill(p, 1)

        def windowed_expectation(eps):
            xs = exact.xs()
            ds = np.linspace(-eps, eps, 81)
            panels = np.exp(
                log_interp(p, (xs[None, :] + ds[:, None]) / math.sqrt(2.0))
                + log_interp(p, (xs[None, :] - ds[:, None]) / math.sqrt(2.0))
            )
            avg = np.trapezoid(panels, ds, axis=0)
            return make_grid_density(xs, avg)

        def ks_between(d1, d2):
            grid = np.linspace(d1.x_min, d1.x_max, 20001)
            return float(np.max(np.abs(cumulative_on(d1, grid) - cumulative_on(d2, grid))))

        biases = [ks_between(windowed_expectation(eps), exact) for eps in (0.1, 0.05, 0.02)]
        assert biases[0] > biases[1] > biases[2]
        assert biases[2] <= 1e-4

    def test_acceptance_grows_with_window(self):
        p = fock_density(1)
        majority = 0
        for seed in range(5):
            rates = [
                simulate_protocol(p, 1, eps=eps, batches=2, seed=seed).acceptance_rate
                for eps in (0.1, 0.05, 0.02)
            ]
            majority += rates[0] > rates[1] > rates[2]
        assert majority >= 3

    def test_acceptance_bookkeeping(self):
        run = simulate_protocol(fock_density(0), 2, eps=0.05, batches=2, seed=0)
        assert run.attempted == 2 * ((1 << 17) // 4)
        assert 0 < run.accepted <= run.attempted
        assert run.acceptance_rate == run.accepted / run.attempted

    def test_unreachable_condition(self):
        with pytest.raises(NoAcceptedSamples):
            simulate_protocol(fock_density(0), 1, xbar=30.0, batches=2, seed=0)

    def test_layer_bound(self):
        with pytest.raises(PreconditionError):
            simulate_protocol(fock_density(0), MAX_PROTOCOL_LAYERS + 1)
        with pytest.raises(PreconditionError):
            simulate_protocol(fock_density(0), 0)

    def test_window_must_be_positive(self):
        with pytest.raises(PreconditionError):
            simulate_protocol(fock_density(0), 1, eps=0.0)

    def test_samples_are_frozen(self):
        run = simulate_protocol(fock_density(0), 1, batches=1, seed=0)
        with pytest.raises(ValueError):
            run.samples_out[0] = 0.0

    def test_report_fields(self):
        run = simulate_protocol(fock_density(0), 1, eps=0.05, batches=1, seed=3)
        d = run.to_dict()
        assert list(d) == [
            "accepted",
            "attempted",
            "acceptance_rate",
            "ks_vs_deterministic",
            "window_eps",
            "seed",
        ]
        assert d["window_eps"] == 0.05
        assert d["seed"] == 3


class TestKsDistance:
    def test_self_consistency(self):
        p = fock_density(0)
        assert ks_distance(sample_density(p, 100_000, seed=5), p) <= 0.01

    def test_separates_distinct_densities(self):
        samples = sample_density(fock_density(0), 100_000, seed=6)
        assert ks_distance(samples, fock_density(1)) >= 0.2

    def test_minimum_sample_count(self):
        with pytest.raises(TooFewSamples):
            ks_distance(np.zeros(99), fock_density(0))


class TestProtocolRun:
    def test_bookkeeping_guard(self):
        with pytest.raises(PreconditionError):
            ProtocolRun(
                samples_out=np.zeros(5),
                accepted=10,
                attempted=5,
                window_eps=0.02,
                seed=0,
            )
