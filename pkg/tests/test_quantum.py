import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from ghzport.angles import PhaseAngle, Residue
from ghzport.errors import ComputationIntegrityError, ResourceLimitError
from ghzport.quantum import (
    ExperimentConfig,
    PhaseSettings,
    correlation_brute,
    correlation_closed,
    full_distribution,
    joint_amplitude,
    joint_probability,
    perfect_correlation_class,
    predict_last,
    sample_outcomes,
)

ALPHA = cmath.exp(2j * math.pi / 3)

#: The (N, M) grid used for closed-vs-brute agreement checks.
SWEEP_CONFIGS = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 3), (4, 3), (3, 4), (2, 5)]


def zero_settings(particles, ports, exact=True):
    make = PhaseAngle.from_turns if exact else PhaseAngle.from_radians
    return PhaseSettings(tuple(tuple(make(0) for _ in range(ports))
                               for _ in range(particles)))


def random_settings(rng, particles, ports):
    return PhaseSettings.build(rng.uniform(0.0, 2 * math.pi, (particles, ports)))


def paradox_swap_settings(exact=True):
    """Three stations on the graded (0, 2*pi/9, 4*pi/9) row, one on zeros."""
    if exact:
        graded = tuple(PhaseAngle.from_turns(Fraction(j, 9)) for j in range(3))
        zeros = tuple(PhaseAngle.from_turns(0) for _ in range(3))
    else:
        graded = tuple(PhaseAngle.from_radians(2 * math.pi * j / 9) for j in range(3))
        zeros = tuple(PhaseAngle.from_radians(0.0) for _ in range(3))
    return PhaseSettings((graded, graded, graded, zeros))


class TestJointAmplitude:
    def test_mach_zehnder_bright_port(self):
        cfg = ExperimentConfig(1, 2)
        settings = zero_settings(1, 2)
        assert joint_amplitude(cfg, settings, (0,)) == pytest.approx(1.0)
        assert joint_amplitude(cfg, settings, (1,)) == pytest.approx(0.0)

    def test_four_particle_zero_phase_probability(self):
        cfg = ExperimentConfig(4, 3)
        amp = joint_amplitude(cfg, zero_settings(4, 3), (0, 0, 0, 0))
        assert abs(amp) ** 2 == pytest.approx(1 / 27, abs=1e-15)

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(7)
        for particles, ports in SWEEP_CONFIGS:
            cfg = ExperimentConfig(particles, ports)
            settings = random_settings(rng, particles, ports)
            rows = [[a.radians for a in row] for row in settings.rows]
            for outcome in itertools.product(range(ports), repeat=particles):
                expected = oracles.naive_amplitude(rows, ports, outcome)
                assert abs(joint_amplitude(cfg, settings, outcome) - expected) < 1e-12

    def test_shape_mismatch_rejected(self):
        cfg = ExperimentConfig(2, 2)
        with pytest.raises(ValueError):
            joint_amplitude(cfg, zero_settings(3, 2), (0, 0))
        with pytest.raises(ValueError):
            joint_amplitude(cfg, zero_settings(2, 2), (0, 0, 0))
        with pytest.raises(ValueError):
            joint_amplitude(cfg, zero_settings(2, 2), (0, 2))


class TestJointProbability:
    def test_anticorrelated_pair(self):
        cfg = ExperimentConfig(2, 2)
        settings = PhaseSettings.build([[0.0, 0.0], [0.0, math.pi]])
        assert joint_probability(cfg, settings, (0, 1)) == pytest.approx(0.5)
        assert joint_probability(cfg, settings, (0, 0)) == pytest.approx(0.0, abs=1e-15)

    def test_zero_phase_support(self):
        # only outcomes with detector sum = 0 mod 3 occur, each at 1/27
        cfg = ExperimentConfig(4, 3)
        settings = zero_settings(4, 3)
        for outcome in itertools.product(range(3), repeat=4):
            p = joint_probability(cfg, settings, outcome)
            if sum(outcome) % 3 == 0:
                assert p == pytest.approx(1 / 27, abs=1e-12)
            else:
                assert p == pytest.approx(0.0, abs=1e-12)

    def test_both_routes_match_oracles(self):
        rng = np.random.default_rng(11)
        cfg = ExperimentConfig(3, 3)
        settings = random_settings(rng, 3, 3)
        rows = [[a.radians for a in row] for row in settings.rows]
        for outcome in itertools.product(range(3), repeat=3):
            p = joint_probability(cfg, settings, outcome)
            assert p == pytest.approx(oracles.naive_probability(rows, 3, outcome), abs=1e-12)
            assert p == pytest.approx(
                oracles.naive_probability_cosine(rows, 3, outcome), abs=1e-10)

    def test_route_disagreement_raises(self, monkeypatch):
        import ghzport.quantum as quantum

        def broken(phi, ports):
            return np.zeros(ports)

        monkeypatch.setattr(quantum, "_class_probabilities_cosine", broken)
        with pytest.raises(ComputationIntegrityError):
            joint_probability(ExperimentConfig(2, 2), zero_settings(2, 2), (0, 0))


class TestFullDistribution:
    def test_single_tritter_zero_phase(self):
        dist = full_distribution(ExperimentConfig(1, 3), zero_settings(1, 3))
        assert dist[(0,)] == pytest.approx(1.0)
        assert dist[(1,)] == pytest.approx(0.0, abs=1e-15)
        assert dist[(2,)] == pytest.approx(0.0, abs=1e-15)

    def test_pair_zero_phase(self):
        dist = full_distribution(ExperimentConfig(2, 2), zero_settings(2, 2))
        assert dist[(0, 0)] == pytest.approx(0.5)
        assert dist[(1, 1)] == pytest.approx(0.5)
        assert dist[(0, 1)] == pytest.approx(0.0, abs=1e-15)

    def test_mapping_protocol(self):
        dist = full_distribution(ExperimentConfig(2, 3), zero_settings(2, 3))
        assert len(dist) == 9
        assert list(dist)[:3] == [(0, 0), (0, 1), (0, 2)]
        assert abs(sum(dist.values()) - 1.0) < 1e-10

    def test_marginals_match_oracle(self):
        rng = np.random.default_rng(13)
        settings = random_settings(rng, 2, 3)
        rows = [[a.radians for a in row] for row in settings.rows]
        dist = full_distribution(ExperimentConfig(2, 3), settings)
        for station in range(2):
            expected = oracles.naive_marginal(rows, 3, station)
            assert np.max(np.abs(dist.marginal(station) - expected)) < 1e-12

    def test_uniform_marginals_any_settings(self):
        # no-signaling needs a second party: for N >= 2 tracing out the other
        # stations leaves every marginal uniform whatever the settings are
        rng = np.random.default_rng(17)
        for particles, ports in SWEEP_CONFIGS:
            if particles < 2:
                continue
            settings = random_settings(rng, particles, ports)
            dist = full_distribution(ExperimentConfig(particles, ports), settings)
            for station in range(particles):
                assert np.max(np.abs(dist.marginal(station) - 1 / ports)) < 1e-10

    def test_single_particle_statistics_interfere(self):
        # with one particle there is nothing to trace out: the lone station
        # sees the full interference pattern, not a uniform marginal
        dist = full_distribution(ExperimentConfig(1, 2), zero_settings(1, 2))
        assert dist.marginal(0) == pytest.approx([1.0, 0.0], abs=1e-12)

    def test_enumeration_guard(self):
        with pytest.raises(ResourceLimitError, match="10000000"):
            full_distribution(ExperimentConfig(8, 8), zero_settings(8, 8))


class TestCorrelation:
    def test_zero_phases_give_unity(self):
        for particles, ports in SWEEP_CONFIGS:
            cfg = ExperimentConfig(particles, ports)
            value = correlation_brute(cfg, zero_settings(particles, ports)).value
            assert abs(value - 1.0) < 1e-12

    def test_paradox_swap_setting_brute(self):
        cfg = ExperimentConfig(4, 3)
        value = correlation_brute(cfg, paradox_swap_settings()).value
        assert abs(value - ALPHA**2) < 1e-12

    def test_anticorrelated_pair_brute(self):
        cfg = ExperimentConfig(2, 2)
        settings = PhaseSettings.build([[0.0, 0.0], [0.0, math.pi]])
        assert abs(correlation_brute(cfg, settings).value - (-1.0)) < 1e-12

    def test_closed_exact_class_for_paradox(self):
        cfg = ExperimentConfig(4, 3)
        result = correlation_closed(cfg, paradox_swap_settings())
        assert result.exact_class == Residue(2, 3)
        assert abs(result.value - ALPHA**2) < 1e-12

    def test_closed_exact_class_zero_phases(self):
        result = correlation_closed(ExperimentConfig(4, 3), zero_settings(4, 3))
        assert result.exact_class == Residue(0, 3)
        assert result.value == pytest.approx(1.0)

    def test_closed_without_exact_inputs_has_no_class(self):
        result = correlation_closed(ExperimentConfig(4, 3), paradox_swap_settings(exact=False))
        assert result.exact_class is None
        assert abs(result.value - ALPHA**2) < 1e-9

    def test_two_port_reduction_is_cosine(self):
        rng = np.random.default_rng(19)
        for particles in range(1, 5):
            cfg = ExperimentConfig(particles, 2)
            settings = random_settings(rng, particles, 2)
            value = correlation_closed(cfg, settings).value
            target = math.cos(sum(row[0].radians - row[1].radians
                                  for row in settings.rows))
            assert abs(value.imag) < 1e-12
            assert abs(value - target) < 1e-12

    def test_closed_matches_brute_and_oracle(self):
        rng = np.random.default_rng(23)
        for particles, ports in SWEEP_CONFIGS:
            cfg = ExperimentConfig(particles, ports)
            for _ in range(10):
                settings = random_settings(rng, particles, ports)
                closed = correlation_closed(cfg, settings).value
                brute = correlation_brute(cfg, settings).value
                assert abs(closed - brute) < 1e-10
                rows = [[a.radians for a in row] for row in settings.rows]
                assert abs(brute - oracles.naive_correlation(rows, ports)) < 1e-10

    def test_modulus_never_exceeds_one(self):
        rng = np.random.default_rng(29)
        for particles, ports in SWEEP_CONFIGS:
            cfg = ExperimentConfig(particles, ports)
            for _ in range(20):
                settings = random_settings(rng, particles, ports)
                assert abs(correlation_closed(cfg, settings).value) <= 1.0 + 1e-12

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(31)
        for particles, ports in SWEEP_CONFIGS:
            cfg = ExperimentConfig(particles, ports)
            phi = rng.uniform(0.0, 2 * math.pi, (particles, ports))
            base = correlation_closed(cfg, PhaseSettings.build(phi)).value
            shifted = phi.copy()
            shifted[rng.integers(particles)] += rng.uniform(0.0, 2 * math.pi)
            moved = correlation_closed(cfg, PhaseSettings.build(shifted)).value
            assert abs(base - moved) < 1e-12

    def test_cyclic_covariance_exact(self):
        # adding 2*pi*m/M to each station-l phase m shifts every closed-form
        # exponent by exactly -1/M of a turn, multiplying E by gamma_M^(-1)
        cfg = ExperimentConfig(4, 3)
        base_settings = paradox_swap_settings()
        base = correlation_closed(cfg, base_settings)
        rows = [list(row) for row in base_settings.rows]
        rows[1] = [angle + PhaseAngle.from_turns(Fraction(m, 3))
                   for m, angle in enumerate(rows[1])]
        shifted = correlation_closed(cfg, PhaseSettings(tuple(tuple(r) for r in rows)))
        assert shifted.exact_class == Residue(base.exact_class.value - 1, 3)
        gamma_inverse = cmath.exp(-2j * math.pi / 3)
        assert abs(shifted.value - base.value * gamma_inverse) < 1e-12

    def test_cyclic_covariance_floating(self):
        rng = np.random.default_rng(37)
        for particles, ports in [(2, 3), (3, 4), (2, 5)]:
            cfg = ExperimentConfig(particles, ports)
            phi = rng.uniform(0.0, 2 * math.pi, (particles, ports))
            base = correlation_closed(cfg, PhaseSettings.build(phi)).value
            shifted = phi.copy()
            shifted[0] += 2 * math.pi * np.arange(ports) / ports
            moved = correlation_closed(cfg, PhaseSettings.build(shifted)).value
            gamma_inverse = cmath.exp(-2j * math.pi / ports)
            assert abs(moved - base * gamma_inverse) < 1e-12


class TestPerfectCorrelation:
    def test_zero_phases(self):
        assert perfect_correlation_class(
            ExperimentConfig(3, 4), zero_settings(3, 4)) == Residue(0, 4)

    def test_paradox_swap_setting(self):
        cfg = ExperimentConfig(4, 3)
        assert perfect_correlation_class(cfg, paradox_swap_settings()) == Residue(2, 3)
        assert perfect_correlation_class(
            cfg, paradox_swap_settings(exact=False)) == Residue(2, 3)

    def test_all_graded_is_not_perfect(self):
        # four stations on the graded row: exponents 5/9, 5/9, 8/9 of a turn
        graded = tuple(PhaseAngle.from_turns(Fraction(j, 9)) for j in range(3))
        settings = PhaseSettings((graded,) * 4)
        assert perfect_correlation_class(ExperimentConfig(4, 3), settings) is None
        assert abs(correlation_closed(ExperimentConfig(4, 3), settings).value) < 1.0

    def test_perturbed_setting_is_not_perfect(self):
        rows = [list(row) for row in paradox_swap_settings().rows]
        rows[2][1] = rows[2][1] + PhaseAngle.from_turns(Fraction(1, 7))
        settings = PhaseSettings(tuple(tuple(r) for r in rows))
        assert perfect_correlation_class(ExperimentConfig(4, 3), settings) is None


class TestPredictLast:
    def test_residue_equation(self):
        assert predict_last(Residue(2, 3), (0, 0, 0)) == Residue(2, 3)
        assert predict_last(Residue(2, 3), (1, 1, 1)) == Residue(2, 3)

    def test_every_supported_outcome_obeys_prediction(self):
        cfg = ExperimentConfig(4, 3)
        settings = paradox_swap_settings()
        klass = perfect_correlation_class(cfg, settings)
        dist = full_distribution(cfg, settings)
        supported = list(dist.support(1e-12))
        assert supported
        predicted = set()
        for outcome, _ in supported:
            expected = predict_last(klass, outcome[:-1])
            assert expected.value == outcome[-1]
            predicted.add(expected.value)
        assert predicted == {0, 1, 2}

    def test_rejects_bad_observations(self):
        with pytest.raises(ValueError):
            predict_last(Residue(1, 3), (0, 3))


class TestSampling:
    def test_deterministic_given_seed(self):
        cfg = ExperimentConfig(2, 3)
        rng = np.random.default_rng(41)
        settings = random_settings(rng, 2, 3)
        first = sample_outcomes(cfg, settings, 5000, seed=99)
        second = sample_outcomes(cfg, settings, 5000, seed=99)
        assert first == second

    def test_zero_phase_support_only(self):
        cfg = ExperimentConfig(3, 3)
        result = sample_outcomes(cfg, zero_settings(3, 3), 100_000, seed=1)
        assert all(sum(outcome) % 3 == 0 for outcome in result.counts)
        assert sum(result.counts.values()) == 100_000

    def test_anticorrelated_pair_estimate(self):
        cfg = ExperimentConfig(2, 2)
        settings = PhaseSettings.build([[0.0, 0.0], [0.0, math.pi]])
        result = sample_outcomes(cfg, settings, 100_000, seed=5)
        bound = 5 / math.sqrt(100_000)
        assert abs(result.correlation.value.real - (-1.0)) <= bound
        assert abs(result.correlation.value.imag) <= bound

    def test_estimate_converges_to_brute(self):
        cfg = ExperimentConfig(2, 3)
        rng = np.random.default_rng(43)
        settings = random_settings(rng, 2, 3)
        exact = correlation_brute(cfg, settings).value
        estimate = sample_outcomes(cfg, settings, 200_000, seed=7).correlation.value
        assert abs(estimate - exact) < 0.02

    def test_zero_shots_rejected(self):
        with pytest.raises(ValueError):
            sample_outcomes(ExperimentConfig(1, 2), zero_settings(1, 2), 0, seed=0)
