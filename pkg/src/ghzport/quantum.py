"""Quantum predictions for N-particle GHZ states on Bell multiports.

Covers the whole gedankenexperiment: joint detection probabilities computed
by two independent routes (squared amplitude vs cosine expansion, permanently
cross-asserted), the Bell-number correlation function both by outcome
enumeration and in its closed O(N*M) form, perfect-correlation detection,
prediction of the last outcome from the other N-1, and seeded sampling.

Detector indices are 0-based throughout this module; the command-line layer
re-exposes 1-based port labels.
"""

from __future__ import annotations

import cmath
import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from .angles import (
    PROBABILITY_TOLERANCE,
    TAU,
    UNIT_TOLERANCE,
    PhaseAngle,
    Residue,
    _checked,
)
from .errors import ComputationIntegrityError, ResourceLimitError
from .multiport import unit_roots

#: Outcome-enumeration guard: operations walking all M**N outcomes refuse
#: beyond this; the closed-form correlation has no guard.
ENUMERATION_GUARD = 10**7

#: Name of the pseudo-random generator used for sampling, recorded in outputs.
GENERATOR_NAME = "pcg64"


@dataclass(frozen=True)
class ExperimentConfig:
    """Geometry of the experiment: N stations, each a multiport with M ports."""

    particles: int
    ports: int

    def __post_init__(self):
        if not isinstance(self.particles, int) or self.particles < 1:
            raise ValueError(f"particles must be an integer >= 1, got {self.particles!r}")
        if not isinstance(self.ports, int) or self.ports < 2:
            raise ValueError(f"ports must be an integer >= 2, got {self.ports!r}")

    @property
    def outcome_count(self) -> int:
        return self.ports**self.particles


def _ensure_enumerable(cfg: ExperimentConfig, guard: int = ENUMERATION_GUARD) -> None:
    if cfg.outcome_count > guard:
        raise ResourceLimitError(
            f"M**N = {cfg.ports}**{cfg.particles} = {cfg.outcome_count} outcomes "
            f"exceeds the enumeration guard of {guard}"
        )


@dataclass(frozen=True)
class PhaseSettings:
    """The N x M table of phase-shifter settings, one row per station."""

    rows: Tuple[Tuple[PhaseAngle, ...], ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("phase settings need at least one station row")
        width = len(self.rows[0])
        for index, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(
                    f"station {index + 1} has {len(row)} phases, expected {width}"
                )
            for angle in row:
                if not isinstance(angle, PhaseAngle):
                    raise ValueError(f"phase entries must be PhaseAngle, got {angle!r}")

    @classmethod
    def build(cls, rows) -> "PhaseSettings":
        """Coerce nested values: PhaseAngle kept, "p/q" parsed, numbers -> radians."""
        converted = tuple(
            tuple(a if isinstance(a, PhaseAngle) else PhaseAngle.parse(a) for a in row)
            for row in rows
        )
        return cls(converted)

    @property
    def particles(self) -> int:
        return len(self.rows)

    @property
    def ports(self) -> int:
        return len(self.rows[0])

    @property
    def all_exact(self) -> bool:
        return all(angle.is_exact for row in self.rows for angle in row)

    def float_matrix(self) -> np.ndarray:
        return np.array([[angle.radians for angle in row] for row in self.rows])

    def turns_matrix(self) -> Optional[list]:
        """Exact fractions-of-a-turn table, or None unless every entry is exact."""
        if not self.all_exact:
            return None
        return [[angle.turns for angle in row] for row in self.rows]


@dataclass(frozen=True)
class CorrelationValue:
    """The Bell-number correlation: a complex average of unit-modulus values.

    ``exact_class`` is attached only when every input phase carried an exact
    rational part and all M closed-form exponents agree, so that the value is
    exactly the root of unity gamma_M^k.
    """

    value: complex
    exact_class: Optional[Residue] = None

    def __post_init__(self):
        if abs(self.value) > 1.0 + 1e-12:
            raise ValueError(f"correlation modulus {abs(self.value)} exceeds 1")


def _check_settings(cfg: ExperimentConfig, settings: PhaseSettings) -> None:
    if settings.particles != cfg.particles or settings.ports != cfg.ports:
        raise ValueError(
            f"settings shape {settings.particles}x{settings.ports} does not match "
            f"configuration {cfg.particles}x{cfg.ports}"
        )


def _check_outcome(cfg: ExperimentConfig, outcome: Sequence[int]) -> Tuple[int, ...]:
    detectors = tuple(outcome)
    if len(detectors) != cfg.particles:
        raise ValueError(
            f"outcome has {len(detectors)} entries, expected {cfg.particles}"
        )
    for k in detectors:
        if not isinstance(k, (int, np.integer)) or not 0 <= k < cfg.ports:
            raise ValueError(
                f"detector indices must be integers in 0..{cfg.ports - 1}, got {k!r}"
            )
    return detectors


def _class_amplitudes(phi: np.ndarray, ports: int) -> np.ndarray:
    """Joint amplitude for each digit-sum class of the outcome tuple.

    The product of per-station root-of-unity factors depends on the outcome
    only through s = sum(k_l) mod M, so one amplitude per class covers all
    M**N outcomes:  amp(s) = M^(-(N+1)/2) * sum_m exp(i sum_l phi[l, m]) *
    gamma_M^(m*s), with the exponent m*s reduced exactly as an integer.
    """
    particles = phi.shape[0]
    weights = np.exp(1j * phi.sum(axis=0))
    powers = np.outer(np.arange(ports), np.arange(ports)) % ports
    amps = (weights[:, None] * unit_roots(ports)[powers]).sum(axis=0)
    return amps * ports ** (-(particles + 1) / 2)


def _class_probabilities_amplitude(phi: np.ndarray, ports: int) -> np.ndarray:
    """Route A: squared modulus of the joint amplitude, per digit-sum class."""
    amps = _class_amplitudes(phi, ports)
    return amps.real**2 + amps.imag**2


def _class_probabilities_cosine(phi: np.ndarray, ports: int) -> np.ndarray:
    """Route B: the cosine expansion of the joint probability, per class.

    P = M^-(N+1) * [M + 2 sum_{m>m'} cos(sum_l dphi_l + (2*pi/M)(m-m') s)]
    where dphi_l = phi[l, m] - phi[l, m'] and s = sum(k_l) mod M.
    """
    particles = phi.shape[0]
    classes = np.arange(ports)
    totals = np.full(ports, float(ports))
    for m in range(ports):
        for mp in range(m):
            offset = float((phi[:, m] - phi[:, mp]).sum())
            totals += 2.0 * np.cos(offset + (TAU / ports) * (m - mp) * classes)
    return totals * (1.0 / ports) ** (particles + 1)


def _checked_class_probabilities(
    phi: np.ndarray, ports: int, tol: float
) -> np.ndarray:
    """Per-class probabilities with the two routes cross-asserted."""
    route_a = _class_probabilities_amplitude(phi, ports)
    route_b = _class_probabilities_cosine(phi, ports)
    gap = float(np.max(np.abs(route_a - route_b)))
    if gap >= tol:
        raise ComputationIntegrityError(
            f"amplitude and cosine probability routes disagree by {gap:.3e} "
            f"(tolerance {tol:.1e}); this is an implementation bug"
        )
    return route_a


def _digit_sums(particles: int, ports: int) -> np.ndarray:
    """sum of detector indices for every outcome, lexicographic by station."""
    sums = np.zeros(1, dtype=np.int32)
    step = np.arange(ports, dtype=np.int32)
    for _ in range(particles):
        sums = (sums[:, None] + step[None, :]).reshape(-1)
    return sums


def joint_amplitude(cfg: ExperimentConfig, settings: PhaseSettings, outcome) -> complex:
    """Amplitude whose squared modulus is the joint detection probability."""
    _check_settings(cfg, settings)
    detectors = _check_outcome(cfg, outcome)
    amps = _class_amplitudes(settings.float_matrix(), cfg.ports)
    return complex(amps[sum(detectors) % cfg.ports])


def joint_probability(
    cfg: ExperimentConfig,
    settings: PhaseSettings,
    outcome,
    tol: float = PROBABILITY_TOLERANCE,
) -> float:
    """Probability of one joint detection event, cross-checked on both routes."""
    _check_settings(cfg, settings)
    detectors = _check_outcome(cfg, outcome)
    probs = _checked_class_probabilities(settings.float_matrix(), cfg.ports, tol)
    return float(probs[sum(detectors) % cfg.ports])


class OutcomeDistribution(Mapping):
    """The complete probability table over all M**N outcome tuples.

    Behaves as a read-only mapping from 0-based detector tuples (lexicographic
    by station) to probabilities. Probabilities depend on an outcome only
    through the residue of its detector sum, so the table is held compactly;
    iteration still walks every tuple.
    """

    def __init__(self, cfg: ExperimentConfig, class_probabilities: np.ndarray):
        self._cfg = cfg
        self._probs = class_probabilities
        self._sums = _digit_sums(cfg.particles, cfg.ports)
        total = float(self._probs[self._sums % cfg.ports].sum())
        if abs(total - 1.0) >= 1e-10:
            raise ComputationIntegrityError(
                f"distribution total {total!r} deviates from 1 beyond 1e-10"
            )
        self._total = total

    @property
    def config(self) -> ExperimentConfig:
        return self._cfg

    @property
    def total(self) -> float:
        """Sum of all entries; within 1e-10 of 1 by construction."""
        return self._total

    def __len__(self) -> int:
        return self._cfg.outcome_count

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return itertools.product(range(self._cfg.ports), repeat=self._cfg.particles)

    def __getitem__(self, outcome) -> float:
        detectors = _check_outcome(self._cfg, outcome)
        return float(self._probs[sum(detectors) % self._cfg.ports])

    def class_probabilities(self) -> np.ndarray:
        """Probability of one outcome in each digit-sum class (length M)."""
        return self._probs.copy()

    def digit_sum_classes(self) -> np.ndarray:
        """Residue class of every outcome, in lexicographic order."""
        return self._sums % self._cfg.ports

    def lex_probabilities(self) -> np.ndarray:
        """Probability of every outcome, in lexicographic order."""
        return self._probs[self._sums % self._cfg.ports]

    def marginal(self, station: int) -> np.ndarray:
        """Single-station marginal distribution (length M), by enumeration."""
        if not 0 <= station < self._cfg.particles:
            raise ValueError(f"station must be in 0..{self._cfg.particles - 1}")
        ports, particles = self._cfg.ports, self._cfg.particles
        place = ports ** (particles - 1 - station)
        digits = (np.arange(len(self._sums)) // place) % ports
        return np.bincount(digits, weights=self.lex_probabilities(), minlength=ports)

    def support(self, eps: float = 1e-12):
        """Yield (outcome, probability) for entries above eps, in lex order."""
        for outcome in self:
            p = self._probs[sum(outcome) % self._cfg.ports]
            if p > eps:
                yield outcome, float(p)


def full_distribution(
    cfg: ExperimentConfig,
    settings: PhaseSettings,
    tol: float = PROBABILITY_TOLERANCE,
) -> OutcomeDistribution:
    """Tabulate the joint probability over every outcome (M**N <= guard)."""
    _check_settings(cfg, settings)
    _ensure_enumerable(cfg)
    probs = _checked_class_probabilities(settings.float_matrix(), cfg.ports, tol)
    return OutcomeDistribution(cfg, probs)


def correlation_brute(
    cfg: ExperimentConfig,
    settings: PhaseSettings,
    tol: float = PROBABILITY_TOLERANCE,
) -> CorrelationValue:
    """Correlation by definition: sum over all outcomes of the Bell-number
    product times the outcome probability. Costs M**N; guard applies."""
    distribution = full_distribution(cfg, settings, tol)
    classes = distribution.digit_sum_classes()
    roots = unit_roots(cfg.ports)
    value = (roots[classes] * distribution.lex_probabilities()).sum()
    return CorrelationValue(complex(value))


def _exact_exponent_sums(turns, ports: int) -> list:
    """Closed-form exponents sum_l (phi_l^m - phi_l^(m+1)) as exact fractions.

    Exponent m of the closed form, one fraction of a turn per m, with the
    wraparound column m = M-1 using phi^M - phi^1. Their total telescopes to
    zero modulo one turn.
    """
    particles = len(turns)
    sums = []
    for m in range(ports):
        total = Fraction(0)
        for l in range(particles):
            total += turns[l][m] - turns[l][(m + 1) % ports]
        sums.append(_checked(total % 1))
    return sums


def correlation_closed(
    cfg: ExperimentConfig, settings: PhaseSettings
) -> CorrelationValue:
    """Correlation in closed form: (1/M) sum_m exp(i sum_l phi_l^(m,m+1)).

    Costs O(N*M) with no enumeration guard. When every input phase carries an
    exact rational part the exponents are computed exactly and, if all M of
    them agree, the correlation is exactly a Bell number and its class is
    attached.
    """
    _check_settings(cfg, settings)
    turns = settings.turns_matrix()
    if turns is not None:
        exponents = _exact_exponent_sums(turns, cfg.ports)
        value = sum(cmath.exp(1j * TAU * float(e)) for e in exponents) / cfg.ports
        exact_class = None
        if all(e == exponents[0] for e in exponents):
            scaled = exponents[0] * cfg.ports
            if scaled.denominator == 1:  # guaranteed: the M exponents telescope
                exact_class = Residue(scaled.numerator, cfg.ports)
        return CorrelationValue(complex(value), exact_class)
    phi = settings.float_matrix()
    deltas = phi - np.roll(phi, -1, axis=1)
    value = np.exp(1j * deltas.sum(axis=0)).mean()
    return CorrelationValue(complex(value))


def perfect_correlation_class(
    cfg: ExperimentConfig,
    settings: PhaseSettings,
    tol: float = UNIT_TOLERANCE,
) -> Optional[Residue]:
    """The class k with E = gamma_M^k when the correlation is perfect, else None.

    Perfect correlation means all M closed-form exponents land on the same
    Bell number; the exact track decides by arithmetic, the floating track
    within ``tol`` per unit-modulus component.
    """
    _check_settings(cfg, settings)
    turns = settings.turns_matrix()
    if turns is not None:
        exponents = _exact_exponent_sums(turns, cfg.ports)
        if any(e != exponents[0] for e in exponents):
            return None
        scaled = exponents[0] * cfg.ports
        if scaled.denominator != 1:
            return None
        return Residue(scaled.numerator, cfg.ports)
    phi = settings.float_matrix()
    deltas = phi - np.roll(phi, -1, axis=1)
    phases = np.exp(1j * deltas.sum(axis=0))
    candidate = round(float(np.angle(phases[0])) / (TAU / cfg.ports)) % cfg.ports
    root = unit_roots(cfg.ports)[candidate]
    if np.max(np.abs(phases - root)) <= tol:
        return Residue(candidate, cfg.ports)
    return None


def predict_last(k_class: Residue, observed: Sequence[int]) -> Residue:
    """Detector forced at the remaining station by a perfect-correlation class.

    The product of all N Bell numbers must be gamma_M^k, so the missing
    residue is k minus the sum of the observed detector indices, mod M.
    """
    modulus = k_class.modulus
    total = 0
    for k in observed:
        if not isinstance(k, (int, np.integer)) or not 0 <= k < modulus:
            raise ValueError(
                f"observed detector indices must be integers in 0..{modulus - 1}, got {k!r}"
            )
        total += int(k)
    return Residue(k_class.value - total, modulus)


@dataclass(frozen=True)
class SampleResult:
    """Seeded empirical draw from the exact outcome table.

    ``counts`` maps each observed outcome tuple (lex order) to its frequency;
    ``correlation`` is the empirical Bell-number average. Identical seeds give
    identical results; the generator is named so runs stay portable.
    """

    config: ExperimentConfig
    shots: int
    seed: int
    counts: dict
    correlation: CorrelationValue
    generator: str = GENERATOR_NAME


def sample_outcomes(
    cfg: ExperimentConfig,
    settings: PhaseSettings,
    shots: int,
    seed: int,
) -> SampleResult:
    """Draw seeded outcomes by inverse CDF over the lexicographic table."""
    if not isinstance(shots, int) or shots <= 0:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")
    distribution = full_distribution(cfg, settings)
    cdf = np.cumsum(distribution.lex_probabilities())
    cdf[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    draws = np.searchsorted(cdf, rng.random(shots), side="right")
    frequencies = np.bincount(draws, minlength=cfg.outcome_count)
    classes = distribution.digit_sum_classes()
    roots = unit_roots(cfg.ports)
    estimate = complex((roots[classes] * frequencies).sum() / shots)
    shape = (cfg.ports,) * cfg.particles
    counts = {}
    for index in np.nonzero(frequencies)[0]:
        outcome = tuple(int(d) for d in np.unravel_index(int(index), shape))
        counts[outcome] = int(frequencies[index])
    return SampleResult(cfg, shots, int(seed), counts, CorrelationValue(estimate))
