"""Uncertainty-limited joint measurement of the equatorial qubit components X and Y.

A joint measurement of both components at once cannot be sharp: each outcome
average is reduced by a visibility factor, the outcome product averages to
zero, and the visibilities obey ``v_x**2 + v_y**2 <= 1``. The measurement is
realized here by the four-element POVM

    E(x, y) = (1/4) (I + x v_x X + y v_y Y),    x, y = +-1,

the unique completion built from I, X and Y alone that reproduces those
statistics. Inadmissible visibilities and Bloch vectors outside the unit
disk stay constructible on purpose: they are exactly the inputs whose
distributions go negative, which is what certifies both bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .linalg import DEFAULT_TOL

__all__ = [
    "OUTCOMES",
    "OutcomeLabel",
    "VisibilityPair",
    "BlochEquatorial",
    "SingleOutcomeDistribution",
    "Moments",
    "povm_element",
    "equatorial_density",
    "outcome_distribution",
    "distribution_moments",
    "state_positivity_lhs",
    "check_visibility_admissible",
    "bloch_bound_lhs",
]

OutcomeLabel = tuple[int, int]

#: Fixed outcome ordering shared by distributions and samplers.
OUTCOMES: tuple[OutcomeLabel, ...] = ((1, 1), (1, -1), (-1, 1), (-1, -1))

#: Slack below which a probability entry still counts as non-negative.
NEGATIVE_PROB_TOL = 1e-12

_BOX_SLACK = 1e-9


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _validate_outcome(outcome: OutcomeLabel) -> OutcomeLabel:
    x, y = outcome
    if x not in (-1, 1) or y not in (-1, 1):
        raise ValueError(f"outcome labels must be +-1, got {outcome!r}")
    return int(x), int(y)


@dataclass(frozen=True)
class VisibilityPair:
    """Visibilities (v_x, v_y) of one local joint measurement, each in [0, 1].

    A pair is *admissible* when v_x**2 + v_y**2 <= 1; inadmissible pairs can
    be built (they drive the negative-probability demonstrations) but every
    distribution derived from one carries a ``hypothetical`` flag.
    """

    v_x: float
    v_y: float

    def __post_init__(self):
        for name in ("v_x", "v_y"):
            value = _require_finite(name, getattr(self, name))
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)

    def is_admissible(self, tol: float = DEFAULT_TOL) -> bool:
        return self.v_x**2 + self.v_y**2 <= 1.0 + tol


@dataclass(frozen=True)
class BlochEquatorial:
    """Equatorial Bloch components (<X>, <Y>) of a qubit input state.

    Physical states satisfy ex**2 + ey**2 <= 1. Points outside the disk are
    representable (with each component still in [-1, 1]) so that the
    negative probabilities they imply can be exhibited.
    """

    ex: float
    ey: float

    def __post_init__(self):
        for name in ("ex", "ey"):
            value = _require_finite(name, getattr(self, name))
            if abs(value) > 1.0 + _BOX_SLACK:
                raise ValueError(f"{name} must lie in [-1, 1], got {value}")
            object.__setattr__(self, name, value)

    def is_physical(self, tol: float = DEFAULT_TOL) -> bool:
        return self.ex**2 + self.ey**2 <= 1.0 + tol


@dataclass(frozen=True)
class SingleOutcomeDistribution:
    """Probabilities over the four joint outcomes (x, y) in {+-1}^2.

    Entries sum to one. Negative entries are only allowed when the
    distribution was produced from inadmissible visibilities or an
    unphysical Bloch vector, recorded in ``hypothetical``.
    """

    probs: Mapping[OutcomeLabel, float]
    hypothetical: bool = False

    def __post_init__(self):
        probs = {o: float(self.probs[o]) for o in OUTCOMES}
        if len(self.probs) != len(OUTCOMES):
            raise ValueError("distribution must have exactly four entries")
        total = math.fsum(probs.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        if not self.hypothetical and min(probs.values()) < -NEGATIVE_PROB_TOL:
            raise ValueError("negative probability in a distribution not flagged hypothetical")
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, outcome: OutcomeLabel) -> float:
        return self.probs[_validate_outcome(outcome)]

    def min_probability(self) -> float:
        return min(self.probs.values())


@dataclass(frozen=True)
class Moments:
    """First moments of a four-outcome distribution."""

    mean_x: float
    mean_y: float
    mean_xy: float


def povm_element(v: VisibilityPair, outcome: OutcomeLabel) -> np.ndarray:
    """POVM element E(x, y) = (1/4)(I + x v_x X + y v_y Y) as a 2x2 array.

    The four elements sum to the identity exactly, and tr(rho E(x, y))
    reproduces ``outcome_distribution`` for every state rho.
    """
    x, y = _validate_outcome(outcome)
    off = 0.25 * (x * v.v_x - 1j * y * v.v_y)
    return np.array([[0.25, off], [off.conjugate(), 0.25]])


def equatorial_density(s: BlochEquatorial) -> np.ndarray:
    """Density matrix (1/2)(I + ex X + ey Y) for the given Bloch components."""
    off = 0.5 * (s.ex - 1j * s.ey)
    return np.array([[0.5, off], [off.conjugate(), 0.5]])


def outcome_distribution(v: VisibilityPair, s: BlochEquatorial) -> SingleOutcomeDistribution:
    """Joint outcome distribution P(x, y) = (1/4)(1 + x v_x ex + y v_y ey).

    Always defined; the result is flagged hypothetical when the visibilities
    are inadmissible or the state lies outside the Bloch disk.
    """
    a = v.v_x * s.ex
    b = v.v_y * s.ey
    probs = {(x, y): 0.25 * (1.0 + x * a + y * b) for x, y in OUTCOMES}
    hypothetical = not (v.is_admissible() and s.is_physical())
    return SingleOutcomeDistribution(probs, hypothetical)


def distribution_moments(d: SingleOutcomeDistribution) -> Moments:
    """Outcome averages <x>, <y> and <xy> of a four-outcome distribution.

    For any distribution produced by ``outcome_distribution`` these are
    v_x*ex, v_y*ey and exactly zero: the POVM carries no x-y cross term.
    """
    mean_x = math.fsum(x * d.probs[(x, y)] for x, y in OUTCOMES)
    mean_y = math.fsum(y * d.probs[(x, y)] for x, y in OUTCOMES)
    mean_xy = math.fsum(x * y * d.probs[(x, y)] for x, y in OUTCOMES)
    return Moments(mean_x, mean_y, mean_xy)


def state_positivity_lhs(v: VisibilityPair, s: BlochEquatorial) -> float:
    """|v_x ex| + |v_y ey|; at most 1 exactly when no outcome probability is negative."""
    return abs(v.v_x * s.ex) + abs(v.v_y * s.ey)


def check_visibility_admissible(v: VisibilityPair, tol: float = DEFAULT_TOL) -> bool:
    """Visibility uncertainty relation v_x**2 + v_y**2 <= 1 (+ tol).

    Agrees with positive semidefiniteness of all four POVM elements: the
    element spectrum is (1 +- sqrt(v_x**2 + v_y**2))/4 for every outcome.
    """
    return v.is_admissible(tol)


def bloch_bound_lhs(s: BlochEquatorial) -> float:
    """ex**2 + ey**2; physical states satisfy <= 1."""
    return s.ex**2 + s.ey**2
