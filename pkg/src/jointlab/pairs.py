"""Two-qubit states and the 16-outcome statistics of two local joint measurements.

Two joint measurements performed independently on a qubit pair produce
outcomes (x_a, y_a, x_b, y_b) in {+-1}^4. Every moment containing a local
outcome product x_i*y_i vanishes identically, and the four surviving
correlations factor into visibility products times the state correlations
<X(x)Y on A tensor X/Y on B>. For states with vanishing local means the full
distribution is the closed form

    P(o) = (1/16) (1 + sum_{m,n in {x,y}} m_a n_b v_m(A) v_n(B) c_mn),

implemented both directly (``pair_distribution_formula``) and through the
general trace path valid for arbitrary states (``pair_distribution_trace``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Mapping

import numpy as np

from .joint import OUTCOMES, VisibilityPair, povm_element
from .linalg import is_hermitian, is_positive_semidefinite, pauli, tensor_product

__all__ = [
    "PAIR_OUTCOMES",
    "PairOutcomeLabel",
    "MomentSpec",
    "MOMENT_FACTORS",
    "DensityOperator4",
    "CorrelationVector",
    "PairOutcomeDistribution",
    "LocalMeans",
    "BellFamilyState",
    "pure_density",
    "correlations_of_state",
    "local_means_of_state",
    "pair_distribution_trace",
    "pair_distribution_formula",
    "pair_moment",
    "bell_family_correlations",
]

PairOutcomeLabel = tuple[int, int, int, int]

#: All 16 outcomes (x_a, y_a, x_b, y_b), +1 before -1 in each slot.
PAIR_OUTCOMES: tuple[PairOutcomeLabel, ...] = tuple(product((1, -1), repeat=4))

MomentSpec = tuple[str, str]

#: Outcome functions selectable on each side of a pair moment.
MOMENT_FACTORS: Mapping[str, Callable[[int, int], float]] = {
    "one": lambda x, y: 1.0,
    "x": lambda x, y: float(x),
    "y": lambda x, y: float(y),
    "xy": lambda x, y: float(x * y),
}

_X = pauli("X")
_Y = pauli("Y")
_I = pauli("I")
_XX = tensor_product(_X, _X)
_XY = tensor_product(_X, _Y)
_YX = tensor_product(_Y, _X)
_YY = tensor_product(_Y, _Y)
_XI = tensor_product(_X, _I)
_YI = tensor_product(_Y, _I)
_IX = tensor_product(_I, _X)
_IY = tensor_product(_I, _Y)
for _m in (_XX, _XY, _YX, _YY, _XI, _YI, _IX, _IY):
    _m.setflags(write=False)

_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class DensityOperator4:
    """A validated two-qubit density operator.

    Construction enforces hermiticity and unit trace within 1e-12 and
    positive semidefiniteness within 1e-10 (certified by the Jacobi
    eigensolver); the stored matrix is a read-only copy.
    """

    mat: np.ndarray

    HERMITICITY_TOL = 1e-12
    TRACE_TOL = 1e-12
    PSD_TOL = 1e-10

    def __post_init__(self):
        m = np.array(self.mat, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix entries must be finite")
        if not is_hermitian(m, self.HERMITICITY_TOL):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > self.TRACE_TOL:
            raise ValueError(f"density matrix trace is {np.trace(m)!r}, expected 1")
        if not is_positive_semidefinite(m, self.PSD_TOL):
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def purity(self) -> float:
        return float(np.einsum("ij,ji->", self.mat, self.mat).real)


def pure_density(ket: np.ndarray) -> DensityOperator4:
    """Rank-1 density operator |psi><psi| from a normalized 4-vector."""
    psi = np.asarray(ket, dtype=np.complex128).reshape(4)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"ket must be normalized, got norm {norm}")
    return DensityOperator4(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class CorrelationVector:
    """The four two-qubit correlations (<XX>, <XY>, <YX>, <YY>)."""

    c_xx: float
    c_xy: float
    c_yx: float
    c_yy: float

    def __post_init__(self):
        for name in ("c_xx", "c_xy", "c_yx", "c_yy"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or abs(value) > 1.0 + 1e-9:
                raise ValueError(f"{name} must lie in [-1, 1], got {value!r}")
            object.__setattr__(self, name, value)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c_xx, self.c_xy, self.c_yx, self.c_yy)


@dataclass(frozen=True)
class LocalMeans:
    """Single-qubit expectation values (<X_A>, <Y_A>, <X_B>, <Y_B>)."""

    ax: float
    ay: float
    bx: float
    by: float


@dataclass(frozen=True)
class PairOutcomeDistribution:
    """Probabilities over the 16 outcomes of two local joint measurements.

    Entries sum to one; negative entries require the ``hypothetical`` flag
    (inadmissible visibilities or a non-quantum correlation vector).
    """

    probs: Mapping[PairOutcomeLabel, float]
    hypothetical: bool = False

    def __post_init__(self):
        if len(self.probs) != len(PAIR_OUTCOMES):
            raise ValueError("distribution must have exactly sixteen entries")
        probs = {o: float(self.probs[o]) for o in PAIR_OUTCOMES}
        total = math.fsum(probs.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        if not self.hypothetical and min(probs.values()) < -1e-12:
            raise ValueError("negative probability in a distribution not flagged hypothetical")
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, outcome: PairOutcomeLabel) -> float:
        return self.probs[tuple(outcome)]

    def min_probability(self) -> float:
        return min(self.probs.values())

    def marginal_a(self) -> dict[tuple[int, int], float]:
        """Distribution of (x_a, y_a) after summing out B's outcomes."""
        out = {o: 0.0 for o in OUTCOMES}
        for (xa, ya, xb, yb), p in self.probs.items():
            out[(xa, ya)] += p
        return out

    def marginal_b(self) -> dict[tuple[int, int], float]:
        out = {o: 0.0 for o in OUTCOMES}
        for (xa, ya, xb, yb), p in self.probs.items():
            out[(xb, yb)] += p
        return out


@dataclass(frozen=True)
class BellFamilyState:
    """Maximally entangled family (|00> + e^(i phi) |11>) / sqrt(2)."""

    phi: float

    def __post_init__(self):
        phi = _finite_angle(self.phi) % (2.0 * math.pi)
        object.__setattr__(self, "phi", phi)

    def ket(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0, np.exp(1j * self.phi)]) / math.sqrt(2.0)

    def to_density(self) -> DensityOperator4:
        return pure_density(self.ket())


def _finite_angle(value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"angle must be finite, got {value!r}")
    return value


def _real_expectation(rho: DensityOperator4, op: np.ndarray) -> float:
    val = complex(np.einsum("ij,ji->", rho.mat, op))
    if abs(val.imag) > _IMAG_TOL:
        raise ValueError(f"expectation value has imaginary part {val.imag:.3e}")
    return val.real


def correlations_of_state(rho: DensityOperator4) -> CorrelationVector:
    """Correlations Re tr(rho (P tensor Q)) for P, Q in {X, Y}."""
    return CorrelationVector(
        _real_expectation(rho, _XX),
        _real_expectation(rho, _XY),
        _real_expectation(rho, _YX),
        _real_expectation(rho, _YY),
    )


def local_means_of_state(rho: DensityOperator4) -> LocalMeans:
    """Single-qubit X and Y means of both subsystems."""
    return LocalMeans(
        _real_expectation(rho, _XI),
        _real_expectation(rho, _YI),
        _real_expectation(rho, _IX),
        _real_expectation(rho, _IY),
    )


def pair_distribution_trace(
    rho: DensityOperator4, va: VisibilityPair, vb: VisibilityPair
) -> PairOutcomeDistribution:
    """Outcome distribution tr(rho (E_A tensor E_B)), valid for any state.

    Yields a true probability distribution whenever both visibility pairs
    are admissible; otherwise the result is flagged hypothetical.
    """
    elements_a = {o: povm_element(va, o) for o in OUTCOMES}
    elements_b = {o: povm_element(vb, o) for o in OUTCOMES}
    probs = {}
    for xa, ya in OUTCOMES:
        for xb, yb in OUTCOMES:
            op = np.kron(elements_a[(xa, ya)], elements_b[(xb, yb)])
            val = complex(np.einsum("ij,ji->", rho.mat, op))
            if abs(val.imag) > _IMAG_TOL:
                raise ValueError(f"probability has imaginary part {val.imag:.3e}")
            probs[(xa, ya, xb, yb)] = val.real
    hypothetical = not (va.is_admissible() and vb.is_admissible())
    return PairOutcomeDistribution(probs, hypothetical)


def pair_distribution_formula(
    c: CorrelationVector, va: VisibilityPair, vb: VisibilityPair
) -> PairOutcomeDistribution:
    """Closed-form distribution for states whose local means all vanish.

    The sign in front of each correlation term is the product of the
    corresponding outcome values. Correlation vectors beyond the quantum set
    are accepted; the result is flagged hypothetical when any entry drops
    below -1e-12.
    """
    probs = {}
    for xa, ya, xb, yb in PAIR_OUTCOMES:
        probs[(xa, ya, xb, yb)] = (1.0 / 16.0) * (
            1.0
            + xa * xb * va.v_x * vb.v_x * c.c_xx
            + xa * yb * va.v_x * vb.v_y * c.c_xy
            + ya * xb * va.v_y * vb.v_x * c.c_yx
            + ya * yb * va.v_y * vb.v_y * c.c_yy
        )
    hypothetical = min(probs.values()) < -1e-12
    return PairOutcomeDistribution(probs, hypothetical)


def pair_moment(d: PairOutcomeDistribution, spec: MomentSpec) -> float:
    """Expectation of f_a(x_a, y_a) * f_b(x_b, y_b) under the distribution.

    Factors are named "one", "x", "y" or "xy". On trace-generated
    distributions every spec containing an "xy" factor evaluates to zero.
    """
    fa_name, fb_name = spec
    try:
        fa = MOMENT_FACTORS[fa_name]
        fb = MOMENT_FACTORS[fb_name]
    except KeyError as exc:
        raise ValueError(f"unknown moment factor {exc.args[0]!r}") from None
    return math.fsum(
        d.probs[(xa, ya, xb, yb)] * fa(xa, ya) * fb(xb, yb)
        for xa, ya, xb, yb in PAIR_OUTCOMES
    )


def bell_family_correlations(phi: float) -> CorrelationVector:
    """Correlations (cos phi, sin phi, sin phi, -cos phi) of the Bell family."""
    phi = _finite_angle(phi)
    return CorrelationVector(math.cos(phi), math.sin(phi), math.sin(phi), -math.cos(phi))
