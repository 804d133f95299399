"""Exact single- and two-qubit pure-state machinery.

Everything the protocol needs from quantum mechanics lives here: pure
states as pairs (or quadruples) of complex amplitudes, Bloch-vector
conversions, projective measurement with Born-rule sampling, subsystem
measurement on two-qubit states, and ensemble averages of Bloch vectors.

States are immutable values.  A global-phase convention (the amplitude of
largest-index-zero basis state is real and nonnegative) makes states from
different code paths directly comparable.  Mixed states never appear as
density matrices; they are handled as ensembles of pure states or as the
Bloch vector of a reduced state, which is all the protocol requires.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal

__all__ = [
    "ATOL_STATE",
    "ATOL_DERIVED",
    "Outcome",
    "Subsystem",
    "PureQubit",
    "BlochVector",
    "MeasurementBasis",
    "TwoQubitPure",
    "Ensemble",
    "state_from_bloch",
    "bloch_from_state",
    "bloch_angles",
    "overlap",
    "orthogonal_state",
    "measure",
    "project_subsystem",
    "measure_subsystem",
    "reduced_bloch",
    "ensemble_average_bloch",
    "apply_pauli",
    "apply_pauli_pair",
    "tensor_product",
    "basis_from_bloch_angle",
    "KET_0",
    "KET_1",
    "KET_PLUS",
    "KET_MINUS",
    "DISCRIM_0",
    "DISCRIM_PLUS",
    "BASIS_Z",
    "BASIS_X",
    "BASIS_DISCRIM",
    "OPTIMAL_GUESS_PROB",
]

# Construction-time invariants are enforced at 1e-12; derived quantities
# (round trips, reduced states) are compared at 1e-9.  Double precision
# over at most four amplitudes keeps both comfortably.
ATOL_STATE = 1e-12
ATOL_DERIVED = 1e-9

# Below this magnitude an amplitude is not used as the phase reference.
_PHASE_CUTOFF = 1e-9

PauliAxis = Literal["x", "y", "z"]


class Outcome(Enum):
    """Which projector of a two-outcome measurement fired."""

    PLUS = "plus"
    MINUS = "minus"


class Subsystem(Enum):
    """Tensor-factor labels of a two-qubit state: A is kept, B is sent."""

    A = "A"
    B = "B"

    def other(self) -> "Subsystem":
        return Subsystem.B if self is Subsystem.A else Subsystem.A


def _check_finite(z: complex) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("amplitudes must be finite")


def _canonical_phase(amps: tuple[complex, ...]) -> tuple[complex, ...]:
    """Divide out the global phase so the first sizeable amplitude is real >= 0."""
    ref = next((a for a in amps if abs(a) > _PHASE_CUTOFF), amps[-1])
    mag = abs(ref)
    if mag == 0.0:
        return amps
    phase = ref / mag
    return tuple(a / phase for a in amps)


@dataclass(frozen=True)
class PureQubit:
    """Normalized single-qubit pure state a0|0> + a1|1>."""

    amp0: complex
    amp1: complex

    def __post_init__(self):
        a0, a1 = complex(self.amp0), complex(self.amp1)
        _check_finite(a0)
        _check_finite(a1)
        norm_sq = abs(a0) ** 2 + abs(a1) ** 2
        if abs(norm_sq - 1.0) > ATOL_STATE:
            raise ValueError(f"state not normalized: |amps|^2 = {norm_sq!r}")
        a0, a1 = _canonical_phase((a0, a1))
        object.__setattr__(self, "amp0", a0)
        object.__setattr__(self, "amp1", a1)

    def inner(self, other: "PureQubit") -> complex:
        """<self|other>."""
        return self.amp0.conjugate() * other.amp0 + self.amp1.conjugate() * other.amp1

    def isclose(self, other: "PureQubit", tol: float = ATOL_DERIVED) -> bool:
        """Amplitude-wise comparison; the phase convention makes this meaningful."""
        return (
            abs(self.amp0 - other.amp0) <= tol and abs(self.amp1 - other.amp1) <= tol
        )


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector r with rho = (1 + r.sigma)/2; pure states sit on the unit sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not math.isfinite(c):
                raise ValueError("Bloch components must be finite")
        if self.norm() > 1.0 + ATOL_STATE:
            raise ValueError(f"Bloch vector outside the unit ball: {self}")

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def isclose(self, other: "BlochVector", tol: float = ATOL_DERIVED) -> bool:
        return (
            abs(self.x - other.x) <= tol
            and abs(self.y - other.y) <= tol
            and abs(self.z - other.z) <= tol
        )


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal qubit pair defining a two-outcome projective measurement."""

    plus: PureQubit
    minus: PureQubit
    label: str = ""

    def __post_init__(self):
        if abs(self.plus.inner(self.minus)) > ATOL_STATE:
            raise ValueError(f"basis states are not orthogonal: {self.label!r}")

    def state_of(self, outcome: Outcome) -> PureQubit:
        return self.plus if outcome is Outcome.PLUS else self.minus


@dataclass(frozen=True)
class TwoQubitPure:
    """Normalized two-qubit pure state; amplitude order |00>,|01>,|10>,|11>.

    The first index is subsystem A (the sender keeps it), the second is
    subsystem B (transmitted).
    """

    amps: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.amps)
        if len(amps) != 4:
            raise ValueError("two-qubit state needs exactly 4 amplitudes")
        for a in amps:
            _check_finite(a)
        norm_sq = sum(abs(a) ** 2 for a in amps)
        if abs(norm_sq - 1.0) > ATOL_STATE:
            raise ValueError(f"state not normalized: |amps|^2 = {norm_sq!r}")
        object.__setattr__(self, "amps", _canonical_phase(amps))

    def amp(self, a: int, b: int) -> complex:
        return self.amps[2 * a + b]


@dataclass(frozen=True)
class Ensemble:
    """Probability-weighted mixture of pure states."""

    entries: tuple[tuple[float, PureQubit], ...]

    def __post_init__(self):
        entries = tuple((float(w), s) for w, s in self.entries)
        if not entries:
            raise ValueError("ensemble must not be empty")
        if any(w < 0.0 for w, _ in entries):
            raise ValueError("ensemble weights must be nonnegative")
        total = math.fsum(w for w, _ in entries)
        if abs(total - 1.0) > ATOL_STATE:
            raise ValueError(f"ensemble weights must sum to 1, got {total!r}")
        object.__setattr__(self, "entries", entries)


def state_from_bloch(polar: float, azimuth: float) -> PureQubit:
    """Pure state with Bloch vector (sin p cos a, sin p sin a, cos p)."""
    half = 0.5 * polar
    return PureQubit(math.cos(half), cmath.exp(1j * azimuth) * math.sin(half))


def bloch_from_state(state: PureQubit) -> BlochVector:
    cross = state.amp0.conjugate() * state.amp1
    return BlochVector(
        2.0 * cross.real,
        2.0 * cross.imag,
        abs(state.amp0) ** 2 - abs(state.amp1) ** 2,
    )


def bloch_angles(v: BlochVector) -> tuple[float, float]:
    """(polar, azimuth) of a Bloch vector; well conditioned at the poles."""
    return math.atan2(math.hypot(v.x, v.y), v.z), math.atan2(v.y, v.x)


def overlap(a: PureQubit, b: PureQubit) -> float:
    """Transition probability |<a|b>|^2, clipped into [0, 1]."""
    return min(1.0, max(0.0, abs(a.inner(b)) ** 2))


def orthogonal_state(state: PureQubit) -> PureQubit:
    """The unique (up to phase) state orthogonal to `state`."""
    return PureQubit(-state.amp1.conjugate(), state.amp0.conjugate())


def basis_from_bloch_angle(polar: float, label: str = "") -> MeasurementBasis:
    """Projective basis in the z-x plane; `plus` points along the given polar angle."""
    plus = state_from_bloch(polar, 0.0)
    return MeasurementBasis(plus, orthogonal_state(plus), label or f"zx({polar:.6f})")


def measure(state: PureQubit, basis: MeasurementBasis, rng) -> tuple[Outcome, PureQubit]:
    """Born-rule sample of a projective measurement; post-state is the basis state."""
    if rng.random() < overlap(basis.plus, state):
        return Outcome.PLUS, basis.plus
    return Outcome.MINUS, basis.minus


def _project_once(
    state: TwoQubitPure, which: Subsystem, onto: PureQubit
) -> tuple[float, PureQubit | None]:
    """Probability of projecting `which` onto `onto`, plus the collapsed partner state."""
    c0, c1 = onto.amp0.conjugate(), onto.amp1.conjugate()
    if which is Subsystem.A:
        r0 = c0 * state.amp(0, 0) + c1 * state.amp(1, 0)
        r1 = c0 * state.amp(0, 1) + c1 * state.amp(1, 1)
    else:
        r0 = c0 * state.amp(0, 0) + c1 * state.amp(0, 1)
        r1 = c0 * state.amp(1, 0) + c1 * state.amp(1, 1)
    prob = abs(r0) ** 2 + abs(r1) ** 2
    if prob <= 1e-30:
        # Impossible outcome; normalizing the residue would only amplify
        # rounding noise (and underflows outright for subnormal residues).
        return 0.0, None
    scale = 1.0 / math.sqrt(prob)
    return min(1.0, prob), PureQubit(r0 * scale, r1 * scale)


def project_subsystem(
    state: TwoQubitPure, which: Subsystem, basis: MeasurementBasis
) -> tuple[tuple[float, PureQubit | None], tuple[float, PureQubit | None]]:
    """Exact outcome probabilities and collapsed partner states, no sampling.

    Returns ((p_plus, remaining_plus), (p_minus, remaining_minus)) where
    `remaining` is the normalized state of the unmeasured subsystem, or
    None for an impossible outcome.
    """
    return (
        _project_once(state, which, basis.plus),
        _project_once(state, which, basis.minus),
    )


def measure_subsystem(
    state: TwoQubitPure, which: Subsystem, basis: MeasurementBasis, rng
) -> tuple[Outcome, PureQubit]:
    """Measure one subsystem; returns the outcome and the collapsed partner state."""
    (p_plus, rem_plus), (_, rem_minus) = project_subsystem(state, which, basis)
    if rng.random() < p_plus:
        assert rem_plus is not None
        return Outcome.PLUS, rem_plus
    assert rem_minus is not None
    return Outcome.MINUS, rem_minus


def reduced_bloch(state: TwoQubitPure, which: Subsystem) -> BlochVector:
    """Bloch vector of the reduced (partial-trace) state of one subsystem."""
    if which is Subsystem.B:
        rho00 = sum(abs(state.amp(a, 0)) ** 2 for a in (0, 1))
        rho11 = sum(abs(state.amp(a, 1)) ** 2 for a in (0, 1))
        rho01 = sum(state.amp(a, 0) * state.amp(a, 1).conjugate() for a in (0, 1))
    else:
        rho00 = sum(abs(state.amp(0, b)) ** 2 for b in (0, 1))
        rho11 = sum(abs(state.amp(1, b)) ** 2 for b in (0, 1))
        rho01 = sum(state.amp(0, b) * state.amp(1, b).conjugate() for b in (0, 1))
    return BlochVector(2.0 * rho01.real, -2.0 * rho01.imag, rho00 - rho11)


def ensemble_average_bloch(ensemble: Ensemble) -> BlochVector:
    """Weighted sum of member Bloch vectors; the Bloch vector of the mixture."""
    vecs = [(w, bloch_from_state(s)) for w, s in ensemble.entries]
    return BlochVector(
        math.fsum(w * v.x for w, v in vecs),
        math.fsum(w * v.y for w, v in vecs),
        math.fsum(w * v.z for w, v in vecs),
    )


def apply_pauli(state: PureQubit, axis: PauliAxis) -> PureQubit:
    """Standard Pauli action; involutive up to global phase."""
    a0, a1 = state.amp0, state.amp1
    if axis == "x":
        return PureQubit(a1, a0)
    if axis == "y":
        return PureQubit(-1j * a1, 1j * a0)
    if axis == "z":
        return PureQubit(a0, -a1)
    raise ValueError(f"unknown Pauli axis {axis!r}")


def apply_pauli_pair(
    state: TwoQubitPure, which: Subsystem, axis: PauliAxis
) -> TwoQubitPure:
    """Pauli on one factor of a two-qubit state (identity on the other)."""
    m = [[state.amp(0, 0), state.amp(0, 1)], [state.amp(1, 0), state.amp(1, 1)]]
    if which is Subsystem.B:
        rows = []
        for r in m:
            if axis == "x":
                rows.append([r[1], r[0]])
            elif axis == "y":
                rows.append([-1j * r[1], 1j * r[0]])
            elif axis == "z":
                rows.append([r[0], -r[1]])
            else:
                raise ValueError(f"unknown Pauli axis {axis!r}")
        m = rows
    else:
        if axis == "x":
            m = [m[1], m[0]]
        elif axis == "y":
            m = [[-1j * a for a in m[1]], [1j * a for a in m[0]]]
        elif axis == "z":
            m = [m[0], [-a for a in m[1]]]
        else:
            raise ValueError(f"unknown Pauli axis {axis!r}")
    return TwoQubitPure((m[0][0], m[0][1], m[1][0], m[1][1]))


def tensor_product(a: PureQubit, b: PureQubit) -> TwoQubitPure:
    """Product state a (x) b with a on subsystem A."""
    return TwoQubitPure(
        (a.amp0 * b.amp0, a.amp0 * b.amp1, a.amp1 * b.amp0, a.amp1 * b.amp1)
    )


_SQRT_HALF = 1.0 / math.sqrt(2.0)
_COS8 = math.cos(math.pi / 8.0)
_SIN8 = math.sin(math.pi / 8.0)

KET_0 = PureQubit(1.0, 0.0)
KET_1 = PureQubit(0.0, 1.0)
#: (|0> + |1>)/sqrt(2); the protocol's second legal state.
KET_PLUS = PureQubit(_SQRT_HALF, _SQRT_HALF)
KET_MINUS = PureQubit(_SQRT_HALF, -_SQRT_HALF)

#: Discrimination-basis state whose outcome signals "the qubit was |0>".
#: Bloch vector (z - x)/sqrt(2).
DISCRIM_0 = PureQubit(_COS8, -_SIN8)
#: Counterpart signalling "the qubit was |+>"; Bloch vector (x - z)/sqrt(2).
DISCRIM_PLUS = PureQubit(_SIN8, _COS8)

BASIS_Z = MeasurementBasis(KET_0, KET_1, "z")
BASIS_X = MeasurementBasis(KET_PLUS, KET_MINUS, "x")
#: The projective measurement that best distinguishes |0> from |+>.
BASIS_DISCRIM = MeasurementBasis(DISCRIM_0, DISCRIM_PLUS, "discrim")

#: Best achievable probability of correctly guessing between |0> and |+>:
#: cos^2(pi/8), attained by BASIS_DISCRIM.
OPTIMAL_GUESS_PROB = _COS8 * _COS8
