"""Shared hypothesis strategies and small independent oracles for the tests."""

import math

import numpy as np
from hypothesis import strategies as st

from qgamble.qubits import MeasurementBasis, PureQubit, TwoQubitPure, orthogonal_state

_component = st.floats(
    min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False
)


@st.composite
def pure_qubits(draw):
    parts = [draw(_component) for _ in range(4)]
    a0 = complex(parts[0], parts[1])
    a1 = complex(parts[2], parts[3])
    norm = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
    if norm < 0.2:
        a0, norm = a0 + 1.0, abs(a0 + 1.0 + 0j)
        norm = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
    return PureQubit(a0 / norm, a1 / norm)


@st.composite
def two_qubit_states(draw):
    parts = [draw(_component) for _ in range(8)]
    amps = [complex(parts[2 * i], parts[2 * i + 1]) for i in range(4)]
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps))
    if norm < 0.2:
        amps[0] += 1.0
        norm = math.sqrt(sum(abs(a) ** 2 for a in amps))
    return TwoQubitPure(tuple(a / norm for a in amps))


@st.composite
def bases(draw):
    plus = draw(pure_qubits())
    return MeasurementBasis(plus, orthogonal_state(plus), "random")


def amps_vector(state: TwoQubitPure) -> np.ndarray:
    """Raw amplitude 4-vector in |00>,|01>,|10>,|11> order."""
    return np.array(state.amps, dtype=complex)


def partial_trace_bloch(state: TwoQubitPure, keep_second: bool) -> tuple[float, float, float]:
    """Independent reduced-state Bloch vector via an explicit density matrix."""
    psi = amps_vector(state).reshape(2, 2)
    if keep_second:
        rho = np.einsum("ab,ac->bc", psi, psi.conj())
    else:
        rho = np.einsum("ab,cb->ac", psi, psi.conj())
    x = 2.0 * rho[0, 1].real
    y = -2.0 * rho[0, 1].imag
    z = (rho[0, 0] - rho[1, 1]).real
    return x, y, z


def joint_probability(
    state: TwoQubitPure, a_state: PureQubit, b_state: PureQubit
) -> float:
    """|<a (x) b | psi>|^2 computed directly from the amplitudes."""
    amp = 0.0 + 0.0j
    for i, ai in enumerate((a_state.amp0, a_state.amp1)):
        for j, bj in enumerate((b_state.amp0, b_state.amp1)):
            amp += ai.conjugate() * bj.conjugate() * state.amp(i, j)
    return abs(amp) ** 2
