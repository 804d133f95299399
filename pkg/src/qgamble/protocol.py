"""Round and session execution for the gambling protocol.

One round: Alice prepares a qubit register and sends subsystem B to Bob
(a lone qubit for unentangled play).  An optional Pauli noise channel acts
on the transmitted qubit.  Bob then either plays a normal round (measure,
announce a guess about which legal state was sent) or, with the check
rate, a checking round (store the qubit, announce a uniformly random
guess).  Alice answers with a claim label, which fixes the win/lose
announcement: Bob wins exactly when his guess equals the claim.  In a
checking round Bob afterwards measures the stored qubit in the claimed
state's eigenbasis; an orthogonal outcome convicts Alice and costs her the
penalty, otherwise the round settles like a normal one.

Coins flow through a zero-sum ledger: a Bob win costs Alice `win_payout`
(one coin by default), a Bob loss pays Alice `loss_payout` (p/(1-p) by
default, which makes normal rounds exactly fair against honest play).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .qubits import (
    BASIS_DISCRIM,
    BASIS_X,
    BASIS_Z,
    KET_0,
    KET_PLUS,
    OPTIMAL_GUESS_PROB,
    MeasurementBasis,
    Outcome,
    PureQubit,
    Subsystem,
    TwoQubitPure,
    apply_pauli,
    apply_pauli_pair,
    measure,
    measure_subsystem,
    overlap,
)

__all__ = [
    "DEFAULT_LOSS_PAYOUT",
    "MIN_CHECKS_FOR_ABORT",
    "StateLabel",
    "RoundType",
    "CheckResult",
    "ProtocolParams",
    "RoundRecord",
    "SessionStats",
    "ProtocolViolation",
    "RoundRegister",
    "SubsystemView",
    "BobMove",
    "apply_noise",
    "run_round",
    "run_session",
    "run_session_fast",
    "session_rng",
]

#: Payout to Alice when Bob guesses wrong; chosen so that honest normal
#: rounds have zero expected transfer when Bob guesses right with
#: probability OPTIMAL_GUESS_PROB.
DEFAULT_LOSS_PAYOUT = OPTIMAL_GUESS_PROB / (1.0 - OPTIMAL_GUESS_PROB)

#: The abort rule only engages once this many checking rounds have been seen.
MIN_CHECKS_FOR_ABORT = 100

_PAULI_AXES = ("x", "y", "z")


class StateLabel(Enum):
    """Identity of a legal protocol state: |0> or |+>."""

    ZERO = "zero"
    PLUS = "plus"

    @property
    def state(self) -> PureQubit:
        return KET_0 if self is StateLabel.ZERO else KET_PLUS

    @property
    def verification_basis(self) -> MeasurementBasis:
        """Eigenbasis used to test a claim; the claimed state sits on `plus`."""
        return BASIS_Z if self is StateLabel.ZERO else BASIS_X

    def other(self) -> "StateLabel":
        return StateLabel.PLUS if self is StateLabel.ZERO else StateLabel.ZERO


class RoundType(Enum):
    NORMAL = "normal"
    CHECK = "check"


class CheckResult(Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_APPLICABLE = "not_applicable"


class ProtocolViolation(RuntimeError):
    """A strategy acted on a subsystem it does not control."""


@dataclass(frozen=True)
class ProtocolParams:
    """Public parameters of a session.

    check_rate: probability of a checking round.
    penalty: coins Alice pays when convicted in a checking round.
    noise: per-round probability of a uniformly random Pauli error on the
        transmitted qubit.
    abort_threshold: Bob aborts once the empirical check-failure rate
        exceeds this, after MIN_CHECKS_FOR_ABORT checking rounds.
    """

    check_rate: float
    penalty: float
    loss_payout: float = DEFAULT_LOSS_PAYOUT
    win_payout: float = 1.0
    noise: float = 0.0
    abort_threshold: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.check_rate < 1.0:
            raise ValueError(f"check_rate must lie in (0, 1), got {self.check_rate}")
        if self.penalty <= 0.0:
            raise ValueError(f"penalty must be positive, got {self.penalty}")
        if self.loss_payout <= 0.0 or self.win_payout <= 0.0:
            raise ValueError("payouts must be positive")
        if not 0.0 <= self.noise < 1.0:
            raise ValueError(f"noise must lie in [0, 1), got {self.noise}")
        if not 0.0 <= self.abort_threshold <= 1.0:
            raise ValueError("abort_threshold must lie in [0, 1]")


@dataclass(frozen=True)
class RoundRecord:
    """Transcript of one round; `transfer` is signed, positive = paid to Alice."""

    round_type: RoundType
    bob_guess: StateLabel
    alice_claim: StateLabel
    check_result: CheckResult
    transfer: float
    bob_measurement_outcome: Optional[Outcome] = None

    def settlement_ok(self, params: ProtocolParams) -> bool:
        """Does the transfer follow from the announcements and check result?"""
        if (self.check_result is CheckResult.NOT_APPLICABLE) != (
            self.round_type is RoundType.NORMAL
        ):
            return False
        if self.check_result is CheckResult.FAIL:
            return self.transfer == -params.penalty
        expected = (
            -params.win_payout
            if self.bob_guess == self.alice_claim
            else params.loss_payout
        )
        return self.transfer == expected

    def as_row(self) -> dict:
        return {
            "round_type": self.round_type.value,
            "bob_guess": self.bob_guess.value,
            "alice_claim": self.alice_claim.value,
            "check_result": self.check_result.value,
            "transfer": self.transfer,
        }


@dataclass(frozen=True)
class SessionStats:
    """Aggregated ledger of a session.  Bob's total is minus Alice's."""

    rounds: int
    alice_gain_total: float
    transfer_sq_total: float
    check_rounds: int
    check_fails: int
    bob_wins: int
    aborted: bool

    @property
    def normal_rounds(self) -> int:
        return self.rounds - self.check_rounds

    @property
    def bob_gain_total(self) -> float:
        return -self.alice_gain_total

    @property
    def normal_win_rate(self) -> float:
        if self.normal_rounds == 0:
            raise ValueError("no normal rounds played")
        return self.bob_wins / self.normal_rounds

    def merge(self, other: "SessionStats") -> "SessionStats":
        return SessionStats(
            rounds=self.rounds + other.rounds,
            alice_gain_total=self.alice_gain_total + other.alice_gain_total,
            transfer_sq_total=self.transfer_sq_total + other.transfer_sq_total,
            check_rounds=self.check_rounds + other.check_rounds,
            check_fails=self.check_fails + other.check_fails,
            bob_wins=self.bob_wins + other.bob_wins,
            aborted=self.aborted or other.aborted,
        )


class BobMove(NamedTuple):
    """Bob's reply in a round: his announced guess, and either the stored
    qubit view (checking round) or his measurement outcome (normal round)."""

    guess: StateLabel
    stored: Optional["SubsystemView"]
    outcome: Optional[Outcome]


_OWNER = {Subsystem.A: "alice", Subsystem.B: "bob"}


class RoundRegister:
    """Engine-owned quantum state of one round.

    Strategies never hold raw states during play; they measure through
    SubsystemView handles, which lets the engine enforce that each party
    touches only its own subsystem and that nothing is measured twice.
    """

    def __init__(self, state: PureQubit | TwoQubitPure):
        self._state: PureQubit | TwoQubitPure | None = state
        # For a lone qubit, which subsystem it belongs to.
        self._pure_holder = Subsystem.B
        self._consumed: set[Subsystem] = set()

    def apply_noise(self, eps: float, rng) -> None:
        """Pauli channel on the transmitted subsystem (B), in transit."""
        if eps == 0.0 or rng.random() >= eps:
            return
        axis = _PAULI_AXES[rng.integers(3)]
        if isinstance(self._state, TwoQubitPure):
            self._state = apply_pauli_pair(self._state, Subsystem.B, axis)
        else:
            assert self._state is not None and self._pure_holder is Subsystem.B
            self._state = apply_pauli(self._state, axis)

    def measure(
        self, which: Subsystem, basis: MeasurementBasis, rng, actor: str
    ) -> Outcome:
        if _OWNER[which] != actor:
            raise ProtocolViolation(
                f"{actor} attempted to measure subsystem {which.value}"
            )
        if which in self._consumed:
            raise ProtocolViolation(f"subsystem {which.value} was already measured")
        if isinstance(self._state, TwoQubitPure):
            outcome, remaining = measure_subsystem(self._state, which, basis, rng)
            self._state = remaining
            self._pure_holder = which.other()
        else:
            if self._state is None or which is not self._pure_holder:
                raise ProtocolViolation(
                    f"{actor} holds no qubit on subsystem {which.value}"
                )
            outcome, post = measure(self._state, basis, rng)
            self._state = post
        self._consumed.add(which)
        return outcome


class SubsystemView:
    """A party's measurement handle onto its own half of the round register."""

    def __init__(self, register: RoundRegister, which: Subsystem, actor: str):
        self._register = register
        self._which = which
        self._actor = actor

    def measure(
        self, basis: MeasurementBasis, rng, which: Subsystem | None = None
    ) -> Outcome:
        """Measure the holder's subsystem.  Naming any other subsystem is a
        protocol violation and raises."""
        return self._register.measure(
            self._which if which is None else which, basis, rng, self._actor
        )


def apply_noise(state: PureQubit, eps: float, rng) -> PureQubit:
    """With probability eps apply a uniformly chosen Pauli, else pass through."""
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"noise rate must lie in [0, 1), got {eps}")
    if eps == 0.0 or rng.random() >= eps:
        return state
    return apply_pauli(state, _PAULI_AXES[rng.integers(3)])


def _settle(guess: StateLabel, claim: StateLabel, params: ProtocolParams) -> float:
    return -params.win_payout if guess == claim else params.loss_payout


def run_round(alice, bob, params: ProtocolParams, rng) -> RoundRecord:
    """Execute one protocol round between an Alice and a Bob strategy."""
    prep = alice.prepare(rng)
    register = RoundRegister(prep.state)
    if params.noise > 0.0:
        register.apply_noise(params.noise, rng)

    is_check = rng.random() < params.check_rate
    bob_view = SubsystemView(register, Subsystem.B, "bob")
    move = bob.play(bob_view, is_check, rng)

    alice_view = SubsystemView(register, Subsystem.A, "alice")
    claim = alice.claim(prep.memo, alice_view, move.guess, rng)

    if is_check:
        if move.stored is None:
            raise ProtocolViolation("checking round requires Bob to store the qubit")
        result = bob.verify(move.stored, claim, rng)
        if result is CheckResult.FAIL:
            return RoundRecord(
                RoundType.CHECK, move.guess, claim, result, -params.penalty,
                Outcome.MINUS,
            )
        return RoundRecord(
            RoundType.CHECK, move.guess, claim, result,
            _settle(move.guess, claim, params), Outcome.PLUS,
        )
    return RoundRecord(
        RoundType.NORMAL, move.guess, claim, CheckResult.NOT_APPLICABLE,
        _settle(move.guess, claim, params), move.outcome,
    )


def run_session(
    alice,
    bob,
    params: ProtocolParams,
    n_rounds: int,
    rng,
    on_round: Callable[[RoundRecord], None] | None = None,
) -> SessionStats:
    """Run rounds sequentially, stopping early if the abort rule triggers.

    `on_round`, when given, receives every RoundRecord (transcript hook).
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be at least 1")
    total = 0.0
    total_sq = 0.0
    checks = fails = wins = played = 0
    aborted = False
    for _ in range(n_rounds):
        rec = run_round(alice, bob, params, rng)
        played += 1
        total += rec.transfer
        total_sq += rec.transfer * rec.transfer
        if rec.round_type is RoundType.CHECK:
            checks += 1
            if rec.check_result is CheckResult.FAIL:
                fails += 1
        elif rec.bob_guess == rec.alice_claim:
            wins += 1
        if on_round is not None:
            on_round(rec)
        if checks >= MIN_CHECKS_FOR_ABORT and fails > params.abort_threshold * checks:
            aborted = True
            break
    return SessionStats(played, total, total_sq, checks, fails, wins, aborted)


def _noisy_members(
    members: Sequence[tuple[float, PureQubit, StateLabel]], eps: float
) -> list[tuple[float, PureQubit, StateLabel]]:
    """Fold the Pauli channel into the preparation mixture."""
    if eps == 0.0:
        return list(members)
    out = []
    for w, s, lab in members:
        out.append((w * (1.0 - eps), s, lab))
        for axis in _PAULI_AXES:
            out.append((w * eps / 3.0, apply_pauli(s, axis), lab))
    return out


def run_session_fast(
    members: Sequence[tuple[float, PureQubit, StateLabel]],
    params: ProtocolParams,
    n_rounds: int,
    rng,
) -> SessionStats:
    """Vectorized session against honest Bob for unentangled preparations.

    `members` lists Alice's per-round preparation mixture as
    (weight, state, claim label) triples with weights summing to 1; the
    claim may not depend on Bob's guess (true of every unentangled
    built-in strategy).  Each round draws the member, the round type,
    Bob's measurement or guess, and the verification outcome, identically
    distributed to `run_session` with honest players, then settles and
    applies the abort rule.
    """
    if n_rounds < 1:
        raise ValueError("n_rounds must be at least 1")
    members = _noisy_members(members, params.noise)
    weights = np.array([w for w, _, _ in members])
    # Probability Bob's announced guess matches the member's claim in a
    # normal round: the discrimination outcome pointing at the claim.
    win_p = np.array(
        [
            overlap(BASIS_DISCRIM.plus, s)
            if lab is StateLabel.ZERO
            else overlap(BASIS_DISCRIM.minus, s)
            for _, s, lab in members
        ]
    )
    fail_p = np.array(
        [overlap(lab.verification_basis.minus, s) for _, s, lab in members]
    )

    if len(members) == 1:
        idx = np.zeros(n_rounds, dtype=np.intp)
    else:
        cum = np.cumsum(weights)
        cum[-1] = 1.0
        idx = np.searchsorted(cum, rng.random(n_rounds), side="right")
    is_check = rng.random(n_rounds) < params.check_rate
    norm_win = rng.random(n_rounds) < win_p[idx]
    check_win = rng.random(n_rounds) < 0.5
    check_fail = rng.random(n_rounds) < fail_p[idx]

    settled = np.where(
        is_check & check_fail,
        -params.penalty,
        np.where(
            np.where(is_check, check_win, norm_win),
            -params.win_payout,
            params.loss_payout,
        ),
    )

    kept = n_rounds
    aborted = False
    cum_checks = np.cumsum(is_check)
    cum_fails = np.cumsum(is_check & check_fail)
    trigger = (cum_checks >= MIN_CHECKS_FOR_ABORT) & (
        cum_fails > params.abort_threshold * cum_checks
    )
    if trigger.any():
        kept = int(np.argmax(trigger)) + 1
        aborted = True

    s = slice(0, kept)
    checks = int(cum_checks[kept - 1])
    fails = int(cum_fails[kept - 1])
    wins = int(np.count_nonzero(~is_check[s] & norm_win[s]))
    return SessionStats(
        rounds=kept,
        alice_gain_total=float(np.sum(settled[s])),
        transfer_sq_total=float(np.sum(settled[s] * settled[s])),
        check_rounds=checks,
        check_fails=fails,
        bob_wins=wins,
        aborted=aborted,
    )


def session_rng(master_seed: int, session_index: int = 0) -> np.random.Generator:
    """Deterministic per-session stream: child `session_index` of the master seed.

    Parallel and serial runs agree because each session's stream depends
    only on (master_seed, session_index).
    """
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(session_index,))
    return np.random.default_rng(seq)
