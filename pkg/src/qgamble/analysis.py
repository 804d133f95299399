"""Closed-form gain analysis, exact expectation oracle, and cross-checks.

Three independent routes to Alice's expected per-round gain are kept
deliberately separate so they can check each other:

* closed forms in this module (trig expressions in the z-x plane),
* the branch-enumeration oracle (`oracle_expected_gain`), which walks every
  probabilistic branch of a round with exact Born probabilities, and
* Monte Carlo over simulated sessions (`monte_carlo_gain`).

Also here: the quadratic small-angle bound on cheating gain, its
closed-form optimum, the check rate that minimizes the achievable maximum
for a given penalty, the Bayesian posterior that Bob skipped his
measurement, and grid sweeps over cheating preparations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .protocol import (
    CheckResult,
    ProtocolParams,
    RoundType,
    SessionStats,
    StateLabel,
)
from .qubits import (
    BASIS_DISCRIM,
    Outcome,
    PureQubit,
    Subsystem,
    TwoQubitPure,
    apply_pauli,
    apply_pauli_pair,
    overlap,
    project_subsystem,
    state_from_bloch,
)
from .strategies import AliceStrategy, EntangledModel, ProductModel

__all__ = [
    "ProtocolConstants",
    "protocol_constants",
    "GainBreakdown",
    "Optimum",
    "CheckRatePolicy",
    "MonteCarloEstimate",
    "RoundBranch",
    "SweepRow",
    "SweepResult",
    "cheat_gain_exact",
    "claim_gain_upper_bound",
    "cheat_gain_quadratic_bound",
    "quadratic_bound_optimum",
    "optimal_check_rate",
    "unmeasured_posterior",
    "golden_section_max",
    "oracle_round_branches",
    "oracle_expected_gain",
    "oracle_transfer_variance",
    "oracle_transcript_distribution",
    "monte_carlo_gain",
    "sweep_cheat_gain",
    "entangled_policy_gains",
]

_COS8 = math.cos(math.pi / 8.0)
_SIN8 = math.sin(math.pi / 8.0)


class ProtocolConstants(NamedTuple):
    """The three numbers the whole analysis runs on."""

    guess_prob: float  # cos^2(pi/8), Bob's optimal correct-guess probability
    loss_payout: float  # p/(1-p), Alice's winnings when Bob guesses wrong
    slope: float  # cos(pi/8) sin(pi/8), small-angle gain slope numerator


def protocol_constants() -> ProtocolConstants:
    p = _COS8 * _COS8
    return ProtocolConstants(p, p / (1.0 - p), _COS8 * _SIN8)


@dataclass(frozen=True)
class GainBreakdown:
    """Expected per-round gain split by round branch.

    normal_term: contribution of normal rounds (weight 1-r included).
    detect_term: checking rounds Alice fails (always <= 0).
    pass_term: checking rounds Alice survives.
    """

    normal_term: float
    detect_term: float
    pass_term: float
    total: float

    def __post_init__(self):
        if self.detect_term > 1e-12:
            raise ValueError("detect_term must be nonpositive")
        parts = self.normal_term + self.detect_term + self.pass_term
        if abs(parts - self.total) > 1e-12:
            raise ValueError("breakdown terms do not sum to the total")

    @classmethod
    def from_terms(
        cls, normal_term: float, detect_term: float, pass_term: float
    ) -> "GainBreakdown":
        return cls(
            normal_term,
            detect_term,
            pass_term,
            math.fsum((normal_term, detect_term, pass_term)),
        )


class Optimum(NamedTuple):
    theta_star: float
    gain_max: float


class CheckRatePolicy(NamedTuple):
    check_rate: float
    gain_cap: float


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    n: int


def _plane_overlaps(theta: float, claim: StateLabel) -> tuple[float, float, float, float]:
    """(p_match, p_mismatch, p_caught, p_survive) for |j> at angle theta, z-x plane.

    p_match is the probability Bob's optimal-measurement guess equals the
    claim; p_caught the probability the verification measurement convicts.
    """
    if claim is StateLabel.ZERO:
        c = math.cos(math.pi / 8.0 + 0.5 * theta)
        s = math.sin(math.pi / 8.0 + 0.5 * theta)
        caught = math.sin(0.5 * theta) ** 2
        return c * c, s * s, caught, 1.0 - caught
    # Mirror image through the axis halfway between the two legal states.
    s = math.sin(math.pi / 8.0 + 0.5 * theta)
    c = math.cos(math.pi / 8.0 + 0.5 * theta)
    caught = 0.5 * (1.0 - math.sin(theta))
    return s * s, c * c, caught, 1.0 - caught


def cheat_gain_exact(
    theta: float, check_rate: float, penalty: float, claim: StateLabel
) -> GainBreakdown:
    """Exact expected per-round gain of a fixed z-x-plane cheat, closed form.

    Normal rounds pay -1 on a matching guess and p/(1-p) otherwise;
    checking rounds convict with the orthogonal-outcome probability and
    otherwise settle against a uniform guess.  Uses the standard payouts.
    """
    p, loss, _ = protocol_constants()
    match, mismatch, caught, survive = _plane_overlaps(theta, claim)
    normal = (1.0 - check_rate) * (-match + mismatch * loss)
    detect = -check_rate * caught * penalty
    passed = check_rate * survive * 0.5 * (loss - 1.0)
    return GainBreakdown.from_terms(normal, detect, passed)


def claim_gain_upper_bound(
    theta: float, check_rate: float, penalty: float, claim: StateLabel
) -> float:
    """Worst-case ceiling on the gain of a fixed claim: the best possible
    payout minus half the check rate times the conviction loss.

    The half accounts for Alice's Bayesian uncertainty about whether Bob
    measured; the exact gain always sits below this.
    """
    _, loss, _ = protocol_constants()
    _, _, caught, _ = _plane_overlaps(theta, claim)
    return loss - 0.5 * check_rate * caught * penalty


def cheat_gain_quadratic_bound(theta: float, check_rate: float, penalty: float) -> float:
    """Small-angle upper bound on the cheating gain near |0>:
    linear reward in theta minus a quadratic conviction cost plus a 3r cushion."""
    p, _, slope = protocol_constants()
    rr = check_rate * penalty
    return slope / (1.0 - p) * theta - 0.25 * rr * theta * theta + 3.0 * check_rate


def quadratic_bound_optimum(check_rate: float, penalty: float) -> Optimum:
    """Closed-form maximum of the quadratic bound over theta."""
    p, _, slope = protocol_constants()
    c = slope / (1.0 - p)
    rr = check_rate * penalty
    theta_star = 2.0 * c / rr
    return Optimum(theta_star, c * c / rr + 3.0 * check_rate)


def optimal_check_rate(penalty: float) -> CheckRatePolicy:
    """Check rate minimizing the quadratic-bound maximum for a given penalty.

    The resulting cap on Alice's gain scales as 1/sqrt(penalty).
    """
    if penalty <= 0.0:
        raise ValueError(f"penalty must be positive, got {penalty}")
    p, _, slope = protocol_constants()
    c = slope / (1.0 - p)
    rate = c / math.sqrt(3.0 * penalty)
    cap = 2.0 * math.sqrt(3.0) * c / math.sqrt(penalty)
    return CheckRatePolicy(rate, cap)


def unmeasured_posterior(theta: float, check_rate: float, guess: StateLabel) -> float:
    """Bayes posterior that Bob performed no measurement, given his guess.

    Conditions on Bob announcing `guess` when Alice sent the z-x-plane
    state at `theta`.  Never drops below check_rate/2: an unmeasuring Bob
    guesses uniformly, so half the check rate always survives the update.
    """
    state = state_from_bloch(theta, 0.0)
    anchor = BASIS_DISCRIM.plus if guess is StateLabel.ZERO else BASIS_DISCRIM.minus
    q = overlap(anchor, state)
    half_r = 0.5 * check_rate
    return half_r / (half_r + (1.0 - check_rate) * q)


_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal function.

    Finishes with one parabolic polish on widely spaced points: near the
    top the bracket stalls in comparison noise, while a three-point fit
    stays well conditioned (and is exact for quadratic objectives).
    """
    a, b = lo, hi
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    fx = f(x)
    h = (hi - lo) / 16.0
    xm = min(max(x, lo + h), hi - h)
    fa, fm, fb = f(xm - h), f(xm), f(xm + h)
    denom = fa - 2.0 * fm + fb
    if denom < 0.0:
        cand = xm + 0.5 * h * (fa - fb) / denom
        if lo <= cand <= hi:
            fc = f(cand)
            if fc >= fx:
                return cand, fc
    return x, fx


class RoundBranch(NamedTuple):
    """One elementary probabilistic branch of a round."""

    prob: float
    round_type: RoundType
    bob_guess: StateLabel
    alice_claim: StateLabel
    check_result: CheckResult
    transfer: float


def _settle(guess: StateLabel, claim: StateLabel, params: ProtocolParams) -> float:
    return -params.win_payout if guess == claim else params.loss_payout


def _noise_variants_pure(state: PureQubit, eps: float):
    if eps == 0.0:
        yield 1.0, state
        return
    yield 1.0 - eps, state
    for axis in ("x", "y", "z"):
        yield eps / 3.0, apply_pauli(state, axis)


def _noise_variants_pair(state: TwoQubitPure, eps: float):
    if eps == 0.0:
        yield 1.0, state
        return
    yield 1.0 - eps, state
    for axis in ("x", "y", "z"):
        yield eps / 3.0, apply_pauli_pair(state, Subsystem.B, axis)


def _product_branches(
    model: ProductModel, params: ProtocolParams
) -> Iterable[RoundBranch]:
    r = params.check_rate
    for weight, member, claim in model.members:
        for nw, state in _noise_variants_pure(member, params.noise):
            w = weight * nw
            p_plus = overlap(BASIS_DISCRIM.plus, state)
            for guess, q in (
                (StateLabel.ZERO, p_plus),
                (StateLabel.PLUS, 1.0 - p_plus),
            ):
                yield RoundBranch(
                    w * (1.0 - r) * q,
                    RoundType.NORMAL,
                    guess,
                    claim,
                    CheckResult.NOT_APPLICABLE,
                    _settle(guess, claim, params),
                )
            caught = overlap(claim.verification_basis.minus, state)
            for guess in StateLabel:
                yield RoundBranch(
                    w * r * 0.5 * caught,
                    RoundType.CHECK,
                    guess,
                    claim,
                    CheckResult.FAIL,
                    -params.penalty,
                )
                yield RoundBranch(
                    w * r * 0.5 * (1.0 - caught),
                    RoundType.CHECK,
                    guess,
                    claim,
                    CheckResult.PASS,
                    _settle(guess, claim, params),
                )


def _entangled_branches(
    model: EntangledModel, params: ProtocolParams
) -> Iterable[RoundBranch]:
    r = params.check_rate
    for nw, state in _noise_variants_pair(model.state, params.noise):
        # Normal rounds: Bob measures his half first, then Alice measures
        # hers in the basis picked by his announced guess.
        bob_sides = project_subsystem(state, Subsystem.B, BASIS_DISCRIM)
        for bob_outcome, (p_b, alice_state) in zip(Outcome, bob_sides):
            if alice_state is None:
                continue
            guess = (
                StateLabel.ZERO if bob_outcome is Outcome.PLUS else StateLabel.PLUS
            )
            basis = model.basis_by_guess[guess]
            for a_outcome in Outcome:
                q = overlap(basis.state_of(a_outcome), alice_state)
                claim = model.label_by_outcome[a_outcome]
                yield RoundBranch(
                    nw * (1.0 - r) * p_b * q,
                    RoundType.NORMAL,
                    guess,
                    claim,
                    CheckResult.NOT_APPLICABLE,
                    _settle(guess, claim, params),
                )
        # Checking rounds: Bob stores, so Alice's measurement steers his qubit.
        for guess in StateLabel:
            basis = model.basis_by_guess[guess]
            alice_sides = project_subsystem(state, Subsystem.A, basis)
            for a_outcome, (p_a, bob_state) in zip(Outcome, alice_sides):
                if bob_state is None:
                    continue
                claim = model.label_by_outcome[a_outcome]
                caught = overlap(claim.verification_basis.minus, bob_state)
                yield RoundBranch(
                    nw * r * 0.5 * p_a * caught,
                    RoundType.CHECK,
                    guess,
                    claim,
                    CheckResult.FAIL,
                    -params.penalty,
                )
                yield RoundBranch(
                    nw * r * 0.5 * p_a * (1.0 - caught),
                    RoundType.CHECK,
                    guess,
                    claim,
                    CheckResult.PASS,
                    _settle(guess, claim, params),
                )


def oracle_round_branches(
    alice: AliceStrategy, params: ProtocolParams
) -> list[RoundBranch]:
    """Every probabilistic branch of one round against honest Bob, with
    exact Born probabilities; raises NonEnumerableStrategyError for
    strategies without a finite description."""
    model = alice.branch_model()
    if isinstance(model, ProductModel):
        branches = _product_branches(model, params)
    else:
        branches = _entangled_branches(model, params)
    return [b for b in branches if b.prob > 0.0]


def oracle_expected_gain(alice: AliceStrategy, params: ProtocolParams) -> GainBreakdown:
    """Exact expected per-round gain for Alice by full branch enumeration."""
    branches = oracle_round_branches(alice, params)
    normal = math.fsum(
        b.prob * b.transfer for b in branches if b.round_type is RoundType.NORMAL
    )
    detect = math.fsum(
        b.prob * b.transfer
        for b in branches
        if b.check_result is CheckResult.FAIL
    )
    passed = math.fsum(
        b.prob * b.transfer
        for b in branches
        if b.check_result is CheckResult.PASS
    )
    return GainBreakdown.from_terms(normal, detect, passed)


def oracle_transfer_variance(alice: AliceStrategy, params: ProtocolParams) -> float:
    """Exact per-round variance of the transfer.

    Sampling-free counterpart to the Monte Carlo standard error; unlike the
    sample estimate it accounts for penalty events too rare to have shown
    up in a finite run.
    """
    branches = oracle_round_branches(alice, params)
    mean = math.fsum(b.prob * b.transfer for b in branches)
    second = math.fsum(b.prob * b.transfer * b.transfer for b in branches)
    return max(0.0, second - mean * mean)


def oracle_transcript_distribution(
    alice: AliceStrategy, params: ProtocolParams
) -> dict[tuple[RoundType, StateLabel, StateLabel, CheckResult], float]:
    """Exact distribution over observable round transcripts
    (round type, guess, claim, check result)."""
    buckets: dict[tuple, list[float]] = {}
    for b in oracle_round_branches(alice, params):
        key = (b.round_type, b.bob_guess, b.alice_claim, b.check_result)
        buckets.setdefault(key, []).append(b.prob)
    return {k: math.fsum(v) for k, v in buckets.items()}


def monte_carlo_gain(stats: SessionStats) -> MonteCarloEstimate:
    """Per-round mean gain with its sample standard error."""
    n = stats.rounds
    if n < 2:
        raise ValueError("need at least two rounds for a standard error")
    mean = stats.alice_gain_total / n
    var = max(0.0, (stats.transfer_sq_total - n * mean * mean) / (n - 1))
    return MonteCarloEstimate(mean, math.sqrt(var / n), n)


class SweepRow(NamedTuple):
    theta: float
    phi: float
    claim: StateLabel
    gain: GainBreakdown


class SweepResult(NamedTuple):
    rows: tuple[SweepRow, ...]
    best: SweepRow


def sweep_cheat_gain(
    check_rate: float,
    penalty: float,
    theta_grid: Sequence[float],
    phi_grid: Sequence[float],
    claims: Sequence[StateLabel] = tuple(StateLabel),
) -> SweepResult:
    """Oracle gain for every (theta, phi, claim) grid point, plus the argmax.

    Ties go to the earliest grid point, so an unbroken symmetry in phi
    reports the first phi value.
    """
    if not theta_grid or not phi_grid or not claims:
        raise ValueError("sweep grids must be non-empty")
    rows = []
    best = None
    for theta in theta_grid:
        for phi in phi_grid:
            state = state_from_bloch(theta, phi)
            for claim in claims:
                strat = _sweep_strategy(state, claim)
                gain = oracle_expected_gain(
                    strat, ProtocolParams(check_rate, penalty)
                )
                row = SweepRow(theta, phi, claim, gain)
                rows.append(row)
                if best is None or row.gain.total > best.gain.total:
                    best = row
    return SweepResult(tuple(rows), best)


def _sweep_strategy(state: PureQubit, claim: StateLabel) -> AliceStrategy:
    from .strategies import _FixedStateCheat  # internal reuse, not public API

    return _FixedStateCheat(state, claim)


def entangled_policy_gains(
    params: ProtocolParams,
    bases=None,
) -> list[tuple[str, GainBreakdown]]:
    """Oracle gains over the declared family of entanglement-attack policies:
    every assignment of a measurement basis (z or x by default) to each of
    Bob's possible guesses, with the default outcome-to-claim table."""
    from .qubits import BASIS_X, BASIS_Z
    from .strategies import entangled_cheat

    if bases is None:
        bases = (BASIS_Z, BASIS_X)
    rows = []
    for b_zero in bases:
        for b_plus in bases:
            policy = {StateLabel.ZERO: b_zero, StateLabel.PLUS: b_plus}
            name = f"zero->{b_zero.label},plus->{b_plus.label}"
            gain = oracle_expected_gain(entangled_cheat(policy), params)
            rows.append((name, gain))
    return rows
