"""Round/session engine tests: settlement, noise, abort, and the fast path."""

import math

import numpy as np
import pytest

from qgamble.analysis import monte_carlo_gain, oracle_expected_gain
from qgamble.protocol import (
    DEFAULT_LOSS_PAYOUT,
    MIN_CHECKS_FOR_ABORT,
    BobMove,
    CheckResult,
    ProtocolParams,
    ProtocolViolation,
    RoundType,
    SessionStats,
    StateLabel,
    apply_noise,
    run_round,
    run_session,
    run_session_fast,
    session_rng,
)
from qgamble.qubits import (
    BASIS_Z,
    KET_0,
    KET_MINUS,
    Outcome,
    Subsystem,
    apply_pauli,
    overlap,
)
from qgamble.strategies import (
    AliceStrategy,
    CheatPoint,
    ClaimPolicy,
    Preparation,
    fixed_state_cheat,
    honest_alice,
    honest_bob,
)

RNG = np.random.default_rng

LOSS = DEFAULT_LOSS_PAYOUT


def default_params(**kw):
    base = dict(check_rate=0.1, penalty=100.0)
    base.update(kw)
    return ProtocolParams(**base)


class TestParams:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(check_rate=0.0),
            dict(check_rate=1.0),
            dict(penalty=0.0),
            dict(noise=-0.1),
            dict(noise=1.0),
            dict(abort_threshold=1.5),
            dict(win_payout=0.0),
        ],
    )
    def test_rejects_bad_values(self, kw):
        with pytest.raises(ValueError):
            default_params(**kw)

    def test_default_loss_payout(self):
        assert DEFAULT_LOSS_PAYOUT == pytest.approx(3.0 + 2.0 * math.sqrt(2.0), abs=1e-12)


class TestRunRound:
    def test_transfers_take_legal_values(self):
        params = default_params()
        alice, bob = honest_alice(), honest_bob(params.check_rate)
        rng = RNG(10)
        legal = {-params.win_payout, params.loss_payout}
        for _ in range(300):
            rec = run_round(alice, bob, params, rng)
            assert rec.transfer in legal  # honest play never pays the penalty
            assert rec.settlement_ok(params)
            assert (rec.round_type is RoundType.CHECK) == (
                rec.check_result is not CheckResult.NOT_APPLICABLE
            )

    def test_honest_check_rounds_always_pass(self):
        params = default_params(check_rate=0.9)
        alice, bob = honest_alice(), honest_bob(params.check_rate)
        rng = RNG(11)
        checks = 0
        for _ in range(400):
            rec = run_round(alice, bob, params, rng)
            if rec.round_type is RoundType.CHECK:
                checks += 1
                assert rec.check_result is CheckResult.PASS
        assert checks > 300

    def test_win_means_guess_equals_claim(self):
        params = default_params()
        alice, bob = honest_alice(), honest_bob(params.check_rate)
        rng = RNG(12)
        for _ in range(200):
            rec = run_round(alice, bob, params, rng)
            if rec.check_result is not CheckResult.FAIL:
                if rec.bob_guess == rec.alice_claim:
                    assert rec.transfer == -params.win_payout
                else:
                    assert rec.transfer == params.loss_payout

    def test_orthogonal_cheat_always_caught(self):
        # Sending |->, orthogonal to the claimed |+>, fails every check.
        params = default_params(check_rate=0.9)
        bob = honest_bob(params.check_rate)
        rng = RNG(13)

        class MinusCheat(AliceStrategy):
            def prepare(self, rng):
                return Preparation(KET_MINUS)

            def claim(self, memo, own_view, bob_guess, rng):
                return StateLabel.PLUS

        checks = 0
        for _ in range(300):
            rec = run_round(MinusCheat(), bob, params, rng)
            if rec.round_type is RoundType.CHECK:
                checks += 1
                assert rec.check_result is CheckResult.FAIL
                assert rec.transfer == -params.penalty
        assert checks > 200

    def test_verification_precedes_settlement(self):
        params = default_params(check_rate=0.9)

        class SpyBob:
            def __init__(self):
                self.inner = honest_bob(params.check_rate)
                self.verify_calls = 0

            def play(self, received, is_check, rng):
                return self.inner.play(received, is_check, rng)

            def verify(self, stored, claim, rng):
                self.verify_calls += 1
                return self.inner.verify(stored, claim, rng)

        spy = SpyBob()
        rng = RNG(14)
        checks = 0
        for _ in range(100):
            rec = run_round(honest_alice(), spy, params, rng)
            if rec.round_type is RoundType.CHECK:
                checks += 1
            # Every check round consulted verify() exactly once before settling.
            assert spy.verify_calls == checks

    def test_alice_touching_bobs_qubit_rejected(self):
        params = default_params()

        class RogueAlice(AliceStrategy):
            def prepare(self, rng):
                return Preparation(KET_0)

            def claim(self, memo, own_view, bob_guess, rng):
                own_view.measure(BASIS_Z, rng, which=Subsystem.B)
                return StateLabel.ZERO

        with pytest.raises(ProtocolViolation):
            for _ in range(50):
                run_round(RogueAlice(), honest_bob(params.check_rate), params, RNG(15))

    def test_unentangled_alice_has_no_kept_qubit(self):
        params = default_params()

        class ConfusedAlice(AliceStrategy):
            def prepare(self, rng):
                return Preparation(KET_0)

            def claim(self, memo, own_view, bob_guess, rng):
                own_view.measure(BASIS_Z, rng)
                return StateLabel.ZERO

        with pytest.raises(ProtocolViolation):
            run_round(ConfusedAlice(), honest_bob(params.check_rate), params, RNG(16))

    def test_double_measurement_rejected(self):
        params = default_params(check_rate=0.001)

        class GreedyBob:
            def play(self, received, is_check, rng):
                received.measure(BASIS_Z, rng)
                received.measure(BASIS_Z, rng)
                return BobMove(StateLabel.ZERO, None, Outcome.PLUS)

            def verify(self, stored, claim, rng):
                return CheckResult.PASS

        with pytest.raises(ProtocolViolation):
            run_round(honest_alice(), GreedyBob(), params, RNG(17))


class TestNoise:
    def test_zero_noise_identity(self):
        rng = RNG(20)
        for _ in range(20):
            assert apply_noise(KET_0, 0.0, rng) is KET_0

    def test_full_noise_branch_weights(self):
        # Enumerating the three Pauli branches on |0>: x and y flip, z fixes.
        rng = RNG(21)
        n = 30_000
        flipped = sum(
            overlap(apply_noise(KET_0, 1.0 - 1e-12, rng), KET_0) < 0.5
            for _ in range(n)
        )
        sigma = math.sqrt((2.0 / 3.0) * (1.0 / 3.0) / n)
        assert abs(flipped / n - 2.0 / 3.0) < 5.0 * sigma

    def test_noisy_check_fail_rate(self):
        # Independent oracle: enumerate the channel branches on each honest
        # state and read off the orthogonal-outcome probability.
        eps = 0.3
        for label in StateLabel:
            fail = eps / 3.0 * sum(
                overlap(
                    label.verification_basis.minus, apply_pauli(label.state, ax)
                )
                for ax in ("x", "y", "z")
            )
            assert fail == pytest.approx(2.0 * eps / 3.0, abs=1e-12)
        params = default_params(check_rate=0.5, noise=eps, abort_threshold=1.0)
        stats = run_session(
            honest_alice(), honest_bob(0.5), params, 20_000, session_rng(22)
        )
        rate = stats.check_fails / stats.check_rounds
        sigma = math.sqrt(0.2 * 0.8 / stats.check_rounds)
        assert abs(rate - 2.0 * eps / 3.0) < 5.0 * sigma

    def test_rejects_bad_rate(self):
        with pytest.raises(ValueError):
            apply_noise(KET_0, 1.0, RNG(23))


class TestSession:
    def test_zero_sum_ledger(self):
        params = default_params()
        transfers = []
        stats = run_session(
            honest_alice(),
            honest_bob(params.check_rate),
            params,
            500,
            session_rng(30),
            on_round=lambda rec: transfers.append(rec.transfer),
        )
        assert stats.alice_gain_total == sum(transfers)
        assert stats.bob_gain_total == -stats.alice_gain_total
        assert stats.rounds == len(transfers)

    def test_check_rate_binomial(self):
        params = default_params(check_rate=0.25)
        stats = run_session(
            honest_alice(), honest_bob(0.25), params, 20_000, session_rng(31)
        )
        sigma = math.sqrt(0.25 * 0.75 * stats.rounds)
        assert abs(stats.check_rounds - 0.25 * stats.rounds) < 5.0 * sigma

    def test_no_fails_no_abort_at_zero_noise(self):
        params = default_params(check_rate=0.5, abort_threshold=0.0)
        stats = run_session(
            honest_alice(), honest_bob(0.5), params, 2_000, session_rng(32)
        )
        assert stats.check_fails == 0
        assert not stats.aborted
        assert stats.rounds == 2_000

    def test_noise_triggers_abort(self):
        params = default_params(check_rate=0.5, noise=0.2, abort_threshold=0.05)
        stats = run_session(
            honest_alice(), honest_bob(0.5), params, 5_000, session_rng(33)
        )
        assert stats.aborted
        assert stats.rounds < 5_000
        assert stats.check_rounds >= MIN_CHECKS_FOR_ABORT

    def test_reproducible_by_seed(self):
        params = default_params()
        a = run_session(honest_alice(), honest_bob(0.1), params, 300, session_rng(34))
        b = run_session(honest_alice(), honest_bob(0.1), params, 300, session_rng(34))
        assert a == b

    def test_merge_associative(self):
        params = default_params()
        parts = [
            run_session(honest_alice(), honest_bob(0.1), params, 200, session_rng(35, i))
            for i in range(3)
        ]
        left = parts[0].merge(parts[1]).merge(parts[2])
        right = parts[0].merge(parts[1].merge(parts[2]))
        # Counters are exact; the coin sums associate up to float rounding.
        assert (left.rounds, left.check_rounds, left.check_fails, left.bob_wins) == (
            right.rounds, right.check_rounds, right.check_fails, right.bob_wins,
        )
        assert left.alice_gain_total == pytest.approx(right.alice_gain_total, rel=1e-12)
        assert left.transfer_sq_total == pytest.approx(right.transfer_sq_total, rel=1e-12)
        assert left.rounds == 600

    def test_rejects_zero_rounds(self):
        with pytest.raises(ValueError):
            run_session(honest_alice(), honest_bob(0.1), default_params(), 0, RNG(36))


class TestFastSession:
    def test_reproducible_by_seed(self):
        members = honest_alice().branch_model().members
        params = default_params()
        a = run_session_fast(members, params, 5_000, session_rng(40))
        b = run_session_fast(members, params, 5_000, session_rng(40))
        assert a == b

    def test_agrees_with_oracle_honest(self):
        params = ProtocolParams(0.01, 10_000.0)
        alice = honest_alice()
        stats = run_session_fast(
            alice.branch_model().members, params, 1_000_000, session_rng(41)
        )
        mc = monte_carlo_gain(stats)
        oracle = oracle_expected_gain(alice, params)
        assert abs(mc.mean - oracle.total) <= 4.0 * mc.std_error

    def test_agrees_with_oracle_cheat(self):
        params = ProtocolParams(0.0139385, 10_000.0)
        alice = fixed_state_cheat(CheatPoint(0.3, 0.0, ClaimPolicy.ZERO))
        stats = run_session_fast(
            alice.branch_model().members, params, 1_000_000, session_rng(42)
        )
        mc = monte_carlo_gain(stats)
        oracle = oracle_expected_gain(alice, params)
        assert abs(mc.mean - oracle.total) <= 4.0 * mc.std_error

    def test_agrees_with_engine_distribution(self):
        # Same protocol through both code paths: both land within their
        # Monte Carlo bands of the same exact value.
        params = default_params(check_rate=0.2, penalty=50.0)
        alice = honest_alice()
        oracle = oracle_expected_gain(alice, params).total
        fast = monte_carlo_gain(
            run_session_fast(alice.branch_model().members, params, 200_000, session_rng(43))
        )
        slow = monte_carlo_gain(
            run_session(alice, honest_bob(0.2), params, 50_000, session_rng(44))
        )
        assert abs(fast.mean - oracle) <= 4.0 * fast.std_error
        assert abs(slow.mean - oracle) <= 4.0 * slow.std_error

    def test_noise_abort_matches_engine_rule(self):
        params = default_params(check_rate=0.5, noise=0.2, abort_threshold=0.05)
        members = honest_alice().branch_model().members
        stats = run_session_fast(members, params, 5_000, session_rng(45))
        assert stats.aborted
        assert stats.check_rounds >= MIN_CHECKS_FOR_ABORT
        clean = run_session_fast(
            members, default_params(check_rate=0.5, abort_threshold=0.0), 5_000,
            session_rng(46),
        )
        assert not clean.aborted and clean.check_fails == 0

    def test_win_rate_near_optimum(self):
        from qgamble.qubits import OPTIMAL_GUESS_PROB

        params = ProtocolParams(0.01, 10_000.0)
        stats = run_session_fast(
            honest_alice().branch_model().members, params, 400_000, session_rng(47)
        )
        sigma = math.sqrt(
            OPTIMAL_GUESS_PROB * (1 - OPTIMAL_GUESS_PROB) / stats.normal_rounds
        )
        assert abs(stats.normal_win_rate - OPTIMAL_GUESS_PROB) < 5.0 * sigma


class TestStats:
    def test_win_rate_requires_normal_rounds(self):
        s = SessionStats(2, 0.0, 0.0, 2, 0, 0, False)
        with pytest.raises(ValueError):
            s.normal_win_rate

    def test_record_row_shape(self):
        params = default_params()
        rows = []
        run_session(
            honest_alice(), honest_bob(0.1), params, 50, session_rng(50),
            on_round=lambda rec: rows.append(rec.as_row()),
        )
        assert len(rows) == 50
        assert set(rows[0]) == {
            "round_type", "bob_guess", "alice_claim", "check_result", "transfer",
        }


class TestSessionRng:
    def test_streams_differ_by_index(self):
        a = session_rng(7, 0).random(4).tolist()
        b = session_rng(7, 1).random(4).tolist()
        assert a != b

    def test_streams_repeat(self):
        assert session_rng(7, 3).random(4).tolist() == session_rng(7, 3).random(4).tolist()
