"""Cheating with a tilted state: reward, risk, and the penalty cap.

Alice can tilt her qubit a little toward the discrimination boundary and
keep claiming it was |0>.  Normal rounds then pay her a margin linear in
the tilt, but every checking round convicts her with probability growing
quadratically.  Large penalties crush the tradeoff: her best achievable
gain falls off as 1/sqrt(penalty).
"""

import math

from qgamble.analysis import (
    cheat_gain_exact,
    cheat_gain_quadratic_bound,
    golden_section_max,
    optimal_check_rate,
    oracle_expected_gain,
    quadratic_bound_optimum,
    sweep_cheat_gain,
)
from qgamble.protocol import ProtocolParams, StateLabel
from qgamble.strategies import CheatPoint, ClaimPolicy, fixed_state_cheat

penalty = 10_000.0
rate, cap = optimal_check_rate(penalty)
print(f"penalty R = {penalty:g}; Bob's matched check rate r = {rate:.6f}")

print("\n=== Gain vs tilt angle (claiming |0>) ===")
print(f"{'theta':>8} {'normal':>10} {'detect':>10} {'pass':>9} {'total':>10}")
for theta in (0.0, 0.01, 0.0346, 0.06, 0.12, 0.25):
    g = cheat_gain_exact(theta, rate, penalty, StateLabel.ZERO)
    print(
        f"{theta:8.4f} {g.normal_term:+10.5f} {g.detect_term:+10.5f}"
        f" {g.pass_term:+9.5f} {g.total:+10.5f}"
    )

opt = quadratic_bound_optimum(rate, penalty)
print(f"\nsmall-angle analysis: best tilt  theta* = {opt.theta_star:.6f}")
print(f"                      bound max  g*     = {opt.gain_max:.6f}")
theta_num, gain_num = golden_section_max(
    lambda t: cheat_gain_quadratic_bound(t, rate, penalty), 0.0, math.pi / 4.0
)
print(f"golden-section cross-check:      theta = {theta_num:.6f}, g = {gain_num:.6f}")

best = sweep_cheat_gain(
    rate, penalty, [math.pi / 4 * i / 199 for i in range(200)], [0.0]
).best
print(f"exact sweep maximum: {best.gain.total:.6f} at theta = {best.theta:.6f}")
print(f"cap 2*sqrt(3)*(1+sqrt 2)/sqrt(R) = {cap:.6f}  (exact max sits below it)")

print("\n=== The 1/sqrt(R) law ===")
print(f"{'R':>9} {'r*':>10} {'cap':>10} {'exact max':>10}")
for pen in (100.0, 1_000.0, 10_000.0, 100_000.0):
    r_star, g_cap = optimal_check_rate(pen)
    grid = [math.pi / 4 * i / 199 for i in range(200)]
    exact = sweep_cheat_gain(r_star, pen, grid, [0.0]).best.gain.total
    print(f"{pen:9.0f} {r_star:10.6f} {g_cap:10.6f} {exact:10.6f}")
print("\nQuadrupling the penalty halves what cheating can ever earn.")

print("\n=== Claiming the wrong state is suicide ===")
wrong = oracle_expected_gain(
    fixed_state_cheat(CheatPoint(0.05, 0.0, ClaimPolicy.PLUS)),
    ProtocolParams(rate, penalty),
)
print(f"state near |0> but claimed as |+>: expected gain {wrong.total:+.2f} per round")
