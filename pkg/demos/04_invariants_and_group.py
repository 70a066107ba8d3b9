"""The invariant g~ of a frame depends on h only through the three-parameter
action h -> h^A, and only (alpha, beta, gamma) matter.

Run: python3 demos/04_invariants_and_group.py
"""
from fractions import Fraction

from brieskorn import Frame, GammaParams, MultiSeries, act_on_h, full_pipeline_action, orbit_rank, symbolic_orbit
from brieskorn.suites import invariant_sample

h = MultiSeries.univariate([0, 0, 1, 1], 8)
frame = Frame.from_params(4, Fraction(1, 2), -1, 2).with_entries({(3, 0): 7, (4, 2): -3})
ok, inv, hA = invariant_sample(h, frame)
print("g1 =", inv.g[0])
print("g~ =", inv.g_tilde)
print("h^A =", hA)
print("g~ == h^A o g1:", ok)
print("pipeline agrees with the closed form:",
      full_pipeline_action(frame, h) == act_on_h(GammaParams.from_frame(frame), h))

c2A, c3A, c4A = symbolic_orbit(4)
print("c^A_2 =", c2A)
print("c^A_3 =", c3A)
print("c^A_4 =", c4A)
print("rank of (c3, c4, c5) Jacobian at 0:", orbit_rank(h, [3, 4, 5]))
print("rank of (c3, ..., c6) Jacobian at 0:", orbit_rank(h, [3, 4, 5, 6]))
