"""
Solving with CFR+
=================

Run CFR+ on two-player Kuhn poker and on a transformed team game and watch
exploitability fall.
"""

# %%
from teamgame import generate, profile_value, solve, transform

# two-player Kuhn: a single-member team. Its value is -1/18 for the first player.
g = generate("11K3")
res = solve(g, 2000)
for p in res.points:
    print(f"{p.iteration:5d}  {p.exploitability:.6f}")
print("value", profile_value(g, res.state.average_table()), "vs", -1 / 18)

# %%
# the transformed game has the coordinator as its only team-side player
t = transform(generate("21K4"))
res = solve(t, 1000, target=1e-3)
print(res.points[-1])
print("team value", profile_value(t, res.state.average_table()))

# %%
# vanilla CFR for comparison
slow = solve(t, res.points[-1].iteration, variant="cfr")
print(slow.points[-1])
