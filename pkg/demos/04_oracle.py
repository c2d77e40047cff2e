"""
Checking against the team-maxmin value
======================================

Compute the value a correlated team can guarantee, directly on the original
game, and compare it with CFR+ on the transformed game.
"""

# %%
from teamgame import generate, solve, solve_tmecor, transform, verify_equivalence

g = generate("21K4")
sol = solve_tmecor(g)
print("value", sol.value, "gap", sol.gap, "rounds", sol.rounds)

# the team mixes a handful of joint plans; the adversary a few plans of its own
for joint, p in sol.team.support:
    print(round(p, 4), [len(plan) for plan in joint])

# %%
t = transform(g)
res = solve(t, 5000, target=1e-4)
rep = verify_equivalence(g, t, res.state.average_profile(), 5e-3, oracle=sol)
print("\n".join(rep.lines()))
