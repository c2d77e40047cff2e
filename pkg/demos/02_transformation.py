"""
From a team to a coordinator
============================

Rewrite a team game so one coordinator plays for every member, look at the
pre-branches it creates, and check that payoffs survive the rewrite.
"""

# %%
import numpy as np

from teamgame import (check_pipb, count_nodes, expected_value, generate, map_profile,
                      merge_infosets, mpta, random_profile, transform)

g = generate("21K3")

# full rewrite: every member decision becomes a chance node over the card it
# might hold, followed by a coordinator decision
full = merge_infosets(mpta(g))
print("unpruned:", count_nodes(full).total)
print(check_pipb(full).skipped)

# %%
# once a member has acted only the card actually held keeps its branch
t = transform(g)
c = count_nodes(t)
print("pruned:", c.total, "coordinator nodes:", c.team_nodes, "adversary nodes:", c.adversary_nodes)

# %%
# the coordinator's information sets line up with the members' ones
print(t.infoset_keys[:3])

# a member strategy copied across gives the same expected payoff
rng = np.random.default_rng(0)
for _ in range(3):
    s = random_profile(g, rng)
    print(expected_value(g, s)[0], expected_value(t, map_profile(g, t, s))[0])
