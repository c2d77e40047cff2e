"""
Building poker team games
=========================

Generate a few Kuhn and Leduc instances, check them, and look at the shape
of their trees.
"""

# %%
from teamgame import count_nodes, dump_lines, generate, parse_instance, validate

spec = parse_instance("21K3")
print(spec)

# two team members (seats 0 and 1) face one adversary with a 3-card deck
g = generate(spec)
print(len(g), "nodes,", g.num_infosets, "information sets")
print(validate(g).ok)

# %%
# every ordered deal gets the same 25-node betting subtree below the root
for name in ["21K3", "21K4", "21K6", "31K6"]:
    c = count_nodes(generate(name))
    print(f"{name:5s} total={c.total:6d} team={c.team_nodes:6d} adversary={c.adversary_nodes:5d}")

# %%
# the first lines of the text dump: id, owner, infoset, history, actions or payoff
for line in list(dump_lines(g))[:6]:
    print(line)

# %%
# Leduc deals the board with the private cards; it is only seen in round two
lg = generate("21L33")
print(len(lg), "nodes in 21L33")
print([k for k in lg.infoset_keys if k[0] == "adversary"][-1])
