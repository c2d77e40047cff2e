import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teamgame.efg import Kind, expected_value, random_profile, validate
from teamgame.games import (InstanceError, InstanceSpec, generate, kuhn_betting_size,
                            kuhn_total_nodes, leduc_deals, parse_instance)

from conftest import original


def test_parse_kuhn():
    s = parse_instance("21K3")
    assert (s.team_size, s.adversary_count, s.family, s.ranks) == (2, 1, "kuhn", 3)
    assert s.name == "21K3"


def test_parse_leduc():
    s = parse_instance("41L33")
    assert (s.team_size, s.adversary_count, s.family, s.ranks, s.suits) == (4, 1, "leduc", 3, 3)


@pytest.mark.parametrize("name", ["21K2", "22K5", "21L3", "21K33", "x", "21Q3", "", "31L11"])
def test_parse_errors(name):
    with pytest.raises(InstanceError):
        parse_instance(name)


def test_single_member_team_allowed():
    assert parse_instance("11K3").players == 2


@pytest.mark.parametrize("players,size", [(3, 25), (4, 65), (5, 161)])
def test_betting_tree_size(players, size):
    assert kuhn_betting_size(players) == size
    spec = InstanceSpec(players - 1, 1, "kuhn", players)
    g = generate(spec)
    # one subtree per ordered deal below the root
    assert (len(g) - 1) % math.perm(players, players) == 0
    assert (len(g) - 1) // math.perm(players, players) == size


@pytest.mark.parametrize("name,total", [("21K3", 151), ("21K4", 601), ("21K6", 3001),
                                        ("31K6", 23401)])
def test_kuhn_counts(name, total):
    assert kuhn_total_nodes(parse_instance(name)) == total
    assert len(original(name)) == total


def test_21k3_per_deal_split(kuhn3):
    kids = kuhn3.children(0)
    assert len(kids) == 6
    assert np.allclose(kuhn3.chance_probs(0), 1 / 6)
    decisions = np.isin(kuhn3.kinds, (Kind.TEAM, Kind.ADVERSARY))
    assert decisions.sum() == 6 * 12
    assert (kuhn3.kinds == Kind.TERMINAL).sum() == 6 * 13


def test_seat_order(kuhn3):
    first = kuhn3.children(0)[0]
    assert kuhn3.kinds[first] == Kind.TEAM and kuhn3.member[first] == 0
    second = kuhn3.children(first)[0]
    assert kuhn3.member[second] == 1
    third = kuhn3.children(second)[0]
    assert kuhn3.kinds[third] == Kind.ADVERSARY


def _payoff_of(g, deal_label, actions):
    node = next(int(c) for c in g.children(0) if g.labels[c] == deal_label)
    for a in actions:
        node = next(int(c) for c in g.children(node) if g.labels[c] == a)
    assert g.kinds[node] == Kind.TERMINAL
    return g.payoff[node]


def test_kuhn_payoffs(kuhn3):
    # deal: member0=2, member1=0, adversary=1
    assert _payoff_of(kuhn3, "2.0.1", "ppp") == 3 - 2      # member 0 wins the antes
    assert _payoff_of(kuhn3, "0.1.2", "ppp") == -2          # adversary wins
    # adversary bets, both members fold
    assert _payoff_of(kuhn3, "2.0.1", "ppbpp") == -2
    # member 0 bets, member 1 folds, adversary calls and loses to member 0
    assert _payoff_of(kuhn3, "2.0.1", "bpb") == (5 - 2) + (-1)


def test_leduc_calibration():
    assert len(generate("21L33")) == 13183
    assert len(generate("21L43")) == 42589


def test_leduc_deals_are_distributions():
    for r, c, n in [(3, 3, 3), (4, 3, 3), (2, 2, 3), (3, 2, 4)]:
        deals = leduc_deals(r, c, n)
        assert math.isclose(sum(p for _, p in deals), 1.0)
        assert all(max(h.count(x) for x in h) <= c for h, _ in deals)


def test_leduc_board_visible_in_round_two():
    g = generate("21L22")
    keys = [k for k in g.infoset_keys if k[0] == "adversary"]
    assert any(k[2] == () for k in keys)
    assert any(len(k[2]) == 1 and "/" in k[3] for k in keys)
    assert all(("/" in k[3]) == (len(k[2]) == 1) for k in keys)


def test_leduc_single_rank_all_ties():
    g = generate("21L14")
    assert validate(g).ok
    # never folding: every hand reaches a showdown in which everyone splits
    nofold = {i: np.eye(g.infoset_sizes[i])[1] for i in range(g.num_infosets)}  # bet or call
    assert expected_value(g, nofold)[0] == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_zero_sum_and_chip_conservation(seed):
    g = original("21K4")
    prof = random_profile(g, np.random.default_rng(seed))
    t, a = expected_value(g, prof)
    assert t == -a
    term = g.kinds == Kind.TERMINAL
    assert np.array_equal(g.payoff[term], -g.adv_payoff[term])


def test_every_deal_has_the_same_betting_shape():
    g = original("21K4")
    sizes = {g.labels[c]: len(list(_subtree(g, int(c)))) for c in g.children(0)}
    assert len(set(sizes.values())) == 1


def _subtree(g, node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(int(c) for c in g.children(n))


def test_tie_split_is_fractional():
    g = generate("21L22")
    term = g.payoff[g.kinds == Kind.TERMINAL]
    assert any(Fraction(x).limit_denominator(6).denominator > 1 for x in term)
