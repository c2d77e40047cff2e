import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teamgame.efg import (Kind, PlayerId, TreeBuilder, count_nodes, dump_lines, expected_value,
                          random_profile, single_terminal, strategy_matrix, terminal_reach,
                          uniform_profile, validate)

from conftest import original, refined


def matching_pennies():
    b = TreeBuilder()
    root = b.add(-1, "", Kind.TEAM, member=0, key="t")
    for a in "HT":
        n = b.add(root, a, Kind.ADVERSARY, key="o")
        for c in "HT":
            b.add(n, c, Kind.TERMINAL, payoff=1 if a == c else -1)
    return b.build(seats=(PlayerId(Kind.TEAM, 0), PlayerId(Kind.ADVERSARY)))


def test_single_terminal_is_valid():
    g = single_terminal()
    assert validate(g).ok
    c = count_nodes(g)
    assert (c.total, c.terminals, c.infosets) == (1, 1, 0)


def test_root_terminal_value():
    assert expected_value(single_terminal(3), {}) == (3.0, -3.0)


def test_zero_sum_violation_is_reported():
    rep = validate(single_terminal((1, 1)))
    assert not rep.ok
    assert any("zero-sum" in v for v in rep.violations)


def test_original_kuhn_validates(kuhn3):
    rep = validate(kuhn3)
    assert rep.ok, rep.violations


def test_transformed_skips_coordinator_recall(kuhn3_t):
    rep = validate(kuhn3_t)
    assert rep.ok, rep.violations
    assert any("coordinator" in s for s in rep.skipped)


def test_perfect_recall_violation():
    # member forgets its own first action
    b = TreeBuilder()
    r = b.add(-1, "", Kind.TEAM, member=0, key="a")
    for x in "lr":
        n = b.add(r, x, Kind.TEAM, member=0, key="b")
        for y in "lr":
            b.add(n, y, Kind.TERMINAL, payoff=0)
    g = b.build(seats=(PlayerId(Kind.TEAM, 0), PlayerId(Kind.ADVERSARY)))
    assert any("recall" in v for v in validate(g).violations)


def test_bad_chance_distribution():
    b = TreeBuilder()
    r = b.add(-1, "", Kind.CHANCE)
    b.add(r, "x", Kind.TERMINAL, prob=0.7, payoff=1)
    b.add(r, "y", Kind.TERMINAL, prob=0.7, payoff=-1)
    assert not validate(b.build()).ok


def test_counts(kuhn3):
    c = count_nodes(kuhn3)
    assert c.total == 151
    assert c.terminals == 6 * 13
    assert c.team_nodes + c.adversary_nodes == 6 * 12
    assert c.infosets == 36
    assert c.total == c.terminals + c.team_nodes + c.adversary_nodes + c.by_owner_kind["chance"] \
        + c.by_owner_kind["temp_chance"]


@pytest.mark.parametrize("name", ["21K3", "21K4", "31K4", "21L22"])
def test_count_partition(name):
    for g in (original(name), refined(name)):
        c = count_nodes(g)
        assert c.total == len(g)
        assert c.total == c.terminals + sum(c.by_owner_kind.values())


def test_malformed_profile_rejected(kuhn3):
    with pytest.raises(ValueError):
        expected_value(kuhn3, {0: np.array([0.9, 0.3])})
    with pytest.raises(ValueError):
        expected_value(kuhn3, {0: np.array([1.5, -0.5])})


def test_missing_infosets_default_to_uniform(kuhn3):
    assert math.isclose(expected_value(kuhn3, {})[0], expected_value(kuhn3, uniform_profile(kuhn3))[0])
    tab = strategy_matrix(kuhn3, {})
    assert np.allclose(tab[:, :2], 0.5)


def test_matching_pennies_value():
    g = matching_pennies()
    assert validate(g).ok
    assert expected_value(g, {0: np.array([1.0, 0.0]), 1: np.array([1.0, 0.0])})[0] == 1.0
    assert expected_value(g, {}) == (0.0, -0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["21K3", "21K4", "21L22"]))
def test_terminal_reach_sums_to_one(seed, name):
    for g in (original(name), refined(name)):
        prof = random_profile(g, np.random.default_rng(seed))
        z = terminal_reach(g, prof)
        assert abs(z.sum() - 1.0) < 1e-9
        team, adv = expected_value(g, prof)
        assert team + adv == 0


def test_history_and_walk(kuhn3):
    assert list(kuhn3.walk()) == list(range(len(kuhn3)))
    leaf = int(np.flatnonzero(kuhn3.kinds == Kind.TERMINAL)[0])
    h = kuhn3.history(leaf)
    assert h[0][0].kind == Kind.CHANCE
    assert [a for _, a in h[1:]] == ["p", "p", "p"]


def test_dump_is_stable(kuhn3):
    a = list(dump_lines(kuhn3))
    b = list(dump_lines(original.__wrapped__("21K3")))
    assert a == b
    assert len(a) == 151
    fields = a[0].split("\t")
    assert fields[0] == "0" and len(fields) == 5
    assert all(len(line.split("\t")) == 5 for line in a)
