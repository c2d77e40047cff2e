import numpy as np
import pytest

from teamgame.efg import Kind, PlayerId, TreeBuilder, count_nodes, dump_lines, single_terminal
from teamgame.refine import prune
from teamgame.transform import TransformError, check_pipb, mpta, pipb_pairs

from conftest import original, refined, unpruned


def test_rejects_non_team_games():
    with pytest.raises(TransformError):
        mpta(single_terminal())
    with pytest.raises(TransformError):
        mpta(refined("21K3"))


def test_full_rewrite_structure():
    g = original("21K3")
    t = mpta(g)
    kinds = t.kinds
    assert Kind.TEAM not in set(kinds.tolist())
    # both strategic sides remain plus chance kinds
    assert {Kind(k) for k in np.unique(kinds)} == {
        Kind.CHANCE, Kind.TEMP_CHANCE, Kind.COORDINATOR, Kind.ADVERSARY, Kind.TERMINAL}
    assert t.children(0).tolist() and t.labels[t.children(0)[0]] == g.labels[g.children(0)[0]]


def test_first_pipb_offers_six_pairs():
    t = mpta(original("21K3"))
    tc = int(t.children(0)[0])
    assert t.kinds[tc] == Kind.TEMP_CHANCE
    assert len(t.children(tc)) == 3
    assert pipb_pairs(t, tc) == 3 * 2


@pytest.mark.parametrize("name,r", [("21K3", 3), ("21K4", 4)])
def test_unpruned_pipb(name, r):
    t = unpruned(name)
    rep = check_pipb(t)
    assert rep.ok, rep.violations
    tcs = np.flatnonzero(t.kinds == Kind.TEMP_CHANCE)
    assert all(pipb_pairs(t, int(x)) == r * 2 for x in tcs)
    assert all(len(t.children(int(x))) == r for x in tcs)


def test_pruned_pipb(kuhn3_t):
    rep = check_pipb(kuhn3_t)
    assert rep.ok, rep.violations
    assert rep.skipped == ["6 full pre-branches checked"]


def test_pipb_violation_is_reported():
    b = TreeBuilder()
    root = b.add(-1, "", Kind.ADVERSARY, key="o")
    for a in "pb":
        c = b.add(root, a, Kind.COORDINATOR, member=0, key=("c", a), virtual=0)
        b.add(c, "x", Kind.TERMINAL, payoff=0)
    g = b.build(ranks=(0,), seats=(PlayerId(Kind.COORDINATOR, 0), PlayerId(Kind.ADVERSARY)))
    rep = check_pipb(g)
    assert not rep.ok
    assert "ADVERSARY parent" in rep.violations[0]


def test_copies_keep_actions_and_payoffs():
    g = original("21K3")
    t = mpta(g)
    for node in range(len(t)):
        o = int(t.origin[node])
        k = t.kinds[node]
        if k == Kind.TERMINAL:
            assert t.payoff[node] == g.payoff[o]
        elif k in (Kind.ADVERSARY, Kind.COORDINATOR):
            assert t.actions(node) == g.actions(o)


def _public(game, node):
    return [a for p, a in game.history(node) if p.kind not in (Kind.CHANCE, Kind.TEMP_CHANCE)]


@pytest.mark.parametrize("which", ["pruned", "unpruned"])
def test_node_mapping_keeps_public_history(which):
    g = original("21K3")
    t = refined("21K3") if which == "pruned" else unpruned("21K3")
    for node in range(1, len(t)):
        if t.kinds[node] in (Kind.ADVERSARY, Kind.COORDINATOR, Kind.TERMINAL):
            o = int(t.origin[node])
            assert _public(t, node) == _public(g, o)
            assert t.deal[node] == g.deal[o]


def test_copy_multiplicity_21k3(kuhn3_t):
    g = original("21K3")
    per = np.bincount(kuhn3_t.origin[kuhn3_t.kinds != Kind.TEMP_CHANCE][1:], minlength=len(g))
    # every original team, adversary or terminal node has r = 3 copies after pruning
    for node in range(1, len(g)):
        assert per[node] == 3


def test_deterministic():
    a = mpta(original("21K4"), prune=True)
    b = mpta(original("21K4"), prune=True)
    assert list(dump_lines(a)) == list(dump_lines(b))


def test_fused_prune_matches_two_step():
    g = original("21K4")
    fused = mpta(g, prune=True)
    two = prune(mpta(g))
    for col in ("kinds", "member", "parent", "child_ptr", "child_ids", "payoff", "deal",
                "virtual", "origin", "depth"):
        assert np.array_equal(getattr(fused, col), getattr(two, col)), col
    assert np.array_equal(fused.prob, two.prob, equal_nan=True)
    assert fused.labels == two.labels


def test_mismatch_branches_have_zero_probability():
    t = unpruned("21K3")
    for tc in np.flatnonzero(t.kinds == Kind.TEMP_CHANCE):
        probs = t.chance_probs(int(tc))
        assert sorted(probs.tolist()) == [0.0, 0.0, 1.0]
        kids = t.children(int(tc))
        actual = t.deals[t.deal[tc]][t.member[tc]]
        assert t.virtual[kids[np.argmax(probs)]] == actual


def test_pruned_smaller_than_unpruned():
    for name in ("21K3", "21K4"):
        assert count_nodes(refined(name)).total < count_nodes(unpruned(name)).total
