import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from teamgame.efg import Kind, count_nodes, expected_value, random_profile, uniform_profile
from teamgame.oracle import infoset_correspondence, map_profile
from teamgame.refine import StructureError, info_key, merge_infosets, prune
from teamgame.transform import mpta

from conftest import original, refined, unpruned


@pytest.mark.parametrize("name,total,team,adv", [
    ("21K3", 583, 144, 72),
    ("21K4", 3097, 768, 384),
    ("21K6", 23161, 5760, 2880),
])
def test_transformed_counts(name, total, team, adv):
    c = count_nodes(refined(name))
    assert (c.total, c.team_nodes, c.adversary_nodes) == (total, team, adv)


def test_per_deal_decomposition(kuhn3_t):
    t = kuhn3_t
    assert len(t.children(0)) == 6
    for d in range(6):
        in_deal = t.deal == d
        k = t.kinds[in_deal]
        coord = (k == Kind.COORDINATOR).sum()
        adv = (k == Kind.ADVERSARY).sum()
        term = (k == Kind.TERMINAL).sum()
        tc = (k == Kind.TEMP_CHANCE).sum()
        assert (coord, adv, term) == (24, 12, 39)
        # one full pre-branch plus a degenerate one per later coordinator node
        assert tc == 1 + (coord - 3)
    assert 1 + 6 * (24 + 12 + 39 + 22) == 583


def _coord_nodes(t, deal, virtual, history):
    out = []
    for n in np.flatnonzero((t.kinds == Kind.COORDINATOR) & (t.deal == deal)):
        pub = [a for p, a in t.history(int(n)) if p.kind not in (Kind.CHANCE, Kind.TEMP_CHANCE)]
        if t.virtual[n] == virtual and pub == history:
            out.append(int(n))
    return out


def test_merge_across_deals(kuhn3_t):
    t = kuhn3_t
    deals = t.deals
    # deals 0 and 1 both give member 0 rank 0 ("0.1.2" and "0.2.1")
    a = [d for d, h in enumerate(deals) if h[0] == 0]
    n1 = _coord_nodes(t, a[0], 1, [])
    n2 = _coord_nodes(t, a[1], 1, [])
    assert n1 and n2
    assert t.infoset[n1[0]] == t.infoset[n2[0]]
    other = _coord_nodes(t, a[0], 2, [])
    assert t.infoset[other[0]] != t.infoset[n1[0]]


def test_coordinator_infosets_mirror_members(kuhn3, kuhn3_t):
    c_t = count_nodes(kuhn3_t)
    c_o = count_nodes(kuhn3)
    assert c_t.infosets == c_o.infosets == 36
    corr = infoset_correspondence(kuhn3, kuhn3_t)
    assert sorted(corr.values()) == list(range(36))
    coord = kuhn3_t.infosets_of(Kind.COORDINATOR)
    assert len(coord) == 24
    for m in (0, 1):
        assert len(kuhn3_t.infosets_of(Kind.COORDINATOR, m)) == 12 == len(kuhn3.infosets_of(Kind.TEAM, m))


def test_unpruned_merges_to_same_keys():
    a = set(unpruned("21K3").infoset_keys)
    b = set(refined("21K3").infoset_keys)
    assert a == b


def test_merge_rejects_mismatched_actions():
    t = mpta(original("21K3"))
    labels = list(t.labels)
    # relabel one coordinator action so its infoset disagrees with its peers
    node = int(np.flatnonzero(t.kinds == Kind.COORDINATOR)[5])
    child = int(t.children(node)[0])
    labels[child] = "x"
    bad = dataclasses.replace(t, labels=tuple(labels))
    with pytest.raises(StructureError):
        merge_infosets(bad)


def test_info_key_needs_source(kuhn3):
    with pytest.raises(StructureError):
        info_key(kuhn3, 1)


def test_prune_needs_deals():
    t = mpta(original("21K3"))
    with pytest.raises(StructureError):
        prune(dataclasses.replace(t, deals=()))


def test_pool_is_path_global():
    t = refined("21K4")
    # every temporary chance node after the first coordinator decision on a path is degenerate
    for tc in np.flatnonzero(t.kinds == Kind.TEMP_CHANCE):
        acted = any(p.kind == Kind.COORDINATOR for p, _ in t.history(int(tc)))
        assert len(t.children(int(tc))) == (1 if acted else 4)


def test_uniform_maps_to_uniform(kuhn3, kuhn3_t):
    m = map_profile(kuhn3, kuhn3_t, uniform_profile(kuhn3))
    assert all(np.allclose(v, 0.5) for v in m.values())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["21K3", "21K4", "31K4"]))
def test_round_trip(seed, name):
    g, t = original(name), refined(name)
    s = random_profile(g, np.random.default_rng(seed))
    back = map_profile(g, t, map_profile(g, t, s), inverse=True)
    assert back.keys() == s.keys()
    assert all(np.array_equal(back[i], s[i]) for i in s)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["21K3", "21K4", "31K4", "21L22"]))
def test_payoff_equivalence(seed, name):
    g, t = original(name), refined(name)
    s = random_profile(g, np.random.default_rng(seed))
    assert abs(expected_value(g, s)[0] - expected_value(t, map_profile(g, t, s))[0]) < 1e-9


@pytest.mark.parametrize("which", [unpruned, refined])
def test_payoff_equivalence_unpruned(which):
    g, t = original("21K3"), which("21K3")
    rng = np.random.default_rng(3)
    for _ in range(10):
        s = random_profile(g, rng)
        assert abs(expected_value(g, s)[0] - expected_value(t, map_profile(g, t, s))[0]) < 1e-9


def test_missing_counterpart(kuhn3):
    with pytest.raises(StructureError):
        infoset_correspondence(kuhn3, refined("21K4"))
    with pytest.raises(StructureError):
        map_profile(original("21K4"), refined("21K3"), {}, inverse=True)
