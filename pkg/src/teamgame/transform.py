"""Rewrite an adversarial team game into a coordinator-vs-adversary game.

Every team-member decision becomes a temporary chance node whose branches
hypothesise the acting member's private rank (one branch per rank); each
branch leads to a coordinator node with the member's original actions. The
root deal, adversary nodes and terminals are copied unchanged.

Temporary-chance branches put probability 1 on the rank actually dealt to
the acting member on that root branch and 0 elsewhere, so payoffs computed
from the real deal stay consistent with the coordinator's hypothesis.
"""

from __future__ import annotations

import numpy as np

from .efg import GameTree, Kind, PlayerId, TreeBuilder, ValidationReport, validate


class TransformError(ValueError):
    pass


def check_atmg(game: GameTree) -> None:
    """Raise unless ``game`` is an untransformed team-vs-adversary game."""
    kinds = set(np.unique(game.kinds).tolist())
    if Kind.TEMP_CHANCE in kinds or Kind.COORDINATOR in kinds:
        raise TransformError("input is already transformed")
    if Kind.TEAM not in kinds:
        raise TransformError("input has no team-member decisions")
    if game.source is not None:
        raise TransformError("input is already transformed")
    if not game.deals or not game.ranks:
        raise TransformError("input lacks the per-deal card annotation")
    if game.kinds[0] != Kind.CHANCE:
        raise TransformError("root must be the dealing chance node")
    rep = validate(game)
    if not rep.ok:
        raise TransformError("input is not a valid game: " + "; ".join(rep.violations[:3]))


def mpta(original: GameTree, *, prune: bool = False) -> GameTree:
    """Transform ``original``; with ``prune`` apply the pruning rule on the fly.

    The unpruned output keeps every temporary chance node fully branched.
    Decision nodes get singleton information sets; see
    :func:`teamgame.refine.merge_infosets`.
    """
    check_atmg(original)
    return _Rewriter(original, prune).run()


class _Rewriter:
    def __init__(self, src: GameTree, prune: bool):
        self.src = src
        self.prune = prune
        self.b = TreeBuilder()
        self.ranks = tuple(src.ranks)

    def run(self) -> GameTree:
        src, b = self.src, self.b
        payoff, adv_payoff = src.payoff, src.adv_payoff
        # (is_coordinator, old node, new parent, edge label, edge prob, acted, virtual)
        stack = [(False, 0, -1, "", np.nan, False, -1)]
        while stack:
            coord, old, par, label, prob, acted, virtual = stack.pop()
            kind = int(src.kinds[old])
            deal = int(src.deal[old])
            member = int(src.member[old])
            if coord:
                nid = b.add(par, label, Kind.COORDINATOR, member=member, prob=prob,
                            key=("node", len(b)), deal=deal, virtual=virtual, origin=old)
                acted = True
            elif kind == Kind.TEAM:
                tc = b.add(par, label, Kind.TEMP_CHANCE, member=member, prob=prob,
                           deal=deal, origin=old)
                actual = src.deals[deal][member]
                ranks = (actual,) if self.prune and acted else self.ranks
                for r in reversed(ranks):
                    stack.append((True, old, tc, f"v{r}", 1.0 if r == actual else 0.0, acted, r))
                continue
            else:
                key = ("node", len(b)) if kind != Kind.TERMINAL else None
                nid = b.add(par, label, Kind(kind), member=member, prob=prob,
                            payoff=(float(payoff[old]), float(adv_payoff[old])),
                            key=key, deal=deal, origin=old)
            kids = src.children(old)
            for c in kids[::-1]:
                c = int(c)
                stack.append((False, c, nid, src.labels[c], src.prob[c], acted, -1))
        return b.build(ranks=self.ranks, deals=src.deals, seats=_seats(src),
                       name=src.name, source=src)


def _seats(src: GameTree) -> tuple[PlayerId, ...]:
    return tuple(PlayerId(Kind.COORDINATOR, s.index) if s.kind == Kind.TEAM else s
                 for s in src.seats)


def check_pipb(game: GameTree) -> ValidationReport:
    """Check the private-information pre-branch structure of a transformed tree.

    Every coordinator node must hang below a temporary chance node. A fully
    branched temporary chance node must expose one coordinator child per rank,
    all offering the acting member's action set, i.e. ``r * |A|``
    (hypothesised rank, action) pairs. Single-branch nodes left by pruning
    are exempt from the pair count.
    """
    rep = ValidationReport()
    kinds = game.kinds
    coords = np.flatnonzero(kinds == Kind.COORDINATOR)
    bad = coords[kinds[game.parent[coords]] != Kind.TEMP_CHANCE]
    for c in bad[:20]:
        rep.add(f"coordinator node {c} has a {Kind(int(kinds[game.parent[c]])).name} parent")
    if len(bad) > 20:
        rep.add(f"... {len(bad) - 20} more coordinator nodes without a temporary chance parent")
    r = len(game.ranks)
    full = 0
    for tc in np.flatnonzero(kinds == Kind.TEMP_CHANCE):
        kids = game.children(tc)
        if len(kids) == 1:
            continue
        full += 1
        acts = {game.actions(k) for k in kids}
        virt = sorted(int(game.virtual[k]) for k in kids)
        if (kinds[kids] != Kind.COORDINATOR).any():
            rep.add(f"temporary chance node {tc} has non-coordinator children")
        if virt != sorted(game.ranks) or len(acts) != 1:
            rep.add(f"temporary chance node {tc}: ranks {virt}, action sets {acts}")
            continue
        (a,) = acts
        if game.source is not None:
            orig = game.origin[tc]
            if tuple(a) != game.source.actions(orig):
                rep.add(f"temporary chance node {tc}: actions differ from the member's")
        if len(kids) * len(a) != r * len(a):
            rep.add(f"temporary chance node {tc}: {len(kids) * len(a)} pairs, expected {r * len(a)}")
    rep.skipped.append(f"{full} full pre-branches checked")
    return rep


def pipb_pairs(game: GameTree, temp_chance: int) -> int:
    """Number of (hypothesised rank, action) pairs offered below a temporary chance node."""
    return int(sum(game.num_children[k] for k in game.children(temp_chance)))
