"""Information-set merging and pruning for transformed trees.

Coordinator nodes share an information set when they act for the same
member, hypothesise the same rank and follow the same public history; the
adversary keeps its own card plus public history. Temporary chance moves and
the root deal are never part of a public history.

Pruning keeps all hypotheses only at temporary chance nodes reached before
any team member has acted on the path. Afterwards the hypothesis is fixed to
the card actually dealt to the acting member, leaving a single-branch
temporary chance node in place.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .efg import GameTree, Kind, TreeBuilder
from .transform import mpta


class StructureError(ValueError):
    pass


def info_key(game: GameTree, node: int) -> tuple:
    """Canonical information-set key of a transformed decision node."""
    src = game.source
    if src is None:
        raise StructureError("info keys need the source tree of a transformed game")
    orig = int(game.origin[node])
    key = src.infoset_keys[src.infoset[orig]]
    kind = game.kinds[node]
    if kind == Kind.COORDINATOR:
        _, member, _card, seen, pub = key
        return ("coordinator", member, int(game.virtual[node]), seen, pub)
    if kind == Kind.ADVERSARY:
        return key
    raise StructureError(f"node {node} is not a decision node")


def merge_infosets(game: GameTree) -> GameTree:
    """Assign dense information-set ids from :func:`info_key`."""
    keys: dict[tuple, int] = {}
    acts: list[tuple] = []
    infoset = np.full(len(game), -1, dtype=np.int64)
    for node in np.flatnonzero(np.isin(game.kinds, (Kind.COORDINATOR, Kind.ADVERSARY))):
        k = info_key(game, int(node))
        i = keys.get(k)
        a = game.actions(node)
        if i is None:
            i = keys[k] = len(keys)
            acts.append(a)
        elif acts[i] != a:
            raise StructureError(f"infoset {k}: action lists {acts[i]} vs {a}")
        infoset[node] = i
    infoset.flags.writeable = False
    return dataclasses.replace(game, infoset=infoset, infoset_keys=tuple(keys))


def prune(game: GameTree) -> GameTree:
    """Drop hypothesis branches once some team member has acted on the path."""
    if not game.deals or (game.deal[1:] < 0).any():
        raise StructureError("pruning needs the per-branch deal annotation")
    b = TreeBuilder()
    keys = game.infoset_keys
    # (old node, new parent, acted so far)
    stack = [(0, -1, False)]
    while stack:
        old, par, acted = stack.pop()
        kind = int(game.kinds[old])
        i = game.infoset[old]
        nid = b.add(par, game.labels[old], Kind(kind), member=int(game.member[old]),
                    prob=float(game.prob[old]),
                    payoff=(float(game.payoff[old]), float(game.adv_payoff[old])),
                    key=keys[i] if i >= 0 else None, deal=int(game.deal[old]),
                    virtual=int(game.virtual[old]), origin=int(game.origin[old]))
        kids = game.children(old)
        if kind == Kind.TEMP_CHANCE and acted:
            actual = game.deals[game.deal[old]][game.member[old]]
            kids = [k for k in kids if game.virtual[k] == actual]
        if kind == Kind.COORDINATOR:
            acted = True
        for c in reversed(kids):
            stack.append((int(c), nid, acted))
    return b.build(ranks=game.ranks, deals=game.deals, seats=game.seats,
                   name=game.name, source=game.source)


def transform(original: GameTree, *, prune_tree: bool = True) -> GameTree:
    """Full pipeline: rewrite, optionally prune, then merge information sets."""
    return merge_infosets(mpta(original, prune=prune_tree))
