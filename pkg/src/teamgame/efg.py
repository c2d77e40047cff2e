"""Immutable extensive-form game trees stored as flat arrays.

Nodes live in one arena and are numbered in depth-first preorder, so every
parent id is smaller than the ids of its children. The per-node columns are
numpy arrays; action labels are plain strings. Trees are built through
:class:`TreeBuilder` and frozen with :meth:`TreeBuilder.build`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, NamedTuple, Sequence

import numpy as np


class Kind(enum.IntEnum):
    CHANCE = 0
    TEMP_CHANCE = 1
    TEAM = 2
    COORDINATOR = 3
    ADVERSARY = 4
    TERMINAL = 5


CHANCE_KINDS = (Kind.CHANCE, Kind.TEMP_CHANCE)
DECISION_KINDS = (Kind.TEAM, Kind.COORDINATOR, Kind.ADVERSARY)


@dataclass(frozen=True)
class PlayerId:
    kind: Kind
    index: int = -1

    def __str__(self) -> str:
        if self.kind == Kind.TEAM:
            return f"team{self.index}"
        if self.kind == Kind.COORDINATOR:
            return f"coord{self.index}"
        return self.kind.name.lower()


class TreeBuilder:
    """Accumulates nodes in depth-first order.

    Callers must add a node's whole subtree before adding its next sibling
    (plain recursive construction does this naturally).
    """

    def __init__(self) -> None:
        self.kind: list[int] = []
        self.member: list[int] = []
        self.parent: list[int] = []
        self.label: list[str] = []
        self.prob: list[float] = []
        self.payoff: list[float] = []
        self.adv_payoff: list[float] = []
        self.key: list[object] = []
        self.deal: list[int] = []
        self.virtual: list[int] = []
        self.depth: list[int] = []
        self.origin: list[int] = []

    def __len__(self) -> int:
        return len(self.kind)

    def add(self, parent: int, label: str, kind: Kind, *, member: int = -1,
            prob: float = np.nan, payoff: float | tuple[float, float] = 0,
            key: object = None, deal: int = -1, virtual: int = -1,
            origin: int = -1) -> int:
        nid = len(self.kind)
        self.kind.append(int(kind))
        self.member.append(member)
        self.parent.append(parent)
        self.label.append(label)
        self.prob.append(prob)
        if isinstance(payoff, tuple):
            self.payoff.append(payoff[0])
            self.adv_payoff.append(payoff[1])
        else:
            self.payoff.append(payoff)
            self.adv_payoff.append(-payoff)
        self.key.append(key)
        self.deal.append(deal)
        self.virtual.append(virtual)
        self.depth.append(self.depth[parent] + 1 if parent >= 0 else 0)
        self.origin.append(origin)
        return nid

    def build(self, *, ranks: Sequence[int] = (), deals: Sequence[tuple] = (),
              seats: Sequence[PlayerId] = (), name: str = "",
              source: "GameTree | None" = None) -> "GameTree":
        n = len(self.kind)
        parent = np.asarray(self.parent, dtype=np.int64).reshape(n)
        kinds = np.asarray(self.kind, dtype=np.int8).reshape(n)
        # children of each node are contiguous in a stable sort by parent
        order = np.argsort(parent[1:], kind="stable") + 1 if n > 1 else np.zeros(0, np.int64)
        counts = np.bincount(parent[1:], minlength=n) if n > 1 else np.zeros(n, np.int64)
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=ptr[1:])

        # dense infoset ids in order of first appearance
        keys: dict[object, int] = {}
        infoset = np.full(n, -1, dtype=np.int64)
        for i in range(n):
            k = self.key[i]
            if k is not None and kinds[i] in DECISION_KINDS:
                infoset[i] = keys.setdefault(k, len(keys))
        return GameTree(
            kinds=kinds,
            member=np.asarray(self.member, dtype=np.int16).reshape(n),
            parent=parent,
            child_ptr=ptr,
            child_ids=order.astype(np.int64),
            labels=tuple(self.label),
            prob=np.asarray(self.prob, dtype=np.float64).reshape(n),
            payoff=np.asarray(self.payoff, dtype=np.float64).reshape(n),
            adv_payoff=np.asarray(self.adv_payoff, dtype=np.float64).reshape(n),
            infoset=infoset,
            infoset_keys=tuple(keys),
            deal=np.asarray(self.deal, dtype=np.int32).reshape(n),
            virtual=np.asarray(self.virtual, dtype=np.int16).reshape(n),
            depth=np.asarray(self.depth, dtype=np.int64).reshape(n),
            origin=np.asarray(self.origin, dtype=np.int64).reshape(n),
            ranks=tuple(ranks),
            deals=tuple(deals),
            seats=tuple(seats),
            name=name,
            source=source,
        )


class InfoSet(NamedTuple):
    id: int
    owner: PlayerId
    actions: tuple[str, ...]
    members: tuple[int, ...]
    key: object


@dataclass(frozen=True, eq=False)
class GameTree:
    """Array-backed game tree.

    ``prob[i]`` is the probability of the edge into ``i`` when the parent is a
    chance-kind node (nan otherwise). ``payoff[i]`` is the team's utility in
    chips at terminal ``i`` and ``adv_payoff[i]`` the adversary's (its negation
    in any valid game). ``deal[i]``
    indexes ``deals`` (private ranks per seat) for every node below the root
    deal. ``virtual[i]`` is the hypothesised rank at coordinator nodes.
    Transformed trees keep a reference to the tree they were built from in
    ``source`` and map each node back to it through ``origin``.
    """

    kinds: np.ndarray
    member: np.ndarray
    parent: np.ndarray
    child_ptr: np.ndarray
    child_ids: np.ndarray
    labels: tuple[str, ...]
    prob: np.ndarray
    payoff: np.ndarray
    adv_payoff: np.ndarray
    infoset: np.ndarray
    infoset_keys: tuple
    deal: np.ndarray
    virtual: np.ndarray
    depth: np.ndarray
    origin: np.ndarray
    ranks: tuple[int, ...] = ()
    deals: tuple[tuple, ...] = ()
    seats: tuple[PlayerId, ...] = ()
    name: str = ""
    source: "GameTree | None" = None

    def __post_init__(self) -> None:
        for name in ("kinds", "member", "parent", "child_ptr", "child_ids",
                     "prob", "payoff", "adv_payoff", "infoset", "deal", "virtual", "depth", "origin"):
            getattr(self, name).flags.writeable = False

    def __len__(self) -> int:
        return len(self.kinds)

    @property
    def num_infosets(self) -> int:
        return len(self.infoset_keys)

    def children(self, node: int) -> np.ndarray:
        return self.child_ids[self.child_ptr[node]:self.child_ptr[node + 1]]

    def actions(self, node: int) -> tuple[str, ...]:
        return tuple(self.labels[c] for c in self.children(node))

    def owner(self, node: int) -> PlayerId:
        return PlayerId(Kind(int(self.kinds[node])), int(self.member[node]))

    def is_terminal(self, node: int) -> bool:
        return self.child_ptr[node] == self.child_ptr[node + 1]

    def chance_probs(self, node: int) -> np.ndarray:
        return self.prob[self.children(node)]

    def history(self, node: int) -> list[tuple[PlayerId, str]]:
        out = []
        while node > 0:
            par = int(self.parent[node])
            out.append((self.owner(par), self.labels[node]))
            node = par
        out.reverse()
        return out

    @cached_property
    def num_children(self) -> np.ndarray:
        return np.diff(self.child_ptr)

    @cached_property
    def levels(self) -> list[np.ndarray]:
        """Node ids grouped by depth, shallowest first."""
        d = self.depth
        order = np.argsort(d, kind="stable")
        bounds = np.searchsorted(d[order], np.arange(int(d.max()) + 2))
        return [order[bounds[k]:bounds[k + 1]] for k in range(len(bounds) - 1)]

    @cached_property
    def slot(self) -> np.ndarray:
        """Position of each node among its parent's children (root: 0)."""
        s = np.zeros(len(self), dtype=np.int64)
        cnt = self.num_children
        idx = np.arange(len(self.child_ids))
        starts = np.repeat(self.child_ptr[:-1], cnt)
        s[self.child_ids] = idx - starts
        return s

    @cached_property
    def infoset_table(self) -> tuple[InfoSet, ...]:
        members: list[list[int]] = [[] for _ in range(self.num_infosets)]
        for node in np.flatnonzero(self.infoset >= 0):
            members[self.infoset[node]].append(int(node))
        out = []
        for i, mem in enumerate(members):
            h = mem[0]
            out.append(InfoSet(i, self.owner(h), self.actions(h), tuple(mem),
                               self.infoset_keys[i]))
        return tuple(out)

    @cached_property
    def infoset_sizes(self) -> np.ndarray:
        """Number of actions per infoset."""
        sizes = np.zeros(self.num_infosets, dtype=np.int64)
        dec = np.flatnonzero(self.infoset >= 0)
        sizes[self.infoset[dec]] = self.num_children[dec]
        return sizes

    @cached_property
    def infoset_owner(self) -> np.ndarray:
        """Owner kind of each infoset."""
        own = np.zeros(self.num_infosets, dtype=np.int8)
        dec = np.flatnonzero(self.infoset >= 0)
        own[self.infoset[dec]] = self.kinds[dec]
        return own

    @cached_property
    def infoset_member(self) -> np.ndarray:
        own = np.zeros(self.num_infosets, dtype=np.int16)
        dec = np.flatnonzero(self.infoset >= 0)
        own[self.infoset[dec]] = self.member[dec]
        return own

    def infosets_of(self, kind: Kind, member: int | None = None) -> np.ndarray:
        mask = self.infoset_owner == kind
        if member is not None:
            mask &= self.infoset_member == member
        return np.flatnonzero(mask)

    @cached_property
    def chance_reach(self) -> np.ndarray:
        """Product of chance-kind edge probabilities from the root."""
        return self._reach(np.where(self._chance_edge, self.prob, 1.0))

    @cached_property
    def _chance_edge(self) -> np.ndarray:
        e = np.zeros(len(self), dtype=bool)
        e[1:] = np.isin(self.kinds[self.parent[1:]], CHANCE_KINDS)
        return e

    def _reach(self, edge: np.ndarray) -> np.ndarray:
        reach = np.ones(len(self))
        par = self.parent
        for nodes in self.levels[1:]:
            reach[nodes] = reach[par[nodes]] * edge[nodes]
        return reach

    def walk(self) -> Iterator[int]:
        """Depth-first preorder, which is id order."""
        return iter(range(len(self)))


# ---------------------------------------------------------------------------
# profiles and evaluation

Profile = Mapping[int, Sequence[float]]


def uniform_profile(game: GameTree) -> dict[int, np.ndarray]:
    return {i: np.full(k, 1.0 / k) for i, k in enumerate(game.infoset_sizes)}


def random_profile(game: GameTree, rng: np.random.Generator) -> dict[int, np.ndarray]:
    return {i: rng.dirichlet(np.ones(k)) for i, k in enumerate(game.infoset_sizes)}


def strategy_matrix(game: GameTree, profile: Profile | None, *, tol: float = 1e-9) -> np.ndarray:
    """Dense (num_infosets, max_actions) strategy table; missing rows uniform."""
    sizes = game.infoset_sizes
    width = int(sizes.max()) if len(sizes) else 1
    table = np.zeros((len(sizes), width))
    for i, k in enumerate(sizes):
        table[i, :k] = 1.0 / k
    if profile:
        for i, dist in profile.items():
            d = np.asarray(dist, dtype=float)
            k = sizes[i]
            if d.shape != (k,):
                raise ValueError(f"infoset {i}: expected {k} probabilities, got {d.shape}")
            if (d < -tol).any() or abs(d.sum() - 1.0) > tol:
                raise ValueError(f"infoset {i}: not a distribution: {d}")
            table[i, :k] = d
    return table


def edge_probabilities(game: GameTree, table: np.ndarray) -> np.ndarray:
    """Probability of the edge into each node (root gets 1)."""
    edge = np.ones(len(game))
    par = game.parent[1:]
    iset = game.infoset[par]
    dec = iset >= 0
    nodes = np.arange(1, len(game))
    edge[nodes[dec]] = table[iset[dec], game.slot[nodes[dec]]]
    ch = game._chance_edge
    edge[ch] = game.prob[ch]
    return edge


def expected_value(game: GameTree, profile: Profile | None = None) -> tuple[float, float]:
    """Exact (team, adversary) expected utility under a behavioural profile."""
    reach = game._reach(edge_probabilities(game, strategy_matrix(game, profile)))
    term = game.num_children == 0
    v = float(np.dot(reach[term], game.payoff[term]))
    return v, -v


def terminal_reach(game: GameTree, profile: Profile | None = None) -> np.ndarray:
    reach = game._reach(edge_probabilities(game, strategy_matrix(game, profile)))
    return reach[game.num_children == 0]


# ---------------------------------------------------------------------------
# validation and statistics

@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def add(self, msg: str) -> None:
        self.violations.append(msg)


def validate(game: GameTree, *, max_messages: int = 50) -> ValidationReport:
    """Check tree, chance, zero-sum and infoset invariants plus perfect recall."""
    rep = ValidationReport()

    def note(msg: str) -> None:
        if len(rep.violations) < max_messages:
            rep.add(msg)
        elif len(rep.violations) == max_messages:
            rep.add("... further violations suppressed")

    n = len(game)
    if n == 0:
        rep.add("empty tree")
        return rep
    if game.parent[0] != -1:
        note("root has a parent")
    if n > 1 and (game.parent[1:] >= np.arange(1, n)).any():
        note("node ids are not in preorder (parent id >= child id)")
    nch = game.num_children
    kinds = game.kinds
    for i in np.flatnonzero((nch == 0) != (kinds == Kind.TERMINAL)):
        note(f"node {i}: kind {Kind(int(kinds[i])).name} with {nch[i]} children")
    chance = np.flatnonzero(np.isin(kinds, CHANCE_KINDS))
    for i in chance:
        p = game.chance_probs(i)
        if np.isnan(p).any() or (p < 0).any() or (p > 1).any() or abs(p.sum() - 1.0) > 1e-9:
            note(f"node {i}: bad chance distribution {p}")
    nonchance_edges = np.flatnonzero(~game._chance_edge[1:]) + 1
    if not np.isnan(game.prob[nonchance_edges]).all():
        note("chance probabilities attached to non-chance edges")
    for b in np.flatnonzero(game.payoff + game.adv_payoff != 0):
        note(f"node {b}: payoff ({game.payoff[b]}, {game.adv_payoff[b]}) is not zero-sum")

    dec = np.flatnonzero(np.isin(kinds, DECISION_KINDS))
    for i in dec[game.infoset[dec] < 0]:
        note(f"decision node {i} has no infoset")

    for iset in game.infoset_table:
        owners = {game.owner(h) for h in iset.members}
        acts = {game.actions(h) for h in iset.members}
        if len(owners) > 1:
            note(f"infoset {iset.id}: mixed owners {owners}")
        if len(acts) > 1:
            note(f"infoset {iset.id}: differing action lists {acts}")

    # perfect recall: identical own-action sequences inside each infoset
    recall_kinds = {Kind.TEAM, Kind.ADVERSARY}
    if (kinds == Kind.COORDINATOR).any():
        rep.skipped.append("perfect recall not checked for the coordinator")
    own_seq = _own_sequences(game)
    for iset in game.infoset_table:
        if iset.owner.kind not in recall_kinds:
            continue
        seqs = {own_seq[h] for h in iset.members}
        if len(seqs) > 1:
            note(f"infoset {iset.id}: perfect recall violated")
    return rep


def _own_sequences(game: GameTree) -> dict[int, tuple]:
    """For every decision node, the (infoset, action) pairs its owner took before it."""
    out: dict[int, tuple] = {}
    # per owner, the sequence so far; walk in preorder using parent pointers
    seq_at: list[dict] = [dict() for _ in range(len(game))]  # node -> {owner: seq}
    for i in range(len(game)):
        if i == 0:
            cur: dict = {}
        else:
            par = int(game.parent[i])
            cur = seq_at[par]
            ps = game.infoset[par]
            if ps >= 0:
                owner = game.owner(par)
                cur = dict(cur)
                cur[owner] = cur.get(owner, ()) + ((int(ps), game.labels[i]),)
        seq_at[i] = cur
        if game.infoset[i] >= 0:
            out[i] = cur.get(game.owner(i), ())
    return out


class CountSummary(NamedTuple):
    total: int
    by_owner_kind: dict
    terminals: int
    infosets: int

    @property
    def team_nodes(self) -> int:
        return self.by_owner_kind.get("team", 0)

    @property
    def adversary_nodes(self) -> int:
        return self.by_owner_kind.get("adversary", 0)


def count_nodes(game: GameTree) -> CountSummary:
    kc = np.bincount(game.kinds.astype(np.int64), minlength=len(Kind))
    by = {
        "chance": int(kc[Kind.CHANCE]),
        "temp_chance": int(kc[Kind.TEMP_CHANCE]),
        "team": int(kc[Kind.TEAM] + kc[Kind.COORDINATOR]),
        "adversary": int(kc[Kind.ADVERSARY]),
    }
    return CountSummary(len(game), by, int(kc[Kind.TERMINAL]), game.num_infosets)


# ---------------------------------------------------------------------------
# dump format

def dump_lines(game: GameTree) -> Iterator[str]:
    """One tab-separated line per node in preorder.

    ``id  owner  infoset|-  history  actions|payoff`` where history is a
    space-separated list of ``owner:action`` pairs.
    """
    hist: list[str] = [""] * len(game)
    for i in range(len(game)):
        if i:
            par = int(game.parent[i])
            step = f"{game.owner(par)}:{game.labels[i]}"
            hist[i] = f"{hist[par]} {step}" if hist[par] else step
        iset = game.infoset[i]
        if game.is_terminal(i):
            tail = f"{game.payoff[i]:g},{game.adv_payoff[i]:g}"
        else:
            tail = ",".join(game.actions(i))
        yield f"{i}\t{game.owner(i)}\t{iset if iset >= 0 else '-'}\t{hist[i]}\t{tail}"


def write_dump(game: GameTree, path) -> None:
    with open(path, "w") as fh:
        for line in dump_lines(game):
            fh.write(line + "\n")


def single_terminal(payoff: int | tuple[int, int] = 0) -> GameTree:
    b = TreeBuilder()
    b.add(-1, "", Kind.TERMINAL, payoff=payoff)
    return b.build(name="terminal")
