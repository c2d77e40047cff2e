"""CFR and CFR+ for two-sided zero-sum trees, plus best responses.

The team side (team members or the coordinator) is player 0 and the
adversary is player 1. Traversals are vectorised level by level over a
compiled copy of the tree that drops every node reached with chance
probability zero.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .efg import CHANCE_KINDS, GameTree, Kind, Profile, strategy_matrix

TEAM_SIDE = (Kind.TEAM, Kind.COORDINATOR)


class SolverError(ValueError):
    pass


def side_of(kinds: np.ndarray) -> np.ndarray:
    """0 for team-side decisions, 1 for the adversary, -1 otherwise."""
    s = np.full(kinds.shape, -1, dtype=np.int8)
    s[np.isin(kinds, TEAM_SIDE)] = 0
    s[kinds == Kind.ADVERSARY] = 1
    return s


class Compiled:
    """Breadth-first, chance-reachable view of a tree used by every traversal."""

    def __init__(self, game: GameTree):
        keep = game.chance_reach > 0
        ids = np.flatnonzero(keep)
        order = ids[np.argsort(game.depth[ids], kind="stable")]
        self.game = game
        self.nodes = order                      # compiled index -> tree id
        n = len(order)
        pos = np.full(len(game), -1, dtype=np.int64)
        pos[order] = np.arange(n)
        par = game.parent[order]
        self.parent = np.where(par >= 0, pos[np.maximum(par, 0)], -1)
        depth = game.depth[order]
        self.bounds = np.searchsorted(depth, np.arange(int(depth[-1]) + 2))
        nch = np.bincount(self.parent[1:], minlength=n) if n > 1 else np.zeros(n, np.int64)
        self.nch = nch
        self.kinds = game.kinds[order]
        self.side = side_of(self.kinds)
        self.infoset = game.infoset[order]
        self.slot = game.slot[order]
        self.chance_prob = np.where(np.isin(self.kinds[np.maximum(self.parent, 0)], CHANCE_KINDS),
                                    game.prob[order], np.nan)
        self.chance_prob[0] = 1.0
        term = nch == 0
        self.terminal = term
        self.payoff = (game.payoff[order] * term, game.adv_payoff[order] * term)
        self.width = int(game.infoset_sizes.max()) if game.num_infosets else 1
        self.num_infosets = game.num_infosets

        # per level: slice of nodes, internal mask, reduceat offsets into next level
        self.levels = []
        for d in range(len(self.bounds) - 1):
            lo, hi = int(self.bounds[d]), int(self.bounds[d + 1])
            if lo == hi:
                continue
            cnt = nch[lo:hi]
            internal = np.flatnonzero(cnt > 0) + lo
            offsets = np.concatenate(([0], np.cumsum(cnt[cnt > 0])[:-1])).astype(np.int64)
            self.levels.append((lo, hi, internal, offsets, nch[internal]))

        # edges out of decision nodes, for each side
        child_par = self.parent[1:]
        self.edge_child = np.arange(1, n)
        self.edge_side = self.side[child_par]
        self.edge_flat = np.where(self.infoset[child_par] >= 0,
                                  self.infoset[child_par] * self.width + self.slot[1:], -1)
        self.decision = [np.flatnonzero(self.side == p) for p in (0, 1)]
        self._check_levels()

    def _check_levels(self) -> None:
        dec = np.flatnonzero(self.infoset >= 0)
        lv = np.searchsorted(self.bounds, dec, side="right") - 1
        first = np.full(self.num_infosets, -1)
        first[self.infoset[dec]] = lv
        if (first[self.infoset[dec]] != lv).any():
            raise SolverError("an information set spans several depths; level traversal unsupported")

    def edges(self, table: np.ndarray) -> np.ndarray:
        """Probability of each compiled edge; index 0 (root) is 1."""
        e = self.chance_prob.copy()
        dec = self.edge_flat >= 0
        e[1:][dec] = table.reshape(-1)[self.edge_flat[dec]]
        return e

    def reaches(self, edge: np.ndarray, player: int) -> tuple[np.ndarray, np.ndarray]:
        """(own reach, everyone-else reach incl. chance) for ``player``."""
        n = len(self.nodes)
        own = np.ones(n)
        other = np.ones(n)
        mine = np.zeros(n, dtype=bool)
        mine[1:] = self.edge_side == player
        e_own = np.where(mine, edge, 1.0)
        e_oth = np.where(mine, 1.0, edge)
        for lo, hi, internal, _, cnt in self.levels:
            if not len(internal):
                continue
            nlo = hi
            nhi = nlo + int(cnt.sum())
            own[nlo:nhi] = np.repeat(own[internal], cnt) * e_own[nlo:nhi]
            other[nlo:nhi] = np.repeat(other[internal], cnt) * e_oth[nlo:nhi]
        return own, other

    def values(self, edge: np.ndarray, player: int) -> np.ndarray:
        """Expected utility for ``player`` below every node (not reach-weighted)."""
        v = self.payoff[player].astype(float)
        for lo, hi, internal, offsets, cnt in reversed(self.levels):
            if not len(internal):
                continue
            nlo = hi
            nhi = nlo + int(cnt.sum())
            v[internal] = np.add.reduceat(edge[nlo:nhi] * v[nlo:nhi], offsets)
        return v


def compiled(game: GameTree) -> Compiled:
    c = game.__dict__.get("_compiled")
    if c is None:
        c = Compiled(game)
        game.__dict__["_compiled"] = c
    return c


def check_two_sided(game: GameTree) -> None:
    members = set(np.unique(game.member[game.kinds == Kind.TEAM]).tolist())
    if len(members) > 1:
        raise SolverError(
            f"game has {len(members) + 1} strategic players; transform it to two first")


# ---------------------------------------------------------------------------
# regret matching

def regret_matching(regrets: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    """Rows proportional to positive regret; uniform where none is positive."""
    pos = np.maximum(regrets, 0.0)
    tot = pos.sum(axis=1, keepdims=True)
    width = regrets.shape[1]
    valid = np.arange(width)[None, :] < sizes[:, None]
    uni = valid / np.maximum(sizes, 1)[:, None]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(tot > 0, pos / np.where(tot > 0, tot, 1.0), uni)
    return out


@dataclass
class SolverState:
    regrets: np.ndarray
    strategy_sum: np.ndarray
    sizes: np.ndarray
    owner_side: np.ndarray
    variant: str = "cfrplus"
    t: int = 0

    @classmethod
    def zeros(cls, game: GameTree, variant: str = "cfrplus") -> "SolverState":
        if variant not in ("cfr", "cfrplus"):
            raise SolverError(f"unknown solver variant {variant!r}")
        width = int(game.infoset_sizes.max()) if game.num_infosets else 1
        shape = (game.num_infosets, width)
        return cls(np.zeros(shape), np.zeros(shape), game.infoset_sizes.copy(),
                   side_of(game.infoset_owner), variant)

    def copy(self) -> "SolverState":
        return SolverState(self.regrets.copy(), self.strategy_sum.copy(), self.sizes,
                           self.owner_side, self.variant, self.t)

    def current_table(self) -> np.ndarray:
        return regret_matching(self.regrets, self.sizes)

    def average_table(self) -> np.ndarray:
        return _normalise(self.strategy_sum, self.sizes)

    def average_profile(self) -> dict[int, np.ndarray]:
        return table_to_profile(self.average_table(), self.sizes)

    def current_profile(self) -> dict[int, np.ndarray]:
        return table_to_profile(self.current_table(), self.sizes)


def _normalise(weights: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    tot = weights.sum(axis=1, keepdims=True)
    width = weights.shape[1]
    valid = np.arange(width)[None, :] < sizes[:, None]
    uni = valid / np.maximum(sizes, 1)[:, None]
    return np.where(tot > 0, weights / np.where(tot > 0, tot, 1.0), uni)


def table_to_profile(table: np.ndarray, sizes: np.ndarray) -> dict[int, np.ndarray]:
    return {i: table[i, :k].copy() for i, k in enumerate(sizes)}


def current_policy(state: SolverState, infoset: int) -> np.ndarray:
    k = state.sizes[infoset]
    return regret_matching(state.regrets[infoset:infoset + 1], state.sizes[infoset:infoset + 1])[0, :k]


def iterate(game: GameTree, state: SolverState) -> SolverState:
    """One alternating-update iteration, in place; returns ``state``."""
    check_two_sided(game)
    c = compiled(game)
    state.t += 1
    weight = float(state.t) if state.variant == "cfrplus" else 1.0
    size = c.num_infosets * c.width
    for p in (0, 1):
        table = state.current_table()
        edge = c.edges(table)
        own, other = c.reaches(edge, p)
        v = c.values(edge, p)
        sel = c.edge_side == p
        child = c.edge_child[sel]
        flat = c.edge_flat[sel]
        par = c.parent[child]
        delta = np.bincount(flat, weights=other[par] * (v[child] - v[par]), minlength=size)
        # own reach times the probability actually played on each edge
        played = np.bincount(flat, weights=own[par] * edge[child], minlength=size)
        state.regrets += delta.reshape(state.regrets.shape)
        if state.variant == "cfrplus":
            np.maximum(state.regrets, 0.0, out=state.regrets)
        state.strategy_sum += weight * played.reshape(state.strategy_sum.shape)
    return state


# ---------------------------------------------------------------------------
# evaluation

def _table(game: GameTree, profile) -> np.ndarray:
    if isinstance(profile, np.ndarray):
        return profile
    return strategy_matrix(game, profile)


def profile_value(game: GameTree, profile: Profile | np.ndarray | None) -> float:
    """Team-side expected value (reachable part of the tree only)."""
    c = compiled(game)
    edge = c.edges(_table(game, profile))
    return float(c.values(edge, 0)[0])


def best_response_value(game: GameTree, profile: Profile | np.ndarray | None, responder: int,
                        *, return_policy: bool = False):
    """Value ``responder`` (0 team side, 1 adversary) gets by best responding.

    Actions are chosen per information set against the reach of everybody
    else (chance included). This is the exact best response for a
    perfect-recall responder.
    """
    c = compiled(game)
    table = _table(game, profile)
    edge = c.edges(table)
    _, other = c.reaches(edge, responder)
    v = c.payoff[responder].astype(float)
    choice = np.full(c.num_infosets, -1, dtype=np.int64)
    size = c.num_infosets * c.width
    for lo, hi, internal, offsets, cnt in reversed(c.levels):
        if not len(internal):
            continue
        nlo = hi
        nhi = nlo + int(cnt.sum())
        kids = np.arange(nlo, nhi)
        mine = c.side[c.parent[kids]] == responder
        w = np.where(mine, 1.0, edge[nlo:nhi])
        if mine.any():
            mk = kids[mine]
            q = np.bincount(c.edge_flat[mk - 1], weights=other[c.parent[mk]] * v[mk],
                            minlength=size).reshape(c.num_infosets, c.width)
            isets = np.unique(c.infoset[c.parent[mk]])
            sizes = game.infoset_sizes[isets]
            qi = q[isets]
            qi[np.arange(c.width)[None, :] >= sizes[:, None]] = -np.inf
            choice[isets] = np.argmax(qi, axis=1)
            pick = c.slot[mk] == choice[c.infoset[c.parent[mk]]]
            w = w.copy()
            w[np.flatnonzero(mine)] = pick.astype(float)
        v[internal] = np.add.reduceat(w * v[nlo:nhi], offsets)
    if return_policy:
        return float(v[0]), choice
    return float(v[0])


def exploitability(game: GameTree, profile: Profile | np.ndarray | None) -> float:
    """Sum of both sides' best-response gains, in chips."""
    return best_response_value(game, profile, 0) + best_response_value(game, profile, 1)


# ---------------------------------------------------------------------------
# driver

@dataclass
class ExploitabilityPoint:
    iteration: int
    seconds: float
    exploitability: float


def log_schedule(iterations: int) -> list[int]:
    """1, 2, 4, ... up to ``iterations``, plus the final iteration."""
    out = []
    k = 1
    while k <= iterations:
        out.append(k)
        k *= 2
    if iterations and out[-1] != iterations:
        out.append(iterations)
    return out


@dataclass
class SolveResult:
    state: SolverState
    points: list[ExploitabilityPoint] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def final_exploitability(self) -> float:
        return self.points[-1].exploitability if self.points else float("nan")


def solve(game: GameTree, iterations: int, *, variant: str = "cfrplus",
          seconds: float | None = None, target: float | None = None,
          schedule: Iterable[int] | None = None,
          clock: Callable[[], float] = time.perf_counter) -> SolveResult:
    """Run up to ``iterations`` iterations, logging exploitability of the average.

    Stops early when ``target`` exploitability is reached at a logged point
    or the ``seconds`` budget is used up (checked every iteration; the final
    iteration is then logged too).
    """
    check_two_sided(game)
    compiled(game)
    state = SolverState.zeros(game, variant)
    marks = set(schedule if schedule is not None else log_schedule(iterations))
    res = SolveResult(state)
    spent = 0.0
    for it in range(1, iterations + 1):
        t0 = clock()
        iterate(game, state)
        spent += clock() - t0
        out_of_time = seconds is not None and spent >= seconds
        if it in marks or it == iterations or out_of_time:
            e = exploitability(game, state.average_table())
            res.points.append(ExploitabilityPoint(it, spent, e))
            if target is not None and e < target:
                break
        if out_of_time:
            break
    res.seconds = spent
    return res
