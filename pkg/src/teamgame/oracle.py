"""Brute-force ground truth for small team games.

Two routes to the team-maxmin value with correlation:

* :func:`payoff_matrix` + :func:`solve_matrix_game` materialise the full
  normal form (joint team plans against adversary plans). Only tiny games fit.
* :func:`solve_tmecor` keeps the adversary in sequence form and grows a set
  of reduced joint team plans by column generation. Each round solves a
  small LP and prices a new column with an exact joint best response; the
  gap between the two bounds certifies the value.

:func:`map_profile` and :func:`verify_equivalence` relate strategies of an
original game to its transformed counterpart.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .efg import GameTree, Kind, PlayerId, Profile, strategy_matrix
from .solve import best_response_value, exploitability, profile_value
from .refine import StructureError


class OracleError(RuntimeError):
    pass


DEFAULT_CAP = 10 ** 7


# ---------------------------------------------------------------------------
# plans

def player_infosets(game: GameTree, player: PlayerId) -> np.ndarray:
    member = player.index if player.kind in (Kind.TEAM, Kind.COORDINATOR) else None
    return game.infosets_of(player.kind, member)


def enumerate_plans(game: GameTree, player: PlayerId, *, cap: int = DEFAULT_CAP) -> list[dict[int, int]]:
    """All normal-form plans of ``player`` (infoset id -> action index).

    Lexicographic over the player's infosets in id order, last infoset
    varying fastest.
    """
    isets = player_infosets(game, player)
    sizes = [int(game.infoset_sizes[i]) for i in isets]
    count = math.prod(sizes)
    if count > cap:
        raise OracleError(f"{player} has {count} plans, above the cap of {cap}")
    return [dict(zip(isets.tolist(), combo))
            for combo in itertools.product(*[range(k) for k in sizes])]


def team_players(game: GameTree) -> list[PlayerId]:
    kinds = (Kind.TEAM, Kind.COORDINATOR)
    members = sorted(set(game.member[np.isin(game.kinds, kinds)].tolist()))
    kind = Kind.TEAM if (game.kinds == Kind.TEAM).any() else Kind.COORDINATOR
    return [PlayerId(kind, m) for m in members]


ADVERSARY = PlayerId(Kind.ADVERSARY)


class _Paths:
    """Per-terminal chance weight and the (infoset, action) pairs of each player."""

    def __init__(self, game: GameTree):
        self.game = game
        term = np.flatnonzero(game.num_children == 0)
        reach = game.chance_reach
        keep = term[reach[term] > 0]
        self.terminals = keep
        self.weight = reach[keep] * game.payoff[keep]
        self.players = team_players(game) + [ADVERSARY]
        owner_of = {}
        for i, p in enumerate(self.players):
            for iset in player_infosets(game, p):
                owner_of[int(iset)] = i
        self.owner_of = owner_of
        pairs: list[list[list[tuple[int, int]]]] = []
        for z in keep:
            per = [[] for _ in self.players]
            node = int(z)
            while node > 0:
                par = int(game.parent[node])
                iset = int(game.infoset[par])
                if iset >= 0:
                    per[owner_of[iset]].append((iset, int(game.slot[node])))
                node = par
            for lst in per:
                lst.reverse()
            pairs.append(per)
        self.pairs = pairs

    def consistency(self, player_idx: int, plans: Sequence[dict[int, int]]) -> np.ndarray:
        """C[plan, terminal] = 1 when the plan takes every own action on the path."""
        out = np.ones((len(plans), len(self.terminals)))
        for j, per in enumerate(self.pairs):
            seq = per[player_idx]
            if not seq:
                continue
            for p, plan in enumerate(plans):
                for iset, a in seq:
                    if plan.get(iset) != a:
                        out[p, j] = 0.0
                        break
        return out


def payoff_matrix(game: GameTree, *, cap: int = DEFAULT_CAP) -> tuple[np.ndarray, list, list]:
    """Team utility for every (joint team plan, adversary plan) pair.

    Returns ``(M, joint_plans, adversary_plans)`` with joint plans ordered
    lexicographically over members.
    """
    paths = _Paths(game)
    team = team_players(game)
    per_member = [enumerate_plans(game, p, cap=cap) for p in team]
    adv = enumerate_plans(game, ADVERSARY, cap=cap)
    rows = math.prod(len(x) for x in per_member)
    if rows * len(adv) > cap:
        raise OracleError(f"payoff matrix {rows}x{len(adv)} exceeds the cap of {cap}")
    cons = [paths.consistency(i, plans) for i, plans in enumerate(per_member)]
    c_adv = paths.consistency(len(team), adv)
    joint = np.ones((1, len(paths.terminals)))
    for c in cons:
        joint = (joint[:, None, :] * c[None, :, :]).reshape(-1, len(paths.terminals))
    m = (joint * paths.weight) @ c_adv.T
    joint_plans = list(itertools.product(*per_member))
    return m, joint_plans, adv


# ---------------------------------------------------------------------------
# matrix games

@dataclass
class MatrixSolution:
    value: float
    row: np.ndarray
    col: np.ndarray
    gap: float
    iterations: int
    converged: bool


def matrix_bounds(m: np.ndarray, row: np.ndarray, col: np.ndarray) -> tuple[float, float]:
    """(row player's guaranteed value, column player's guaranteed cap)."""
    return float((row @ m).min()), float((m @ col).max())


def solve_matrix_game(m, *, tol: float = 1e-6, max_iter: int = 1_000_000,
                      check_every: int = 64) -> MatrixSolution:
    """Max-min of ``row^T M col`` by alternating regret matching+.

    Runs until the duality gap of the linearly weighted averages drops
    below ``tol`` or ``max_iter`` is reached; ``converged`` tells which.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError("payoff matrix must be a non-empty 2-d array")
    nr, nc = m.shape
    rr = np.zeros(nr)
    rc = np.zeros(nc)
    ar = np.zeros(nr)
    ac = np.zeros(nc)
    x = np.full(nr, 1.0 / nr)
    y = np.full(nc, 1.0 / nc)
    gap = np.inf
    it = 0
    row = x
    col = y
    for it in range(1, max_iter + 1):
        u = m @ y
        rr = np.maximum(rr + u - x @ u, 0.0)
        s = rr.sum()
        x = rr / s if s > 0 else np.full(nr, 1.0 / nr)
        ar += it * x
        w = x @ m
        rc = np.maximum(rc - w + w @ y, 0.0)
        s = rc.sum()
        y = rc / s if s > 0 else np.full(nc, 1.0 / nc)
        ac += it * y
        if it % check_every == 0 or it == max_iter:
            row, col = ar / ar.sum(), ac / ac.sum()
            lo, hi = matrix_bounds(m, row, col)
            gap = hi - lo
            if gap < tol:
                break
    row, col = ar / ar.sum(), ac / ac.sum()
    lo, hi = matrix_bounds(m, row, col)
    gap = hi - lo
    return MatrixSolution(0.5 * (lo + hi), row, col, gap, it, gap < tol)


# ---------------------------------------------------------------------------
# TMECor by column generation

@dataclass
class PlanDistribution:
    support: list[tuple[object, float]]

    def total(self) -> float:
        return float(sum(p for _, p in self.support))


@dataclass
class TmecorSolution:
    value: float
    gap: float
    team: PlanDistribution
    adversary: PlanDistribution
    adversary_profile: dict[int, np.ndarray]
    rounds: int
    lower: float
    upper: float
    history: list[tuple[float, float]] = field(default_factory=list)


class _Components:
    """Independent pieces of one member's reduced plans.

    Each component is a root information set plus everything the member can
    reach after it. Component options are its reduced partial plans.
    """

    def __init__(self, game: GameTree, player: PlayerId, paths: _Paths, idx: int,
                 cap: int = DEFAULT_CAP):
        isets = set(player_infosets(game, player).tolist())
        parent_seq: dict[int, tuple[int, int] | None] = {}
        for per in paths.pairs:
            seq = per[idx]
            prev = None
            for iset, a in seq:
                parent_seq.setdefault(iset, prev)
                prev = (iset, a)
        # infosets never reached by a chance-possible path still need a plan entry
        for iset in isets:
            parent_seq.setdefault(iset, None)
        children: dict[tuple[int, int] | None, list[int]] = {}
        for iset, ps in parent_seq.items():
            children.setdefault(ps, []).append(iset)
        for v in children.values():
            v.sort()
        self.sizes = {i: int(game.infoset_sizes[i]) for i in isets}
        self.roots = children.get(None, [])
        self.children = children
        for r in self.roots:
            n = self._count(r)
            if n > cap:
                raise OracleError(f"a component with {n} partial plans exceeds the cap of {cap}")
        self.options = [self._expand(r) for r in self.roots]
        comp_of = {}
        for k, r in enumerate(self.roots):
            stack = [r]
            while stack:
                i = stack.pop()
                comp_of[i] = k
                for a in range(self.sizes[i]):
                    stack.extend(children.get((i, a), []))
        self.comp_of = comp_of

    def _count(self, iset: int) -> int:
        return sum(math.prod(self._count(c) for c in self.children.get((iset, a), []))
                   for a in range(self.sizes[iset]))

    def _expand(self, iset: int) -> list[dict[int, int]]:
        out = []
        for a in range(self.sizes[iset]):
            subs = [self._expand(c) for c in self.children.get((iset, a), [])]
            for combo in itertools.product(*subs):
                plan = {iset: a}
                for part in combo:
                    plan.update(part)
                out.append(plan)
        return out

    def count(self) -> int:
        return math.prod(self._count(r) for r in self.roots)

    def plans(self, cap: int) -> list[dict[int, int]]:
        if self.count() > cap:
            raise OracleError(f"{self.count()} reduced plans exceed the cap of {cap}")
        out = []
        for combo in itertools.product(*self.options):
            plan: dict[int, int] = {}
            for part in combo:
                plan.update(part)
            out.append(plan)
        return out


class _TeamSpace:
    """Reduced joint plans: members 0..m-2 enumerated, the last by components."""

    def __init__(self, game: GameTree, paths: _Paths, cap: int):
        team = team_players(game)
        self.team = team
        comps = [_Components(game, p, paths, i, cap) for i, p in enumerate(team)]
        zt = len(paths.terminals)
        n_head = math.prod(c.count() for c in comps[:-1])
        if n_head > cap or n_head * zt > 5 * cap:
            raise OracleError(f"{n_head} joint plans for leading members over {zt} terminals "
                              f"exceed the cap of {cap}")
        head = [c.plans(cap) for c in comps[:-1]]
        c_head = np.ones((1, zt))
        for i, plans in enumerate(head):
            c = paths.consistency(i, plans)
            c_head = (c_head[:, None, :] * c[None, :, :]).reshape(-1, zt)
        self.head_plans = list(itertools.product(*head)) if head else [()]
        self.c_head = c_head
        last = comps[-1]
        self.last = last
        li = len(team) - 1
        # terminal -> component of the last member touched on its path (-1: none)
        comp_z = np.full(zt, -1)
        for j, per in enumerate(paths.pairs):
            if per[li]:
                comp_z[j] = last.comp_of[per[li][0][0]]
        self.comp_z = comp_z
        blocks = []
        for k, opts in enumerate(last.options):
            d = np.zeros((zt, len(opts)))
            zs = np.flatnonzero(comp_z == k)
            for o, plan in enumerate(opts):
                for j in zs:
                    if all(plan.get(i) == a for i, a in paths.pairs[j][li]):
                        d[j, o] = 1.0
            blocks.append(d)
        self.blocks = blocks
        self.offsets = np.cumsum([0] + [b.shape[1] for b in blocks])
        self.d = np.hstack(blocks) if blocks else np.zeros((zt, 0))
        self.none_mask = (comp_z == -1).astype(float)

    def best_response(self, zw: np.ndarray) -> tuple[float, tuple[int, tuple[int, ...]]]:
        """Max over joint plans of sum_z zw[z] * consistency; zw already weighted."""
        base = self.c_head @ (zw * self.none_mask)
        u = self.c_head @ (zw[:, None] * self.d)
        total = base.copy()
        picks = []
        for k in range(len(self.blocks)):
            seg = u[:, self.offsets[k]:self.offsets[k + 1]]
            picks.append(np.argmax(seg, axis=1))
            total += seg.max(axis=1)
        h = int(np.argmax(total))
        return float(total[h]), (h, tuple(int(p[h]) for p in picks))

    def column(self, plan: tuple[int, tuple[int, ...]]) -> np.ndarray:
        """Consistency of a joint plan with every terminal."""
        h, opts = plan
        c = self.c_head[h].copy()
        last = np.where(self.comp_z == -1, 1.0, 0.0)
        for k, o in enumerate(opts):
            last += self.blocks[k][:, o]
        return c * last

    def joint_plan(self, plan: tuple[int, tuple[int, ...]]) -> tuple[dict[int, int], ...]:
        h, opts = plan
        tail: dict[int, int] = {}
        for k, o in enumerate(opts):
            tail.update(self.last.options[k][o])
        return tuple(self.head_plans[h]) + (tail,)


class _AdversaryForm:
    """Sequence form of the adversary (perfect recall assumed)."""

    def __init__(self, game: GameTree, paths: _Paths):
        isets = player_infosets(game, ADVERSARY).tolist()
        self.isets = isets
        idx = len(paths.players) - 1
        seqs: dict[tuple[int, int] | None, int] = {None: 0}
        for i in isets:
            for a in range(int(game.infoset_sizes[i])):
                seqs[(i, a)] = len(seqs)
        self.seqs = seqs
        parent: dict[int, tuple[int, int] | None] = {}
        zseq = np.zeros(len(paths.terminals), dtype=np.int64)
        for j, per in enumerate(paths.pairs):
            prev = None
            for iset, a in per[idx]:
                parent.setdefault(iset, prev)
                prev = (iset, a)
            zseq[j] = seqs[prev]
        for i in isets:
            parent.setdefault(i, None)
        self.parent = parent
        self.zseq = zseq
        n = len(seqs)
        f = np.zeros((len(isets) + 1, n))
        f[0, 0] = 1.0
        for r, i in enumerate(isets, start=1):
            for a in range(int(game.infoset_sizes[i])):
                f[r, seqs[(i, a)]] = 1.0
            f[r, seqs[parent[i]]] -= 1.0
        self.f = f
        self.rhs = np.zeros(len(isets) + 1)
        self.rhs[0] = 1.0
        self.sizes = {i: int(game.infoset_sizes[i]) for i in isets}

    def gain(self, col: np.ndarray, weight: np.ndarray) -> np.ndarray:
        """Team payoff vector over adversary sequences for one team column."""
        return np.bincount(self.zseq, weights=col * weight, minlength=len(self.seqs))

    def behavioural(self, y: np.ndarray) -> dict[int, np.ndarray]:
        out = {}
        for i in self.isets:
            k = self.sizes[i]
            ys = np.array([max(y[self.seqs[(i, a)]], 0.0) for a in range(k)])
            s = ys.sum()
            out[i] = ys / s if s > 1e-15 else np.full(k, 1.0 / k)
        return out

    def decompose(self, y: np.ndarray, tol: float = 1e-12) -> list[tuple[dict[int, int], float]]:
        """Split a realisation plan into weighted pure plans."""
        y = np.maximum(np.asarray(y, dtype=float).copy(), 0.0)
        out = []
        mass = 1.0
        children: dict = {}
        for i, ps in self.parent.items():
            children.setdefault(ps, []).append(i)
        while mass > tol:
            plan: dict[int, int] = {}
            chosen = [0]
            stack = list(children.get(None, []))
            while stack:
                i = stack.pop()
                a = int(np.argmax([y[self.seqs[(i, b)]] for b in range(self.sizes[i])]))
                plan[i] = a
                chosen.append(self.seqs[(i, a)])
                stack.extend(children.get((i, a), []))
            lam = min(mass, min(y[c] for c in chosen[1:]) if len(chosen) > 1 else mass)
            if lam <= tol:
                break
            out.append((plan, lam))
            for c in chosen[1:]:
                y[c] -= lam
            mass -= lam
        return out


def _adversary_lp(gains: np.ndarray, adv: _AdversaryForm):
    """min_y max_s gains[s] . y over the adversary's realisation plans."""
    s, n = gains.shape
    # variables: y (n), t
    c = np.zeros(n + 1)
    c[-1] = 1.0
    a_ub = np.hstack([gains, -np.ones((s, 1))])
    b_ub = np.zeros(s)
    a_eq = np.hstack([adv.f, np.zeros((adv.f.shape[0], 1))])
    bounds = [(0, None)] * n + [(None, None)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=adv.rhs, bounds=bounds,
                  method="highs")
    if res.status != 0:
        raise OracleError(f"restricted LP failed: {res.message}")
    mu = np.maximum(-res.ineqlin.marginals, 0.0)
    mu = mu / mu.sum() if mu.sum() > 0 else np.full(s, 1.0 / s)
    return float(res.x[-1]), res.x[:-1], mu


def solve_tmecor(game: GameTree, *, tol: float = 1e-9, max_rounds: int = 5000,
                 cap: int = DEFAULT_CAP, method: str = "cg",
                 seed: int | None = None) -> TmecorSolution:
    """Team-maxmin value with correlation of an (untransformed) team game.

    ``method="cg"`` grows a restricted set of joint team plans, solving the
    adversary's sequence-form LP over it (lower bound) and an exact joint
    best response (upper bound) until ``upper - lower < tol``; ``value`` is
    the midpoint. ``seed`` draws a random initial adversary strategy instead
    of the uniform one. ``method="matrix"`` builds the full payoff matrix and runs
    regret matching on it, which only fits very small games.
    """
    paths = _Paths(game)
    if not paths.players[:-1]:
        return _degenerate_tmecor(game)
    if method == "matrix":
        return _solve_by_matrix(game, max(tol, 1e-6), cap)
    if method != "cg":
        raise ValueError(f"unknown method {method!r}")
    team = _TeamSpace(game, paths, cap)
    adv = _AdversaryForm(game, paths)
    w = paths.weight

    # start from the best response to a uniform (or random) adversary
    if seed is None:
        start = {i: np.full(k, 1.0 / k) for i, k in adv.sizes.items()}
    else:
        rng = np.random.default_rng(seed)
        start = {i: rng.dirichlet(np.ones(k)) for i, k in sorted(adv.sizes.items())}
    y = _realisation(adv, start)
    cols: list[tuple[int, tuple[int, ...]]] = []
    gains: list[np.ndarray] = []
    history = []
    lower, upper = -np.inf, np.inf
    mu = np.ones(1)
    for rnd in range(1, max_rounds + 1):
        zw = w * y[adv.zseq]
        best, plan = team.best_response(zw)
        upper = min(upper, best)
        if cols and upper - lower < tol:
            break
        if plan in cols:
            break  # numerically stalled; the gap is reported as is
        cols.append(plan)
        gains.append(adv.gain(team.column(plan), w))
        lower, y, mu = _adversary_lp(np.vstack(gains), adv)
        history.append((lower, upper))
    else:
        raise OracleError(f"column generation did not converge: gap {upper - lower:.3g}")
    support = [(team.joint_plan(p), float(m)) for p, m in zip(cols, mu) if m > 1e-12]
    return TmecorSolution(
        value=0.5 * (lower + upper), gap=max(upper - lower, 0.0),
        team=PlanDistribution(support),
        adversary=PlanDistribution(adv.decompose(y)),
        adversary_profile=adv.behavioural(y),
        rounds=rnd, lower=lower, upper=upper, history=history)


def _solve_by_matrix(game: GameTree, tol: float, cap: int) -> TmecorSolution:
    m, joint, adv_plans = payoff_matrix(game, cap=cap)
    sol = solve_matrix_game(m, tol=tol)
    if not sol.converged:
        raise OracleError(f"matrix solver stopped with gap {sol.gap:.3g}")
    team = PlanDistribution([(joint[i], float(p)) for i, p in enumerate(sol.row) if p > 1e-12])
    adv = PlanDistribution([(adv_plans[j], float(p)) for j, p in enumerate(sol.col) if p > 1e-12])
    beh: dict[int, np.ndarray] = {}
    for plan, p in adv.support:
        for i, a in plan.items():
            beh.setdefault(i, np.zeros(game.infoset_sizes[i]))[a] += p
    beh = {i: v / v.sum() if v.sum() > 0 else np.full(len(v), 1.0 / len(v)) for i, v in beh.items()}
    return TmecorSolution(sol.value, sol.gap, team, adv, beh, sol.iterations,
                          sol.value - sol.gap / 2, sol.value + sol.gap / 2)


def _realisation(adv: _AdversaryForm, beh: dict[int, np.ndarray]) -> np.ndarray:
    y = np.zeros(len(adv.seqs))
    y[0] = 1.0
    # parents are always visited before children in a topological pass
    order = sorted(adv.isets, key=lambda i: _depth(adv.parent, i))
    for i in order:
        base = y[adv.seqs[adv.parent[i]]]
        for a in range(adv.sizes[i]):
            y[adv.seqs[(i, a)]] = base * beh[i][a]
    return y


def _depth(parent, iset) -> int:
    d = 0
    ps = parent[iset]
    while ps is not None:
        d += 1
        ps = parent[ps[0]]
    return d


def _degenerate_tmecor(game: GameTree) -> TmecorSolution:
    """Games without team decisions: the adversary simply best responds."""
    value = -best_response_value(game, None, 1)
    paths = _Paths(game)
    adv = _AdversaryForm(game, paths)
    _, choice = best_response_value(game, None, 1, return_policy=True)
    beh = {i: np.eye(adv.sizes[i])[max(int(choice[i]), 0)] for i in adv.isets}
    y = _realisation(adv, beh)
    return TmecorSolution(value, 0.0, PlanDistribution([((), 1.0)]),
                          PlanDistribution(adv.decompose(y)), beh, 0, value, value)


# ---------------------------------------------------------------------------
# original <-> transformed strategies

def _counterpart_key(key: tuple) -> tuple:
    head = key[0]
    if head == "coordinator":
        return ("team",) + tuple(key[1:])
    if head == "team":
        return ("coordinator",) + tuple(key[1:])
    return key


def infoset_correspondence(original: GameTree, transformed: GameTree) -> dict[int, int]:
    """Transformed infoset id -> original infoset id."""
    orig = {k: i for i, k in enumerate(original.infoset_keys)}
    out = {}
    for j, key in enumerate(transformed.infoset_keys):
        i = orig.get(_counterpart_key(key))
        if i is None:
            raise StructureError(f"transformed infoset {key} has no original counterpart")
        out[j] = i
    return out


def map_profile(original: GameTree, transformed: GameTree, profile: Profile | None,
                *, inverse: bool = False) -> dict[int, np.ndarray]:
    """Copy behavioural strategies across the transformation.

    Forward: member ``p``'s play holding card ``x`` after public history
    ``h`` becomes the coordinator's play for ``(p, x, h)``; the adversary's
    play is copied as is. ``inverse=True`` maps a transformed profile back
    (every original infoset must have a counterpart).
    """
    corr = infoset_correspondence(original, transformed)
    if not inverse:
        table = strategy_matrix(original, profile)
        return {j: table[i, :original.infoset_sizes[i]].copy() for j, i in corr.items()}
    back: dict[int, int] = {}
    for j, i in corr.items():
        back.setdefault(i, j)
    missing = set(range(original.num_infosets)) - set(back)
    if missing:
        raise StructureError(f"{len(missing)} original infosets have no transformed counterpart")
    table = strategy_matrix(transformed, profile)
    return {i: table[j, :transformed.infoset_sizes[j]].copy() for i, j in sorted(back.items())}


@dataclass
class EquivalenceReport:
    tol: float
    oracle_value: float | None
    oracle_gap: float | None
    cfr_value: float
    value_gap: float | None
    transformed_exploitability: float
    team_worst_case: float
    original_team_gap: float
    passed: bool
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        def fmt(x):
            return "n/a" if x is None else f"{x:.9g}"
        return [
            f"tol: {self.tol:g}",
            f"oracle_value: {fmt(self.oracle_value)}",
            f"oracle_gap: {fmt(self.oracle_gap)}",
            f"cfr_value: {fmt(self.cfr_value)}",
            f"value_gap: {fmt(self.value_gap)}",
            f"transformed_exploitability: {fmt(self.transformed_exploitability)}",
            f"team_worst_case_on_original: {fmt(self.team_worst_case)}",
            f"original_team_gap: {fmt(self.original_team_gap)}",
            *[f"note: {n}" for n in self.notes],
            f"result: {'PASS' if self.passed else 'FAIL'}",
        ]


def verify_equivalence(original: GameTree, transformed: GameTree, cfr_profile: Profile | None,
                       tol: float, *, oracle: TmecorSolution | None = None,
                       cap: int = DEFAULT_CAP) -> EquivalenceReport:
    """Compare a solver profile on the transformed game with the oracle.

    Checks (a) the profile's team value against the team-maxmin value,
    (b) its exploitability in the transformed game and (c) how far the
    back-mapped team strategy falls short of that value when the adversary
    best responds in the original game. Without an oracle, (a) is skipped
    and (c) becomes the adversary's best-response gain on the original game.
    """
    notes = []
    if oracle is None:
        try:
            oracle = solve_tmecor(original, cap=cap)
        except OracleError as exc:
            notes.append(f"oracle unavailable: {exc}")
    cfr_value = profile_value(transformed, cfr_profile)
    expl = exploitability(transformed, cfr_profile)
    if (original.kinds == Kind.TEAM).any():
        back = map_profile(original, transformed, cfr_profile, inverse=True)
    else:
        back = dict(cfr_profile or {})
    worst = -best_response_value(original, back, 1)
    if oracle is not None:
        value_gap = abs(cfr_value - oracle.value)
        team_gap = oracle.value - worst
        checks = [value_gap, expl, team_gap]
    else:
        value_gap = None
        team_gap = profile_value(original, back) - worst
        checks = [expl, team_gap]
    passed = all(c <= tol for c in checks)
    return EquivalenceReport(tol, None if oracle is None else oracle.value,
                             None if oracle is None else oracle.gap, cfr_value, value_gap,
                             expl, worst, team_gap, passed, notes)


def oracle_profile(game: GameTree, sol: TmecorSolution) -> dict[int, np.ndarray]:
    """Behavioural profile of ``game`` read off an oracle solution.

    Team infosets get the probability-weighted action frequencies of the
    joint plans in the support, which reproduces the correlated plan exactly
    only when the support holds a single joint plan. Infosets no plan
    mentions stay uniform.
    """
    prof: dict[int, np.ndarray] = {}
    for joint, p in sol.team.support:
        for plan in joint:
            for i, a in plan.items():
                prof.setdefault(i, np.zeros(game.infoset_sizes[i]))[a] += p
    out = {i: v / v.sum() for i, v in prof.items() if v.sum() > 0}
    out.update({i: np.asarray(v, float) for i, v in sol.adversary_profile.items()})
    return out
