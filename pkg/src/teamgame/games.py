"""Multi-player Kuhn and Leduc poker as adversarial team games.

Seats ``0 .. m-1`` are team members and seat ``m`` is the adversary; betting
always starts from the lowest active seat. Every player antes one chip.

Instance names follow ``<m><n>K<r>`` (Kuhn, ``r`` ranks) and
``<m><n>L<r><c>`` (Leduc, ``r`` ranks in ``c`` suits).

Leduc deals the board together with the private cards at the root chance
node; the board only becomes observable in the second betting round.
Deals are rank tuples, so suits never create extra branches.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .efg import GameTree, Kind, PlayerId, TreeBuilder

_NAME = re.compile(r"^(\d)(\d)([KL])(\d)(\d)?$")


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    team_size: int
    adversary_count: int
    family: str  # "kuhn" | "leduc"
    ranks: int
    suits: int = 1
    max_bets_per_round: int = 1

    @property
    def players(self) -> int:
        return self.team_size + self.adversary_count

    @property
    def name(self) -> str:
        tail = f"L{self.ranks}{self.suits}" if self.family == "leduc" else f"K{self.ranks}"
        return f"{self.team_size}{self.adversary_count}{tail}"

    def check(self) -> "InstanceSpec":
        if self.adversary_count != 1:
            raise InstanceError(f"exactly one adversary is supported, got {self.adversary_count}")
        if self.team_size < 1:
            raise InstanceError("team needs at least one member")
        if self.max_bets_per_round < 1:
            raise InstanceError("max_bets_per_round must be >= 1")
        if self.family == "kuhn":
            if self.ranks < self.players:
                raise InstanceError(
                    f"Kuhn with {self.players} players needs >= {self.players} ranks, got {self.ranks}")
        elif self.family == "leduc":
            if self.suits < 1 or self.ranks < 1:
                raise InstanceError("Leduc needs at least one rank and one suit")
            if self.ranks * self.suits < self.players + 1:
                raise InstanceError(
                    f"Leduc deck of {self.ranks * self.suits} cards cannot deal "
                    f"{self.players} hands plus a board")
        else:
            raise InstanceError(f"unknown family {self.family!r}")
        return self


def parse_instance(name: str) -> InstanceSpec:
    """Parse ``21K3`` / ``41L33`` style names."""
    m = _NAME.match(name.strip())
    if not m:
        raise InstanceError(f"malformed instance name {name!r}; expected e.g. 21K3 or 21L33")
    team, adv, fam, r, c = m.groups()
    if fam == "K":
        if c is not None:
            raise InstanceError(f"malformed Kuhn name {name!r}: takes a single rank digit")
        spec = InstanceSpec(int(team), int(adv), "kuhn", int(r))
    else:
        if c is None:
            raise InstanceError(f"malformed Leduc name {name!r}: needs ranks and suits")
        spec = InstanceSpec(int(team), int(adv), "leduc", int(r), int(c))
    return spec.check()


def generate(spec: InstanceSpec | str) -> GameTree:
    if isinstance(spec, str):
        spec = parse_instance(spec)
    spec.check()
    return generate_kuhn(spec) if spec.family == "kuhn" else generate_leduc(spec)


def seats_of(spec: InstanceSpec) -> tuple[PlayerId, ...]:
    return tuple(PlayerId(Kind.TEAM, i) for i in range(spec.team_size)) + (
        PlayerId(Kind.ADVERSARY),)


# ---------------------------------------------------------------------------
# betting

def _net(contrib: list[int], winners: list[int]) -> list[Fraction]:
    pot = sum(contrib)
    share = Fraction(pot, len(winners))
    return [(share if s in winners else 0) - contrib[s] for s in range(len(contrib))]


class _Poker:
    """Shared recursive construction for both variants."""

    def __init__(self, spec: InstanceSpec, bet_sizes: tuple[int, ...]):
        self.spec = spec
        self.n = spec.players
        self.m = spec.team_size
        self.cap = spec.max_bets_per_round
        self.bet_sizes = bet_sizes
        self.b = TreeBuilder()

    # subclass hooks
    def public_cards(self, hand: tuple, rnd_no: int) -> tuple:
        return ()

    def showdown(self, hand: tuple, active: list[int]) -> list[int]:
        raise NotImplementedError

    def payoff(self, contrib: list[int], winners: list[int]):
        net = _net(contrib, winners)
        team = sum(net[: self.m])
        assert sum(net) == 0
        return int(team) if team.denominator == 1 else float(team)

    def start_round(self, parent, label, rnd_no, active, contrib, hand, pub, deal):
        # round-entry state: everybody active owes an action, nobody has bet
        self.decide(parent, label, rnd_no, active, list(active), 0, contrib, hand, pub, deal)

    def decide(self, parent, label, rnd_no, active, to_act, bets, contrib, hand, pub, deal):
        seat = to_act[0]
        seen = self.public_cards(hand, rnd_no)
        if seat < self.m:
            node = self.b.add(parent, label, Kind.TEAM, member=seat,
                              key=("team", seat, hand[seat], seen, pub), deal=deal)
        else:
            node = self.b.add(parent, label, Kind.ADVERSARY,
                              key=("adversary", hand[seat], seen, pub), deal=deal)
        step = self.bet_sizes[rnd_no]
        level = max(contrib[s] for s in active)
        acts = ["p", "b"] + (["r"] if 0 < bets < self.cap else [])
        for a in acts:
            c = list(contrib)
            act = list(active)
            rest = to_act[1:]
            nb = bets
            if a == "p" and bets:            # fold
                act.remove(seat)
            elif a == "p":                   # check
                pass
            elif a == "b" and bets:          # call
                c[seat] = level
            else:                            # bet or raise
                nb += 1
                c[seat] = level + step
                # everyone else still in the hand must respond, wrapping order
                i = act.index(seat)
                rest = act[i + 1:] + act[:i]
            self.after(node, a, rnd_no, act, rest, nb, c, hand, pub + (a,), deal)
        return node

    def after(self, parent, label, rnd_no, active, to_act, bets, contrib, hand, pub, deal):
        if len(active) == 1:
            self.terminal(parent, label, contrib, active, deal)
        elif to_act:
            self.decide(parent, label, rnd_no, active, to_act, bets, contrib, hand, pub, deal)
        elif rnd_no + 1 < len(self.bet_sizes):
            self.start_round(parent, label, rnd_no + 1, active, contrib, hand, pub + ("/",), deal)
        else:
            self.terminal(parent, label, contrib, self.showdown(hand, active), deal)

    def terminal(self, parent, label, contrib, winners, deal):
        self.b.add(parent, label, Kind.TERMINAL, payoff=self.payoff(contrib, winners), deal=deal)

    def build(self, deals: list[tuple[tuple, float]], ranks) -> GameTree:
        root = self.b.add(-1, "", Kind.CHANCE)
        for d, (hand, p) in enumerate(deals):
            label = ".".join(map(str, hand))
            self.start_round(root, label, 0, list(range(self.n)), [1] * self.n, hand, (), d)
        probs = self.b.prob
        for c in [i for i, par in enumerate(self.b.parent) if par == root]:
            probs[c] = deals[self.b.deal[c]][1]
        return self.b.build(ranks=ranks, deals=[h for h, _ in deals],
                            seats=seats_of(self.spec), name=self.spec.name)


class _Kuhn(_Poker):
    def showdown(self, hand, active):
        return [max(active, key=lambda s: hand[s])]


class _Leduc(_Poker):
    def public_cards(self, hand, rnd_no):
        # hand is (private ranks per seat..., board)
        return (hand[-1],) if rnd_no else ()

    def showdown(self, hand, active):
        board = hand[-1]
        score = {s: (hand[s] == board, hand[s]) for s in active}
        best = max(score.values())
        return [s for s in active if score[s] == best]


def kuhn_deals(ranks: int, players: int) -> list[tuple[tuple, float]]:
    hands = list(itertools.permutations(range(ranks), players))
    p = 1.0 / len(hands)
    return [(h, p) for h in hands]


def leduc_deals(ranks: int, suits: int, players: int) -> list[tuple[tuple, float]]:
    """Rank tuples (private cards in seat order, then board) with draw probabilities."""
    total = ranks * suits
    out = []
    for hand in itertools.product(range(ranks), repeat=players + 1):
        cnt = Counter(hand)
        if max(cnt.values()) > suits:
            continue
        # sequential draws without replacement
        p = Fraction(1)
        left = Counter({r: suits for r in range(ranks)})
        for i, r in enumerate(hand):
            p *= Fraction(left[r], total - i)
            left[r] -= 1
        out.append((hand, float(p)))
    return out


def generate_kuhn(spec: InstanceSpec) -> GameTree:
    spec.check()
    if spec.family != "kuhn":
        raise InstanceError("not a Kuhn instance")
    builder = _Kuhn(spec, (1,))
    return builder.build(kuhn_deals(spec.ranks, spec.players), tuple(range(spec.ranks)))


def generate_leduc(spec: InstanceSpec) -> GameTree:
    spec.check()
    if spec.family != "leduc":
        raise InstanceError("not a Leduc instance")
    builder = _Leduc(spec, (2, 4))
    return builder.build(leduc_deals(spec.ranks, spec.suits, spec.players),
                         tuple(range(spec.ranks)))


def kuhn_betting_size(players: int) -> int:
    """Nodes in one deal's betting subtree with a single bet per round."""
    return players * 2 ** players + 1


def kuhn_total_nodes(spec: InstanceSpec) -> int:
    deals = math.perm(spec.ranks, spec.players)
    return 1 + deals * kuhn_betting_size(spec.players)
