"""Strategies, the play function, behavioral equivalence, and reduced normal forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .model import Game, GameError


@dataclass(frozen=True)
class Strategy:
    """One feasible action per information set of the owner."""
    owner: str
    choices: tuple  # ((iid, action), ...) in the game's canonical infoset order

    def choice(self, iid):
        for i, a in self.choices:
            if i == iid:
                return a
        raise KeyError(iid)

    def as_dict(self):
        return dict(self.choices)


@dataclass(frozen=True)
class ReducedStrategy:
    """An equivalence class of behaviorally equivalent strategies.

    `choices` covers exactly the infosets the class does not prevent from
    being reached; `label` is the dot-joined action signature on them.
    """
    owner: str
    reachable: frozenset  # iids
    choices: tuple        # ((iid, action), ...) restricted to reachable
    label: str

    def choice(self, iid):
        for i, a in self.choices:
            if i == iid:
                return a
        raise KeyError(iid)

    def as_dict(self):
        return dict(self.choices)

    def members(self, g: Game):
        """Expand the class into full strategies (exponential; test use only)."""
        fixed = self.as_dict()
        out = []
        for s in enumerate_strategies(g, self.owner):
            d = s.as_dict()
            if all(d[i] == a for i, a in fixed.items()):
                out.append(s)
        return out


def enumerate_strategies(g: Game, player: str) -> list[Strategy]:
    if player not in g.players:
        raise GameError(f"unknown player {player!r}")
    iids = g.player_infosets(player)
    pools = [[(iid, a) for a in g.infoset_actions(iid)] for iid in iids]
    return [Strategy(player, combo) for combo in itertools.product(*pools)]


def _infoset_records(g: Game, player: str) -> dict[str, tuple]:
    """Own-record of each infoset of the player (constant by perfect recall)."""
    recs = {}
    for iid in g.player_infosets(player):
        member = next(iter(g.infosets[iid].members))
        rec = g.record(player, member)
        recs[iid] = tuple((i, a) for i, a in rec
                          if g.infosets[i].owner == player)
    return recs


def _compatible(rec, choices: dict) -> bool:
    return all(choices.get(i) == a for i, a in rec)


def reachable_infosets(g: Game, s: Strategy) -> frozenset:
    """Own infosets that `s` does not prevent from being reached."""
    recs = _infoset_records(g, s.owner)
    d = s.as_dict()
    return frozenset(i for i, rec in recs.items() if _compatible(rec, d))


def play(g: Game, profile) -> str:
    """Terminal name reached by a full strategy profile.

    `profile` maps each player to a Strategy, ReducedStrategy, or
    {iid: action} mapping.
    """
    choices = {}
    for p in g.players:
        s = profile[p]
        choices[p] = s if isinstance(s, dict) else s.as_dict()
    n = g.root
    while not g.is_terminal(n):
        mv = tuple(sorted(
            ((p, choices[p][g.infoset_of[(p, n)]]) for p in g.active_players(n)),
            key=lambda kv: g.players.index(kv[0])))
        n = g.children[n][mv]
    return g.terminal_names[n]


def behaviorally_equivalent(g: Game, s: Strategy, t: Strategy) -> bool:
    """Definitional check: equal outcomes against every co-player profile."""
    if s.owner != t.owner:
        raise GameError("strategies belong to different players")
    others = [p for p in g.players if p != s.owner]
    pools = [enumerate_strategies(g, p) for p in others]
    for combo in itertools.product(*pools):
        prof = dict(zip(others, combo))
        prof[s.owner] = s
        z1 = play(g, prof)
        prof[s.owner] = t
        if z1 != play(g, prof):
            return False
    return True


def kuhn_equivalent(g: Game, s: Strategy, t: Strategy) -> bool:
    """Structural check: same reachable own infosets, same actions on them."""
    if s.owner != t.owner:
        raise GameError("strategies belong to different players")
    rs = reachable_infosets(g, s)
    if rs != reachable_infosets(g, t):
        return False
    ds, dt = s.as_dict(), t.as_dict()
    return all(ds[i] == dt[i] for i in rs)


def reduced_strategies(g: Game, player: str) -> list[ReducedStrategy]:
    """All behavioral-equivalence classes, in label order.

    Classes are enumerated directly over reachable-infoset assignments, so no
    full strategy product is materialized.
    """
    if player not in g.players:
        raise GameError(f"unknown player {player!r}")
    iids = g.player_infosets(player)
    recs = _infoset_records(g, player)
    order = sorted(iids, key=lambda i: (len(recs[i]), iids.index(i)))

    out = []

    def extend(k, assigned):
        if k == len(order):
            reachable = frozenset(assigned)
            choices = tuple((i, assigned[i]) for i in iids if i in assigned)
            out.append((reachable, choices))
            return
        iid = order[k]
        if _compatible(recs[iid], assigned):
            for a in g.infoset_actions(iid):
                assigned[iid] = a
                extend(k + 1, assigned)
                del assigned[iid]
        else:
            extend(k + 1, assigned)

    extend(0, {})
    classes = []
    labels = set()
    for reachable, choices in out:
        label = ".".join(a for _, a in choices) or "(idle)"
        if label in labels:
            label = ".".join(f"{i}={a}" for i, a in choices)
        labels.add(label)
        classes.append(ReducedStrategy(player, reachable, choices, label))
    classes.sort(key=lambda c: c.label)
    return classes


@dataclass(frozen=True)
class ReducedNormalForm:
    players: tuple
    labels: dict          # player -> tuple of labels, sorted
    terminals: tuple      # z names, sorted
    outcome: dict         # tuple of labels (player order) -> z name

    def profiles(self):
        return itertools.product(*[self.labels[p] for p in self.players])

    def row(self, player, label):
        """Outcomes of every profile in which `player` plays `label`."""
        idx = self.players.index(player)
        return [z for prof, z in self.outcome.items() if prof[idx] == label]


def _terminal_sort_key(z):
    return (len(z), z)


def reduced_normal_form(g: Game) -> ReducedNormalForm:
    classes = {p: reduced_strategies(g, p) for p in g.players}
    labels = {p: tuple(c.label for c in classes[p]) for p in g.players}
    outcome = {}
    for combo in itertools.product(*[classes[p] for p in g.players]):
        prof = dict(zip(g.players, combo))
        outcome[tuple(c.label for c in combo)] = play(g, prof)
    terminals = tuple(sorted(set(g.terminal_names.values()),
                             key=_terminal_sort_key))
    assert set(outcome.values()) == set(terminals), \
        "outcome map is not onto the terminal set"
    return ReducedNormalForm(tuple(g.players), labels, terminals, outcome)


def consistent_strategies(g: Game, player: str, iid: str):
    """Reduced strategies that do not prevent the information set being reached."""
    info = g.infosets[iid]
    if info.owner != player:
        raise GameError(f"{iid!r} does not belong to player {player!r}")
    return [c for c in reduced_strategies(g, player) if iid in c.reachable]
