"""Finite extensive game structures with simultaneous moves and imperfect information.

A game is a finite tree of histories.  Each edge carries a move: a profile
assigning one action to every player active at the parent node.  Each player's
non-terminal nodes are partitioned into information sets; the set of feasible
actions is constant across an information set, and the structure satisfies
perfect recall.

Games are immutable after construction; all derived data is precomputed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional


class GameError(Exception):
    """Malformed game description (broken tree shape, bad references)."""


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: str
    message: str

    def __str__(self):
        return f"[{self.rule}] {self.subject}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule, subject, message):
        self.violations.append(Violation(rule, subject, str(message)))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


class ValidationError(GameError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


@dataclass(frozen=True)
class Infoset:
    iid: str
    owner: str
    members: frozenset[str]


# A move is a tuple of (player, action display) pairs, sorted by player order.
Move = tuple[tuple[str, str], ...]


def _move_key(move: Move, player_index: Mapping[str, int]):
    return tuple((player_index[p], a) for p, a in move)


class Game:
    """Immutable extensive game structure.

    Parameters
    ----------
    players: iterable of player ids.
    parent: node id -> parent node id (root maps to None).
    moves: node id -> {player: action display} for every non-root node.
    infosets: iid -> (owner, members).  Active (player, node) pairs not covered
        get auto-generated singleton information sets.
    terminal_names: node id -> z-label, or None to auto-name terminals
        z1, z2, ... in depth-first child-profile-lexicographic order.
    """

    def __init__(self, players, parent, moves, infosets=None,
                 terminal_names=None, name=""):
        self.name = name
        self.players = tuple(players)
        if len(set(self.players)) != len(self.players) or not self.players:
            raise GameError("players must be a nonempty set of distinct ids")
        self._pindex = {p: k for k, p in enumerate(self.players)}
        self.parent = dict(parent)
        roots = [n for n, p in self.parent.items() if p is None]
        if len(roots) != 1:
            raise GameError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]

        # incoming moves, normalized to sorted tuples
        self.moves: dict[str, Move] = {}
        for n, mv in moves.items():
            if n not in self.parent or self.parent[n] is None:
                raise GameError(f"move given for root or unknown node {n!r}")
            items = sorted(mv.items(), key=lambda kv: self._pindex[kv[0]])
            self.moves[n] = tuple(items)
        for n, p in self.parent.items():
            if p is not None:
                if p not in self.parent:
                    raise GameError(f"node {n!r} has unknown parent {p!r}")
                if n not in self.moves:
                    raise GameError(f"non-root node {n!r} has no incoming move")

        # children, keyed by move
        self.children: dict[str, dict[Move, str]] = {n: {} for n in self.parent}
        for n, p in self.parent.items():
            if p is None:
                continue
            mv = self.moves[n]
            if mv in self.children[p]:
                raise GameError(f"duplicate move {mv} under node {p!r}")
            self.children[p][mv] = n

        # reachability / acyclicity: walk from root
        self.depth: dict[str, int] = {}
        order = [self.root]
        self.depth[self.root] = 0
        i = 0
        while i < len(order):
            n = order[i]
            i += 1
            kids = sorted(self.children[n],
                          key=lambda m: _move_key(m, self._pindex))
            for mv in kids:
                c = self.children[n][mv]
                if c in self.depth:
                    raise GameError(f"node {c!r} reachable twice (not a tree)")
                self.depth[c] = self.depth[n] + 1
                order.append(c)
        unreachable = set(self.parent) - set(self.depth)
        if unreachable:
            raise GameError(f"unreachable nodes: {sorted(unreachable)}")

        # depth-first order with children sorted by move
        self.dfs_order: list[str] = []
        stack = [self.root]
        while stack:
            n = stack.pop()
            self.dfs_order.append(n)
            kids = sorted(self.children[n],
                          key=lambda m: _move_key(m, self._pindex),
                          reverse=True)
            stack.extend(self.children[n][mv] for mv in kids)

        self.terminals = [n for n in self.dfs_order if not self.children[n]]
        self.nonterminals = [n for n in self.dfs_order if self.children[n]]
        self.height = max(self.depth[z] for z in self.terminals)

        if terminal_names is None:
            self.terminal_names = {z: f"z{k + 1}"
                                   for k, z in enumerate(self.terminals)}
        else:
            self.terminal_names = dict(terminal_names)
        self.node_of_terminal = {z: n for n, z in self.terminal_names.items()}

        # active players and per-node action sets
        self._active: dict[str, tuple[str, ...]] = {}
        self._node_actions: dict[tuple[str, str], tuple[str, ...]] = {}
        for n in self.nonterminals:
            movers = set()
            for mv in self.children[n]:
                movers.update(p for p, _ in mv)
            act = tuple(p for p in self.players if p in movers)
            self._active[n] = act
            for p in act:
                acts = sorted({a for mv in self.children[n]
                               for q, a in mv if q == p})
                self._node_actions[(p, n)] = tuple(acts)

        # information sets (auto singleton for uncovered active pairs)
        self.infosets: dict[str, Infoset] = {}
        covered: dict[tuple[str, str], str] = {}
        if infosets:
            for iid, (owner, members) in infosets.items():
                ms = frozenset(members)
                self.infosets[iid] = Infoset(iid, owner, ms)
                for m in ms:
                    key = (owner, m)
                    if key in covered:
                        raise GameError(
                            f"node {m!r} in two infosets of player {owner!r}")
                    covered[key] = iid
        counter = itertools.count(1)
        for n in self.dfs_order:
            if not self.children[n]:
                continue
            for p in self._active[n]:
                if (p, n) not in covered:
                    iid = f"{p}.{next(counter)}"
                    while iid in self.infosets:
                        iid = f"{p}.{next(counter)}"
                    self.infosets[iid] = Infoset(iid, p, frozenset([n]))
                    covered[(p, n)] = iid
        self.infoset_of = covered  # (player, node) -> iid

        # terminal closure per node
        self._zset: dict[str, frozenset[str]] = {}
        for n in reversed(self.dfs_order):
            if not self.children[n]:
                self._zset[n] = frozenset([self.terminal_names.get(n, n)])
            else:
                acc = frozenset()
                for c in self.children[n].values():
                    acc |= self._zset[c]
                self._zset[n] = acc

        # content signature per node: path of moves from the root
        self.node_sig: dict[str, tuple] = {self.root: ()}
        for n in self.dfs_order[1:]:
            self.node_sig[n] = self.node_sig[self.parent[n]] + (self.moves[n],)

    # ------------------------------------------------------------------
    # structural queries

    def is_terminal(self, n: str) -> bool:
        return not self.children[n]

    def active_players(self, n: str) -> tuple[str, ...]:
        if self.is_terminal(n):
            raise GameError(f"no active players at terminal {n!r}")
        return self._active[n]

    def actions(self, player: str, n: str) -> tuple[str, ...]:
        """Feasible action displays of `player` at node `n` (empty if inactive)."""
        return self._node_actions.get((player, n), ())

    def infoset_actions(self, iid: str) -> tuple[str, ...]:
        info = self.infosets[iid]
        member = min(info.members, key=lambda m: self.node_sig[m])
        return self.actions(info.owner, member)

    def player_infosets(self, player: str) -> list[str]:
        """Infosets of a player in canonical order (shallowest first)."""
        iids = [iid for iid, info in self.infosets.items()
                if info.owner == player]
        return sorted(iids, key=lambda i: self._infoset_sort_key(i))

    def _infoset_sort_key(self, iid):
        info = self.infosets[iid]
        return (min(self.depth[m] for m in info.members),
                min(self.node_sig[m] for m in info.members))

    def terminal_set(self, nodes: Iterable[str]) -> frozenset[str]:
        """Names of all terminal descendants of the given nodes."""
        acc = frozenset()
        for n in nodes:
            if n not in self._zset:
                raise GameError(f"unknown node {n!r}")
            acc |= self._zset[n]
        return acc

    def terminal_after_action(self, iid: str, action: str) -> frozenset[str]:
        """Terminals reachable after playing `action` at information set `iid`."""
        info = self.infosets[iid]
        if action not in self.infoset_actions(iid):
            raise GameError(f"action {action!r} not feasible at {iid!r}")
        acc = frozenset()
        for h in info.members:
            for mv, c in self.children[h].items():
                if (info.owner, action) in mv:
                    acc |= self._zset[c]
        return acc

    def path_to(self, n: str) -> list[str]:
        path = [n]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path

    def record(self, player: str, n: str) -> tuple:
        """The player's (infoset, action) record along the path to `n`, excluding `n`."""
        if n not in self.parent:
            raise GameError(f"unknown node {n!r}")
        rec = []
        path = self.path_to(n)
        for u, v in zip(path, path[1:]):
            mv = dict(self.moves[v])
            if player in mv:
                rec.append((self.infoset_of[(player, u)], mv[player]))
        return tuple(rec)

    def action_total(self, player: str) -> int:
        """Sum of |feasible actions| over the player's information sets."""
        return sum(len(self.infoset_actions(i))
                   for i in self.player_infosets(player))

    # ------------------------------------------------------------------
    # validation

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        names = list(self.terminal_names.values())
        if sorted(self.terminal_names) != sorted(self.terminals):
            rep.add("terminal-names", self.name or "game",
                    "terminal names must cover exactly the terminal nodes")
        if len(set(names)) != len(names):
            rep.add("terminal-names", self.name or "game",
                    "duplicate terminal names")

        active_somewhere = {p: False for p in self.players}
        for n in self.nonterminals:
            act = self._active[n]
            for p in act:
                active_somewhere[p] = True
                if len(self._node_actions[(p, n)]) < 2:
                    rep.add("min-two-actions", n,
                            f"player {p} has fewer than 2 actions")
            # product condition
            expected = set(itertools.product(
                *[[(p, a) for a in self._node_actions[(p, n)]] for p in act]))
            got = {tuple(sorted(mv, key=lambda kv: self._pindex[kv[0]]))
                   for mv in self.children[n]}
            expected = {tuple(sorted(e, key=lambda kv: self._pindex[kv[0]]))
                        for e in expected}
            if got != expected:
                rep.add("product-condition", n,
                        "child moves are not the full product of the active "
                        "players' action sets")
        for p, seen in active_somewhere.items():
            if not seen:
                rep.add("player-active", p, "player is never active")

        for iid, info in self.infosets.items():
            if info.owner not in self._pindex:
                rep.add("infoset-owner", iid, f"unknown player {info.owner!r}")
                continue
            acts = None
            for m in info.members:
                if m not in self.parent:
                    rep.add("infoset-members", iid, f"unknown node {m!r}")
                    continue
                if self.is_terminal(m) or info.owner not in self._active.get(m, ()):
                    rep.add("infoset-members", iid,
                            f"{info.owner} is not active at {m!r}")
                    continue
                a = self._node_actions[(info.owner, m)]
                if acts is None:
                    acts = a
                elif a != acts:
                    rep.add("measurability", iid,
                            f"members offer different action sets ({a} vs {acts})")
            # absent-mindedness: no two members on one path
            members = sorted(info.members, key=lambda m: self.depth.get(m, 0))
            ancestors = {m: set(self.path_to(m)[:-1]) for m in info.members
                         if m in self.parent}
            for m1 in members:
                for m2 in members:
                    if m1 != m2 and m1 in ancestors.get(m2, set()):
                        rep.add("absent-mindedness", iid,
                                f"{m1!r} precedes {m2!r} in the same infoset")
            # perfect recall: constant record
            recs = {self.record(info.owner, m) for m in info.members
                    if m in self.parent}
            if len(recs) > 1:
                rep.add("perfect-recall", iid,
                        f"members have different records for {info.owner}")
        return rep

    def require_valid(self):
        rep = self.validate()
        if not rep.ok:
            raise ValidationError(rep)
        return self

    # ------------------------------------------------------------------

    def node_by_sig(self, sig) -> Optional[str]:
        for n, s in self.node_sig.items():
            if s == sig:
                return n
        return None

    def __repr__(self):
        return (f"Game({self.name or 'unnamed'}: {len(self.players)} players, "
                f"{len(self.nonterminals)} decision nodes, "
                f"{len(self.terminals)} terminals)")
