"""Seeded random generation of valid games, plus test-corpus helpers.

Generation is top-down.  Information sets are chosen while growing the tree:
each decision node is grouped by the owner's record of (information set,
action) pairs, and nodes with equal records may share an information set.
Grouping by record makes measurability, perfect recall and the absence of
repeated visits hold by construction.
"""

from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass

from .model import Game, GameError
from .transforms import (find_coalescing_sites, find_simultanizing_sites,
                         coalesce, simultanize, unsimultanize)


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    num_players: int = 2          # 2..5
    max_depth: int = 3            # 1..5
    max_actions: int = 3          # 2..3
    simultaneity_prob: float = 0.3
    stop_prob: float = 0.35       # chance an expandable node becomes terminal
    infoset_merge_prob: float = 0.5
    max_nodes: int = 60

    def check(self):
        if not (2 <= self.num_players <= 5):
            raise ValueError("num_players must be in 2..5")
        if not (1 <= self.max_depth <= 5):
            raise ValueError("max_depth must be in 1..5")
        if not (2 <= self.max_actions <= 3):
            raise ValueError("max_actions must be in 2..3")


def generate_random(config: GeneratorConfig) -> Game:
    """A valid random game, deterministic in the seed."""
    config.check()
    rng = random.Random(config.seed)
    players = [str(k + 1) for k in range(config.num_players)]

    parent: dict = {"n0": None}
    moves: dict = {}
    classes: dict = {}   # (player, record) -> list of (class id, actions)
    members: dict = {}   # class id -> list of nodes
    counter = itertools.count(1)
    cls_counter = itertools.count(1)
    total = 1

    queue = [("n0", 0, {p: () for p in players})]
    while queue:
        node, depth, records = queue.pop(0)
        is_root = node == "n0"
        if not is_root and (depth >= config.max_depth
                            or total >= config.max_nodes
                            or rng.random() < config.stop_prob):
            continue  # leave as terminal

        active = [p for p in players if rng.random() < config.simultaneity_prob]
        if not active:
            active = [rng.choice(players)]

        assigned = {}
        for p in active:
            pool = classes.setdefault((p, records[p]), [])
            if pool and rng.random() < config.infoset_merge_prob:
                cid, acts = rng.choice(pool)
            else:
                k = rng.randint(2, config.max_actions)
                cid, acts = f"c{next(cls_counter)}", string.ascii_lowercase[:k]
                pool.append((cid, acts))
            assigned[p] = (cid, acts)
            members.setdefault(cid, []).append(node)

        combos = list(itertools.product(*[assigned[p][1] for p in active]))
        if total + len(combos) > config.max_nodes and not is_root:
            for p in active:
                members[assigned[p][0]].pop()
            continue
        for combo in combos:
            child = f"n{next(counter)}"
            parent[child] = node
            moves[child] = dict(zip(active, combo))
            recs = dict(records)
            for p, a in zip(active, combo):
                recs[p] = records[p] + ((assigned[p][0], a),)
            queue.append((child, depth + 1, recs))
            total += 1

    used = sorted({p for mv in moves.values() for p in mv}, key=players.index)
    owner = {cid: next(p for (p, _), pool in classes.items()
                       for c, _ in pool if c == cid)
             for cid in members}
    infosets = {cid: (owner[cid], frozenset(ms))
                for cid, ms in members.items() if ms}
    g = Game(used, parent, moves, infosets)
    return g.require_valid()


# ----------------------------------------------------------------------
# corpus helpers

def random_transform_chain(g: Game, rng: random.Random, length: int) -> Game:
    """Apply up to `length` random equivalence-preserving rewrites."""
    for _ in range(length):
        options = [("c", s) for s in find_coalescing_sites(g)]
        options += [("s", s) for s in find_simultanizing_sites(g)]
        options += [("u", (n, p)) for n in g.nonterminals
                    for p in g.active_players(n)
                    if len(g.active_players(n)) >= 2]
        if not options:
            return g
        kind, arg = rng.choice(options)
        if kind == "c":
            g, _ = coalesce(g, arg)
        elif kind == "s":
            g, _ = simultanize(g, arg)
        else:
            g, _ = unsimultanize(g, *arg)
    return g


def perturb(g: Game, rng: random.Random) -> Game:
    """An inequivalent variant: one terminal becomes a 2-action decision node.

    Expanding a terminal changes the number of distinct outcomes, which no
    relabeling can absorb.
    """
    t = rng.choice(g.terminals)
    p = rng.choice(g.players)
    parent = dict(g.parent)
    moves = {n: dict(mv) for n, mv in g.moves.items()}
    names = dict(g.terminal_names)
    base = names.pop(t)
    for k, a in enumerate(("a", "b")):
        child = f"{t}x{k}"
        parent[child] = t
        moves[child] = {p: a}
        names[child] = f"{base}.{k}"
    infosets = {iid: (info.owner, info.members)
                for iid, info in g.infosets.items()}
    out = Game(g.players, parent, moves, infosets, names, name=g.name)
    return out.require_valid()
