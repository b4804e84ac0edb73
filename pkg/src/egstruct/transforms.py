"""The two invariant tree transformations: coalescing and simultanizing.

Both are implemented as rewrites of the set of root-to-terminal paths: an
action of the involved player is moved to an earlier coordinate and removed
where it was taken, steps where nobody moves any more are spliced out, and a
new game is rebuilt from the rewritten paths.  Information sets of the new
game are recovered by grouping decision nodes by (owner, originating
information set, owner's own record), which joins the replicas created when
intermediate nodes are copied per shifted action and keeps every other
partition intact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .model import Game, GameError

# A qualified move is a tuple of (player, infoset id, display) triples,
# sorted by player order.  The qualifier is the infoset at which the action
# was taken, which keeps equal display strings from distinct infosets apart.


class TransformError(GameError):
    """The requested rewrite site is not valid in this game."""


@dataclass(frozen=True)
class CoalescingSite:
    player: str
    source: str        # infoset id whose action set absorbs the target's
    target: str        # infoset id that is folded into the source
    pivot_action: str  # the source action replaced by the target's actions

    def describe(self, g: Game):
        return {"kind": "coalesce", "player": self.player,
                "source": self.source, "target": self.target,
                "pivot_action": self.pivot_action}


@dataclass(frozen=True)
class SimultanizingSite:
    player: str
    history: str               # node id where the player becomes active
    dominating: frozenset[str] # nodes whose moves are shifted back

    def describe(self, g: Game):
        return {"kind": "simultanize", "player": self.player,
                "history": self.history,
                "dominating": sorted(self.dominating)}


@dataclass
class TraceStep:
    kind: str
    site: dict
    node_map: dict      # old node id -> sorted list of new node ids
    terminal_map: dict  # old z name -> new z name


@dataclass
class TransformTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def terminal_bijection(self):
        """Composition of the per-step terminal bijections."""
        mapping = None
        for step in self.steps:
            if mapping is None:
                mapping = dict(step.terminal_map)
            else:
                mapping = {z: step.terminal_map[w] for z, w in mapping.items()}
        return mapping

    def to_jsonable(self):
        return [{"kind": s.kind, "site": s.site, "node_map": s.node_map,
                 "terminal_map": s.terminal_map} for s in self.steps]


# ----------------------------------------------------------------------
# site discovery

def find_coalescing_sites(g: Game) -> list[CoalescingSite]:
    """All (player, source, target, pivot) with Z(source, pivot) = Z(target)."""
    sites = []
    for p in g.players:
        iids = g.player_infosets(p)
        ztargets = {iid: g.terminal_set(g.infosets[iid].members) for iid in iids}
        for src in iids:
            for a in g.infoset_actions(src):
                za = g.terminal_after_action(src, a)
                hits = [t for t in iids if t != src and ztargets[t] == za]
                assert len(hits) <= 1, "multiple controlling targets for one action"
                if hits:
                    sites.append(CoalescingSite(p, src, hits[0], a))
    sites.sort(key=lambda s: (g.players.index(s.player),
                              g._infoset_sort_key(s.source), s.pivot_action))
    return sites


def find_simultanizing_sites(g: Game) -> list[SimultanizingSite]:
    """All (h, player, d) with the player inactive at h and Z(h) = Z(d)."""
    sites = []
    for h in g.nonterminals:
        zh = g.terminal_set([h])
        active = set(g.active_players(h))
        for p in g.players:
            if p in active:
                continue
            hits = []
            for iid in g.player_infosets(p):
                below = {m for m in g.infosets[iid].members
                         if g.depth[m] > g.depth[h]
                         and h in g.path_to(m)}
                if below and g.terminal_set(below) == zh:
                    hits.append(frozenset(below))
            assert len(hits) <= 1, "multiple dominating sets for one history"
            if hits:
                sites.append(SimultanizingSite(p, h, hits[0]))
    sites.sort(key=lambda s: (g.depth[s.history], g.node_sig[s.history],
                              g.players.index(s.player)))
    return sites


# ----------------------------------------------------------------------
# path rewriting machinery

def _qualified_paths(g: Game):
    """All root-to-terminal paths as (steps, z name, nodes-along-path)."""
    paths = []
    for z in g.terminals:
        nodes = g.path_to(z)
        steps = []
        for u, v in zip(nodes, nodes[1:]):
            mv = tuple(sorted(((p, g.infoset_of[(p, u)], a)
                               for p, a in g.moves[v]),
                              key=lambda t: g.players.index(t[0])))
            steps.append(mv)
        paths.append((steps, g.terminal_names[z], nodes))
    return paths


def _step_without(step, player):
    return tuple(t for t in step if t[0] != player)


def _step_with(step, player, qual, display, players):
    items = [t for t in step if t[0] != player] + [(player, qual, display)]
    items.sort(key=lambda t: players.index(t[0]))
    return tuple(items)


def _rebuild(g: Game, paths, infoset_override=None, name=""):
    """Build a new game from rewritten paths.

    `paths` is a list of (steps, z name, origins) where origins[k] is the old
    node the prefix of length k corresponds to.  `infoset_override` maps
    (origin node, player) to the old infoset id to use when grouping, for
    players that were not active at that origin.
    """
    infoset_override = infoset_override or {}
    players = g.players

    paths = sorted(paths, key=lambda p: [
        tuple((players.index(t[0]), t[1], t[2]) for t in step)
        for step in p[0]])

    node_ids = {(): "n0"}
    origin_of = {(): paths[0][2][0]}
    parent, moves, terminal_names = {"n0": None}, {}, {}
    qual_steps = {}  # new node -> qualified incoming move
    counter = itertools.count(1)
    node_map = {}  # old node -> set of new nodes

    for steps, z, origins in paths:
        assert len(origins) == len(steps) + 1
        prefix = ()
        for k, step in enumerate(steps):
            nxt = prefix + (step,)
            if nxt not in node_ids:
                nid = f"n{next(counter)}"
                node_ids[nxt] = nid
                origin_of[nxt] = origins[k + 1]
                parent[nid] = node_ids[prefix]
                moves[nid] = {p: a for p, _, a in step}
                qual_steps[nid] = step
            else:
                assert origin_of[nxt] == origins[k + 1], \
                    "inconsistent origins for a rewritten prefix"
            prefix = nxt
        terminal_names[node_ids[prefix]] = z

    for pref, nid in node_ids.items():
        node_map.setdefault(origin_of[pref], set()).add(nid)

    # group decision nodes into information sets
    prefix_of = {nid: pref for pref, nid in node_ids.items()}
    children_of = {nid: [] for nid in parent}
    for nid, par in parent.items():
        if par is not None:
            children_of[par].append(nid)

    groups = {}
    for pref, nid in node_ids.items():
        if not children_of[nid]:
            continue
        active = sorted({p for c in children_of[nid] for p in moves[c]},
                        key=players.index)
        for p in active:
            origin = origin_of[pref]
            oiid = infoset_override.get((origin, p)) \
                or g.infoset_of.get((p, origin))
            assert oiid is not None, \
                f"no originating infoset for player {p} at {origin}"
            rec = tuple((qual, a) for step in pref
                        for (pp, qual, a) in step if pp == p)
            groups.setdefault((p, oiid, rec), []).append(nid)

    infosets = {}
    counter2 = {}
    for (p, _, _), nodes in sorted(
            groups.items(),
            key=lambda kv: (players.index(kv[0][0]),
                            min(prefix_of[n] for n in kv[1]))):
        counter2[p] = counter2.get(p, 0) + 1
        infosets[f"{p}.{counter2[p]}"] = (p, frozenset(nodes))

    out = Game(players, parent, moves, infosets, terminal_names, name=name)
    return out, {o: sorted(ns) for o, ns in node_map.items()}


# ----------------------------------------------------------------------
# coalescing

def check_coalescing_site(g: Game, site: CoalescingSite):
    src = g.infosets.get(site.source)
    tgt = g.infosets.get(site.target)
    if src is None or tgt is None:
        raise TransformError("unknown information set in site")
    if src.owner != site.player or tgt.owner != site.player:
        raise TransformError("site infosets do not belong to the player")
    if site.source == site.target:
        raise TransformError("source and target coincide")
    if site.pivot_action not in g.infoset_actions(site.source):
        raise TransformError(
            f"pivot {site.pivot_action!r} not feasible at {site.source!r}")
    if g.terminal_after_action(site.source, site.pivot_action) \
            != g.terminal_set(tgt.members):
        raise TransformError(
            "terminals after the pivot differ from the target's terminals")


def coalesce(g: Game, site: CoalescingSite):
    """Fold the target infoset's actions into the source, dropping the pivot."""
    check_coalescing_site(g, site)
    i = site.player
    src_members = g.infosets[site.source].members
    tgt_members = g.infosets[site.target].members

    retained = set(g.infoset_actions(site.source)) - {site.pivot_action}
    rename = {}
    for a in g.infoset_actions(site.target):
        new = a
        while new in retained or new in rename.values():
            new += "'"
        rename[a] = new

    new_paths = []
    for steps, z, nodes in _qualified_paths(g):
        d = next((k for k in range(len(steps))
                  if nodes[k] in src_members
                  and any(t[0] == i and t[2] == site.pivot_action
                          for t in steps[k])), None)
        if d is None:
            new_paths.append((list(steps), z, list(nodes)))
            continue
        e = next(k for k in range(d + 1, len(steps))
                 if nodes[k] in tgt_members)
        b = next(t[2] for t in steps[e] if t[0] == i)
        steps = list(steps)
        nodes = list(nodes)
        steps[d] = _step_with(steps[d], i, site.target, rename[b], g.players)
        remainder = _step_without(steps[e], i)
        if remainder:
            steps[e] = remainder
        else:
            del steps[e]
            del nodes[e]
        new_paths.append((steps, z, nodes))

    out, node_map = _rebuild(g, new_paths, name=g.name)
    out.require_valid()
    step = TraceStep("coalesce", site.describe(g), node_map,
                     {z: z for z in g.terminal_names.values()})
    return out, step


# ----------------------------------------------------------------------
# simultanizing

def check_simultanizing_site(g: Game, site: SimultanizingSite):
    h = site.history
    if h not in g.parent or g.is_terminal(h):
        raise TransformError(f"{h!r} is not a decision node")
    if site.player in g.active_players(h):
        raise TransformError(f"player {site.player} is already active at {h!r}")
    if not site.dominating:
        raise TransformError("empty dominating set")
    iids = {g.infoset_of.get((site.player, m)) for m in site.dominating}
    if None in iids or len(iids) != 1:
        raise TransformError("dominating nodes must lie in one infoset of the player")
    if g.terminal_set(site.dominating) != g.terminal_set([h]):
        raise TransformError("dominating set does not cover the history's terminals")


def simultanize(g: Game, site: SimultanizingSite):
    """Shift the player's move at the dominating nodes back to the history."""
    check_simultanizing_site(g, site)
    i = site.player
    h = site.history
    hi = g.infoset_of[(i, next(iter(site.dominating)))]

    new_paths = []
    for steps, z, nodes in _qualified_paths(g):
        if h not in nodes or nodes.index(h) == len(steps):
            new_paths.append((list(steps), z, list(nodes)))
            continue
        d = nodes.index(h)
        e = next(k for k in range(d, len(steps)) if nodes[k] in site.dominating)
        a = next(t[2] for t in steps[e] if t[0] == i)
        steps = list(steps)
        nodes = list(nodes)
        steps[d] = _step_with(steps[d], i, hi, a, g.players)
        remainder = _step_without(steps[e], i)
        if remainder:
            steps[e] = remainder
        else:
            del steps[e]
            del nodes[e]
        new_paths.append((steps, z, nodes))

    out, node_map = _rebuild(g, new_paths,
                             infoset_override={(h, i): hi}, name=g.name)
    out.require_valid()
    step = TraceStep("simultanize", site.describe(g), node_map,
                     {z: z for z in g.terminal_names.values()})
    return out, step


# ----------------------------------------------------------------------
# sequentializing (a sigma-inverse used for the classical interchange)

def unsimultanize(g: Game, node: str, player: str):
    """Split `player`'s move at a multi-mover node out to one step later.

    The co-movers move first; the player moves alone at the inserted nodes,
    which are joined into the information set the node belonged to (the
    player cannot observe the co-movers' choices).
    """
    if node not in g.parent or g.is_terminal(node):
        raise TransformError(f"{node!r} is not a decision node")
    active = g.active_players(node)
    if player not in active:
        raise TransformError(f"player {player} is not active at {node!r}")
    if len(active) < 2:
        raise TransformError(f"{node!r} has a single mover; nothing to re-sequence")

    new_paths = []
    for steps, z, nodes in _qualified_paths(g):
        if node not in nodes or nodes.index(node) == len(steps):
            new_paths.append((list(steps), z, list(nodes)))
            continue
        d = nodes.index(node)
        own = next(t for t in steps[d] if t[0] == player)
        steps = list(steps)
        nodes = list(nodes)
        steps[d:d + 1] = [_step_without(steps[d], player), (own,)]
        nodes[d + 1:d + 1] = [node]  # inserted node originates from `node`
        new_paths.append((steps, z, nodes))

    out, node_map = _rebuild(g, new_paths, name=g.name)
    out.require_valid()
    step = TraceStep("unsimultanize",
                     {"kind": "unsimultanize", "player": player, "node": node},
                     node_map, {z: z for z in g.terminal_names.values()})
    return out, step


def classic_interchange(g: Game, site: SimultanizingSite) -> Game:
    """The classical interchange: simultanize, then re-sequence the other
    movers first, so the previously-second mover now moves first."""
    first_movers = g.active_players(site.history)
    sig = g.node_sig[site.history]
    current, _ = simultanize(g, site)
    for p in first_movers:
        node = next((n for n, s in current.node_sig.items() if s == sig), None)
        if node is None:
            raise TransformError("re-sequenced node lost during rewriting")
        current, _ = unsimultanize(current, node, p)
    return current
