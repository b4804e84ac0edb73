"""Behavioral equivalence of games, and reconstruction from the normal form.

Two games are equivalent when their reduced normal forms coincide up to a
per-player relabeling of strategies and a relabeling of terminals (players
are matched identically).  Equivalence is decided two ways: directly on the
reduced normal forms, and by minimizing both games and testing the minimal
trees for isomorphism.  The two routes must agree.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

from .model import Game, GameError
from .partitions import Partition, finest_outcome_partition
from .reduction import minimize
from .strategies import ReducedNormalForm, reduced_normal_form


class ReconstructionError(GameError):
    """The normal form is not the reduced normal form of any game."""


class MethodDisagreement(GameError):
    """The direct and via-minimal-form equivalence checks disagreed."""


# ----------------------------------------------------------------------
# isomorphism of games (players fixed, action and terminal labels free)

def _shapes(g: Game, intern: dict) -> dict:
    """Bottom-up subtree codes ignoring infosets, action and terminal labels."""
    codes = {}
    for n in reversed(g.dfs_order):
        if g.is_terminal(n):
            sig = "z"
        else:
            sig = tuple(sorted((tuple(sorted(p for p, _ in mv)), codes[c])
                               for mv, c in g.children[n].items()))
        codes[n] = intern.setdefault(sig, len(intern))
    return codes


def _bijections(xs, ys, ok):
    """All bijections xs -> ys respecting the `ok` pairing predicate."""
    if not xs:
        yield []
        return
    x, rest = xs[0], xs[1:]
    for k, y in enumerate(ys):
        if ok(x, y):
            for tail in _bijections(rest, ys[:k] + ys[k + 1:], ok):
                yield [(x, y)] + tail


def game_isomorphic(g1: Game, g2: Game) -> bool:
    """Structural identity up to node ids, action displays, terminal names.

    Backtracking over per-infoset action bijections; node correspondence is
    forced once actions are paired.  Subtree shape codes prune the search.
    """
    if set(g1.players) != set(g2.players):
        return False
    if len(g1.parent) != len(g2.parent) or g1.height != g2.height \
            or len(g1.terminals) != len(g2.terminals):
        return False
    for p in g1.players:
        k1 = sorted((len(g1.infoset_actions(i)), len(g1.infosets[i].members))
                    for i in g1.player_infosets(p))
        k2 = sorted((len(g2.infoset_actions(i)), len(g2.infosets[i].members))
                    for i in g2.player_infosets(p))
        if k1 != k2:
            return False

    intern: dict = {}
    s1, s2 = _shapes(g1, intern), _shapes(g2, intern)
    if s1[g1.root] != s2[g2.root]:
        return False

    order = g1.dfs_order
    nu = {g1.root: g2.root}   # node correspondence, forced top-down
    imap: dict = {}           # infoset correspondence
    rev: dict = {}
    amap: dict = {}           # (infoset of g1, action) -> action of g2

    def act_sig(g, shapes, p, n, a):
        return tuple(sorted(shapes[c] for mv, c in g.children[n].items()
                            if (p, a) in mv))

    def process(k):
        if k == len(order):
            return True
        u = order[k]
        v = nu[u]
        if g1.is_terminal(u):
            return g2.is_terminal(v) and process(k + 1)
        if g2.is_terminal(v):
            return False
        active = sorted(g1.active_players(u))
        if active != sorted(g2.active_players(v)):
            return False

        def per_player(j):
            if j == len(active):
                added = []
                ok = True
                for mv, c in g1.children[u].items():
                    img = tuple(sorted(
                        ((p, amap[(g1.infoset_of[(p, u)], a)]) for p, a in mv),
                        key=lambda t: g2.players.index(t[0])))
                    w = g2.children[v].get(img)
                    if w is None or s1[c] != s2[w]:
                        ok = False
                        break
                    nu[c] = w
                    added.append(c)
                if ok and process(k + 1):
                    return True
                for c in added:
                    del nu[c]
                return False
            p = active[j]
            i1, i2 = g1.infoset_of[(p, u)], g2.infoset_of[(p, v)]
            if i1 in imap:
                return imap[i1] == i2 and per_player(j + 1)
            if i2 in rev:
                return False
            a1s, a2s = g1.infoset_actions(i1), g2.infoset_actions(i2)
            if len(a1s) != len(a2s) \
                    or len(g1.infosets[i1].members) != len(g2.infosets[i2].members):
                return False
            imap[i1] = i2
            rev[i2] = i1
            sig1 = {a: act_sig(g1, s1, p, u, a) for a in a1s}
            sig2 = {a: act_sig(g2, s2, p, v, a) for a in a2s}
            for bij in _bijections(a1s, a2s,
                                   lambda a, b: sig1[a] == sig2[b]):
                for a, b in bij:
                    amap[(i1, a)] = b
                if per_player(j + 1):
                    return True
                for a, _ in bij:
                    del amap[(i1, a)]
            del imap[i1]
            del rev[i2]
            return False

        return per_player(0)

    return process(0)


# ----------------------------------------------------------------------
# isomorphism of reduced normal forms

@dataclass
class NormalFormIsomorphism:
    label_maps: dict   # player -> {label in first form -> label in second}
    terminal_map: dict # z in first form -> z in second

    def verify(self, n1: ReducedNormalForm, n2: ReducedNormalForm) -> bool:
        for p in n1.players:
            m = self.label_maps[p]
            if sorted(m) != sorted(n1.labels[p]) \
                    or sorted(m.values()) != sorted(n2.labels[p]):
                return False
        if sorted(self.terminal_map) != sorted(n1.terminals) \
                or sorted(self.terminal_map.values()) != sorted(n2.terminals):
            return False
        for prof, z in n1.outcome.items():
            img = tuple(self.label_maps[p][l] for p, l in zip(n1.players, prof))
            if n2.outcome[img] != self.terminal_map[z]:
                return False
        return True


def rnf_isomorphic(n1: ReducedNormalForm, n2: ReducedNormalForm):
    """A per-player label bijection plus terminal bijection, or None.

    Individualization-refinement: labels and terminals of both forms are
    colored jointly by iterated profile signatures; ambiguous labels are
    paired tentatively (given a fresh color) and the coloring re-refined.
    """
    if set(n1.players) != set(n2.players):
        return None
    if len(n1.terminals) != len(n2.terminals):
        return None
    for p in n1.players:
        if len(n1.labels[p]) != len(n2.labels[p]):
            return None

    players = n1.players
    # both outcome tables keyed in the first form's player order
    idx2 = [n2.players.index(p) for p in players]
    tables = (dict(n1.outcome),
              {tuple(prof[i] for i in idx2): z
               for prof, z in n2.outcome.items()})
    labels = ({p: tuple(n1.labels[p]) for p in players},
              {p: tuple(n2.labels[p]) for p in players})
    terms = (n1.terminals, n2.terminals)

    def refine(lcolor, tcolor):
        while True:
            canon: dict = {}

            def c(sig):
                return canon.setdefault(sig, len(canon) + 1_000_000)

            new_l = {}
            new_t = {}
            for f in (0, 1):
                rows = {(p, l): [] for p in players for l in labels[f][p]}
                zrows = {z: [] for z in terms[f]}
                for prof, z in tables[f].items():
                    pc = c((tuple(lcolor[(f, p, l)]
                                  for p, l in zip(players, prof)),
                            tcolor[(f, z)]))
                    zrows[z].append(pc)
                    for p, l in zip(players, prof):
                        rows[(p, l)].append(pc)
                for (p, l), sig in rows.items():
                    new_l[(f, p, l)] = c((lcolor[(f, p, l)],
                                          tuple(sorted(sig))))
                for z, sig in zrows.items():
                    new_t[(f, z)] = c(("z", tcolor[(f, z)],
                                       tuple(sorted(sig))))
            if len(set(new_l.values())) == len(set(lcolor.values())) \
                    and len(set(new_t.values())) == len(set(tcolor.values())):
                return new_l, new_t
            lcolor, tcolor = new_l, new_t

    def compatible(lcolor, tcolor):
        for p in players:
            if Counter(lcolor[(0, p, l)] for l in labels[0][p]) \
                    != Counter(lcolor[(1, p, l)] for l in labels[1][p]):
                return False
        return Counter(tcolor[(0, z)] for z in terms[0]) \
            == Counter(tcolor[(1, z)] for z in terms[1])

    fresh = itertools.count()

    def search(lcolor, tcolor):
        lcolor, tcolor = refine(lcolor, tcolor)
        if not compatible(lcolor, tcolor):
            return None
        # find an ambiguous label class
        for p in players:
            counts = Counter(lcolor[(0, p, l)] for l in labels[0][p])
            for l in labels[0][p]:
                if counts[lcolor[(0, p, l)]] > 1:
                    for l2 in labels[1][p]:
                        if lcolor[(1, p, l2)] != lcolor[(0, p, l)]:
                            continue
                        branch = dict(lcolor)
                        mark = next(fresh)
                        branch[(0, p, l)] = branch[(1, p, l2)] = ("i", mark)
                        res = search(branch, tcolor)
                        if res is not None:
                            return res
                    return None
        # all label classes are singletons: read the bijections off
        label_maps = {}
        for p in players:
            by_color = {lcolor[(1, p, l2)]: l2 for l2 in labels[1][p]}
            label_maps[p] = {l: by_color[lcolor[(0, p, l)]]
                             for l in labels[0][p]}
        tmap = {}
        for prof, z in tables[0].items():
            img = tuple(label_maps[p][l] for p, l in zip(players, prof))
            w = tables[1][img]
            if tmap.setdefault(z, w) != w:
                return None
        if len(set(tmap.values())) != len(tmap):
            return None
        return NormalFormIsomorphism(label_maps, tmap)

    lcolor = {(f, p, l): ("p", p)
              for f in (0, 1) for p in players for l in labels[f][p]}
    tcolor = {(f, z): 0 for f in (0, 1) for z in terms[f]}
    iso = search(lcolor, tcolor)
    if iso is not None:
        assert iso.verify(n1, n2)
    return iso


# ----------------------------------------------------------------------
# reconstruction of the minimal game from a reduced normal form

def _coarsest_common(ground, p1, p2):
    """Finest partition of `ground` coarsened by both p1 and p2."""
    parent = {x: x for x in ground}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for part in (p1, p2):
        for block in part.blocks:
            it = iter(block)
            first = find(next(it))
            for x in it:
                parent[find(x)] = first
    groups: dict = {}
    for x in ground:
        groups.setdefault(find(x), set()).add(x)
    return Partition.of(groups.values())


def reconstruct(nf: ReducedNormalForm) -> Game:
    """The unique minimal game whose reduced normal form is `nf`.

    Works top-down on cells: a cell assigns each player a set of labels; the
    finest partition of each player's set whose blocks have disjoint outcome
    sets determines who moves and how the cell splits.  Partitions are
    coordinated globally: cells of one player with the same consistent label
    set share an information-set class, and the class partition is the
    coarsest one that separates outcomes at every member cell.  Because a
    joining cell can coarsen a class after other members were expanded, the
    construction is iterated to a fixed point.
    """
    players = tuple(nf.players)
    if len(nf.terminals) < 2:
        raise ReconstructionError("a game has at least two terminals")

    # persistent infoset classes: player -> list of [ground, Partition, members]
    classes: dict = {p: [] for p in players}

    def outcomes_and_rows(cell):
        rows = {p: {l: set() for l in cell[p]} for p in players}
        zs = set()
        for prof in itertools.product(*[sorted(cell[p]) for p in players]):
            z = nf.outcome[prof]
            zs.add(z)
            for p, l in zip(players, prof):
                rows[p][l].add(z)
        return zs, rows

    def build_pass():
        parent: dict = {}
        moves: dict = {}
        terminal_names: dict = {}
        node_class: dict = {}  # node -> {player: class index}
        counter = itertools.count()
        changed = False
        for cls in classes.values():
            for entry in cls:
                entry[2] = []

        def build(cell, nid, par, mv):
            nonlocal changed
            parent[nid] = par
            if mv is not None:
                moves[nid] = mv
            zs, rows = outcomes_and_rows(cell)
            if len(zs) == 1:
                z = next(iter(zs))
                if z in terminal_names.values():
                    raise ReconstructionError(
                        f"terminal {z!r} would appear at two leaves")
                terminal_names[nid] = z
                return
            assigned = {}
            for p in players:
                local = finest_outcome_partition(cell[p], rows[p])
                if len(local) < 2:
                    continue
                for k, entry in enumerate(classes[p]):
                    ground, pi, members = entry
                    if ground != cell[p]:
                        continue
                    joint = _coarsest_common(ground, pi, local)
                    if len(joint) < 2:
                        continue
                    if joint != pi:
                        entry[1] = joint
                        changed = True
                    entry[2].append(nid)
                    assigned[p] = k
                    break
                else:
                    classes[p].append([cell[p], local, [nid]])
                    assigned[p] = len(classes[p]) - 1
                    changed = True
            active = [p for p in players if p in assigned]
            if not active:
                raise ReconstructionError(
                    "several outcomes remain but no player separates them")
            node_class[nid] = assigned
            parts = {p: classes[p][assigned[p]][1] for p in active}
            for combo in itertools.product(*[list(parts[p]) for p in active]):
                child_cell = dict(cell)
                cmv = {}
                for p, block in zip(active, combo):
                    child_cell[p] = block
                    cmv[p] = min(block, key=lambda l: (len(l), l))
                build(child_cell, f"n{next(counter)}", nid, cmv)

        root_cell = {p: frozenset(nf.labels[p]) for p in players}
        build(root_cell, f"n{next(counter)}", None, None)
        return changed, parent, moves, terminal_names, node_class

    for _ in range(100):
        changed, parent, moves, terminal_names, node_class = build_pass()
        if not changed:
            break
    else:
        raise ReconstructionError("partition coordination did not stabilize")

    infosets = {}
    seq = {p: itertools.count(1) for p in players}
    for p in players:
        for ground, pi, members in classes[p]:
            if members:
                infosets[f"{p}.{next(seq[p])}"] = (p, frozenset(members))

    try:
        g = Game(players, parent, moves, infosets, terminal_names)
        g.require_valid()
    except GameError as e:
        raise ReconstructionError(
            f"normal form is not realizable: {e}") from e

    back = rnf_isomorphic(reduced_normal_form(g), nf)
    if back is None:
        raise ReconstructionError(
            "reconstructed game does not reproduce the normal form")
    return g


# ----------------------------------------------------------------------
# the decision procedure

@dataclass
class EquivalenceVerdict:
    equivalent: bool
    by_method: dict                     # method name -> bool
    witness: NormalFormIsomorphism | None = None

    def __bool__(self):
        return self.equivalent


def decide_equivalence(g1: Game, g2: Game, method: str = "both") -> EquivalenceVerdict:
    """Decide behavioral equivalence.

    method: "direct" compares reduced normal forms up to relabeling;
    "minimal" minimizes both games and compares the trees for isomorphism;
    "both" runs the two and raises MethodDisagreement if they differ.
    """
    if method not in ("direct", "minimal", "both"):
        raise ValueError(f"unknown method {method!r}")
    by = {}
    witness = None
    if method in ("direct", "both"):
        witness = rnf_isomorphic(reduced_normal_form(g1),
                                 reduced_normal_form(g2))
        by["direct"] = witness is not None
    if method in ("minimal", "both"):
        by["minimal"] = game_isomorphic(minimize(g1).minimal_game,
                                        minimize(g2).minimal_game)
    if method == "both" and by["direct"] != by["minimal"]:
        raise MethodDisagreement(
            f"direct says {by['direct']}, minimal-form says {by['minimal']}")
    return EquivalenceVerdict(any(by.values()) and all(by.values()),
                              by, witness)
