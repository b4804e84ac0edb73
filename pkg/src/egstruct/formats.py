"""Line-oriented file formats for games (EGS) and reduced normal forms (ZNF).

EGS:
    game <name>                                  (optional)
    players <id> <id> ...
    node <id> root
    node <id> parent=<id> move=<p>:<a>[,<p>:<a>...]
    terminal <id> name=<z>
    infoset <player> <iid> = <id> <id> ...
    # comment

ZNF:
    players <id> ...
    strategies <p>: <label> ...
    terminals <z> ...
    outcome <label-per-player> ... -> <z>

Serialization is deterministic: nodes depth-first, infosets in canonical
order, profiles lexicographic.  parse(serialize(g)) reproduces g.
"""

from __future__ import annotations

import itertools

from .model import Game, GameError, ValidationError
from .strategies import ReducedNormalForm


class FormatError(GameError):
    """Syntax error in an EGS or ZNF document."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _lines(text):
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield k, line


# ----------------------------------------------------------------------
# EGS

def parse_egs(text: str) -> Game:
    name = ""
    players = None
    parent: dict = {}
    moves: dict = {}
    terminal_names: dict = {}
    infosets: dict = {}

    for k, line in _lines(text):
        kw, _, rest = line.partition(" ")
        rest = rest.strip()
        if kw == "game":
            name = rest
        elif kw == "players":
            if players is not None:
                raise FormatError("duplicate players line", k)
            players = rest.split()
            if not players:
                raise FormatError("players line lists no players", k)
        elif kw == "node":
            parts = rest.split()
            if not parts:
                raise FormatError("node line without id", k)
            nid = parts[0]
            if nid in parent:
                raise FormatError(f"duplicate node id {nid!r}", k)
            opts = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
            flags = [p for p in parts[1:] if "=" not in p]
            if flags == ["root"] and not opts:
                parent[nid] = None
            elif "parent" in opts and "move" in opts and not flags:
                parent[nid] = opts["parent"]
                mv = {}
                for item in opts["move"].split(","):
                    if ":" not in item:
                        raise FormatError(
                            f"move item {item!r} is not <player>:<action>", k)
                    p, a = item.split(":", 1)
                    if p in mv:
                        raise FormatError(f"player {p!r} moves twice", k)
                    mv[p] = a
                moves[nid] = mv
            else:
                raise FormatError(
                    "expected 'node <id> root' or "
                    "'node <id> parent=<id> move=<p>:<a>,...'", k)
        elif kw == "terminal":
            parts = rest.split()
            if len(parts) != 2 or not parts[1].startswith("name="):
                raise FormatError("expected 'terminal <id> name=<z>'", k)
            terminal_names[parts[0]] = parts[1][len("name="):]
        elif kw == "infoset":
            head, _, members = rest.partition("=")
            hp = head.split()
            ms = members.split()
            if len(hp) != 2 or not ms:
                raise FormatError(
                    "expected 'infoset <player> <iid> = <id> <id> ...'", k)
            p, iid = hp
            if iid in infosets:
                raise FormatError(f"duplicate infoset id {iid!r}", k)
            infosets[iid] = (p, frozenset(ms))
        else:
            raise FormatError(f"unknown directive {kw!r}", k)

    if players is None:
        raise FormatError("players line missing")
    if not parent:
        raise FormatError("no nodes given")
    try:
        g = Game(players, parent, moves, infosets,
                 terminal_names or None, name=name)
        return g.require_valid()
    except ValidationError:
        raise
    except GameError as e:
        raise FormatError(str(e)) from e


def serialize_egs(g: Game) -> str:
    out = []
    if g.name:
        out.append(f"game {g.name}")
    out.append("players " + " ".join(g.players))
    for n in g.dfs_order:
        if n == g.root:
            out.append(f"node {n} root")
        else:
            mv = ",".join(f"{p}:{a}" for p, a in g.moves[n])
            out.append(f"node {n} parent={g.parent[n]} move={mv}")
    for z in g.terminals:
        out.append(f"terminal {z} name={g.terminal_names[z]}")
    for p in g.players:
        for iid in g.player_infosets(p):
            members = sorted(g.infosets[iid].members,
                             key=g.dfs_order.index)
            out.append(f"infoset {p} {iid} = " + " ".join(members))
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# ZNF

def parse_znf(text: str) -> ReducedNormalForm:
    players = None
    labels: dict = {}
    terminals = None
    outcome: dict = {}

    for k, line in _lines(text):
        kw, _, rest = line.partition(" ")
        rest = rest.strip()
        if kw == "players":
            players = tuple(rest.split())
            if not players:
                raise FormatError("players line lists no players", k)
        elif kw == "strategies":
            p, _, labs = rest.partition(":")
            p = p.strip()
            labs = labs.split()
            if not p or not labs:
                raise FormatError("expected 'strategies <p>: <label> ...'", k)
            labels[p] = tuple(labs)
        elif kw == "terminals":
            terminals = tuple(rest.split())
        elif kw == "outcome":
            head, _, z = rest.partition("->")
            prof = tuple(head.split())
            z = z.strip()
            if not z or not prof:
                raise FormatError("expected 'outcome <label> ... -> <z>'", k)
            if prof in outcome:
                raise FormatError(f"duplicate outcome line for {prof}", k)
            outcome[prof] = z
        else:
            raise FormatError(f"unknown directive {kw!r}", k)

    if players is None:
        raise FormatError("players line missing")
    if terminals is None:
        raise FormatError("terminals line missing")
    if set(labels) != set(players):
        raise FormatError("strategies lines do not cover the players")
    for prof in itertools.product(*[labels[p] for p in players]):
        if prof not in outcome:
            raise FormatError(f"profile {prof} uncovered")
    extra = set(outcome) - set(
        itertools.product(*[labels[p] for p in players]))
    if extra:
        raise FormatError(f"outcome line for unknown profile {sorted(extra)[0]}")
    if set(outcome.values()) != set(terminals):
        raise FormatError("outcomes and terminals line disagree")
    return ReducedNormalForm(players, labels, tuple(terminals), outcome)


def serialize_znf(nf: ReducedNormalForm) -> str:
    out = ["players " + " ".join(nf.players)]
    for p in nf.players:
        out.append(f"strategies {p}: " + " ".join(nf.labels[p]))
    out.append("terminals " + " ".join(nf.terminals))
    for prof in nf.profiles():
        out.append("outcome " + " ".join(prof) + " -> " + nf.outcome[prof])
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# DOT export

def export_dot(g: Game) -> str:
    out = ["digraph game {", "  rankdir=TB;", "  node [shape=circle];"]
    for n in g.dfs_order:
        if g.is_terminal(n):
            out.append(f'  "{n}" [shape=box label="{g.terminal_names[n]}"];')
        else:
            owners = "/".join(g.active_players(n))
            out.append(f'  "{n}" [label="{owners}"];')
    for n in g.dfs_order:
        if n != g.root:
            mv = ",".join(f"{p}:{a}" for p, a in g.moves[n])
            out.append(f'  "{g.parent[n]}" -> "{n}" [label="{mv}"];')
    for p in g.players:
        for iid in g.player_infosets(p):
            members = sorted(g.infosets[iid].members, key=g.dfs_order.index)
            for u, v in zip(members, members[1:]):
                out.append(f'  "{u}" -> "{v}" [style=dashed dir=none '
                           f'constraint=false label="{iid}"];')
    out.append("}")
    return "\n".join(out) + "\n"
