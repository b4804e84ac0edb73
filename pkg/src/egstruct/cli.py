"""Command-line interface.

Exit codes: 0 success (or `equiv`: equivalent), 1 not equivalent, 2 usage
error, 3 parse/validation error, 4 internal consistency failure (the two
equivalence methods disagree).
"""

from __future__ import annotations

import json
import sys

import click

from .equivalence import (MethodDisagreement, decide_equivalence,
                          reconstruct as _reconstruct)
from .formats import (export_dot, parse_egs, parse_znf, serialize_egs,
                      serialize_znf)
from .generator import GeneratorConfig, generate_random
from .model import GameError, ValidationError
from .reduction import is_minimal, minimize as _minimize
from .strategies import (enumerate_strategies, play, reduced_normal_form,
                         reduced_strategies)
from .transforms import (coalesce as _coalesce, find_coalescing_sites,
                         find_simultanizing_sites, simultanize as _simultanize)


def _load(path):
    try:
        with open(path, encoding="utf-8") as f:
            return parse_egs(f.read())
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(3)
    except GameError as e:
        click.echo(f"error: {path}: {e}", err=True)
        sys.exit(3)


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main():
    """Extensive game structures: validation, rewriting, equivalence."""


@main.command()
@click.argument("file", type=click.Path())
def validate(file):
    """Check a game file against all structural invariants."""
    g = _load(file)
    click.echo(f"{file}: valid ({len(g.parent)} nodes)")


@main.command()
@click.argument("file", type=click.Path())
def info(file):
    """Summarize a game: players, sizes, minimality."""
    g = _load(file)
    click.echo(f"players: {' '.join(g.players)}")
    click.echo(f"nodes: {len(g.parent)} "
               f"({len(g.nonterminals)} decision, {len(g.terminals)} terminal)")
    click.echo(f"height: {g.height}")
    for p in g.players:
        iids = g.player_infosets(p)
        click.echo(f"player {p}: {len(iids)} infosets, "
                   f"{g.action_total(p)} total actions")
    click.echo(f"minimal: {'yes' if is_minimal(g) else 'no'}")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--reduced", is_flag=True, help="one entry per equivalence class")
def strategies(file, reduced):
    """List each player's strategies."""
    g = _load(file)
    for p in g.players:
        if reduced:
            labels = [c.label for c in reduced_strategies(g, p)]
        else:
            labels = [".".join(a for _, a in s.choices) or "(idle)"
                      for s in enumerate_strategies(g, p)]
        click.echo(f"{p}: " + " ".join(labels))


@main.command("normal-form")
@click.argument("file", type=click.Path())
@click.option("--reduced", is_flag=True, help="use reduced strategies")
@click.option("-o", "--output", type=click.Path(), default=None)
def normal_form(file, reduced, output):
    """Print the normal form; reduced form uses the ZNF file format."""
    g = _load(file)
    if reduced:
        _emit(serialize_znf(reduced_normal_form(g)), output)
        return
    import itertools
    pools = [enumerate_strategies(g, p) for p in g.players]
    lines = []
    for combo in itertools.product(*pools):
        prof = dict(zip(g.players, combo))
        labels = [".".join(a for _, a in s.choices) for s in combo]
        lines.append(" ".join(labels) + " -> " + play(g, prof))
    _emit("\n".join(lines) + "\n", output)


@main.command()
@click.argument("file", type=click.Path())
def opportunities(file):
    """List all coalescing and simultanizing sites."""
    g = _load(file)
    for k, s in enumerate(find_coalescing_sites(g)):
        click.echo(f"coalesce {k}: player {s.player} source={s.source} "
                   f"target={s.target} pivot={s.pivot_action}")
    for k, s in enumerate(find_simultanizing_sites(g)):
        click.echo(f"simultanize {k}: player {s.player} history={s.history} "
                   f"dominating={','.join(sorted(s.dominating))}")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--site", type=int, default=0, show_default=True,
              help="index into the `opportunities` coalesce list")
@click.option("-o", "--output", type=click.Path(), default=None)
def coalesce(file, site, output):
    """Apply one coalescing rewrite and print the result."""
    g = _load(file)
    sites = find_coalescing_sites(g)
    if not 0 <= site < len(sites):
        click.echo(f"error: no coalescing site {site} "
                   f"({len(sites)} available)", err=True)
        sys.exit(2)
    out, _ = _coalesce(g, sites[site])
    _emit(serialize_egs(out), output)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--site", type=int, default=0, show_default=True,
              help="index into the `opportunities` simultanize list")
@click.option("-o", "--output", type=click.Path(), default=None)
def simultanize(file, site, output):
    """Apply one simultanizing rewrite and print the result."""
    g = _load(file)
    sites = find_simultanizing_sites(g)
    if not 0 <= site < len(sites):
        click.echo(f"error: no simultanizing site {site} "
                   f"({len(sites)} available)", err=True)
        sys.exit(2)
    out, _ = _simultanize(g, sites[site])
    _emit(serialize_egs(out), output)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--trace", type=click.Path(), default=None,
              help="write the rewrite steps as JSON lines")
@click.option("-o", "--output", type=click.Path(), default=None)
def minimize(file, trace, output):
    """Reduce a game to its minimal form."""
    g = _load(file)
    res = _minimize(g)
    if trace:
        with open(trace, "w", encoding="utf-8") as f:
            for step in res.trace.to_jsonable():
                f.write(json.dumps(step) + "\n")
    _emit(serialize_egs(res.minimal_game), output)


@main.command()
@click.argument("file_a", type=click.Path())
@click.argument("file_b", type=click.Path())
@click.option("--method", type=click.Choice(["direct", "minimal", "both"]),
              default="both", show_default=True)
@click.option("--witness", type=click.Path(), default=None,
              help="write the relabeling witness as JSON")
def equiv(file_a, file_b, method, witness):
    """Decide behavioral equivalence of two games."""
    g1, g2 = _load(file_a), _load(file_b)
    try:
        verdict = decide_equivalence(g1, g2, method=method)
    except MethodDisagreement as e:
        click.echo(f"internal consistency failure: {e}", err=True)
        sys.exit(4)
    click.echo("equivalent" if verdict.equivalent else "not equivalent")
    if witness and verdict.witness:
        with open(witness, "w", encoding="utf-8") as f:
            json.dump({"label_maps": verdict.witness.label_maps,
                       "terminal_map": verdict.witness.terminal_map}, f,
                      indent=2)
    sys.exit(0 if verdict.equivalent else 1)


@main.command()
@click.argument("znf", type=click.Path())
@click.option("-o", "--output", type=click.Path(), default=None)
def reconstruct(znf, output):
    """Rebuild the minimal game whose reduced normal form is given."""
    try:
        with open(znf, encoding="utf-8") as f:
            nf = parse_znf(f.read())
        g = _reconstruct(nf)
    except OSError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(3)
    except GameError as e:
        click.echo(f"error: {znf}: {e}", err=True)
        sys.exit(3)
    _emit(serialize_egs(g), output)


@main.command("export-dot")
@click.argument("file", type=click.Path())
@click.option("-o", "--output", type=click.Path(), default=None)
def export_dot_cmd(file, output):
    """Render a game as a Graphviz digraph."""
    _emit(export_dot(_load(file)), output)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--players", "num_players", type=int, default=2, show_default=True)
@click.option("--max-depth", type=int, default=3, show_default=True)
@click.option("--max-actions", type=int, default=3, show_default=True)
@click.option("--simultaneity-prob", type=float, default=0.3, show_default=True)
@click.option("--merge-prob", type=float, default=0.5, show_default=True)
@click.option("--max-nodes", type=int, default=60, show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
def random(seed, num_players, max_depth, max_actions, simultaneity_prob,
           merge_prob, max_nodes, output):
    """Generate a random valid game (deterministic per seed)."""
    try:
        cfg = GeneratorConfig(seed=seed, num_players=num_players,
                              max_depth=max_depth, max_actions=max_actions,
                              simultaneity_prob=simultaneity_prob,
                              infoset_merge_prob=merge_prob,
                              max_nodes=max_nodes)
        g = generate_random(cfg)
    except ValueError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    _emit(serialize_egs(g), output)


if __name__ == "__main__":
    main()
