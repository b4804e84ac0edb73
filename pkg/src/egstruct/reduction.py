"""Reduction of a game to its unique minimal form.

A game is minimal when it admits neither a coalescing nor a simultanizing
rewrite.  `minimize` applies rewrites level by level, shallowest sites first;
`minimize_random_order` applies them in seeded random order and must reach an
isomorphic result, which the test suite uses as a confluence check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .model import Game, GameError
from .transforms import (CoalescingSite, SimultanizingSite, TransformTrace,
                         coalesce, find_coalescing_sites,
                         find_simultanizing_sites, simultanize)


class ReductionError(GameError):
    """The rewrite sequence violated a monotonicity guarantee."""


@dataclass
class ReductionResult:
    minimal_game: Game
    trace: TransformTrace = field(default_factory=TransformTrace)

    @property
    def steps(self):
        return self.trace.steps


def is_minimal(g: Game) -> bool:
    return not find_coalescing_sites(g) and not find_simultanizing_sites(g)


def _apply(g: Game, site, trace: TransformTrace) -> Game:
    before_height = g.height
    if isinstance(site, CoalescingSite):
        before_total = g.action_total(site.player)
        out, step = coalesce(g, site)
        if out.action_total(site.player) >= before_total:
            raise ReductionError(
                f"coalescing did not shrink player {site.player}'s action count")
    else:
        out, step = simultanize(g, site)
    if out.height > before_height:
        raise ReductionError("rewrite increased the height of the tree")
    trace.steps.append(step)
    return out


def _site_level(g: Game, site) -> int:
    if isinstance(site, CoalescingSite):
        return min(g.depth[m] for m in g.infosets[site.source].members)
    return g.depth[site.history]


def minimize(g: Game) -> ReductionResult:
    """Apply all available rewrites, shallowest first, until none remain."""
    g.require_valid()
    trace = TransformTrace()
    guard = 4 * (len(g.parent) + sum(g.action_total(p) for p in g.players)) + 16
    for _ in range(guard):
        sites = find_coalescing_sites(g) + find_simultanizing_sites(g)
        if not sites:
            return ReductionResult(g, trace)
        site = min(sites, key=lambda s: (_site_level(g, s),
                                         isinstance(s, SimultanizingSite)))
        g = _apply(g, site, trace)
    raise ReductionError("rewriting did not terminate within the step budget")


def minimize_random_order(g: Game, seed: int) -> ReductionResult:
    """Like `minimize`, but picks among available rewrites at random."""
    g.require_valid()
    rng = random.Random(seed)
    trace = TransformTrace()
    guard = 4 * (len(g.parent) + sum(g.action_total(p) for p in g.players)) + 16
    for _ in range(guard):
        sites = find_coalescing_sites(g) + find_simultanizing_sites(g)
        if not sites:
            return ReductionResult(g, trace)
        g = _apply(g, rng.choice(sites), trace)
    raise ReductionError("rewriting did not terminate within the step budget")
