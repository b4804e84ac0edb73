import random

import pytest

import egstruct as eg
from egstruct.generator import (GeneratorConfig, generate_random, perturb,
                                random_transform_chain)
from helpers import fig, znf


REN7 = """
game renamed
players 1 2
node top root
node A parent=top move=1:alpha
node B parent=top move=1:beta
node C parent=top move=1:gamma
node AX parent=A move=2:left
node AY parent=A move=2:right
node BX parent=B move=2:left
node BY parent=B move=2:right
terminal C name=w5
terminal AX name=w1
terminal AY name=w3
terminal BX name=w2
terminal BY name=w4
infoset 2 i = A B
"""


def test_game_isomorphic_up_to_relabeling():
    g = fig("fig7_right")
    h = eg.parse_egs(REN7)
    assert eg.game_isomorphic(g, h)
    assert eg.game_isomorphic(h, g)


def test_game_isomorphic_distinguishes_shapes():
    assert not eg.game_isomorphic(fig("fig7_left"), fig("fig7_right"))
    assert not eg.game_isomorphic(fig("fig5_left"), fig("fig5_right"))
    assert eg.game_isomorphic(fig("fig5_right"), fig("fig5_right"))


def test_rnf_isomorphic_returns_checked_witness():
    n1 = eg.reduced_normal_form(fig("fig7_left"))
    n2 = eg.reduced_normal_form(fig("fig7_right"))
    w = eg.rnf_isomorphic(n1, n2)
    assert w is not None
    assert w.verify(n1, n2)
    assert eg.rnf_isomorphic(n1, eg.reduced_normal_form(fig("fig1_left"))) is None


def test_reconstruct_reference_table():
    g = eg.reconstruct(znf("fig8"))
    g.require_valid()
    assert eg.is_minimal(g)
    assert eg.game_isomorphic(g, fig("fig7_right"))


def test_reconstruct_matches_minimize_on_generated_games():
    for seed in range(15):
        g = generate_random(GeneratorConfig(
            seed=seed, num_players=2 + seed % 3, max_depth=2 + seed % 3))
        rebuilt = eg.reconstruct(eg.reduced_normal_form(g))
        assert eg.game_isomorphic(rebuilt, eg.minimize(g).minimal_game), seed


def test_decide_equivalence_on_figures():
    assert eg.decide_equivalence(fig("fig7_left"), fig("fig7_right"))
    assert eg.decide_equivalence(fig("fig5_left"), fig("fig5_right"))
    v = eg.decide_equivalence(fig("fig7_left"), fig("fig5_right"))
    assert not v
    assert v.by_method == {"direct": False, "minimal": False}


def test_decide_equivalence_methods():
    g, h = fig("fig1_left"), fig("fig1_right")
    assert eg.decide_equivalence(g, h, method="direct").witness is not None
    assert eg.decide_equivalence(g, h, method="minimal")
    with pytest.raises(ValueError):
        eg.decide_equivalence(g, h, method="???")


def test_transform_chains_stay_equivalent_and_perturbations_do_not():
    for seed in range(8):
        g = generate_random(GeneratorConfig(seed=seed, num_players=2 + seed % 2))
        rng = random.Random(seed)
        h = random_transform_chain(g, rng, 3)
        assert eg.decide_equivalence(g, h).equivalent, seed
        bad = perturb(g, rng)
        assert not eg.decide_equivalence(g, bad).equivalent, seed


def test_reconstruct_sequential_table():
    nf = eg.ReducedNormalForm(
        ("1", "2"),
        {"1": ("a", "b"), "2": ("x", "y")},
        ("z1", "z2", "z3"),
        {("a", "x"): "z1", ("a", "y"): "z1",
         ("b", "x"): "z2", ("b", "y"): "z3"})
    g = eg.reconstruct(nf)
    assert eg.rnf_isomorphic(eg.reduced_normal_form(g), nf)


def test_reconstruct_rejects_non_reduced_tables():
    # the two strategies of each player are behaviorally equivalent, so this
    # table is not the Z-reduced normal form of any game
    nf = eg.ReducedNormalForm(
        ("1", "2"),
        {"1": ("a", "b"), "2": ("x", "y")},
        ("z1", "z2"),
        {("a", "x"): "z1", ("a", "y"): "z2",
         ("b", "x"): "z2", ("b", "y"): "z1"})
    with pytest.raises(eg.ReconstructionError):
        eg.reconstruct(nf)
