import pytest

import egstruct as eg
from egstruct.generator import GeneratorConfig, generate_random
from helpers import all_egs_names, fig, znf, znf_text


def test_reference_table_serializes_byte_exact():
    nf = eg.reduced_normal_form(fig("fig7_right"))
    assert eg.serialize_znf(nf) == znf_text("fig8")


@pytest.mark.parametrize("name", all_egs_names())
def test_egs_serialization_is_a_fixed_point(name):
    g = fig(name)
    text = eg.serialize_egs(g)
    h = eg.parse_egs(text)
    assert eg.serialize_egs(h) == text
    assert eg.game_isomorphic(g, h)
    assert g.players == h.players
    assert sorted(g.terminal_names.values()) == sorted(h.terminal_names.values())


def test_generated_games_roundtrip():
    for seed in range(10):
        g = generate_random(GeneratorConfig(seed=seed, num_players=3))
        h = eg.parse_egs(eg.serialize_egs(g))
        assert eg.serialize_egs(h) == eg.serialize_egs(g)


def test_znf_roundtrip():
    nf = znf("fig8")
    assert eg.parse_znf(eg.serialize_znf(nf)) == nf


def test_egs_comments_and_blank_lines_ignored():
    text = "# header\n\n" + eg.serialize_egs(fig("fig7_right")) + "\n# tail\n"
    eg.parse_egs(text)


@pytest.mark.parametrize("text,fragment", [
    ("", "players line missing"),
    ("players 1 2\n", "no nodes"),
    ("players 1 2\nplayers 1\nnode r root\n", "duplicate players"),
    ("players 1 2\nnode r root\nnode r root\n", "duplicate node"),
    ("players 1 2\nnode r root\nnode a parent=r\n", "expected 'node"),
    ("players 1 2\nnode r root\nnode a parent=r move=1-x\n",
     "not <player>:<action>"),
    ("players 1 2\nnode r root\nnode a parent=r move=1:x,1:y\n",
     "moves twice"),
    ("players 1 2\nnode r root\nterminal r\n", "expected 'terminal"),
    ("players 1 2\nnode r root\ninfoset 1 i =\n", "expected 'infoset"),
    ("wat 1\n", "unknown directive"),
])
def test_egs_parse_errors(text, fragment):
    with pytest.raises(eg.FormatError) as e:
        eg.parse_egs(text)
    assert fragment in str(e.value)


def test_egs_semantic_errors_surface_as_validation():
    # structurally parseable but invalid game: one action at the root
    text = ("players 1 2\nnode r root\nnode a parent=r move=1:x\n"
            "terminal a name=z1\n")
    with pytest.raises(eg.ValidationError):
        eg.parse_egs(text)


@pytest.mark.parametrize("text,fragment", [
    ("", "players line missing"),
    ("players 1 2\nstrategies 1: a\nstrategies 2: x\n",
     "terminals line missing"),
    ("players 1 2\nstrategies 1: a b\nterminals z1\n",
     "do not cover the players"),
    ("players 1 2\nstrategies 1: a b\nstrategies 2: x\nterminals z1\n"
     "outcome a x -> z1\n", "uncovered"),
    ("players 1 2\nstrategies 1: a\nstrategies 2: x\nterminals z1\n"
     "outcome a x -> z1\noutcome a y -> z1\n", "unknown profile"),
    ("players 1 2\nstrategies 1: a\nstrategies 2: x\nterminals z1 z2\n"
     "outcome a x -> z1\n", "disagree"),
    ("players 1 2\nstrategies 1: a\nstrategies 2: x\nterminals z1\n"
     "outcome a x -> z1\noutcome a x -> z1\n", "duplicate outcome"),
])
def test_znf_parse_errors(text, fragment):
    with pytest.raises(eg.FormatError) as e:
        eg.parse_znf(text)
    assert fragment in str(e.value)


def test_format_error_carries_line_number():
    with pytest.raises(eg.FormatError) as e:
        eg.parse_egs("players 1 2\nnode r root\nnode r root\n")
    assert e.value.line == 3


def test_export_dot_mentions_all_nodes():
    g = fig("fig7_left")
    dot = eg.export_dot(g)
    assert dot.startswith("digraph")
    for n in g.parent:
        assert f'"{n}"' in dot
    assert "->" in dot and "dashed" in dot
