import json

from click.testing import CliRunner

import egstruct as eg
from egstruct.cli import main
from helpers import FIXTURES, znf_text


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


FIG7L = FIXTURES / "fig7_left.egs"
FIG7R = FIXTURES / "fig7_right.egs"
FIG5R = FIXTURES / "fig5_right.egs"
FIG8 = FIXTURES / "fig8.znf"


def test_validate_and_info():
    r = run("validate", FIG7L)
    assert r.exit_code == 0 and "valid" in r.output
    r = run("info", FIG7R)
    assert r.exit_code == 0
    assert "players: 1 2" in r.output
    assert "minimal: yes" in r.output


def test_parse_and_validation_errors_exit_3(tmp_path):
    bad = tmp_path / "bad.egs"
    bad.write_text("players 1 2\nnode r root\nnode r root\n")
    assert run("validate", bad).exit_code == 3
    invalid = tmp_path / "invalid.egs"
    invalid.write_text("players 1 2\nnode r root\n"
                       "node a parent=r move=1:x\nterminal a name=z1\n")
    assert run("validate", invalid).exit_code == 3
    assert run("validate", tmp_path / "missing.egs").exit_code == 3


def test_usage_errors_exit_2():
    assert run("validate").exit_code == 2
    assert run("no-such-verb").exit_code == 2
    assert run("coalesce", FIG7R).exit_code == 2  # no sites there
    assert run("random", "--players", "9").exit_code == 2


def test_opportunities_and_coalesce(tmp_path):
    r = run("opportunities", FIG7L)
    assert r.exit_code == 0
    assert sum(1 for l in r.output.splitlines() if l.startswith("coalesce")) == 1
    assert sum(1 for l in r.output.splitlines()
               if l.startswith("simultanize")) == 1
    out = tmp_path / "out.egs"
    assert run("coalesce", FIG7L, "-o", out).exit_code == 0
    g = eg.parse_egs(out.read_text())
    assert eg.game_isomorphic(g, eg.parse_egs(FIG7R.read_text()))


def test_minimize_with_trace(tmp_path):
    out, trace = tmp_path / "m.egs", tmp_path / "trace.jsonl"
    r = run("minimize", FIXTURES / "fig1_left.egs", "-o", out,
            "--trace", trace)
    assert r.exit_code == 0
    g = eg.parse_egs(out.read_text())
    assert eg.game_isomorphic(g, eg.parse_egs(
        (FIXTURES / "fig1_right.egs").read_text()))
    steps = [json.loads(l) for l in trace.read_text().splitlines()]
    assert steps and all("kind" in s for s in steps)


def test_equiv_exit_codes(tmp_path):
    assert run("equiv", FIG7L, FIG7R).exit_code == 0
    assert run("equiv", FIG7L, FIG5R).exit_code == 1
    w = tmp_path / "witness.json"
    r = run("equiv", FIG7L, FIG7R, "--method", "direct", "--witness", w)
    assert r.exit_code == 0
    data = json.loads(w.read_text())
    assert set(data) == {"label_maps", "terminal_map"}


def test_normal_form_matches_reference(tmp_path):
    out = tmp_path / "nf.znf"
    assert run("normal-form", FIG7R, "--reduced", "-o", out).exit_code == 0
    assert out.read_text() == znf_text("fig8")


def test_reconstruct(tmp_path):
    out = tmp_path / "g.egs"
    assert run("reconstruct", FIG8, "-o", out).exit_code == 0
    g = eg.parse_egs(out.read_text())
    assert eg.game_isomorphic(g, eg.parse_egs(FIG7R.read_text()))


def test_strategies_and_export_dot():
    r = run("strategies", FIG7L, "--reduced")
    assert r.exit_code == 0 and r.output.startswith("1: ")
    r = run("export-dot", FIG7L)
    assert r.exit_code == 0 and r.output.startswith("digraph")


def test_random_is_deterministic(tmp_path):
    a, b = tmp_path / "a.egs", tmp_path / "b.egs"
    assert run("random", "--seed", "11", "--players", "3", "-o", a).exit_code == 0
    assert run("random", "--seed", "11", "--players", "3", "-o", b).exit_code == 0
    assert a.read_text() == b.read_text()
    eg.parse_egs(a.read_text()).require_valid()
