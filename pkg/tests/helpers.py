"""Shared fixture loading for the test suite."""

import pathlib

import egstruct as eg

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fig(name: str) -> eg.Game:
    return eg.parse_egs((FIXTURES / f"{name}.egs").read_text())


def znf_text(name: str) -> str:
    return (FIXTURES / f"{name}.znf").read_text()


def znf(name: str) -> eg.ReducedNormalForm:
    return eg.parse_znf(znf_text(name))


def all_egs_names():
    return sorted(p.stem for p in FIXTURES.glob("*.egs"))
