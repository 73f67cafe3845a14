"""Fixture systems shipped with the package."""

from importlib import resources

from ctrslab.syntax import parse_system

NAMES = ("r1", "r4", "wll_not_uwll", "wll_not_uwll_ab", "uwll_not_wll", "ll_not_wll")


def text(name):
    return resources.files(__name__).joinpath(name + ".trs").read_text(encoding="utf-8")


def load(name):
    return parse_system(text(name))


def path(name):
    return resources.files(__name__).joinpath(name + ".trs")
