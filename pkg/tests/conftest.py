import contextlib

import pytest

from ctrslab import fixtures
from ctrslab.syntax import parse_term
from ctrslab.terms import App, Var, canonical_vars

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion; failures still raise."""

    @contextlib.contextmanager
    def record(number, title):
        _CRITERIA[number] = (title, "FAIL")
        yield
        _CRITERIA[number] = (title, "PASS")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line("criterion %2d %-4s %s" % (number, status, title))


@pytest.fixture(scope="session")
def load():
    return fixtures.load


def term(system, text):
    return parse_term(text, signature=system)


def rename_symbols(t, mapping):
    if type(t) is Var:
        return t
    return App(mapping.get(t.fn, t.fn), [rename_symbols(a, mapping) for a in t.args])


def canonical_rules(rules, keep, order=None):
    """Rules as strings with variables renamed per rule and symbols outside
    ``keep`` renamed by first occurrence in ``order`` (default ``rules``)."""
    mapping = {}
    for r in order if order is not None else rules:
        for t in r.terms():
            for f in _symbols_in_order(t):
                if f not in keep and f not in mapping:
                    mapping[f] = "#%d" % len(mapping)
    out = []
    for r in rules:
        ts = canonical_vars([rename_symbols(t, mapping) for t in r.terms()])
        lhs, rhs, rest = ts[0], ts[1], ts[2:]
        conds = ", ".join("%r == %r" % (rest[i], rest[i + 1]) for i in range(0, len(rest), 2))
        out.append("%r -> %r" % (lhs, rhs) + (" | " + conds if conds else ""))
    return out


def _symbols_in_order(t):
    if type(t) is Var:
        return
    yield t.fn
    for a in t.args:
        yield from _symbols_in_order(a)
