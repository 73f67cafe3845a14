import pytest
from hypothesis import given

from conftest import canonical_rules
from ctrslab import fixtures
from ctrslab.syntax import ParseError, parse_document, parse_rule, parse_system, parse_term, render_system
from ctrslab.systems import RewriteSystem, Rule, classify_system
from ctrslab.terms import App, Var
from ctrslab.transforms import linearize, sr_transform, unravel

from strategies import terms

MALFORMED = [
    "(RULES f(x) -> x",  # unclosed block
    "(RULES f(x) x)",  # missing arrow
    "(RULES f(x) -> )",  # missing rhs
    "(VAR x)\n(RULES x -> a)",  # variable lhs
    "(RULES f(a) -> f(a, b))",  # arity conflict
    "(VAR f)\n(RULES f(a) -> a)",  # variable used as a function symbol
    "(CONDITIONTYPE JOIN)\n(RULES a -> b)",  # only oriented conditions
    "(RULES a -> b | c = d)",  # single '='
    "(RULES a -> b | c == )",  # missing condition rhs
    "(RULES a -> b |)",  # empty condition list
    "(RULES a -> b | c == d,)",  # trailing comma
    "(FOO a)",  # unknown block
    "(RULES a -> b)\n(VAR x)",  # VAR after RULES
    "(RULES a -> b)\n(RULES c -> d)",  # duplicate RULES
    "(RULES f(a,) -> a)",  # trailing comma in arguments
    "(RULES f(a -> a)",  # unclosed argument list
    "(RULES a -> b))",  # stray parenthesis
    "(RULES a -> b; c -> d)",  # illegal character
    "(COMMENT unterminated (RULES a -> b)",  # unterminated comment
    "RULES a -> b",  # missing opening parenthesis
]


def test_twenty_malformed_inputs():
    assert len(MALFORMED) == 20


@pytest.mark.parametrize("text", MALFORMED)
def test_malformed_input_is_rejected_with_position(text):
    with pytest.raises(ParseError) as exc:
        parse_system(text)
    err = exc.value
    assert err.line >= 1 and err.col >= 1
    assert str(err).startswith("line %d, col %d:" % (err.line, err.col))


def test_error_position_points_at_offending_token():
    with pytest.raises(ParseError) as exc:
        parse_system("(VAR x)\n(RULES\n  f(x) -> g(x)\n  f(x, x) -> x\n)")
    assert (exc.value.line, exc.value.col) == (4, 3)


def test_r1_fixture():
    R = fixtures.load("r1")
    assert len(R) == 10
    rep = classify_system(R)
    assert rep.dctrs and rep.wll and rep.constructor_system


def test_single_rule_document():
    R = parse_system("(VAR x)\n(RULES f(x) -> x | g(x) == x)")
    assert len(R) == 1 and R.rules[0].conditions
    assert not classify_system(R).wll


def test_empty_rules_block():
    assert len(parse_system("(RULES)")) == 0
    assert render_system(RewriteSystem.build([])) == "(RULES\n)\n"


def test_document_metadata():
    doc = parse_document(fixtures.text("r4"))
    assert doc.condition_type == "ORIENTED"
    assert doc.comment.startswith("WLL and U-WLL")
    assert doc.spans["r1"] == (5, 5)


def test_parse_term_with_signature_reads_unknown_names_as_variables():
    R = fixtures.load("r1")
    t = parse_term("split(x, nil)", signature=R)
    assert repr(t) == "split(x, nil)" and type(t.args[0]).__name__ == "Var"


def test_parse_rule():
    r = parse_rule("f(x) -> x | a == y", ["x", "y"])
    assert str(r) == "f(x) -> x | a == y"


def _contexts():
    for name in fixtures.NAMES:
        R = fixtures.load(name)
        yield name, R
        yield name + ":U", unravel(R).target
        if classify_system(R).wll:
            yield name + ":T", linearize(R).target
        if classify_system(R).ultra_wll:
            yield name + ":SR", sr_transform(R).target


@pytest.mark.parametrize("name,system", list(_contexts()), ids=lambda v: v if isinstance(v, str) else "")
def test_render_parse_roundtrip(name, system):
    text = render_system(system)
    again = parse_system(text)
    keep = set(system.signature)
    assert canonical_rules(again.rules, keep) == canonical_rules(system.rules, keep)
    assert render_system(again) == text


def test_render_renames_variables_that_clash_with_symbols():
    R = RewriteSystem.build([Rule("r1", App("f", [Var("a")]), Var("a")), Rule("r2", App("a"), App("b"))])
    again = parse_system(render_system(R))
    assert str(again.rules[0]) == "f(a') -> a'"


@given(terms())
def test_term_roundtrip(t):
    assert parse_term(repr(t), variables=["x", "y", "z"]) == t
