"""COPS-style concrete syntax for oriented CTRSs.

Grammar::

    document  := block*
    block     := '(' 'CONDITIONTYPE' 'ORIENTED' ')'
               | '(' 'VAR' ident* ')'
               | '(' 'RULES' rule* ')'
               | '(' 'COMMENT' <balanced text> ')'
    rule      := term '->' term ( '|' cond ( ',' cond )* )?
    cond      := term '==' term
    term      := ident | ident '(' [ term ( ',' term )* ] ')'
    ident     := [A-Za-z0-9_'^]+
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from ctrslab.systems import MalformedSystem, Rule, RewriteSystem
from ctrslab.terms import App, Term, Var, apply_subst, variables

_TOKEN = re.compile(r"\s+|(?P<ident>[A-Za-z0-9_'^]+)|(?P<arrow>->)|(?P<eq>==)|(?P<punct>[(),|])")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__("line %d, col %d: %s" % (line, col, message))
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int
    offset: int


_COMMENT_HEAD = re.compile(r"\s*COMMENT(?![A-Za-z0-9_'^])")


def _tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0

    def advance(end):
        nonlocal line, line_start
        chunk = text[pos:end]
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError("unexpected character %r" % text[pos], line, pos - line_start + 1)
        kind = m.lastgroup
        if kind is not None:
            tok_text = m.group()
            tokens.append(Token(kind if kind != "punct" else tok_text, tok_text, line, pos - line_start + 1, pos))
        advance(m.end())
        pos = m.end()
        if kind == "punct" and tokens[-1].kind == "(":
            head = _COMMENT_HEAD.match(text, pos)
            if head:
                open_line, open_col = tokens[-1].line, tokens[-1].col
                body_start = head.end()
                depth, end = 1, body_start
                while end < len(text) and depth:
                    depth += {"(": 1, ")": -1}.get(text[end], 0)
                    end += 1
                if depth:
                    raise ParseError("unterminated COMMENT block", open_line, open_col)
                tokens.append(Token("ident", "COMMENT", line, pos - line_start + 1, pos))
                tokens.append(Token("comment", text[body_start:end - 1].strip(), line, pos - line_start + 1, body_start))
                advance(end - 1)
                pos = end - 1
    tokens.append(Token("eof", "", line, pos - line_start + 1, pos))
    return tokens


@dataclass
class SourceDocument:
    variables: List[str]
    rules: List[Rule]
    condition_type: Optional[str] = None
    comment: Optional[str] = None
    spans: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def system(self) -> RewriteSystem:
        return RewriteSystem.build(self.rules)


class _Parser:
    def __init__(self, text: str, variables: Optional[Set[str]] = None, signature: Optional[Dict[str, int]] = None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars: Set[str] = set(variables or ())
        self.arities: Dict[str, int] = dict(signature or {})
        self.implicit_vars = False

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col)

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        tok = self.tok
        if tok.kind != kind:
            self.error("expected %s, found %s" % (what or repr(kind), repr(tok.text) if tok.text else "end of input"))
        self.i += 1
        return tok

    def document(self) -> SourceDocument:
        doc = SourceDocument(variables=[], rules=[])
        seen_rules = False
        while self.tok.kind != "eof":
            self.expect("(")
            head = self.expect("ident", "a block keyword")
            if head.text == "CONDITIONTYPE":
                ctype = self.expect("ident", "a condition type")
                if ctype.text != "ORIENTED":
                    self.error("condition type %s is not supported (only ORIENTED)" % ctype.text, ctype)
                doc.condition_type = ctype.text
                self.expect(")")
            elif head.text == "VAR":
                if seen_rules:
                    self.error("VAR block must precede RULES", head)
                while self.tok.kind == "ident":
                    name = self.tok.text
                    if name in self.arities:
                        self.error("%s is already used as a function symbol" % name)
                    self.vars.add(name)
                    doc.variables.append(name)
                    self.i += 1
                self.expect(")")
            elif head.text == "RULES":
                if seen_rules:
                    self.error("duplicate RULES block", head)
                seen_rules = True
                while self.tok.kind != ")":
                    start = self.tok.line
                    rule = self.rule("r%d" % (len(doc.rules) + 1))
                    doc.spans[rule.label] = (start, self.tokens[self.i - 1].line)
                    doc.rules.append(rule)
                self.expect(")")
            elif head.text == "COMMENT":
                doc.comment = self.comment(head)
            else:
                self.error("unknown block %s" % head.text, head)
        return doc

    def comment(self, head: Token) -> str:
        body = self.expect("comment", "comment text")
        self.expect(")")
        return body.text

    def rule(self, label: str) -> Rule:
        first = self.tok
        lhs = self.term()
        if type(lhs) is Var:
            self.error("left-hand side of a rule must not be a variable", first)
        self.expect("arrow", "'->'")
        rhs = self.term()
        conds = []
        if self.tok.kind == "|":
            self.i += 1
            conds.append(self.condition())
            while self.tok.kind == ",":
                self.i += 1
                conds.append(self.condition())
        return Rule(label, lhs, rhs, tuple(conds))

    def condition(self):
        s = self.term()
        self.expect("eq", "'=='")
        t = self.term()
        return (s, t)

    def term(self) -> Term:
        tok = self.expect("ident", "a term")
        name = tok.text
        if self.tok.kind == "(":
            if name in self.vars:
                self.error("variable %s used as a function symbol" % name, tok)
            self.i += 1
            args = []
            if self.tok.kind != ")":
                args.append(self.term())
                while self.tok.kind == ",":
                    self.i += 1
                    args.append(self.term())
            self.expect(")")
            self._arity(name, len(args), tok)
            return App(name, args)
        if name in self.vars:
            return Var(name)
        if self.implicit_vars and name not in self.arities:
            return Var(name)
        self._arity(name, 0, tok)
        return App(name, ())

    def _arity(self, name: str, n: int, tok: Token):
        known = self.arities.setdefault(name, n)
        if known != n:
            self.error("arity conflict: %s used with %d and %d arguments" % (name, known, n), tok)


def parse_document(text: str) -> SourceDocument:
    return _Parser(text).document()


def parse_system(text: str) -> RewriteSystem:
    doc = parse_document(text)
    try:
        return doc.system()
    except MalformedSystem as exc:  # pragma: no cover - arities are checked while parsing
        raise ParseError(str(exc), 1, 1) from None


def parse_term(
    text: str,
    variables: Iterable[str] = (),
    signature: Optional[Union[RewriteSystem, Dict[str, int]]] = None,
) -> Term:
    """Parse a single term.

    With a signature, bare identifiers outside it are read as variables;
    without one, only names in ``variables`` are.
    """
    if isinstance(signature, RewriteSystem):
        signature = {s.name: s.arity for s in signature.signature.values()}
    p = _Parser(text, set(variables), signature)
    p.implicit_vars = signature is not None
    t = p.term()
    if p.tok.kind != "eof":
        p.error("trailing input after term")
    return t


def parse_rule(text: str, variables: Iterable[str] = (), label: str = "r1") -> Rule:
    p = _Parser(text, set(variables))
    r = p.rule(label)
    if p.tok.kind != "eof":
        p.error("trailing input after rule")
    return r


# -- rendering ----------------------------------------------------------


def _declash(rule: Rule, symbols: Set[str]) -> Rule:
    mapping = {}
    taken = set(symbols) | set(variables(*rule.terms()))
    for x in variables(*rule.terms()):
        if x in symbols:
            new = x
            while new in taken:
                new += "'"
            taken.add(new)
            mapping[x] = Var(new)
    if not mapping:
        return rule
    conds = tuple((apply_subst(s, mapping), apply_subst(t, mapping)) for s, t in rule.conditions)
    return Rule(rule.label, apply_subst(rule.lhs, mapping), apply_subst(rule.rhs, mapping), conds)


def render_rule(rule: Rule) -> str:
    text = "%r -> %r" % (rule.lhs, rule.rhs)
    if rule.conditions:
        text += " | " + ", ".join("%r == %r" % c for c in rule.conditions)
    return text


def render_system(system) -> str:
    """Canonical text for a system, or for the target of a transform context."""
    if not isinstance(system, RewriteSystem):
        system = system.target
    symbols = set(system.signature)
    rules = [_declash(r, symbols) for r in system.rules]
    names = variables(*[t for r in rules for t in r.terms()])
    lines = []
    if any(r.conditions for r in rules):
        lines.append("(CONDITIONTYPE ORIENTED)")
    if names:
        lines.append("(VAR %s)" % " ".join(names))
    lines.append("(RULES")
    lines.extend("  " + render_rule(r) for r in rules)
    lines.append(")")
    return "\n".join(lines) + "\n"
