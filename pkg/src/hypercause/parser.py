"""Parsers for the two formula syntaxes.

Infix:   ``forall p1 p2. G (lo[p1] <-> lo[p2])``
S-expr:  ``Forall (Forall (G (Eq (AP "lo" 0) (AP "lo" 1))))``

In the s-expression form atoms name their quantifier by index; the parsed
formula uses variable names ``0``, ``1``, ... so reports match the numbered
quantifiers.  Only universal prefixes are supported; an existential
quantifier raises UnsupportedFragmentError.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import formulas as F
from .errors import ParseError, UnsupportedFragmentError

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<lpar>\()
      | (?P<rpar>\))
      | (?P<dot>\.)
      | (?P<lbrack>\[)
      | (?P<rbrack>\])
      | (?P<iff><->)
      | (?P<implies>->)
      | (?P<and>&&?)
      | (?P<or>\|\|?)
      | (?P<not>!)
      | (?P<string>"[^"]*")
      | (?P<number>\d+)
      | (?P<word>[A-Za-z_][A-Za-z_0-9']*)
    )""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group().strip(), m.start()))
        i = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Tokens:
    def __init__(self, text: str):
        self.items = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.items[self.i]

    def next(self) -> Token:
        tok = self.items[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {what or kind}, found {tok.text or 'end of input'!r}", tok.pos)
        return self.next()


# -- infix ------------------------------------------------------------------

_UNARY_WORDS = {"X": F.Next, "F": F.Eventually, "G": F.Always}
_RESERVED = {"forall", "exists", "true", "false", "X", "F", "G", "U", "R"}


def _parse_infix(text: str) -> F.HyperFormula:
    toks = _Tokens(text)
    variables: list[str] = []
    while toks.peek().kind == "word" and toks.peek().text in ("forall", "exists"):
        head = toks.next()
        if head.text == "exists":
            raise UnsupportedFragmentError(
                "existential quantifiers are not supported (universal fragment only)"
            )
        group = []
        while (toks.peek().kind == "number"
               or (toks.peek().kind == "word" and toks.peek().text not in _RESERVED)):
            group.append(toks.next().text)
        if not group:
            raise ParseError("expected at least one trace variable after 'forall'", toks.peek().pos)
        toks.expect("dot", "'.' after quantified variables")
        variables.extend(group)
    if not variables:
        raise UnsupportedFragmentError("formula must start with a universal quantifier prefix")
    body = _infix_iff(toks)
    toks.expect("end", "end of formula")
    return F.HyperFormula(tuple(variables), body)


def _infix_iff(toks: _Tokens) -> F.Formula:
    left = _infix_implies(toks)
    while toks.peek().kind == "iff":
        toks.next()
        left = F.Iff(left, _infix_implies(toks))
    return left


def _infix_implies(toks: _Tokens) -> F.Formula:
    left = _infix_or(toks)
    if toks.peek().kind == "implies":
        toks.next()
        return F.Implies(left, _infix_implies(toks))
    return left


def _infix_or(toks: _Tokens) -> F.Formula:
    left = _infix_and(toks)
    while toks.peek().kind == "or":
        toks.next()
        left = F.Or(left, _infix_and(toks))
    return left


def _infix_and(toks: _Tokens) -> F.Formula:
    left = _infix_until(toks)
    while toks.peek().kind == "and":
        toks.next()
        left = F.And(left, _infix_until(toks))
    return left


def _infix_until(toks: _Tokens) -> F.Formula:
    left = _infix_unary(toks)
    tok = toks.peek()
    if tok.kind == "word" and tok.text in ("U", "R"):
        toks.next()
        right = _infix_until(toks)
        return F.Until(left, right) if tok.text == "U" else F.Release(left, right)
    return left


def _infix_unary(toks: _Tokens) -> F.Formula:
    tok = toks.peek()
    if tok.kind == "not":
        toks.next()
        return F.Not(_infix_unary(toks))
    if tok.kind == "word" and tok.text in _UNARY_WORDS:
        toks.next()
        return _UNARY_WORDS[tok.text](_infix_unary(toks))
    return _infix_primary(toks)


def _infix_primary(toks: _Tokens) -> F.Formula:
    tok = toks.peek()
    if tok.kind == "lpar":
        toks.next()
        inner = _infix_iff(toks)
        toks.expect("rpar", "')'")
        return inner
    if tok.kind == "word":
        if tok.text == "true":
            toks.next()
            return F.TRUE
        if tok.text == "false":
            toks.next()
            return F.FALSE
        if tok.text in ("forall", "exists"):
            raise ParseError("quantifiers are only allowed as the formula prefix", tok.pos)
        name = toks.next().text
        toks.expect("lbrack", "'[' after proposition name")
        var_tok = toks.peek()
        if var_tok.kind not in ("word", "number"):
            raise ParseError("expected trace variable", var_tok.pos)
        toks.next()
        toks.expect("rbrack", "']'")
        return F.Atom(name, var_tok.text)
    raise ParseError(f"unexpected token {tok.text or 'end of input'!r}", tok.pos)


# -- s-expression -----------------------------------------------------------

_SEXPR_UNARY = {"Not": F.Not, "Neg": F.Not, "X": F.Next, "Next": F.Next,
                "F": F.Eventually, "Finally": F.Eventually, "Eventually": F.Eventually,
                "G": F.Always, "Globally": F.Always}
_SEXPR_BINARY = {"And": F.And, "Or": F.Or, "Implies": F.Implies, "Eq": F.Iff,
                 "U": F.Until, "Until": F.Until, "R": F.Release, "Release": F.Release}


def _parse_sexpr(text: str) -> F.HyperFormula:
    toks = _Tokens(text)
    quantifiers = 0

    def head_name() -> Token:
        return toks.expect("word", "operator name")

    def parse_quantified() -> F.Formula:
        nonlocal quantifiers
        tok = toks.peek()
        wrapped = tok.kind == "lpar"
        if wrapped:
            toks.next()
            tok = toks.peek()
        if tok.kind == "word" and tok.text in ("Forall", "Exists"):
            toks.next()
            if tok.text == "Exists":
                raise UnsupportedFragmentError(
                    "existential quantifiers are not supported (universal fragment only)"
                )
            quantifiers += 1
            inner = parse_quantified()
            if wrapped:
                toks.expect("rpar", "')'")
            return inner
        if wrapped:
            body = parse_body_after_lpar()
            return body
        return parse_body()

    def parse_body() -> F.Formula:
        tok = toks.peek()
        if tok.kind == "lpar":
            toks.next()
            return parse_body_after_lpar()
        if tok.kind == "word" and tok.text in ("True", "true"):
            toks.next()
            return F.TRUE
        if tok.kind == "word" and tok.text in ("False", "false"):
            toks.next()
            return F.FALSE
        raise ParseError(f"unexpected token {tok.text or 'end of input'!r}", tok.pos)

    def parse_body_after_lpar() -> F.Formula:
        tok = head_name()
        name = tok.text
        if name == "AP":
            prop = toks.expect("string", "quoted proposition name").text[1:-1]
            idx = int(toks.expect("number", "trace index").text)
            toks.expect("rpar", "')'")
            return F.Atom(prop, str(idx))
        if name in _SEXPR_UNARY:
            arg = parse_body()
            toks.expect("rpar", "')'")
            return _SEXPR_UNARY[name](arg)
        if name in _SEXPR_BINARY:
            left = parse_body()
            right = parse_body()
            toks.expect("rpar", "')'")
            return _SEXPR_BINARY[name](left, right)
        if name == "Neq":
            left = parse_body()
            right = parse_body()
            toks.expect("rpar", "')'")
            return F.Not(F.Iff(left, right))
        if name in ("Forall", "Exists"):
            raise ParseError("quantifiers are only allowed as the formula prefix", tok.pos)
        raise ParseError(f"unknown operator {name!r}", tok.pos)

    body = parse_quantified()
    toks.expect("end", "end of formula")
    if quantifiers == 0:
        raise UnsupportedFragmentError("formula must start with a universal quantifier prefix")
    variables = tuple(str(i) for i in range(quantifiers))
    bad = [a for a in F.atoms(body) if a.var not in variables]
    if bad:
        raise ParseError(
            f"atom index {bad[0].var} exceeds the {quantifiers} quantifier(s)", 0
        )
    return F.HyperFormula(variables, body)


def detect_syntax(text: str) -> str:
    stripped = text.lstrip()
    if stripped.startswith(("Forall", "Exists", "(")):
        return "sexpr"
    return "infix"


def parse_hyperltl(text: str, syntax: str = "auto") -> F.HyperFormula:
    """Parse a quantified formula in either syntax (auto-detected by default)."""
    if syntax == "auto":
        syntax = detect_syntax(text)
    if syntax == "sexpr":
        return _parse_sexpr(text)
    if syntax == "infix":
        return _parse_infix(text)
    raise ValueError(f"unknown syntax {syntax!r}")
