"""Recursive-descent parser for the concrete formula syntax.

Grammar::

    formula := quant | impl
    quant   := ("ALL" | "EX") ident "." formula
    impl    := disj ["->" formula]
    disj    := conj {"|" conj}
    conj    := neg {"&" neg}
    neg     := "~" neg | atom
    atom    := "(" formula ")" | ident "(" termlist ")" | term ("=" | "<=" | "<") term
    term    := ident | ident "(" termlist ")"

Identifiers are either alphanumeric (``[A-Za-z_][A-Za-z0-9_']*``) or runs of
operator characters such as ``+``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError, SignatureError
from ..structures import Signature
from .syntax import App, Eq, Exists, Forall, Formula, Implies, Not, Or, And, Rel, Term, Var, lt

__all__ = ["parse", "parse_term", "tokenize", "Token"]

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<le><=)
  | (?P<punct>[()~&|=<.,])
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[+*^#@$%!?/]+)
    """,
    re.VERBOSE,
)

KEYWORDS = {"ALL", "EX"}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "kw", or the literal punctuation itself; "eof"
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        text = m.group()
        if kind == "word":
            out.append(Token("kw" if text in KEYWORDS else "ident", text, pos))
        elif kind == "op":
            out.append(Token("ident", text, pos))
        elif kind != "ws":
            out.append(Token(text, text, pos))
        pos = m.end()
    out.append(Token("eof", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, sig: Signature):
        self.src = src
        self.sig = sig
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", self.tok.pos)
        return self.advance()

    # formula := quant | impl
    def formula(self) -> Formula:
        if self.tok.kind == "kw":
            kw = self.advance()
            var = self.expect("ident")
            self._check_variable(var)
            self.expect(".")
            body = self.formula()
            return Forall(var.text, body) if kw.text == "ALL" else Exists(var.text, body)
        left = self.disj()
        if self.tok.kind == "->":
            self.advance()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.tok.kind == "|":
            self.advance()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.neg()]
        while self.tok.kind == "&":
            self.advance()
            parts.append(self.neg())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def neg(self) -> Formula:
        if self.tok.kind == "~":
            self.advance()
            return Not(self.neg())
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if t.kind == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident" and self.sig.relation_arity(t.text) is not None and t.text != "<=":
            self.advance()
            self.expect("(")
            args = self.termlist()
            self.expect(")")
            arity = self.sig.relation_arity(t.text)
            if len(args) != arity:
                raise SignatureError(
                    f"relation {t.text!r} takes {arity} arguments, got {len(args)} (at position {t.pos})"
                )
            return Rel(t.text, tuple(args))
        if t.kind not in ("ident",):
            found = t.text or "end of input"
            raise ParseError(f"expected an atomic formula, found {found!r}", t.pos)
        left = self.term()
        op = self.tok
        if op.kind == "=":
            self.advance()
            return Eq(left, self.term())
        if op.kind in ("<=", "<"):
            if self.sig.relation_arity("<=") != 2:
                raise SignatureError(f"the signature has no binary relation '<=' (at position {op.pos})")
            self.advance()
            right = self.term()
            return Rel("<=", (left, right)) if op.kind == "<=" else lt(left, right)
        found = op.text or "end of input"
        raise ParseError(f"expected '=', '<=' or '<', found {found!r}", op.pos)

    def termlist(self) -> list[Term]:
        args = [self.term()]
        while self.tok.kind == ",":
            self.advance()
            args.append(self.term())
        return args

    def term(self) -> Term:
        t = self.expect("ident")
        if self.tok.kind == "(":
            arity = self.sig.function_arity(t.text)
            if arity is None:
                raise SignatureError(f"unknown function symbol {t.text!r} (at position {t.pos})")
            self.advance()
            args = self.termlist()
            self.expect(")")
            if len(args) != arity:
                raise SignatureError(
                    f"function {t.text!r} takes {arity} arguments, got {len(args)} (at position {t.pos})"
                )
            return App(t.text, tuple(args))
        if self.sig.function_arity(t.text) == 0:
            return App(t.text, ())
        self._check_variable(t)
        return Var(t.text)

    def _check_variable(self, t: Token):
        if self.sig.relation_arity(t.text) is not None or self.sig.function_arity(t.text) is not None:
            raise SignatureError(f"symbol {t.text!r} used as a variable (at position {t.pos})")
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", t.text):
            raise SignatureError(f"unknown symbol {t.text!r} (at position {t.pos})")


def parse(src: str, sig: Signature) -> Formula:
    """Parse ``src`` into a formula over ``sig``."""
    p = _Parser(src, sig)
    f = p.formula()
    if p.tok.kind != "eof":
        raise ParseError(f"unexpected {p.tok.text!r} after formula", p.tok.pos)
    return f


def parse_term(src: str, sig: Signature) -> Term:
    p = _Parser(src, sig)
    t = p.term()
    if p.tok.kind != "eof":
        raise ParseError(f"unexpected {p.tok.text!r} after term", p.tok.pos)
    return t
