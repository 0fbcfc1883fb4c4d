"""Abstract syntax of first-order formulas with equality, and a pretty-printer.

Conjunctions and disjunctions are n-ary.  The smart constructors ``conj`` and
``disj`` flatten nested occurrences; the dataclass constructors do not, so a
parser can keep explicit parenthesisation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

__all__ = [
    "Var",
    "App",
    "Term",
    "Rel",
    "Eq",
    "Not",
    "And",
    "Or",
    "Implies",
    "Forall",
    "Exists",
    "Formula",
    "conj",
    "disj",
    "neg",
    "implies",
    "forall",
    "exists",
    "le",
    "lt",
    "eq",
    "neq",
    "free_vars",
    "symbols",
    "quantifier_depth",
    "formula_size",
    "pretty",
    "is_sentence",
]


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple["Term", ...]


Term = Union[Var, App]


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Rel, Eq, Not, And, Or, Implies, Forall, Exists]


# -- smart constructors -------------------------------------------------------

def _term(t) -> Term:
    return Var(t) if isinstance(t, str) else t


def conj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    if not flat:
        raise ValueError("empty conjunction")
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    if not flat:
        raise ValueError("empty disjunction")
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def neg(f: Formula) -> Formula:
    return Not(f)


def implies(a: Formula, b: Formula) -> Formula:
    return Implies(a, b)


def forall(vs: str | Iterable[str], body: Formula) -> Formula:
    for v in reversed([vs] if isinstance(vs, str) else list(vs)):
        body = Forall(v, body)
    return body


def exists(vs: str | Iterable[str], body: Formula) -> Formula:
    for v in reversed([vs] if isinstance(vs, str) else list(vs)):
        body = Exists(v, body)
    return body


def le(a, b) -> Rel:
    return Rel("<=", (_term(a), _term(b)))


def eq(a, b) -> Eq:
    return Eq(_term(a), _term(b))


def neq(a, b) -> Not:
    return Not(eq(a, b))


def lt(a, b) -> Formula:
    """Strict order, the expansion of the ``<`` sugar."""
    return And((le(a, b), neq(a, b)))


# -- traversals ---------------------------------------------------------------

def _term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: frozenset[str] = frozenset()
    for a in t.args:
        out |= _term_vars(a)
    return out


@lru_cache(maxsize=None)
def free_vars(f) -> frozenset[str]:
    if isinstance(f, (Var, App)):
        return _term_vars(f)
    if isinstance(f, Rel):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= _term_vars(a)
        return out
    if isinstance(f, Eq):
        return _term_vars(f.left) | _term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def _term_symbols(t: Term, out: set):
    if isinstance(t, App):
        out.add(("function", t.fn, len(t.args)))
        for a in t.args:
            _term_symbols(a, out)


def symbols(f: Formula) -> set[tuple[str, str, int]]:
    """Set of (kind, name, arity) for every relation and function symbol used."""
    out: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Rel):
            out.add(("relation", g.name, len(g.args)))
            for a in g.args:
                _term_symbols(a, out)
        elif isinstance(g, Eq):
            _term_symbols(g.left, out)
            _term_symbols(g.right, out)
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, (And, Or)):
            stack.extend(g.parts)
        elif isinstance(g, Implies):
            stack += [g.left, g.right]
        elif isinstance(g, (Forall, Exists)):
            stack.append(g.body)
    return out


def quantifier_depth(f: Formula) -> int:
    if isinstance(f, (Rel, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or)):
        return max(quantifier_depth(p) for p in f.parts)
    if isinstance(f, Implies):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def formula_size(f: Formula) -> int:
    if isinstance(f, (Rel, Eq)):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.body)
    if isinstance(f, (And, Or)):
        return 1 + sum(formula_size(p) for p in f.parts)
    if isinstance(f, Implies):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1 + formula_size(f.body)


# -- pretty-printing ----------------------------------------------------------
# levels: 0 quantifier/implication, 1 disjunction, 2 conjunction, 3 negation, 4 atom

def pretty_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.fn
    return f"{t.fn}({', '.join(pretty_term(a) for a in t.args)})"


def _level(f: Formula) -> int:
    if isinstance(f, (Forall, Exists, Implies)):
        return 0
    if isinstance(f, Or):
        return 1
    if isinstance(f, And):
        return 2
    if isinstance(f, Not):
        return 3
    return 4


def _pp(f: Formula, ctx: int) -> str:
    if isinstance(f, Rel):
        if f.name == "<=" and len(f.args) == 2:
            s = f"{pretty_term(f.args[0])} <= {pretty_term(f.args[1])}"
        else:
            s = f"{f.name}({', '.join(pretty_term(a) for a in f.args)})"
    elif isinstance(f, Eq):
        s = f"{pretty_term(f.left)} = {pretty_term(f.right)}"
    elif isinstance(f, Not):
        s = "~" + _pp(f.body, 3)
    elif isinstance(f, And):
        s = " & ".join(_pp(p, 3) for p in f.parts)
    elif isinstance(f, Or):
        s = " | ".join(_pp(p, 2) for p in f.parts)
    elif isinstance(f, Implies):
        s = f"{_pp(f.left, 1)} -> {_pp(f.right, 0)}"
    elif isinstance(f, Forall):
        s = f"ALL {f.var}. {_pp(f.body, 0)}"
    elif isinstance(f, Exists):
        s = f"EX {f.var}. {_pp(f.body, 0)}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    return f"({s})" if _level(f) < ctx else s


def pretty(f: Formula) -> str:
    """Concrete syntax accepted by ``parse``."""
    return _pp(f, 0)
