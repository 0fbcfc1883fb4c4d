"""Tarskian evaluation of formulas over finite structures.

Formulas are compiled into closures over a slot-indexed environment.  Three
optimisations keep evaluation practical without changing its meaning:

* short-circuiting of connectives and quantifiers;
* a quantifier whose body starts with a conjunct (or, under ALL, an
  antecedent conjunct) mentioning only the bound variable and at most one
  other variable only ranges over the elements satisfying that conjunct;
  these candidate lists are cached per value of the other variable;
* quantifier nodes with at most three free variables are memoised on their
  values, and nodes built from equalities alone are memoised on the equality
  pattern of their free variables.
"""
from __future__ import annotations

import os
from typing import Callable, Mapping

from ..errors import InvalidParameter, PreconditionError, SignatureError
from ..structures import FiniteStructure
from .syntax import (
    And,
    App,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Rel,
    Term,
    Var,
    free_vars,
    symbols,
)

__all__ = ["Evaluator", "evaluate", "max_domain", "check_signature"]

_MEMO_VARS = 3


def max_domain() -> int:
    raw = os.environ.get("SLIMCON_MAX_DOMAIN", "512")
    try:
        value = int(raw)
    except ValueError:
        raise InvalidParameter(f"SLIMCON_MAX_DOMAIN must be an integer, got {raw!r}") from None
    if value < 1:
        raise InvalidParameter("SLIMCON_MAX_DOMAIN must be positive")
    return value


def check_signature(f: Formula, s: FiniteStructure):
    for kind, name, arity in symbols(f):
        have = s.signature.relation_arity(name) if kind == "relation" else s.signature.function_arity(name)
        if have is None:
            raise SignatureError(f"{kind} symbol {name!r} is not in the structure's signature")
        if have != arity:
            raise SignatureError(f"{kind} symbol {name!r} has arity {have}, used with {arity}")


def _pure_equality(f) -> bool:
    if isinstance(f, Eq):
        return isinstance(f.left, Var) and isinstance(f.right, Var)
    if isinstance(f, Rel):
        return False
    if isinstance(f, Not):
        return _pure_equality(f.body)
    if isinstance(f, (And, Or)):
        return all(_pure_equality(p) for p in f.parts)
    if isinstance(f, Implies):
        return _pure_equality(f.left) and _pure_equality(f.right)
    return _pure_equality(f.body)


def _pattern(values: tuple) -> tuple:
    first: dict = {}
    return tuple(first.setdefault(v, len(first)) for v in values)


class Evaluator:
    """Evaluates formulas over one fixed structure, sharing caches between calls."""

    def __init__(self, structure: FiniteStructure, *, limit: int | None = None):
        limit = max_domain() if limit is None else limit
        if structure.size > limit:
            raise InvalidParameter(
                f"domain of size {structure.size} exceeds the evaluator cap {limit} (SLIMCON_MAX_DOMAIN)"
            )
        self.s = structure
        self.n = structure.size
        self._rows: dict[str, tuple[int, ...]] = {}
        for name, arity in structure.signature.relations:
            if arity == 2:
                rows = [0] * self.n
                for a, b in structure.relations[name]:
                    rows[a] |= 1 << b
                self._rows[name] = tuple(rows)
        self._compiled: dict[Formula, tuple[Callable, tuple[str, ...], int]] = {}

    # -- public --------------------------------------------------------------
    def holds(self, f: Formula, valuation: Mapping[str, int] | None = None) -> bool:
        fn, order, width = self._program(f)
        valuation = valuation or {}
        missing = [v for v in order if v not in valuation]
        if missing:
            raise PreconditionError(f"valuation does not cover free variables {sorted(missing)}")
        env = [0] * max(width, 1)
        for i, v in enumerate(order):
            a = valuation[v]
            if not (isinstance(a, int) and 0 <= a < self.n):
                raise InvalidParameter(f"value {a!r} for {v!r} is outside the domain")
            env[i] = a
        return fn(env)

    def _program(self, f: Formula):
        prog = self._compiled.get(f)
        if prog is None:
            check_signature(f, self.s)
            order = tuple(sorted(free_vars(f)))
            scope = {v: i for i, v in enumerate(order)}
            self._width = len(order)
            fn = self._formula(f, scope, len(order))
            prog = (fn, order, self._width)
            self._compiled[f] = prog
        return prog

    # -- terms ---------------------------------------------------------------
    def _term(self, t: Term, scope: dict[str, int]) -> Callable:
        if isinstance(t, Var):
            i = scope[t.name]
            return lambda env: env[i]
        table = self.s.functions[t.fn]
        n = self.n
        args = [self._term(a, scope) for a in t.args]
        if not args:
            c = table[0]
            return lambda env: c
        if len(args) == 1:
            (a0,) = args
            return lambda env: table[a0(env)]
        if len(args) == 2:
            a0, a1 = args
            return lambda env: table[a0(env) * n + a1(env)]

        def apply(env):
            idx = 0
            for a in args:
                idx = idx * n + a(env)
            return table[idx]

        return apply

    # -- formulas --------------------------------------------------------------
    def _formula(self, f: Formula, scope: dict[str, int], depth: int) -> Callable:
        if isinstance(f, Eq):
            if isinstance(f.left, Var) and isinstance(f.right, Var):
                i, j = scope[f.left.name], scope[f.right.name]
                return lambda env: env[i] == env[j]
            l, r = self._term(f.left, scope), self._term(f.right, scope)
            return lambda env: l(env) == r(env)
        if isinstance(f, Rel):
            if len(f.args) == 2 and f.name in self._rows:
                rows = self._rows[f.name]
                a, b = f.args
                if isinstance(a, Var) and isinstance(b, Var):
                    i, j = scope[a.name], scope[b.name]
                    return lambda env: bool(rows[env[i]] >> env[j] & 1)
                ta, tb = self._term(a, scope), self._term(b, scope)
                return lambda env: bool(rows[ta(env)] >> tb(env) & 1)
            tuples = self.s.relations[f.name]
            args = [self._term(a, scope) for a in f.args]
            return lambda env: tuple(a(env) for a in args) in tuples
        if isinstance(f, Not):
            body = self._formula(f.body, scope, depth)
            return lambda env: not body(env)
        if isinstance(f, And):
            parts = [self._formula(p, scope, depth) for p in f.parts]

            def conj(env):
                for p in parts:
                    if not p(env):
                        return False
                return True

            return conj
        if isinstance(f, Or):
            parts = [self._formula(p, scope, depth) for p in f.parts]

            def disj(env):
                for p in parts:
                    if p(env):
                        return True
                return False

            return disj
        if isinstance(f, Implies):
            l, r = self._formula(f.left, scope, depth), self._formula(f.right, scope, depth)
            return lambda env: (not l(env)) or r(env)
        if isinstance(f, (Forall, Exists)):
            return self._quantifier(f, scope, depth)
        raise TypeError(f"not a formula: {f!r}")

    def _guard(self, g: Formula, var: str, scope: dict[str, int], slot: int):
        """Candidate generator for ``var`` restricted by the conjunct ``g``, or None."""
        others = free_vars(g) - {var}
        if var not in free_vars(g) or len(others) > 1:
            return None
        test = self._formula(g, scope, slot + 1)
        n = self.n
        cache: dict[int, list[int]] = {}
        if not others:

            def cands(env):
                got = cache.get(-1)
                if got is None:
                    got = []
                    for a in range(n):
                        env[slot] = a
                        if test(env):
                            got.append(a)
                    cache[-1] = got
                return got

            return cands
        k = scope[next(iter(others))]

        def cands(env):
            key = env[k]
            got = cache.get(key)
            if got is None:
                got = []
                for a in range(n):
                    env[slot] = a
                    if test(env):
                        got.append(a)
                cache[key] = got
            return got

        return cands

    def _quantifier(self, f, scope: dict[str, int], depth: int) -> Callable:
        slot = depth
        inner = dict(scope)
        inner[f.var] = slot
        self._width = max(self._width, slot + 1)
        n = self.n
        body = f.body
        domain = range(n)
        cands = None
        if isinstance(f, Exists) and isinstance(body, And):
            cands = self._guard(body.parts[0], f.var, inner, slot)
            if cands is not None:
                rest = body.parts[1:]
                body = rest[0] if len(rest) == 1 else And(rest)
        elif isinstance(f, Exists):
            cands = self._guard(body, f.var, inner, slot)
            if cands is not None:
                body = None
        elif isinstance(f, Forall) and isinstance(body, Implies):
            ante = body.left
            first = ante.parts[0] if isinstance(ante, And) else ante
            cands = self._guard(first, f.var, inner, slot)
            if cands is not None:
                if isinstance(ante, And):
                    rest = ante.parts[1:]
                    body = Implies(rest[0] if len(rest) == 1 else And(rest), body.right)
                else:
                    body = body.right

        test = self._formula(body, inner, depth + 1) if body is not None else (lambda env: True)
        existential = isinstance(f, Exists)

        if cands is None:

            def search(env):
                for a in domain:
                    env[slot] = a
                    if test(env) is existential:
                        return existential
                return not existential

        else:

            def search(env):
                for a in cands(env):
                    env[slot] = a
                    if test(env) is existential:
                        return existential
                return not existential

        fv = sorted(free_vars(f), key=lambda v: scope[v])
        slots = [scope[v] for v in fv]
        if _pure_equality(f.body):
            memo: dict = {}

            def by_pattern(env):
                key = _pattern(tuple(env[i] for i in slots))
                got = memo.get(key)
                if got is None:
                    got = search(env)
                    memo[key] = got
                return got

            return by_pattern
        if len(slots) <= _MEMO_VARS:
            memo2: dict = {}
            if len(slots) == 1:
                (s0,) = slots

                def memo1(env):
                    key = env[s0]
                    got = memo2.get(key)
                    if got is None:
                        got = search(env)
                        memo2[key] = got
                    return got

                return memo1

            def memoized(env):
                key = tuple(env[i] for i in slots)
                got = memo2.get(key)
                if got is None:
                    got = search(env)
                    memo2[key] = got
                return got

            return memoized
        return search


def evaluate(f: Formula, s: FiniteStructure, valuation: Mapping[str, int] | None = None) -> bool:
    """Truth value of ``f`` in ``s`` under ``valuation``."""
    return Evaluator(s).holds(f, valuation)
