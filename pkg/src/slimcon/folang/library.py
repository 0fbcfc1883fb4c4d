"""Named sentences and formulas.

Lattice formulas use only the order relation ``<=``.  Every quantifier is
written with a guard as the first conjunct of its body (or of the antecedent
under ALL), which the evaluator uses to shrink the range of the quantifier.
Bound variables are named ``v1, v2, ...`` afresh for each ``builtin`` call;
free variables keep the names listed in ``FREE_VARIABLES``.
"""
from __future__ import annotations

from itertools import permutations

from ..errors import InvalidParameter
from .syntax import (
    And,
    App,
    Formula,
    Rel,
    Var,
    conj,
    disj,
    eq,
    exists,
    forall,
    implies,
    le,
    lt,
    neg,
    neq,
)

__all__ = ["builtin", "BUILTINS", "FREE_VARIABLES", "builtin_signature"]


class _Fresh:
    def __init__(self):
        self.count = 0

    def __call__(self) -> str:
        self.count += 1
        return f"v{self.count}"


def guarded(g: Formula, *rest: Formula) -> Formula:
    """Conjunction whose first part is ``g`` kept whole (used as a quantifier guard)."""
    tail = conj(*rest)
    return And((g,) + (tail.parts if isinstance(tail, And) else (tail,)))


# -- sentences over arbitrary signatures ---------------------------------------

def _lambda(k: int) -> Formula:
    if k == -1:
        return _lambda_false()
    if k < 1:
        raise InvalidParameter(f"lambda needs k >= 1 (or -1), got {k}")
    xs = [f"x{i}" for i in range(1, k + 1)]
    body: Formula | None = None
    for j in range(k - 1, 0, -1):
        # x_{j+1} differs from all earlier variables
        diffs = [neq(xs[i], xs[j]) for i in range(j)]
        body = exists(xs[j], conj(*diffs, body) if body is not None else conj(*diffs))
    if body is None:
        return exists(xs[0], eq(xs[0], xs[0]))
    return exists(xs[0], body)


def _lambda_false() -> Formula:
    return exists("x", conj(eq("x", "x"), neg(eq("x", "x"))))


def _sum(var: str, k: int):
    t = Var(var)
    for _ in range(k - 1):
        t = App("+", (t, Var(var)))
    return t


def _eta(k: int) -> Formula:
    if k < 1:
        raise InvalidParameter(f"eta needs k >= 1, got {k}")
    return forall("x", exists("y", eq(_sum("y", k), "x")))


def _tau(k: int) -> Formula:
    if k < 1:
        raise InvalidParameter(f"tau needs k >= 1, got {k}")
    return forall("x", implies(eq(_sum("x", k + 1), "x"), forall("y", eq(App("+", (Var("x"), Var("y"))), "y"))))


# -- ordered sets --------------------------------------------------------------

def _alpha(x: str, fr: _Fresh) -> Formula:
    y = fr()
    return forall(y, implies(le(x, y), le(y, x)))


def _beta(x: str, fr: _Fresh) -> Formula:
    y = fr()
    return forall(y, implies(le(y, x), le(x, y)))


def _delta1(fr: _Fresh) -> Formula:
    x = fr()
    a, b = _alpha(x, fr), _beta(x, fr)
    return forall(x, disj(conj(a, neg(b)), conj(neg(a), b)))


def _exactly_two(x: str, fr: _Fresh, below: bool) -> Formula:
    """Exactly two elements y with beta(y) and y <= x (or alpha(y) and x <= y)."""
    side = (lambda y: le(y, x)) if below else (lambda y: le(x, y))
    extreme = (lambda y: _beta(y, fr)) if below else (lambda y: _alpha(y, fr))
    y1, y2, y3 = fr(), fr(), fr()
    return exists(
        y1,
        conj(
            side(y1),
            extreme(y1),
            exists(
                y2,
                conj(
                    side(y2),
                    extreme(y2),
                    neq(y1, y2),
                    forall(y3, implies(conj(side(y3), extreme(y3)), disj(eq(y3, y1), eq(y3, y2)))),
                ),
            ),
        ),
    )


def _delta2(fr: _Fresh) -> Formula:
    x = fr()
    return forall(x, implies(_alpha(x, fr), _exactly_two(x, fr, below=True)))


def _delta3(fr: _Fresh) -> Formula:
    x = fr()
    return forall(x, implies(_beta(x, fr), _exactly_two(x, fr, below=False)))


XI_MAX = 12


def _xi(m: int, fr: _Fresh) -> Formula:
    """No induced subposet isomorphic to the crown K_m.

    Generated from the crown's order matrix: variables are introduced in the
    order a_0, b_0, a_1, b_1, ...; each order literal is placed right after
    its later variable, with a positive comparability first as the guard.
    """
    if not 2 <= m <= XI_MAX:
        raise InvalidParameter(f"xi needs 2 <= m <= {XI_MAX}, got {m}")
    a = [fr() for _ in range(m)]
    b = [fr() for _ in range(m)]
    seq = []
    for i in range(m):
        seq += [a[i], b[i]]

    def below(u: str, v: str) -> bool:
        # crown order: b_i <= a_j iff j = i or j = i + 1 (mod m)
        if u == v:
            return True
        if u in b and v in a:
            i, j = b.index(u), a.index(v)
            return j == i or j == (i + 1) % m
        return False

    body: Formula | None = None
    for pos in range(len(seq) - 1, -1, -1):
        v = seq[pos]
        lits_pos, lits_neg = [], []
        for u in seq[:pos]:
            for p, q in ((u, v), (v, u)):
                (lits_pos if below(p, q) else lits_neg).append(le(p, q) if below(p, q) else neg(le(p, q)))
        parts = lits_pos + lits_neg + ([body] if body is not None else [])
        body = exists(v, conj(*parts)) if parts else exists(v, eq(v, v))
    return neg(body)


# -- graphs --------------------------------------------------------------------

def _cycle(m: int, fr: _Fresh) -> Formula:
    """Some m vertices span an induced cycle of length m."""
    if m < 3:
        raise InvalidParameter(f"cycle needs m >= 3, got {m}")
    xs = [fr() for _ in range(m)]

    def E(p, q):
        return Rel("E", (Var(p), Var(q)))

    body: Formula | None = None
    for j in range(m - 1, -1, -1):
        parts = []
        for i in range(j):
            adjacent = j == i + 1 or (i == 0 and j == m - 1)
            if adjacent:
                parts.insert(0, E(xs[i], xs[j]))
            else:
                parts += [neg(E(xs[i], xs[j])), neq(xs[i], xs[j])]
        if body is not None:
            parts.append(body)
        body = exists(xs[j], conj(*parts)) if parts else exists(xs[j], eq(xs[j], xs[j]))
    return body


# -- distributive lattices ------------------------------------------------------

def _jir_el(y: str, fr: _Fresh) -> Formula:
    """y has a largest element strictly below it, i.e. y is join-irreducible."""
    c, a = fr(), fr()
    return exists(c, conj(lt(c, y), forall(a, implies(lt(a, y), le(a, c)))))


def _rho_jir(y: str, x: str, fr: _Fresh) -> Formula:
    return conj(le(y, x), _jir_el(y, fr))


def _rho_mjir(y: str, x: str, fr: _Fresh) -> Formula:
    w = fr()
    return conj(le(y, x), _jir_el(y, fr), forall(w, implies(le(y, w), implies(_jir_el(w, fr), eq(w, y)))))


def _lub(y: str, z: str, x: str, fr: _Fresh) -> Formula:
    w = fr()
    return conj(le(y, x), le(z, x), forall(w, implies(conj(le(y, w), le(z, w)), le(x, w))))


def _rho_edge(y1: str, y2: str, x: str, fr: _Fresh) -> Formula:
    z = fr()
    return conj(
        _rho_mjir(y1, x, fr),
        _rho_mjir(y2, x, fr),
        neq(y1, y2),
        exists(z, conj(lt(z, y1), lt(z, y2), _rho_jir(z, x, fr))),
    )


def _rho_exists2(x: str, fr: _Fresh) -> Formula:
    y, y1, y2 = fr(), fr(), fr()
    return forall(
        y,
        implies(
            _rho_mjir(y, x, fr),
            exists(
                y1,
                guarded(
                    _rho_mjir(y1, x, fr),
                    _rho_edge(y, y1, x, fr),
                    exists(y2, guarded(_rho_mjir(y2, x, fr), _rho_edge(y, y2, x, fr), neq(y1, y2))),
                ),
            ),
        ),
    )


def _rho_atmost2(x: str, fr: _Fresh) -> Formula:
    y, y1, y2, y3 = fr(), fr(), fr(), fr()
    return forall(
        y,
        implies(
            _rho_mjir(y, x, fr),
            forall(
                y1,
                implies(
                    guarded(_rho_mjir(y1, x, fr), _rho_edge(y, y1, x, fr)),
                    forall(
                        y2,
                        implies(
                            guarded(_rho_mjir(y2, x, fr), _rho_edge(y, y2, x, fr)),
                            forall(
                                y3,
                                implies(
                                    guarded(_rho_mjir(y3, x, fr), _rho_edge(y, y3, x, fr)),
                                    disj(eq(y1, y2), eq(y1, y3), eq(y2, y3)),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    )


def _rho_eq2(x: str, fr: _Fresh) -> Formula:
    return conj(_rho_exists2(x, fr), _rho_atmost2(x, fr))


def _join_of_max(x: str, fr: _Fresh) -> Formula:
    """Every join-irreducible below x lies below a maximal join-irreducible below x."""
    y, z = fr(), fr()
    return forall(y, implies(_rho_jir(y, x, fr), exists(z, guarded(_rho_mjir(z, x, fr), le(y, z)))))


def _rho_mcyclic(x: str, fr: _Fresh) -> Formula:
    y = fr()
    return conj(exists(y, _rho_mjir(y, x, fr)), _rho_eq2(x, fr), _join_of_max(x, fr))


def _vset(y0: str, y1: str, x: str, fr: _Fresh) -> Formula:
    return _rho_edge(y0, y1, x, fr)


def _path4(q: list[str], x: str, fr: _Fresh) -> list[Formula]:
    """Literals saying q0 - q1 - q2 - q3 is an induced path, grouped by the last variable used."""
    e = lambda i, j: _rho_edge(q[i], q[j], x, fr)  # noqa: E731
    return [e(0, 1), e(1, 2), neg(e(0, 2)), e(2, 3), neg(e(0, 3)), neg(e(1, 3))]


def _wset(ys: list[str], x: str, fr: _Fresh) -> Formula:
    """{y0, y1, y2, y3} is a W-set of x: some ordering of it is an induced path."""
    orders = []
    for perm in permutations(range(4)):
        if perm[0] < perm[3]:
            orders.append(conj(*_path4([ys[i] for i in perm], x, fr)))
    return disj(*orders)


def _in_wset(p: str, qs: list[str], y: str, fr: _Fresh) -> Formula:
    """p, qs[0], qs[1], qs[2] form a W-set with p at an end or second on the path."""
    return disj(conj(*_path4([p, *qs], y, fr)), conj(*_path4([qs[0], p, qs[1], qs[2]], y, fr)))


def _some_wset(p: str, y: str, fr: _Fresh) -> Formula:
    q1, q2, q3 = fr(), fr(), fr()
    return exists(
        q1,
        guarded(
            _rho_mjir(q1, y, fr),
            exists(q2, guarded(_rho_mjir(q2, y, fr), exists(q3, guarded(_rho_mjir(q3, y, fr), _in_wset(p, [q1, q2, q3], y, fr))))),
        ),
    )


def _unique_wset(p: str, y: str, fr: _Fresh) -> Formula:
    q = [fr(), fr(), fr()]
    r = [fr(), fr(), fr()]
    members = conj(*[disj(*[eq(ri, qj) for qj in q]) for ri in r])
    only = forall(
        r[0],
        implies(
            _rho_mjir(r[0], y, fr),
            forall(
                r[1],
                implies(
                    _rho_mjir(r[1], y, fr),
                    forall(r[2], implies(guarded(_rho_mjir(r[2], y, fr), _in_wset(p, r, y, fr)), members)),
                ),
            ),
        ),
    )
    return exists(
        q[0],
        guarded(
            _rho_mjir(q[0], y, fr),
            exists(
                q[1],
                guarded(
                    _rho_mjir(q[1], y, fr),
                    exists(q[2], guarded(_rho_mjir(q[2], y, fr), _in_wset(p, q, y, fr), only)),
                ),
            ),
        ),
    )


def _unique_vset(p: str, y: str, fr: _Fresh) -> Formula:
    q, q2 = fr(), fr()
    return exists(
        q,
        guarded(
            _rho_mjir(q, y, fr),
            _rho_edge(p, q, y, fr),
            forall(q2, implies(guarded(_rho_mjir(q2, y, fr), _rho_edge(p, q2, y, fr)), eq(q2, q))),
        ),
    )


def _vw(y: str, fr: _Fresh) -> Formula:
    c, p = fr(), fr()
    return conj(
        exists(c, lt(c, y)),
        _join_of_max(y, fr),
        forall(
            p,
            implies(
                _rho_mjir(p, y, fr),
                disj(_unique_wset(p, y, fr), conj(neg(_some_wset(p, y, fr)), _unique_vset(p, y, fr))),
            ),
        ),
    )


def _psi_dcep(fr: _Fresh) -> Formula:
    x, y, z, t = fr(), fr(), fr(), fr()
    return forall(
        x,
        implies(
            _rho_mcyclic(x, fr),
            exists(
                y,
                conj(
                    le(y, x),
                    _vw(y, fr),
                    exists(
                        z,
                        conj(
                            le(z, x),
                            _vw(z, fr),
                            _lub(y, z, x, fr),
                            neg(exists(t, guarded(_rho_mjir(t, y, fr), _rho_mjir(t, z, fr)))),
                        ),
                    ),
                ),
            ),
        ),
    )


# -- registry -------------------------------------------------------------------

FREE_VARIABLES: dict[str, tuple[str, ...]] = {
    "lambda": (),
    "lambda_false": (),
    "eta": (),
    "tau": (),
    "alpha": ("x",),
    "beta": ("x",),
    "delta1": (),
    "delta2": (),
    "delta3": (),
    "xi": (),
    "cycle": (),
    "jir": ("y", "x"),
    "mjir": ("y", "x"),
    "rho_edge": ("y1", "y2", "x"),
    "rho_exists2": ("x",),
    "rho_atmost2": ("x",),
    "rho_eq2": ("x",),
    "rho_mcyclic": ("x",),
    "vset": ("y0", "y1", "x"),
    "wset": ("y0", "y1", "y2", "y3", "x"),
    "vw": ("y",),
    "psi_dcep": (),
}

_PARAMETRIC = {"lambda", "eta", "tau", "xi", "cycle"}

_SIGNATURES = {
    "lambda": "any",
    "lambda_false": "any",
    "eta": "group",
    "tau": "group",
    "cycle": "graph",
}

BUILTINS = tuple(FREE_VARIABLES)


def builtin_signature(name: str) -> str:
    """'any', 'group', 'graph' or 'order'."""
    return _SIGNATURES.get(name, "order")


def builtin(name: str, *params: int) -> Formula:
    """The named formula; ``lambda``, ``eta``, ``tau`` take k, ``xi`` and ``cycle`` take m."""
    if name not in FREE_VARIABLES:
        raise InvalidParameter(f"unknown builtin {name!r}; known: {', '.join(BUILTINS)}")
    if name in _PARAMETRIC:
        if len(params) != 1:
            raise InvalidParameter(f"builtin {name!r} takes exactly one integer parameter")
    elif params:
        raise InvalidParameter(f"builtin {name!r} takes no parameters")
    fr = _Fresh()
    k = params[0] if params else None
    if name == "lambda":
        return _lambda(k)
    if name == "lambda_false":
        return _lambda_false()
    if name == "eta":
        return _eta(k)
    if name == "tau":
        return _tau(k)
    if name == "alpha":
        return _alpha("x", fr)
    if name == "beta":
        return _beta("x", fr)
    if name == "delta1":
        return _delta1(fr)
    if name == "delta2":
        return _delta2(fr)
    if name == "delta3":
        return _delta3(fr)
    if name == "xi":
        return _xi(k, fr)
    if name == "cycle":
        return _cycle(k, fr)
    if name == "jir":
        return _rho_jir("y", "x", fr)
    if name == "mjir":
        return _rho_mjir("y", "x", fr)
    if name == "rho_edge":
        return _rho_edge("y1", "y2", "x", fr)
    if name == "rho_exists2":
        return _rho_exists2("x", fr)
    if name == "rho_atmost2":
        return _rho_atmost2("x", fr)
    if name == "rho_eq2":
        return _rho_eq2("x", fr)
    if name == "rho_mcyclic":
        return _rho_mcyclic("x", fr)
    if name == "vset":
        return _vset("y0", "y1", "x", fr)
    if name == "wset":
        return _wset(["y0", "y1", "y2", "y3"], "x", fr)
    if name == "vw":
        return _vw("y", fr)
    return _psi_dcep(fr)
