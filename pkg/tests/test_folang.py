from math import gcd

import pytest
from hypothesis import given, strategies as st

from slimcon import InvalidParameter, ParseError, PreconditionError, SignatureError
from slimcon.folang import (
    And,
    App,
    Eq,
    Evaluator,
    Exists,
    Forall,
    Implies,
    Not,
    Or,
    Rel,
    Var,
    builtin,
    evaluate,
    free_vars,
    parse,
    pretty,
    separation_report,
)
from slimcon.folang.syntax import quantifier_depth
from slimcon.order import chain, crown, downset_lattice
from slimcon.structures import GRAPH_SIGNATURE, GROUP_SIGNATURE, ORDER_SIGNATURE, circle_graph, cyclic_group

from conftest import posets

VARS = ("x", "y", "z")


# -- reference semantics ----------------------------------------------------------

def ref_term(t, s, env):
    if isinstance(t, Var):
        return env[t.name]
    return s.apply(t.fn, [ref_term(a, s, env) for a in t.args])


def ref_eval(f, s, env):
    if isinstance(f, Rel):
        return s.holds(f.name, [ref_term(a, s, env) for a in f.args])
    if isinstance(f, Eq):
        return ref_term(f.left, s, env) == ref_term(f.right, s, env)
    if isinstance(f, Not):
        return not ref_eval(f.body, s, env)
    if isinstance(f, And):
        return all(ref_eval(p, s, env) for p in f.parts)
    if isinstance(f, Or):
        return any(ref_eval(p, s, env) for p in f.parts)
    if isinstance(f, Implies):
        return not ref_eval(f.left, s, env) or ref_eval(f.right, s, env)
    results = (ref_eval(f.body, s, {**env, f.var: a}) for a in range(s.size))
    return all(results) if isinstance(f, Forall) else any(results)


atoms = st.one_of(
    st.builds(lambda a, b: Rel("<=", (Var(a), Var(b))), st.sampled_from(VARS), st.sampled_from(VARS)),
    st.builds(lambda a, b: Eq(Var(a), Var(b)), st.sampled_from(VARS), st.sampled_from(VARS)),
)


def _extend(children):
    return st.one_of(
        st.builds(Not, children),
        st.builds(lambda ps: And(tuple(ps)), st.lists(children, min_size=2, max_size=3)),
        st.builds(lambda ps: Or(tuple(ps)), st.lists(children, min_size=2, max_size=3)),
        st.builds(Implies, children, children),
        st.builds(Forall, st.sampled_from(VARS), children),
        st.builds(Exists, st.sampled_from(VARS), children),
    )


formulas = st.recursive(atoms, _extend, max_leaves=10)


# -- parser -------------------------------------------------------------------------

def test_parse_examples():
    f = parse("ALL x. EX y. E(x,y)", GRAPH_SIGNATURE)
    assert f == Forall("x", Exists("y", Rel("E", (Var("x"), Var("y")))))
    g = parse("EX x. (x = x & ~(x = x))", ORDER_SIGNATURE)
    assert g == Exists("x", And((Eq(Var("x"), Var("x")), Not(Eq(Var("x"), Var("x"))))))
    h = parse("ALL x. EX y. +(y,y) = x", GROUP_SIGNATURE)
    assert h == Forall("x", Exists("y", Eq(App("+", (Var("y"), Var("y"))), Var("x"))))
    assert evaluate(h, cyclic_group(5)) and not evaluate(h, cyclic_group(4))


def test_parse_precedence():
    f = parse("x <= y & y <= z | x = z -> z <= x", ORDER_SIGNATURE)
    assert isinstance(f, Implies)
    assert isinstance(f.left, Or) and isinstance(f.left.parts[0], And)
    g = parse("x = y -> y = z -> x = z", ORDER_SIGNATURE)
    assert isinstance(g.right, Implies)


def test_strict_order_sugar():
    f = parse("x < y", ORDER_SIGNATURE)
    assert f == And((Rel("<=", (Var("x"), Var("y"))), Not(Eq(Var("x"), Var("y")))))


@pytest.mark.parametrize(
    "src,pos",
    [("ALL x EX y. x <= y", 6), ("x <= ", 5), ("(x <= y", 7), ("x <= y )", 7), ("x # y", 2), ("x <= y ;", 7)],
)
def test_parse_errors_carry_position(src, pos):
    with pytest.raises(ParseError) as exc:
        parse(src, ORDER_SIGNATURE)
    assert exc.value.pos == pos


def test_signature_errors():
    with pytest.raises(SignatureError):
        parse("E(x)", GRAPH_SIGNATURE)
    with pytest.raises(SignatureError):
        parse("x <= y", GRAPH_SIGNATURE)
    with pytest.raises(SignatureError):
        parse("ALL E. E(E, E)", GRAPH_SIGNATURE)
    with pytest.raises(SignatureError):
        parse("+(x) = y", GROUP_SIGNATURE)
    with pytest.raises(SignatureError):
        parse("f(x) = y", ORDER_SIGNATURE)


@given(formulas)
def test_pretty_parse_round_trip(f):
    assert parse(pretty(f), ORDER_SIGNATURE) == f


# -- evaluator ------------------------------------------------------------------------

@given(formulas, posets(max_size=4), st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)))
def test_evaluator_matches_reference(f, p, values):
    s = p.to_structure()
    env = {v: a % p.n for v, a in zip(VARS, values)}
    ev = Evaluator(s)
    assert ev.holds(f, env) == ref_eval(f, s, env)
    # second call goes through the memo tables
    assert ev.holds(f, env) == ref_eval(f, s, env)


def test_missing_valuation():
    f = parse("x <= y", ORDER_SIGNATURE)
    with pytest.raises(PreconditionError):
        evaluate(f, chain(3).to_structure(), {"x": 0})
    with pytest.raises(InvalidParameter):
        evaluate(f, chain(3).to_structure(), {"x": 0, "y": 7})


def test_evaluator_rejects_wrong_signature():
    with pytest.raises(SignatureError):
        evaluate(parse("ALL x. EX y. E(x,y)", GRAPH_SIGNATURE), chain(3).to_structure())


def test_domain_cap(monkeypatch):
    monkeypatch.setenv("SLIMCON_MAX_DOMAIN", "4")
    with pytest.raises(InvalidParameter):
        Evaluator(chain(5).to_structure())
    monkeypatch.setenv("SLIMCON_MAX_DOMAIN", "lots")
    with pytest.raises(InvalidParameter):
        Evaluator(chain(2).to_structure())


# -- library ----------------------------------------------------------------------------

def test_lambda_table():
    for k in range(1, 13):
        f = builtin("lambda", k)
        for n in range(3, 13):
            assert evaluate(f, circle_graph(n)) is (n >= k)
    for s in (circle_graph(3), cyclic_group(4), chain(2).to_structure()):
        assert not evaluate(builtin("lambda", -1), s)
        assert not evaluate(builtin("lambda_false"), s)


def test_eta_tau_table():
    for k in range(1, 13):
        eta, tau = builtin("eta", k), builtin("tau", k)
        for n in range(1, 13):
            z = cyclic_group(n)
            assert evaluate(eta, z) is (gcd(k, n) == 1), (k, n)
            assert evaluate(tau, z) is (gcd(k, n) == 1), (k, n)


def test_deltas_hold_on_crowns():
    for n in range(2, 11):
        s = crown(n).to_structure()
        for name in ("delta1", "delta2", "delta3"):
            assert evaluate(builtin(name), s), (name, n)


def test_deltas_fail_on_chain():
    assert not evaluate(builtin("delta1"), chain(3).to_structure())


def test_xi_on_crowns():
    assert evaluate(builtin("xi", 5), crown(7).to_structure())
    assert not evaluate(builtin("xi", 5), crown(5).to_structure())


def test_cycle_builtin():
    f = builtin("cycle", 5)
    assert evaluate(f, circle_graph(5))
    assert not evaluate(f, circle_graph(6))


def test_builtin_arguments():
    with pytest.raises(InvalidParameter):
        builtin("xi", 1)
    with pytest.raises(InvalidParameter):
        builtin("delta1", 3)
    with pytest.raises(InvalidParameter):
        builtin("nope")
    assert free_vars(builtin("vw")) == {"y"}
    assert free_vars(builtin("psi_dcep")) == frozenset()
    assert quantifier_depth(builtin("lambda", 4)) == 4


def test_psi_dcep_on_fd3():
    assert not evaluate(builtin("psi_dcep"), downset_lattice(crown(3)).to_structure())
    assert evaluate(builtin("psi_dcep"), downset_lattice(crown(4)).to_structure())


# -- separation --------------------------------------------------------------------------

def test_separation_delta1_never_separates():
    rep = separation_report(
        builtin("delta1"),
        lambda i: crown(i).to_structure() if i >= 2 and i % 2 == 0 else None,
        lambda i: crown(i).to_structure() if i >= 3 and i % 2 == 1 else None,
        9,
    )
    assert all(a is not False and b is not False for _, a, b in rep.rows)
    assert not rep.separates


def test_separation_odd_circles():
    no_short_odd = And(tuple(Not(builtin("cycle", m)) for m in (3, 5, 7, 9)))
    rep = separation_report(
        no_short_odd,
        lambda i: circle_graph(i) if i >= 4 and i % 2 == 0 else None,
        lambda i: circle_graph(i) if i >= 3 and i % 2 == 1 else None,
        12,
    )
    assert rep.first_failure == 11
    assert [r for r in rep.rows if r[0] == 9] == [(9, None, False)]
    assert rep.to_json()["first_failure"] == 11


def test_separation_lambda6():
    rep = separation_report(
        builtin("lambda", 6),
        lambda i: crown(i).to_structure() if i >= 2 and i % 2 == 0 else None,
        lambda i: crown(i).to_structure() if i >= 3 and i % 2 == 1 else None,
        4,
    )
    assert rep.rows == [(2, False, None), (3, None, True), (4, True, None)]
