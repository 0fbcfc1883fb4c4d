import pytest
from hypothesis import given, strategies as st

from slimcon import InvalidStructure
from slimcon.congruence import (
    Congruence,
    all_compatible_partitions,
    congruence_join,
    congruence_lattice,
    congruence_meet,
    jir_congruence_poset,
    principal_congruence,
)
from slimcon.order import Lattice, Poset, antichain, chain, downset_lattice, grid, is_distributive, is_isomorphic

from conftest import posets

M3 = Lattice.from_poset(Poset.from_relation(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]))
N5 = Lattice.from_poset(Poset.from_relation(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]))


def naive_principal(l, a, b):
    """Fixpoint of pair closure under joins, meets, symmetry and transitivity."""
    rel = {(x, x) for x in range(l.n)} | {(a, b), (b, a)}
    while True:
        new = set(rel)
        for x, y in rel:
            for z in range(l.n):
                new.add((l.join(x, z), l.join(y, z)))
                new.add((l.meet(x, z), l.meet(y, z)))
        new |= {(y, x) for x, y in new}
        new |= {(x, w) for x, y in new for u, w in new if y == u}
        if new == rel:
            return rel
        rel = new


def as_pairs(theta, n):
    return {(x, y) for x in range(n) for y in range(n) if theta.same(x, y)}


def test_principal_examples():
    c3 = chain(3)
    assert principal_congruence(c3, 1, 1) == Congruence.identity(3)
    assert principal_congruence(c3, 1, 2).blocks() == [[0], [1, 2]]
    sq = grid(1)  # ids: 0=(0,0), 1=(0,1), 2=(1,0), 3=(1,1)
    assert principal_congruence(sq, 0, 1).blocks() == [[0, 1], [2, 3]]


def test_simple_and_small_cases():
    assert congruence_lattice(M3).n == 2
    assert congruence_lattice(N5).n == 5
    assert congruence_lattice(chain(1)).n == 1


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_chain_congruences_boolean(m):
    con = congruence_lattice(chain(m + 1))
    assert con.n == 2**m
    assert is_isomorphic(con, downset_lattice(antichain(m))) is not None
    assert set(con.congruences) == all_compatible_partitions(chain(m + 1))
    assert is_isomorphic(jir_congruence_poset(chain(m + 1)), antichain(m)) is not None


@pytest.mark.parametrize("k", [1, 2, 3])
def test_grid_congruences(k):
    con = congruence_lattice(grid(k))
    assert con.n == 2 ** (2 * k)
    assert is_isomorphic(jir_congruence_poset(grid(k)), antichain(2 * k)) is not None
    if k <= 2:
        assert set(con.congruences) == all_compatible_partitions(grid(k))


@given(posets(max_size=5), st.data())
def test_principal_matches_naive_closure(p, data):
    l = downset_lattice(p)
    a = data.draw(st.integers(0, l.n - 1))
    b = data.draw(st.integers(0, l.n - 1))
    theta = principal_congruence(l, a, b)
    assert as_pairs(theta, l.n) == naive_principal(l, a, b)
    assert theta.is_compatible(l)


@given(posets(max_size=4))
def test_con_lattice_is_distributive_and_bounded(p):
    l = downset_lattice(p)
    con = congruence_lattice(l)
    assert is_distributive(con)
    assert con.congruence(con.bottom) == Congruence.identity(l.n)
    assert con.congruence(con.top) == Congruence.total(l.n)
    if l.n <= 8:
        assert set(con.congruences) == all_compatible_partitions(l)


def test_join_and_meet():
    l = grid(2)
    a = principal_congruence(l, 0, 1)
    b = principal_congruence(l, 0, 3)
    j = congruence_join(l, a, b)
    assert a.leq(j) and b.leq(j) and j.is_compatible(l)
    m = congruence_meet(a, b)
    assert m.leq(a) and m.leq(b)
    con = congruence_lattice(l)
    ia, ib = con.index[a], con.index[b]
    assert con.congruence(con.join(ia, ib)) == j
    assert con.congruence(con.meet(ia, ib)) == m


def test_incompatibility_witness():
    bad = Congruence.from_blocks(4, [[0, 1], [2], [3]])
    w = bad.incompatibility(grid(1))
    assert w is not None
    assert not bad.is_compatible(grid(1))


def test_brute_force_guard():
    with pytest.raises(InvalidStructure):
        all_compatible_partitions(chain(11))


def test_json():
    con = congruence_lattice(chain(3))
    obj = con.to_json()
    assert obj["size"] == 4 and len(obj["blocks"]) == 4
