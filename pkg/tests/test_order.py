import pytest
from hypothesis import given, strategies as st

from slimcon import InvalidStructure
from slimcon.order import (
    Lattice,
    Poset,
    antichain,
    chain,
    count_downsets,
    crown,
    disjoint_sum,
    downset_lattice,
    downsets,
    fence_segment,
    grid,
    is_distributive,
    is_isomorphic,
    is_semimodular,
    is_slim,
    join_irreducibles,
    max_join_irreducibles,
    poset_invariant,
    principal_ideal,
)

from conftest import posets

M3 = Lattice.from_poset(Poset.from_relation(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]))
N5 = Lattice.from_poset(Poset.from_relation(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]))


def relabel(p, perm):
    inv = {perm[x]: x for x in range(p.n)}
    return Poset.from_leq(p.n, lambda a, b: p.leq(inv[a], inv[b]))


def brute_downsets(p):
    out = []
    for m in range(1 << p.n):
        if all(not (m >> u & 1) or (p.down[u] & ~m) == 0 for u in range(p.n)):
            out.append(m)
    return out


def test_poset_axioms_checked():
    with pytest.raises(InvalidStructure):
        Poset([0b11, 0b11])  # antisymmetry
    with pytest.raises(InvalidStructure):
        Poset([0b011, 0b110, 0b100])  # transitivity
    with pytest.raises(InvalidStructure):
        Poset([0b10, 0b10])  # reflexivity
    with pytest.raises(InvalidStructure):
        Poset([])


def test_crown_shapes():
    k2 = crown(2)
    assert k2.n == 4
    assert all(k2.leq(b, a) for b in (2, 3) for a in (0, 1))
    k3 = crown(3)
    assert all(len(k3.upper_covers(b)) == 2 for b in k3.minimal())
    assert all(len(k3.lower_covers(a)) == 2 for a in k3.maximal())
    assert crown(8).n == 16


def test_fence_and_chain_and_grid():
    assert len(fence_segment(1).covers()) == 1 and fence_segment(1).n == 2
    f3 = fence_segment(3)
    assert f3.n == 6 and len(f3.comparability_edges()) == 5
    assert chain(3).covers() == [(0, 1), (1, 2)]
    assert grid(1).n == 4 and grid(4).n == 25


def test_lattice_operations():
    g = grid(2)
    for x in range(g.n):
        for y in range(g.n):
            j, m = g.join(x, y), g.meet(x, y)
            ubs = [z for z in range(g.n) if g.leq(x, z) and g.leq(y, z)]
            lbs = [z for z in range(g.n) if g.leq(z, x) and g.leq(z, y)]
            assert j in ubs and all(g.leq(j, z) for z in ubs)
            assert m in lbs and all(g.leq(z, m) for z in lbs)


def test_not_a_lattice():
    with pytest.raises(InvalidStructure):
        Lattice.from_poset(crown(2))
    with pytest.raises(InvalidStructure):
        # two tops above a common bottom: 0 < 1, 0 < 2, 1 and 2 incomparable
        Lattice.from_poset(Poset.from_relation(3, [(0, 1), (0, 2)]))


def test_downset_lattice_sizes():
    assert downset_lattice(crown(3)).n == 18
    assert downset_lattice(antichain(3)).n == 8
    k4 = downset_lattice(crown(4))
    assert k4.n >= 31 and k4.n == len(brute_downsets(crown(4)))


@given(posets(max_size=7))
def test_downsets_match_subset_filter(p):
    assert sorted(downsets(p)) == brute_downsets(p)
    assert count_downsets(p) == len(brute_downsets(p))


@given(posets(max_size=6))
def test_birkhoff_round_trip(p):
    d = downset_lattice(p)
    assert is_distributive(d)
    assert is_isomorphic(join_irreducibles(d), p) is not None


def test_join_irreducibles_examples():
    assert is_isomorphic(join_irreducibles(downset_lattice(crown(3))), crown(3)) is not None
    assert is_isomorphic(join_irreducibles(chain(5)), chain(4)) is not None
    for k in (1, 2, 3):
        assert is_isomorphic(join_irreducibles(grid(k)), disjoint_sum([chain(k), chain(k)])) is not None
    assert len(max_join_irreducibles(downset_lattice(crown(5)))) == 5


def test_lattice_predicates():
    for k in (1, 2, 3):
        g = grid(k)
        assert is_distributive(g) and is_semimodular(g) and is_slim(g)
    c = chain(4)
    assert is_distributive(c) and is_semimodular(c) and is_slim(c)
    fd3 = downset_lattice(crown(3))
    assert is_distributive(fd3) and not is_slim(fd3)
    assert not is_distributive(M3) and is_semimodular(M3)
    assert not is_distributive(N5) and not is_semimodular(N5)


def product(a, b):
    n = a.n * b.n
    return Lattice.from_poset(
        Poset.from_leq(n, lambda x, y: a.leq(x // b.n, y // b.n) and b.leq(x % b.n, y % b.n))
    )


def test_large_lattices_use_count():
    fresh = Lattice(downset_lattice(crown(6)).up)
    assert fresh.n > 160 and is_distributive(fresh)
    big = product(M3, chain(40))
    assert big.n == 200 and not is_distributive(big)
    assert is_distributive(product(grid(2), chain(20)))


def test_principal_ideal():
    fd3 = downset_lattice(crown(3))
    assert principal_ideal(fd3, fd3.bottom) == [fd3.bottom]
    assert sorted(principal_ideal(fd3, fd3.top)) == list(range(18))
    minimals = fd3.downset_index[sum(1 << b for b in crown(3).minimal())]
    assert len(principal_ideal(fd3, minimals)) == 8


@given(posets(max_size=7), st.randoms(use_true_random=False))
def test_isomorphism_under_relabelling(p, rnd):
    perm = list(range(p.n))
    rnd.shuffle(perm)
    q = relabel(p, perm)
    iso = is_isomorphic(p, q)
    assert iso is not None
    assert all(p.leq(a, b) == q.leq(iso[a], iso[b]) for a in range(p.n) for b in range(p.n))
    assert poset_invariant(p) == poset_invariant(q)


def test_non_isomorphic():
    assert is_isomorphic(crown(3), crown(4)) is None
    assert is_isomorphic(chain(4), grid(1)) is None
    assert is_isomorphic(fence_segment(3), crown(3)) is None


def test_disjoint_sum():
    s = disjoint_sum([chain(2), chain(2)])
    assert s.n == 4 and len(s.covers()) == 2
    big = disjoint_sum([crown(3), crown(3)])
    assert big.n == 12
    with pytest.raises(InvalidStructure):
        disjoint_sum([])


def test_json_round_trip():
    for p in (crown(4), grid(2), downset_lattice(fence_segment(2))):
        q = type(p).from_json(p.to_json())
        assert q.up == p.up
    assert "->" in crown(2).to_dot()


def test_subposet_origin():
    k = crown(4)
    sub = k.subposet([0, 4, 5])
    assert sub.origin == (0, 4, 5) and sub.n == 3
