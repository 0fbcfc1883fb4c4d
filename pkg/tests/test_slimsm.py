import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from slimcon import InvalidParameter
from slimcon.congruence import congruence_lattice, jir_congruence_poset
from slimcon.order import crown, is_distributive, is_isomorphic, is_semimodular, is_slim
from slimcon.slimsm import (
    FourCell,
    PlanarSlimLattice,
    build_Ln,
    cells,
    chain_diagram,
    grid_diagram,
    insert_fork,
    random_slim,
    trajectories,
)

FIXTURE = Path(__file__).parent / "fixtures" / "l8.json"


def check_planar_cells(d):
    for c in d.cells:
        o, a, b, t = c.o, c.a, c.b, c.t
        assert d.up_order[o].index(b) == d.up_order[o].index(a) + 1
        assert d.down_order[t].index(b) == d.down_order[t].index(a) + 1


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_grid_cells(k):
    d = grid_diagram(k)
    assert len(cells(d)) == k * k
    check_planar_cells(d)


def test_chain_has_no_cells():
    assert cells(chain_diagram(5)) == []


def test_fork_into_square_is_s7():
    sq = grid_diagram(1)
    (c,) = sq.cells
    s7 = insert_fork(sq, c)
    assert s7.n == 7
    m = s7.fork_top
    u1, v1 = s7.down_order[m]
    expected = {
        (c.o, u1), (c.o, v1), (u1, c.a), (u1, m), (v1, m), (v1, c.b), (c.a, c.t), (m, c.t), (c.b, c.t)
    }
    assert set(s7.lattice.covers()) == expected
    assert is_semimodular(s7.lattice) and is_slim(s7.lattice)
    assert s7.legs == (1, 1)
    assert len(s7.cells) == 3


def test_fork_rejects_foreign_cell():
    with pytest.raises(InvalidParameter):
        insert_fork(grid_diagram(1), FourCell(0, 1, 2, 3))


@given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_fork_invariants(k, seed, steps):
    import random

    rng = random.Random(seed)
    d = grid_diagram(k)
    for _ in range(steps):
        c = rng.choice(d.cells)
        e = insert_fork(d, c)
        left, right = e.legs
        assert e.n == d.n + 1 + left + right >= d.n + 3
        # recomputed, not derived from a formula
        assert len(e.cells) == len(d.cells) + left + right
        assert is_semimodular(e.lattice) and is_slim(e.lattice)
        check_planar_cells(e)
        d = e


def test_boundary_fork_adds_three():
    d = grid_diagram(3)
    corner = next(c for c in d.cells if c.o == d.lattice.bottom)
    e = insert_fork(d, corner)
    assert e.n == d.n + 3


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(0, 4))
def test_trajectories_partition_prime_intervals(seed, k, forks):
    d = random_slim(seed, k, forks)
    seen = [e for t in trajectories(d) for e in t]
    assert sorted(seen) == sorted(d.lattice.covers())


def test_random_slim_basics():
    assert random_slim(5, 3, 0).lattice.up == grid_diagram(3).lattice.up
    assert random_slim(7, 3, 4) == random_slim(7, 3, 4)
    with pytest.raises(InvalidParameter):
        random_slim(0, 0, 1)
    with pytest.raises(InvalidParameter):
        random_slim(0, 1, -1)


@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 6))
def test_random_slim_is_slim_semimodular(seed, k, forks):
    d = random_slim(seed, k, forks)
    assert d.is_slim_semimodular()


@pytest.mark.parametrize("n", [4, 6])
def test_Ln_congruence_crown(n):
    d = build_Ln(n)
    assert d.is_slim_semimodular()
    assert sorted(d.edge_labels) == sorted([f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)])
    assert is_isomorphic(jir_congruence_poset(d.lattice), crown(n)) is not None
    assert is_distributive(congruence_lattice(d.lattice))


def test_Ln_rejects_odd():
    for n in (2, 5, 7):
        with pytest.raises(InvalidParameter):
            build_Ln(n)


def test_L8_fixture_regression():
    stored = PlanarSlimLattice.from_json(json.loads(FIXTURE.read_text()))
    assert build_Ln(8) == stored
    assert stored.is_slim_semimodular()


def test_json_round_trip_and_dot():
    d = random_slim(3, 2, 3)
    back = PlanarSlimLattice.from_json(json.loads(d.dumps()))
    assert back == d and back.names == d.names
    dot = build_Ln(4).to_dot()
    assert 'label="a0"' in dot and "ordering=out" in dot
