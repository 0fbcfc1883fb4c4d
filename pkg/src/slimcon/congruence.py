"""Congruences of finite lattices and the congruence lattice Con(L)."""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .errors import InvalidParameter, InvalidStructure
from .order import Lattice, Poset

__all__ = [
    "Congruence",
    "ConLattice",
    "principal_congruence",
    "congruence_join",
    "congruence_meet",
    "prime_congruences",
    "congruence_lattice",
    "jir_congruence_poset",
    "all_compatible_partitions",
]

_TABLE_LIMIT = 1024


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _canonical(parent: list[int]) -> tuple[int, ...]:
    # block representative = least element index of the block
    least: dict[int, int] = {}
    rep = []
    for x in range(len(parent)):
        r = _find(parent, x)
        rep.append(least.setdefault(r, x))
    return tuple(rep)


class Congruence:
    """A partition of ``range(n)`` stored as its representative array."""

    __slots__ = ("rep", "_hash")

    def __init__(self, rep: Sequence[int]):
        self.rep = tuple(rep)
        self._hash = hash(self.rep)

    @classmethod
    def identity(cls, n: int) -> "Congruence":
        return cls(range(n))

    @classmethod
    def total(cls, n: int) -> "Congruence":
        return cls([0] * n)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Congruence":
        parent = list(range(n))
        for block in blocks:
            block = list(block)
            for x in block[1:]:
                a, b = _find(parent, block[0]), _find(parent, x)
                parent[max(a, b)] = min(a, b)
        return cls(_canonical(parent))

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.rep == other.rep

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.rep)

    def __repr__(self):
        return f"Congruence({self.blocks()})"

    def same(self, x: int, y: int) -> bool:
        return self.rep[x] == self.rep[y]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, r in enumerate(self.rep):
            out.setdefault(r, []).append(x)
        return list(out.values())

    def block_count(self) -> int:
        return sum(1 for x, r in enumerate(self.rep) if x == r)

    def leq(self, other: "Congruence") -> bool:
        """Refinement: every block of ``self`` lies inside a block of ``other``."""
        return all(other.rep[x] == other.rep[r] for x, r in enumerate(self.rep))

    def is_compatible(self, l: Lattice) -> bool:
        return self.incompatibility(l) is None

    def incompatibility(self, l: Lattice) -> tuple[int, int, int] | None:
        """A triple (x, y, z) with x, y congruent but x v z or x ^ z not, else None."""
        rep = self.rep
        for block in self.blocks():
            x = block[0]
            for y in block[1:]:
                for z in range(l.n):
                    if rep[l.join(x, z)] != rep[l.join(y, z)] or rep[l.meet(x, z)] != rep[l.meet(y, z)]:
                        return (x, y, z)
        return None

    def to_json(self) -> list[int]:
        return list(self.rep)


def _tables(l: Lattice):
    if l.n <= _TABLE_LIMIT:
        return l.join_table, l.meet_table
    return None, None


def _close(l: Lattice, parent: list[int], pending: list[tuple[int, int]]) -> tuple[int, ...]:
    jt, mt = _tables(l)
    n = l.n
    while pending:
        x, y = pending.pop()
        rx, ry = _find(parent, x), _find(parent, y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        if jt is not None:
            jx, jy, mx, my = jt[x], jt[y], mt[x], mt[y]
            for z in range(n):
                pending.append((jx[z], jy[z]))
                pending.append((mx[z], my[z]))
        else:
            for z in range(n):
                pending.append((l.join(x, z), l.join(y, z)))
                pending.append((l.meet(x, z), l.meet(y, z)))
    return _canonical(parent)


def principal_congruence(l: Lattice, a: int, b: int) -> Congruence:
    """con(a, b): the least congruence collapsing ``a`` and ``b``."""
    if not (0 <= a < l.n and 0 <= b < l.n):
        raise InvalidParameter(f"elements ({a}, {b}) are not in the lattice")
    return Congruence(_close(l, list(range(l.n)), [(a, b)]))


def congruence_join(l: Lattice, theta: Congruence, psi: Congruence) -> Congruence:
    """Join in Con(L); for lattices it is the equivalence generated by the union."""
    parent = list(theta.rep)
    for x, r in enumerate(psi.rep):
        a, b = _find(parent, x), _find(parent, r)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return Congruence(_canonical(parent))


def congruence_meet(theta: Congruence, psi: Congruence) -> Congruence:
    seen: dict[tuple[int, int], int] = {}
    return Congruence(seen.setdefault((theta.rep[x], psi.rep[x]), x) for x in range(len(theta.rep)))


def prime_congruences(l: Lattice) -> dict[Congruence, tuple[int, int]]:
    """Distinct con(a, b) over covering pairs a < b, each with its first generating pair.

    In a finite lattice these are exactly the join-irreducible congruences.
    """
    out: dict[Congruence, tuple[int, int]] = {}
    for a, b in l.covers():
        theta = principal_congruence(l, a, b)
        out.setdefault(theta, (a, b))
    return out


class ConLattice(Lattice):
    """Con(L) as a lattice; element ``i`` is the congruence ``congruences[i]``."""

    def __init__(self, source: Lattice, congruences: Sequence[Congruence], up, down, check: bool):
        self.source = source
        self.congruences = tuple(congruences)
        self.index = {c: i for i, c in enumerate(self.congruences)}
        labels = ["|".join(",".join(map(str, b)) for b in c.blocks()) for c in self.congruences]
        super().__init__(up, labels, check=check, down=down)

    def congruence(self, i: int) -> Congruence:
        return self.congruences[i]

    def to_json(self) -> dict:
        obj = super().to_json()
        obj["blocks"] = [c.blocks() for c in self.congruences]
        return obj


def _bfs_congruences(l: Lattice, gens: Sequence[tuple[Congruence, tuple[int, int]]]) -> list[Congruence]:
    start = Congruence.identity(l.n)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for theta in frontier:
            for gamma, (a, b) in gens:
                if theta.rep[a] == theta.rep[b]:
                    continue
                new = congruence_join(l, theta, gamma)
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
        frontier = nxt
    return list(seen)


def congruence_lattice(l: Lattice, *, check: bool | None = None) -> ConLattice:
    """Con(L): closure of the identity and the prime-interval congruences under joins.

    Elements are ordered by the number of prime congruences they contain,
    which is a linear extension of refinement.
    """
    gens = list(prime_congruences(l).items())
    cons = _bfs_congruences(l, gens)
    below = {c: sum(1 << g for g, (gamma, (a, b)) in enumerate(gens) if c.rep[a] == c.rep[b]) for c in cons}
    cons.sort(key=lambda c: (bin(below[c]).count("1"), c.rep))
    n = len(cons)
    full = (1 << n) - 1
    # contains[g]: congruences at or above the g-th generator
    contains = [0] * len(gens)
    for i, c in enumerate(cons):
        for g in range(len(gens)):
            if below[c] >> g & 1:
                contains[g] |= 1 << i
    up, down = [], []
    for c in cons:
        u, d = full, full
        for g in range(len(gens)):
            if below[c] >> g & 1:
                u &= contains[g]
            else:
                d &= ~contains[g]
        up.append(u)
        down.append(d)
    if check is None:
        check = n <= 200
    return ConLattice(l, cons, up, down, check)


def jir_congruence_poset(l: Lattice) -> Poset:
    """J(Con L) without building Con L: prime-interval congruences under refinement.

    ``congruences`` holds the congruence of each element and ``generators``
    a covering pair generating it.
    """
    prime = prime_congruences(l)
    cons = sorted(prime, key=lambda c: (-c.block_count(), c.rep))
    up = [sum(1 << j for j, d in enumerate(cons) if c.leq(d)) for c in cons]
    labels = [f"con({a},{b})" for a, b in (prime[c] for c in cons)]
    p = Poset(up, labels)
    p.congruences = tuple(cons)
    p.generators = tuple(prime[c] for c in cons)
    return p


def _set_partitions(n: int) -> Iterator[list[int]]:
    # restricted growth strings
    a = [0] * n

    def rec(i: int, m: int):
        if i == n:
            yield list(a)
            return
        for v in range(m + 2):
            a[i] = v
            yield from rec(i + 1, max(m, v))

    if n == 0:
        return
    yield from rec(1, 0)


def all_compatible_partitions(l: Lattice, limit: int = 10) -> set[Congruence]:
    """Brute force: every partition of L compatible with join and meet."""
    if l.n > limit:
        raise InvalidStructure(f"brute-force partition search is capped at {limit} elements")
    out = set()
    for rgs in _set_partitions(l.n):
        first: dict[int, int] = {}
        theta = Congruence(first.setdefault(v, x) for x, v in enumerate(rgs))
        if theta.is_compatible(l):
            out.add(theta)
    return out
