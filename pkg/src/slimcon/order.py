"""Finite posets and lattices.

Orders are stored as bitmask rows: ``up[x]`` has bit ``y`` set iff ``x <= y``.
Lattice joins and meets are read off a linear extension of the order, which
keeps them cheap even for lattices with thousands of elements.
"""
from __future__ import annotations

import json
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InvalidParameter, InvalidStructure
from .structures import ORDER_SIGNATURE, FiniteStructure

__all__ = [
    "Poset",
    "Lattice",
    "crown",
    "fence_segment",
    "antichain",
    "chain",
    "grid",
    "disjoint_sum",
    "downsets",
    "count_downsets",
    "downset_lattice",
    "join_irreducibles",
    "max_join_irreducibles",
    "is_distributive",
    "distributivity_witness",
    "semimodularity_witness",
    "is_semimodular",
    "is_slim",
    "slim_witness",
    "principal_ideal",
    "is_isomorphic",
    "poset_invariant",
]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


class Poset:
    """A finite nonempty poset on ``range(n)``.

    Parameters
    ----------
    up : sequence of int
        ``up[x]`` is the bitmask of all ``y`` with ``x <= y`` (reflexive).
    labels : sequence of str, optional
        Display names of the elements.
    check : bool
        Verify reflexivity, antisymmetry and transitivity.
    """

    def __init__(
        self,
        up: Sequence[int],
        labels: Sequence[str] | None = None,
        *,
        check: bool = True,
        down: Sequence[int] | None = None,
        upper_covers: Sequence[int] | None = None,
        lower_covers: Sequence[int] | None = None,
    ):
        if len(up) == 0:
            raise InvalidStructure("posets must be nonempty")
        self.up: tuple[int, ...] = tuple(up)
        self.n = len(self.up)
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != self.n:
            raise InvalidStructure("one label per element required")
        # trusted precomputed data from constructions that know it already
        if down is not None:
            self.__dict__["down"] = tuple(down)
        if upper_covers is not None:
            self.__dict__["upper_cover_masks"] = tuple(upper_covers)
        if lower_covers is not None:
            self.__dict__["lower_cover_masks"] = tuple(lower_covers)
        if check:
            self._check()

    def _check(self):
        full = (1 << self.n) - 1
        for x, row in enumerate(self.up):
            if row & ~full:
                raise InvalidStructure(f"row {x} mentions elements outside the poset")
            if not row >> x & 1:
                raise InvalidStructure(f"order is not reflexive at {x}")
            for y in _bits(row):
                if y != x and self.up[y] >> x & 1:
                    raise InvalidStructure(f"order is not antisymmetric at ({x}, {y})")
                if self.up[y] & ~row:
                    raise InvalidStructure(f"order is not transitive at ({x}, {y})")

    # -- construction -----------------------------------------------------
    @classmethod
    def from_relation(cls, n: int, pairs: Iterable[Sequence[int]], labels=None) -> "Poset":
        """Reflexive-transitive closure of the given ``x <= y`` pairs."""
        if n < 1:
            raise InvalidStructure("posets must be nonempty")
        up = [1 << x for x in range(n)]
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise InvalidStructure(f"pair {(x, y)} leaves the domain")
            up[x] |= 1 << y
        changed = True
        while changed:
            changed = False
            for x in range(n):
                row = up[x]
                new = row
                for y in _bits(row):
                    new |= up[y]
                if new != row:
                    up[x] = new
                    changed = True
        return cls(up, labels)

    @classmethod
    def from_leq(cls, n: int, leq, labels=None) -> "Poset":
        return cls([sum(1 << y for y in range(n) if leq(x, y)) for x in range(n)], labels)

    # -- basic queries ----------------------------------------------------
    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.up == other.up

    def __hash__(self):
        return hash(self.up)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and bool(self.up[x] >> y & 1)

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.n
        for x, row in enumerate(self.up):
            for y in _bits(row):
                down[y] |= 1 << x
        return tuple(down)

    @cached_property
    def _linear(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """(at, pos, upL, downL): a linear extension and the rows re-indexed by it."""
        if all(not (row & ((1 << x) - 1)) for x, row in enumerate(self.up)):
            ident = tuple(range(self.n))
            return ident, ident, self.up, self.down
        order = sorted(range(self.n), key=lambda v: -_popcount(self.up[v]))
        pos = [0] * self.n
        for i, v in enumerate(order):
            pos[v] = i
        upL = tuple(sum(1 << pos[y] for y in _bits(r)) for r in self.up)
        downL = tuple(sum(1 << pos[y] for y in _bits(r)) for r in self.down)
        return tuple(order), tuple(pos), upL, downL

    @cached_property
    def upper_cover_masks(self) -> tuple[int, ...]:
        at, pos, upL, _ = self._linear
        out = []
        for x in range(self.n):
            rem = upL[x] & ~(1 << pos[x])
            mask = 0
            while rem:
                # the lowest remaining position is minimal in what is left
                i = (rem & -rem).bit_length() - 1
                mask |= 1 << at[i]
                rem &= ~upL[at[i]]
            out.append(mask)
        return tuple(out)

    @cached_property
    def lower_cover_masks(self) -> tuple[int, ...]:
        at, pos, _, downL = self._linear
        out = []
        for x in range(self.n):
            rem = downL[x] & ~(1 << pos[x])
            mask = 0
            while rem:
                i = rem.bit_length() - 1
                mask |= 1 << at[i]
                rem &= ~downL[at[i]]
            out.append(mask)
        return tuple(out)

    def upper_covers(self, x: int) -> list[int]:
        return _bits(self.upper_cover_masks[x])

    def lower_covers(self, x: int) -> list[int]:
        return _bits(self.lower_cover_masks[x])

    def covers(self) -> list[tuple[int, int]]:
        """All pairs ``(x, y)`` with ``x`` covered by ``y``."""
        return [(x, y) for x in range(self.n) for y in self.upper_covers(x)]

    def is_cover(self, x: int, y: int) -> bool:
        return bool(self.upper_cover_masks[x] >> y & 1)

    def maximal(self) -> list[int]:
        return [x for x in range(self.n) if self.up[x] == 1 << x]

    def minimal(self) -> list[int]:
        return [x for x in range(self.n) if self.down[x] == 1 << x]

    @cached_property
    def heights(self) -> tuple[int, ...]:
        """Length of the longest chain ending at each element."""
        h = [0] * self.n
        for x in sorted(range(self.n), key=lambda v: _popcount(self.down[v])):
            for y in self.lower_covers(x):
                h[x] = max(h[x], h[y] + 1)
        return tuple(h)

    @cached_property
    def depths(self) -> tuple[int, ...]:
        d = [0] * self.n
        for x in sorted(range(self.n), key=lambda v: _popcount(self.up[v])):
            for y in self.upper_covers(x):
                d[x] = max(d[x], d[y] + 1)
        return tuple(d)

    def height(self) -> int:
        return max(self.heights)

    def subposet(self, elements: Iterable[int]) -> "Poset":
        """Induced subposet; ``origin`` maps new ids back to old ones."""
        elems = list(elements)
        pos = {e: i for i, e in enumerate(elems)}
        up = []
        for e in elems:
            up.append(sum(1 << pos[f] for f in _bits(self.up[e]) if f in pos))
        labels = [self.label(e) for e in elems]
        p = Poset(up, labels, check=False)
        p.origin = tuple(elems)
        return p

    def comparability_edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in _bits(self.up[x]) if y != x]

    def find_antichain(self, size: int) -> tuple[int, ...] | None:
        for combo in combinations(range(self.n), size):
            if all(not (self.up[a] >> b & 1 or self.up[b] >> a & 1) for a, b in combinations(combo, 2)):
                return combo
        return None

    # -- conversions ------------------------------------------------------
    def to_structure(self) -> FiniteStructure:
        pairs = [(x, y) for x in range(self.n) for y in _bits(self.up[x])]
        return FiniteStructure(ORDER_SIGNATURE, self.n, {"<=": pairs})

    def to_json(self) -> dict:
        obj = {"size": self.n, "covers": [list(c) for c in self.covers()]}
        if self.labels is not None:
            obj["labels"] = list(self.labels)
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: Mapping) -> "Poset":
        p = Poset.from_relation(int(obj["size"]), obj.get("covers", []), obj.get("labels"))
        return p if cls is Poset else cls(p.up, p.labels)

    def to_dot(self, name: str = "P") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  edge [arrowhead=none];"]
        lines += [f'  {x} [label="{self.label(x)}"];' for x in range(self.n)]
        lines += [f"  {x} -> {y};" for x, y in self.covers()]
        lines.append("}")
        return "\n".join(lines) + "\n"


class Lattice(Poset):
    """A finite lattice; join and meet come from the order.

    ``jir`` may be supplied by constructions that know their join-irreducible
    elements in advance.
    """

    def __init__(
        self,
        up: Sequence[int],
        labels: Sequence[str] | None = None,
        *,
        check: bool = True,
        down: Sequence[int] | None = None,
        upper_covers: Sequence[int] | None = None,
        lower_covers: Sequence[int] | None = None,
        jir: Sequence[int] | None = None,
    ):
        super().__init__(
            up, labels, check=check, down=down, upper_covers=upper_covers, lower_covers=lower_covers
        )
        if jir is not None:
            self.__dict__["join_irreducibles"] = tuple(jir)
        self._at, self._pos, self._upL, self._downL = self._linear
        if check:
            self._check_lattice()
        self.bottom = self._at[0]
        self.top = self._at[-1]
        full = (1 << self.n) - 1
        if self._downL[self.top] != full or self._upL[self.bottom] != full:
            raise InvalidStructure("a finite lattice needs a bottom and a top")

    def _check_lattice(self):
        upL, downL, at = self._upL, self._downL, self._at
        for x in range(self.n):
            for y in range(x + 1, self.n):
                c = upL[x] & upL[y]
                if not c:
                    raise InvalidStructure(f"{x} and {y} have no upper bound")
                j = at[(c & -c).bit_length() - 1]
                if c & ~upL[j]:
                    raise InvalidStructure(f"{x} and {y} have no least upper bound")
                c = downL[x] & downL[y]
                if not c:
                    raise InvalidStructure(f"{x} and {y} have no lower bound")
                m = at[c.bit_length() - 1]
                if c & ~downL[m]:
                    raise InvalidStructure(f"{x} and {y} have no greatest lower bound")

    @classmethod
    def from_poset(cls, p: Poset) -> "Lattice":
        return cls(p.up, p.labels)

    @classmethod
    def from_json(cls, obj: Mapping) -> "Lattice":
        return cls.from_poset(Poset.from_json(obj))

    def join(self, x: int, y: int) -> int:
        c = self._upL[x] & self._upL[y]
        return self._at[(c & -c).bit_length() - 1]

    def meet(self, x: int, y: int) -> int:
        c = self._downL[x] & self._downL[y]
        return self._at[c.bit_length() - 1]

    def join_all(self, xs: Iterable[int]) -> int:
        c = self._upL[self.bottom]
        for x in xs:
            c &= self._upL[x]
        return self._at[(c & -c).bit_length() - 1]

    def meet_all(self, xs: Iterable[int]) -> int:
        c = self._downL[self.top]
        for x in xs:
            c &= self._downL[x]
        return self._at[c.bit_length() - 1]

    @cached_property
    def join_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.join(x, y) for y in range(self.n)) for x in range(self.n))

    @cached_property
    def meet_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.meet(x, y) for y in range(self.n)) for x in range(self.n))

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        """Elements with exactly one lower cover."""
        return tuple(x for x in range(self.n) if _popcount(self.lower_cover_masks[x]) == 1)

    @cached_property
    def meet_irreducibles(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.n) if _popcount(self.upper_cover_masks[x]) == 1)


# -- builders ---------------------------------------------------------------

def crown(n: int) -> Poset:
    """The crown K_n: maximal a_0..a_{n-1} (ids 0..n-1), minimal b_0..b_{n-1} (ids n..2n-1).

    b_i <= a_j iff i == j or i + 1 == j (mod n).
    """
    if n < 2:
        raise InvalidParameter(f"crown needs n >= 2, got {n}")
    pairs = [(n + i, j) for i in range(n) for j in range(n) if j == i or (i + 1) % n == j]
    labels = [f"a{j}" for j in range(n)] + [f"b{i}" for i in range(n)]
    return Poset.from_relation(2 * n, pairs, labels)


def fence_segment(m: int) -> Poset:
    """Truncated fence: b_0..b_{m-1} (ids m..2m-1) below a_0..a_{m-1} (ids 0..m-1);
    b_j <= a_s iff s in {j, j+1}."""
    if m < 1:
        raise InvalidParameter(f"fence_segment needs m >= 1, got {m}")
    pairs = [(m + j, s) for j in range(m) for s in (j, j + 1) if s < m]
    labels = [f"a{j}" for j in range(m)] + [f"b{j}" for j in range(m)]
    return Poset.from_relation(2 * m, pairs, labels)


def antichain(m: int) -> Poset:
    if m < 1:
        raise InvalidParameter(f"antichain needs m >= 1, got {m}")
    return Poset([1 << x for x in range(m)])


def chain(m: int) -> Lattice:
    """The m-element chain 0 < 1 < ... < m-1."""
    if m < 1:
        raise InvalidParameter(f"chain needs m >= 1, got {m}")
    full = (1 << m) - 1
    return Lattice([full & ~((1 << x) - 1) for x in range(m)])


def grid(k: int) -> Lattice:
    """Direct square of the (k+1)-element chain.

    Element ``(i, j)`` has id ``i * (k + 1) + j`` and label ``"i,j"``.
    """
    if k < 1:
        raise InvalidParameter(f"grid needs k >= 1, got {k}")
    s = k + 1
    up = []
    for i in range(s):
        for j in range(s):
            up.append(sum(1 << (p * s + q) for p in range(i, s) for q in range(j, s)))
    return Lattice(up, [f"{i},{j}" for i in range(s) for j in range(s)])


def disjoint_sum(ps: Sequence[Poset]) -> Poset:
    """Cardinal sum: disjoint union with no cross comparabilities."""
    if not ps:
        raise InvalidStructure("the cardinal sum of no posets would be empty")
    up, labels, offset = [], [], 0
    for k, p in enumerate(ps):
        up += [row << offset for row in p.up]
        labels += [f"{k}:{p.label(x)}" for x in range(p.n)]
        offset += p.n
    return Poset(up, labels, check=False)


# -- down-sets and Birkhoff duality ------------------------------------------

def downsets(p: Poset) -> list[int]:
    """All down-sets of ``p`` as bitmasks, sorted by size then value."""
    out: list[int] = []

    def rec(remaining: int, chosen: int):
        if not remaining:
            out.append(chosen)
            return
        # pick a minimal element of what is left; it is free to join or not
        x = next(v for v in _bits(remaining) if not (p.down[v] & remaining & ~(1 << v)))
        rec(remaining & ~p.up[x], chosen)
        rec(remaining & ~(1 << x), chosen | 1 << x)

    rec((1 << p.n) - 1, 0)
    out.sort(key=lambda m: (_popcount(m), m))
    return out


def count_downsets(p: Poset) -> int:
    memo: dict[int, int] = {}

    def rec(remaining: int) -> int:
        if not remaining:
            return 1
        if remaining in memo:
            return memo[remaining]
        x = next(v for v in _bits(remaining) if not (p.down[v] & remaining & ~(1 << v)))
        r = rec(remaining & ~p.up[x]) + rec(remaining & ~(1 << x))
        memo[remaining] = r
        return r

    return rec((1 << p.n) - 1)


def downset_lattice(p: Poset) -> Lattice:
    """Id(P): all down-sets of ``p`` ordered by inclusion.

    The result carries ``downsets`` (bitmask over ``p`` per element) and
    ``source`` (the poset ``p``); element ids follow ``downsets``.
    """
    family = downsets(p)
    n = len(family)
    index = {m: i for i, m in enumerate(family)}
    contains = [0] * p.n  # elements (down-sets) containing point q
    for i, m in enumerate(family):
        for q in _bits(m):
            contains[q] |= 1 << i
    full = (1 << n) - 1
    pfull = (1 << p.n) - 1
    up, down, ucov, lcov = [], [], [], []
    for m in family:
        u = full
        for q in _bits(m):
            u &= contains[q]
        d = full
        for q in _bits(pfull & ~m):
            d &= ~contains[q]
        up.append(u)
        down.append(d)
        # covers add or remove a single point
        ucov.append(sum(1 << index[m | 1 << q] for q in _bits(pfull & ~m) if not (p.down[q] & ~m & ~(1 << q))))
        lcov.append(sum(1 << index[m & ~(1 << q)] for q in _bits(m) if not (p.up[q] & m & ~(1 << q))))
    labels = ["{" + ",".join(p.label(q) for q in _bits(m)) + "}" for m in family]
    jir = sorted(index[p.down[q]] for q in range(p.n))
    lat = Lattice(up, labels, check=False, down=down, upper_covers=ucov, lower_covers=lcov, jir=jir)
    lat._distributive = True
    lat.downsets = tuple(family)
    lat.downset_index = index
    lat.source = p
    return lat


def join_irreducibles(l: Lattice) -> Poset:
    """The subposet J(L) of join-irreducible elements (``origin`` maps back)."""
    return l.subposet(l.join_irreducibles)


def max_join_irreducibles(l: Lattice) -> list[int]:
    jir = l.join_irreducibles
    jmask = sum(1 << j for j in jir)
    return [j for j in jir if not (l.up[j] & jmask & ~(1 << j))]


def principal_ideal(l: Poset, y: int) -> list[int]:
    if not 0 <= y < l.n:
        raise InvalidParameter(f"element {y} is not in the lattice")
    return _bits(l.down[y])


# -- structural predicates ---------------------------------------------------

_BRUTE_DISTRIBUTIVE_MAX = 160


def is_distributive(l: Lattice) -> bool:
    """Median-law check for small lattices; Birkhoff's count criterion otherwise.

    A finite lattice embeds into Id(J(L)) via ``x -> J(L) & down(x)``; it is
    distributive exactly when that embedding is onto.
    """
    cached = l.__dict__.get("_distributive")
    if cached is not None:
        return cached
    if l.n <= _BRUTE_DISTRIBUTIVE_MAX:
        result = distributivity_witness(l) is None
    else:
        result = count_downsets(join_irreducibles(l)) == l.n
    l._distributive = result
    return result


def distributivity_witness(l: Lattice) -> tuple[int, int, int] | None:
    """A triple violating the median law, or None."""
    J, M = l.join, l.meet
    for x in range(l.n):
        for y in range(x + 1, l.n):
            xy_m, xy_j = M(x, y), J(x, y)
            for z in range(y + 1, l.n):
                lhs = J(J(xy_m, M(y, z)), M(z, x))
                rhs = M(M(xy_j, J(y, z)), J(z, x))
                if lhs != rhs:
                    return (x, y, z)
    return None


def is_semimodular(l: Lattice) -> bool:
    """x covered by y implies x v z covered by or equal to y v z, for all z."""
    return semimodularity_witness(l) is None


def semimodularity_witness(l: Lattice) -> tuple[int, int, int] | None:
    for x, y in l.covers():
        for z in range(l.n):
            a, b = l.join(x, z), l.join(y, z)
            if a != b and not l.is_cover(a, b):
                return (x, y, z)
    return None


def slim_witness(l: Lattice) -> tuple[int, ...] | None:
    """A 3-element antichain of join-irreducibles (lattice ids), or None."""
    jp = join_irreducibles(l)
    found = jp.find_antichain(3)
    return None if found is None else tuple(jp.origin[i] for i in found)


def is_slim(l: Lattice) -> bool:
    """J(L) is a union of two chains, i.e. has no 3-element antichain (Dilworth)."""
    return slim_witness(l) is None


# -- isomorphism --------------------------------------------------------------

def _element_invariants(p: Poset) -> list[tuple]:
    up_c = [len(p.upper_covers(x)) for x in range(p.n)]
    low_c = [len(p.lower_covers(x)) for x in range(p.n)]
    base = [
        (_popcount(p.up[x]), _popcount(p.down[x]), up_c[x], low_c[x], p.heights[x], p.depths[x])
        for x in range(p.n)
    ]
    # one refinement round: multiset of neighbour invariants along covers
    return [
        (
            base[x],
            tuple(sorted(base[y] for y in p.upper_covers(x))),
            tuple(sorted(base[y] for y in p.lower_covers(x))),
        )
        for x in range(p.n)
    ]


def poset_invariant(p: Poset) -> tuple:
    """Isomorphism-invariant fingerprint (equal for isomorphic posets)."""
    return (p.n, tuple(sorted(_element_invariants(p))))


def is_isomorphic(a: Poset, b: Poset) -> dict[int, int] | None:
    """An order-isomorphism ``a -> b`` if one exists, else None."""
    if a.n != b.n or len(a.covers()) != len(b.covers()):
        return None
    inv_a, inv_b = _element_invariants(a), _element_invariants(b)
    if sorted(inv_a) != sorted(inv_b):
        return None
    candidates = {x: [y for y in range(b.n) if inv_b[y] == inv_a[x]] for x in range(a.n)}
    # assign constrained elements first, keeping cover-neighbours adjacent
    order: list[int] = []
    seen = set()
    for start in sorted(range(a.n), key=lambda x: len(candidates[x])):
        if start in seen:
            continue
        stack = [start]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            order.append(x)
            stack.extend(y for y in a.upper_covers(x) + a.lower_covers(x) if y not in seen)
    mapping: dict[int, int] = {}
    used = 0

    def extend(i: int) -> bool:
        nonlocal used
        if i == len(order):
            return True
        x = order[i]
        for y in candidates[x]:
            if used >> y & 1:
                continue
            ok = True
            for x2, y2 in mapping.items():
                if a.leq(x, x2) != b.leq(y, y2) or a.leq(x2, x) != b.leq(y2, y):
                    ok = False
                    break
            if not ok:
                continue
            mapping[x] = y
            used |= 1 << y
            if extend(i + 1):
                return True
            del mapping[x]
            used &= ~(1 << y)
        return False

    return dict(mapping) if extend(0) else None
