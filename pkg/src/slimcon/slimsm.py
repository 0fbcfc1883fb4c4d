"""Planar slim semimodular lattices carried with an explicit diagram.

A diagram lists, for every element, its upper covers and its lower covers
from left to right.  Fork insertion and the lattices L_n are defined on the
diagram; the abstract lattice is rebuilt from the cover lists.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import InvalidParameter, InvalidStructure
from .order import Lattice, Poset

__all__ = [
    "FourCell",
    "PlanarSlimLattice",
    "grid_diagram",
    "chain_diagram",
    "cells",
    "trajectories",
    "insert_fork",
    "build_Ln",
    "random_slim",
]

Edge = tuple[int, int]


@dataclass(frozen=True)
class FourCell:
    """A 4-cell: bottom ``o``, left cover ``a``, right cover ``b``, top ``t``."""

    o: int
    a: int
    b: int
    t: int

    @property
    def lower_left(self) -> Edge:
        return (self.o, self.a)

    @property
    def lower_right(self) -> Edge:
        return (self.o, self.b)

    @property
    def upper_left(self) -> Edge:
        return (self.a, self.t)

    @property
    def upper_right(self) -> Edge:
        return (self.b, self.t)


class PlanarSlimLattice:
    """A lattice with left-to-right cover lists and optional edge labels.

    ``up_order[x]`` lists the upper covers of ``x`` from left to right and
    ``down_order[x]`` its lower covers.  ``edge_labels`` maps a name to a
    covering pair ``(lo, hi)``.
    """

    def __init__(
        self,
        up_order: Sequence[Sequence[int]],
        down_order: Sequence[Sequence[int]],
        names: Sequence[str] | None = None,
        edge_labels: Mapping[str, Edge] | None = None,
        *,
        check: bool = True,
    ):
        n = len(up_order)
        if len(down_order) != n:
            raise InvalidStructure("up and down cover lists differ in length")
        self.up_order = tuple(tuple(r) for r in up_order)
        self.down_order = tuple(tuple(r) for r in down_order)
        self.names = tuple(names) if names is not None else tuple(str(x) for x in range(n))
        self.edge_labels = {k: tuple(v) for k, v in (edge_labels or {}).items()}
        self.n = n
        self._check_lists()
        covers = [(x, y) for x in range(n) for y in self.up_order[x]]
        p = Poset.from_relation(n, covers, self.names)
        self.lattice = Lattice(p.up, self.names, check=check)
        for name, (lo, hi) in self.edge_labels.items():
            if hi not in self.up_order[lo]:
                raise InvalidStructure(f"label {name!r} is not on a covering pair")
        if check:
            self._check_planar_consistency()

    def _check_lists(self):
        for x in range(self.n):
            if len(set(self.up_order[x])) != len(self.up_order[x]):
                raise InvalidStructure(f"repeated upper cover at {x}")
            for y in self.up_order[x]:
                if not 0 <= y < self.n or x not in self.down_order[y]:
                    raise InvalidStructure(f"cover {x} < {y} missing from the lower-cover list")
            for y in self.down_order[x]:
                if not 0 <= y < self.n or x not in self.up_order[y]:
                    raise InvalidStructure(f"cover {y} < {x} missing from the upper-cover list")

    def _check_planar_consistency(self):
        # two elements covering z and covered by w appear in the same order in both lists
        for z in range(self.n):
            ups = self.up_order[z]
            for i, x in enumerate(ups):
                for y in ups[i + 1 :]:
                    for w in set(self.up_order[x]) & set(self.up_order[y]):
                        dw = self.down_order[w]
                        if dw.index(x) > dw.index(y):
                            raise InvalidStructure(f"left-right order of {x}, {y} is inconsistent")

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PlanarSlimLattice):
            return NotImplemented
        return (
            self.up_order == other.up_order
            and self.down_order == other.down_order
            and self.edge_labels == other.edge_labels
        )

    def __repr__(self):
        return f"PlanarSlimLattice(n={self.n}, cells={len(self.cells)})"

    def edges(self) -> list[Edge]:
        return [(x, y) for x in range(self.n) for y in self.up_order[x]]

    @cached_property
    def cells(self) -> tuple[FourCell, ...]:
        out = []
        for o in range(self.n):
            ups = self.up_order[o]
            for a, b in zip(ups, ups[1:]):
                t = self.lattice.join(a, b)
                dt = self.down_order[t]
                if a in dt and b in dt and dt.index(b) == dt.index(a) + 1:
                    out.append(FourCell(o, a, b, t))
        return tuple(out)

    @cached_property
    def trajectory_of(self) -> dict[Edge, int]:
        """Edge -> trajectory id (the least edge index on it)."""
        edges = self.edges()
        idx = {e: i for i, e in enumerate(edges)}
        parent = list(range(len(edges)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(e, f):
            a, b = find(idx[e]), find(idx[f])
            if a != b:
                parent[max(a, b)] = min(a, b)

        for c in self.cells:
            union(c.upper_left, c.lower_right)
            union(c.upper_right, c.lower_left)
        return {e: find(i) for e, i in idx.items()}

    def is_slim_semimodular(self) -> bool:
        from .order import is_semimodular, is_slim

        return is_semimodular(self.lattice) and is_slim(self.lattice)

    def to_json(self) -> dict:
        obj = self.lattice.to_json()
        obj["elementNames"] = obj.pop("labels", list(self.names))
        obj["coverOrder"] = [list(r) for r in self.up_order]
        obj["lowerCoverOrder"] = [list(r) for r in self.down_order]
        obj["labels"] = {k: list(v) for k, v in sorted(self.edge_labels.items())}
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: Mapping) -> "PlanarSlimLattice":
        n = int(obj["size"])
        up = [list(r) for r in obj["coverOrder"]]
        if "lowerCoverOrder" in obj:
            down = [list(r) for r in obj["lowerCoverOrder"]]
        else:
            raise InvalidStructure("diagram JSON needs lowerCoverOrder")
        if len(up) != n:
            raise InvalidStructure("coverOrder must list every element")
        covers = {tuple(c) for c in obj.get("covers", [])}
        if covers and covers != {(x, y) for x in range(n) for y in up[x]}:
            raise InvalidStructure("covers disagree with coverOrder")
        labels = {k: tuple(v) for k, v in obj.get("labels", {}).items()}
        return cls(up, down, obj.get("elementNames"), labels)

    def to_dot(self, name: str = "L") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  ordering=out;", "  edge [arrowhead=none];"]
        lines += [f'  {x} [label="{self.names[x]}"];' for x in range(self.n)]
        edge_name = {v: k for k, v in self.edge_labels.items()}
        for x in range(self.n):
            for y in self.up_order[x]:
                extra = f' [label="{edge_name[(x, y)]}"]' if (x, y) in edge_name else ""
                lines.append(f"  {x} -> {y}{extra};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def grid_diagram(k: int) -> PlanarSlimLattice:
    """The grid drawn with (i, j) at horizontal position j - i; id is i*(k+1)+j."""
    if k < 1:
        raise InvalidParameter(f"grid needs k >= 1, got {k}")
    s = k + 1
    ident = lambda i, j: i * s + j  # noqa: E731
    up, down, names = [], [], []
    for i in range(s):
        for j in range(s):
            up.append([ident(i + 1, j)] * (i < k) + [ident(i, j + 1)] * (j < k))
            down.append([ident(i, j - 1)] * (j > 0) + [ident(i - 1, j)] * (i > 0))
            names.append(f"{i},{j}")
    return PlanarSlimLattice(up, down, names)


def chain_diagram(m: int) -> PlanarSlimLattice:
    if m < 1:
        raise InvalidParameter(f"chain needs m >= 1, got {m}")
    up = [[x + 1] if x + 1 < m else [] for x in range(m)]
    down = [[x - 1] if x > 0 else [] for x in range(m)]
    return PlanarSlimLattice(up, down)


def cells(l: PlanarSlimLattice) -> list[FourCell]:
    return list(l.cells)


def trajectories(l: PlanarSlimLattice) -> list[list[Edge]]:
    groups: dict[int, list[Edge]] = {}
    for e, t in l.trajectory_of.items():
        groups.setdefault(t, []).append(e)
    return [groups[t] for t in sorted(groups)]


def _replace(seq: list[int], old: int, new: int):
    seq[seq.index(old)] = new


def insert_fork(l: PlanarSlimLattice, c: FourCell, *, tag: str | None = None) -> PlanarSlimLattice:
    """Insert a fork into the 4-cell ``c``.

    The result has ``subdivided`` (the original edges split by the legs) and
    ``legs`` (left and right leg lengths) attributes.  Labels on subdivided
    edges are dropped.
    """
    if c not in l.cells:
        raise InvalidParameter(f"{c} is not a 4-cell of the diagram")
    by_upper_right = {cell.upper_right: cell for cell in l.cells}
    by_upper_left = {cell.upper_left: cell for cell in l.cells}
    up = [list(r) for r in l.up_order]
    down = [list(r) for r in l.down_order]
    names = list(l.names)
    tag = tag if tag is not None else f"f{len(names)}"

    def new(name: str) -> int:
        up.append([])
        down.append([])
        names.append(name)
        return len(names) - 1

    m = new(f"{tag}m")
    up[m] = [c.t]
    down[c.t].insert(down[c.t].index(c.a) + 1, m)

    def leg(first: Edge, side: str) -> list[tuple[int, Edge]]:
        out, edge = [], first
        while True:
            out.append((new(f"{tag}{'u' if side == 'L' else 'v'}{len(out) + 1}"), edge))
            table = by_upper_right if side == "L" else by_upper_left
            cell = table.get(edge)
            if cell is None:
                return out
            edge = cell.lower_left if side == "L" else cell.lower_right

    left, right = leg(c.lower_left, "L"), leg(c.lower_right, "R")
    for i, (u, (x, y)) in enumerate(left):
        above = left[i - 1][0] if i else m
        below = [left[i + 1][0]] if i + 1 < len(left) else []
        up[u] = [y, above]
        down[u] = below + [x]
        _replace(up[x], y, u)
        _replace(down[y], x, u)
    for i, (v, (x, y)) in enumerate(right):
        above = right[i - 1][0] if i else m
        below = [right[i + 1][0]] if i + 1 < len(right) else []
        up[v] = [above, y]
        down[v] = [x] + below
        _replace(up[x], y, v)
        _replace(down[y], x, v)
    down[m] = [left[0][0], right[0][0]]
    subdivided = [e for _, e in left] + [e for _, e in right]
    labels = {k: e for k, e in l.edge_labels.items() if e not in subdivided}
    out = PlanarSlimLattice(up, down, names, labels, check=False)
    out.subdivided = tuple(subdivided)
    out.legs = (len(left), len(right))
    out.fork_top = m
    return out


def build_Ln(n: int) -> PlanarSlimLattice:
    """The lattice L_n: grid(n/2) plus n fork insertions along the boundary labels.

    Boundary edges are labelled a_0..a_{n-1}; the top edge of each inserted fork
    is labelled b_p for the pair (a_p, a_{p+1}) and b_{n-1} for (a_0, a_{n-1}).
    """
    if n < 4 or n % 2:
        raise InvalidParameter(f"build_Ln needs an even n >= 4, got {n}")
    k = n // 2
    s = k + 1
    ident = lambda i, j: i * s + j  # noqa: E731
    base = grid_diagram(k)
    labels: dict[str, Edge] = {}
    for t in range(k):
        labels[f"a{2 * t}"] = (ident(k, k - 1 - t), ident(k, k - t))
        labels[f"a{2 * t + 1}"] = (ident(k - 1 - t, k), ident(k - t, k))
    l = PlanarSlimLattice(base.up_order, base.down_order, base.names, labels)
    schedule = [(0, 1), (0, n - 1)] + [(p, p + 1) for p in range(1, n - 1)]
    for step, (p, q) in enumerate(schedule):
        tp = l.trajectory_of[l.edge_labels[f"a{p}"]]
        tq = l.trajectory_of[l.edge_labels[f"a{q}"]]
        targets = [
            c for c in l.cells if {l.trajectory_of[c.upper_left], l.trajectory_of[c.upper_right]} == {tp, tq}
        ]
        if len(targets) != 1:
            raise InvalidStructure(
                f"fork {step} for (a{p}, a{q}) has {len(targets)} candidate cells; expected exactly one"
            )
        before = set(l.edge_labels)
        l = insert_fork(l, targets[0], tag=f"f{step}")
        if set(l.edge_labels) != before:
            raise InvalidStructure(f"fork {step} subdivided a labelled boundary edge")
        new_labels = dict(l.edge_labels)
        name = f"b{n - 1}" if (p, q) == (0, n - 1) else f"b{p}"
        new_labels[name] = (l.fork_top, targets[0].t)
        l = PlanarSlimLattice(l.up_order, l.down_order, l.names, new_labels, check=False)
    return PlanarSlimLattice(l.up_order, l.down_order, l.names, l.edge_labels, check=True)


def random_slim(seed: int, gridK: int, forks: int) -> PlanarSlimLattice:
    """grid(gridK) followed by ``forks`` insertions into uniformly chosen cells."""
    if gridK < 1:
        raise InvalidParameter(f"gridK must be >= 1, got {gridK}")
    if forks < 0:
        raise InvalidParameter(f"forks must be >= 0, got {forks}")
    rng = random.Random(seed)
    l = grid_diagram(gridK)
    for step in range(forks):
        l = insert_fork(l, rng.choice(l.cells), tag=f"f{step}")
    return l
