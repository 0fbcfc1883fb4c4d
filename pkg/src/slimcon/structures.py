"""Finite relational/algebraic structures and the concrete families built on them.

Domains are always ``0..n-1``.  A structure is immutable once built; relation
contents are frozensets of tuples and function tables are flat row-major tuples.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidParameter, InvalidStructure, SignatureError

__all__ = [
    "Signature",
    "FiniteStructure",
    "GraphView",
    "GRAPH_SIGNATURE",
    "GROUP_SIGNATURE",
    "ORDER_SIGNATURE",
    "BipartiteResult",
    "graph",
    "circle_graph",
    "path_graph",
    "cyclic_group",
    "cyclic_group_is_simple",
    "is_bipartite",
    "shortest_odd_cycle",
]


@dataclass(frozen=True)
class Signature:
    """Relation and function symbols with their arities."""

    relations: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple((str(n), int(a)) for n, a in self.relations))
        object.__setattr__(self, "functions", tuple((str(n), int(a)) for n, a in self.functions))
        names = [n for n, _ in self.relations] + [n for n, _ in self.functions]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate symbol names in signature: {names}")
        for name, arity in self.relations + self.functions:
            if arity < 0:
                raise SignatureError(f"negative arity for {name!r}")

    def relation_arity(self, name: str) -> int | None:
        for n, a in self.relations:
            if n == name:
                return a
        return None

    def function_arity(self, name: str) -> int | None:
        for n, a in self.functions:
            if n == name:
                return a
        return None

    def to_json(self) -> dict:
        return {
            "relations": [{"name": n, "arity": a} for n, a in self.relations],
            "functions": [{"name": n, "arity": a} for n, a in self.functions],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Signature":
        return cls(
            tuple((r["name"], r["arity"]) for r in obj.get("relations", [])),
            tuple((f["name"], f["arity"]) for f in obj.get("functions", [])),
        )


GRAPH_SIGNATURE = Signature(relations=(("E", 2),))
GROUP_SIGNATURE = Signature(functions=(("+", 2),))
ORDER_SIGNATURE = Signature(relations=(("<=", 2),))


class FiniteStructure:
    """A sigma-structure on the domain ``{0, ..., size-1}``."""

    def __init__(
        self,
        signature: Signature,
        size: int,
        relations: Mapping[str, Iterable[Sequence[int]]] | None = None,
        functions: Mapping[str, Sequence[int]] | None = None,
    ):
        if size < 1:
            raise InvalidStructure("the underlying set of a structure must be nonempty")
        relations = dict(relations or {})
        functions = dict(functions or {})
        self.signature = signature
        self.size = size
        rels = {}
        for name, arity in signature.relations:
            tuples = frozenset(tuple(int(v) for v in t) for t in relations.pop(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise InvalidStructure(f"tuple {t} has wrong arity for relation {name!r}")
                if any(not 0 <= v < size for v in t):
                    raise InvalidStructure(f"tuple {t} of {name!r} leaves the domain")
            rels[name] = tuples
        if relations:
            raise SignatureError(f"relations not in signature: {sorted(relations)}")
        funcs = {}
        for name, arity in signature.functions:
            if name not in functions:
                raise InvalidStructure(f"function {name!r} has no table")
            table = tuple(int(v) for v in functions.pop(name))
            if len(table) != size**arity:
                raise InvalidStructure(
                    f"table of {name!r} must have {size ** arity} entries, got {len(table)}"
                )
            if any(not 0 <= v < size for v in table):
                raise InvalidStructure(f"table of {name!r} leaves the domain")
            funcs[name] = table
        if functions:
            raise SignatureError(f"functions not in signature: {sorted(functions)}")
        self.relations: dict[str, frozenset] = rels
        self.functions: dict[str, tuple[int, ...]] = funcs

    def holds(self, name: str, args: Sequence[int]) -> bool:
        return tuple(args) in self.relations[name]

    def apply(self, name: str, args: Sequence[int]) -> int:
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return self.functions[name][idx]

    def __eq__(self, other):
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.size == other.size
            and self.relations == other.relations
            and self.functions == other.functions
        )

    def __hash__(self):
        return hash((self.signature, self.size))

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size}, signature={self.signature})"

    def to_json(self) -> dict:
        return {
            "signature": self.signature.to_json(),
            "size": self.size,
            "relations": {n: sorted(list(t) for t in ts) for n, ts in self.relations.items()},
            "functions": {n: {"table": list(t)} for n, t in self.functions.items()},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj: Mapping) -> "FiniteStructure":
        sig = Signature.from_json(obj["signature"])
        functions = {}
        for name, spec in obj.get("functions", {}).items():
            functions[name] = spec["table"] if isinstance(spec, Mapping) else spec
        struct = cls(sig, int(obj["size"]), obj.get("relations", {}), functions)
        if sig == GRAPH_SIGNATURE:
            return GraphView(struct.size, struct.relations["E"])
        return struct


class GraphView(FiniteStructure):
    """A structure over the graph signature (one binary relation ``E``)."""

    def __init__(self, size: int, edges: Iterable[Sequence[int]]):
        super().__init__(GRAPH_SIGNATURE, size, {"E": edges})
        adj: list[set[int]] = [set() for _ in range(size)]
        for x, y in self.relations["E"]:
            adj[x].add(y)
        self._adj = tuple(frozenset(s) for s in adj)

    @property
    def edges(self) -> frozenset:
        return self.relations["E"]

    def neighbors(self, x: int) -> frozenset:
        return self._adj[x]

    def degree(self, x: int) -> int:
        return len(self._adj[x])

    def is_undirected(self) -> bool:
        return all((y, x) in self.edges for x, y in self.edges)

    def is_loop_free(self) -> bool:
        return all(x != y for x, y in self.edges)

    def undirected_edges(self) -> list[tuple[int, int]]:
        return sorted({(min(x, y), max(x, y)) for x, y in self.edges})

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f"  {x};" for x in range(self.size)]
        lines += [f"  {x} -- {y};" for x, y in self.undirected_edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def graph(size: int, edges: Iterable[Sequence[int]], symmetric: bool = True) -> GraphView:
    """Build a graph; with ``symmetric`` every edge is added in both directions."""
    edges = [tuple(e) for e in edges]
    if symmetric:
        edges += [(y, x) for x, y in edges]
    return GraphView(size, edges)


def circle_graph(n: int) -> GraphView:
    """The circle C_n: x E y iff |x - y| is 1 or n - 1."""
    if n < 2:
        raise InvalidParameter(f"circle_graph needs n >= 2, got {n}")
    return GraphView(n, [(x, y) for x in range(n) for y in range(n) if abs(x - y) in (1, n - 1)])


def path_graph(m: int) -> GraphView:
    """Finite segment of the Z-chain: x E y iff |x - y| = 1."""
    if m < 2:
        raise InvalidParameter(f"path_graph needs m >= 2, got {m}")
    return GraphView(m, [(x, y) for x in range(m) for y in range(m) if abs(x - y) == 1])


def cyclic_group(n: int) -> FiniteStructure:
    """Z_n with the single binary operation ``+``."""
    if n < 1:
        raise InvalidParameter(f"cyclic_group needs n >= 1, got {n}")
    table = [(x + y) % n for x in range(n) for y in range(n)]
    return FiniteStructure(GROUP_SIGNATURE, n, functions={"+": table})


def cyclic_group_is_simple(n: int) -> bool:
    # Z_n has a proper nontrivial subgroup for each proper divisor of n.
    if n < 2:
        raise InvalidParameter(f"cyclic_group_is_simple needs n >= 2, got {n}")
    return all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass(frozen=True)
class BipartiteResult:
    """Verdict of a bipartiteness test plus its witness.

    ``parts`` is a 2-coloring when the verdict is positive; ``odd_cycle`` is a
    shortest odd cycle (hence chord-free) when the graph is not 2-colorable.
    """

    verdict: bool
    parts: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    odd_cycle: tuple[int, ...] | None = None
    reason: str = field(default="", compare=False)

    def __bool__(self):
        return self.verdict


def _two_coloring(vertices: Sequence[int], adj: Mapping[int, Iterable[int]]) -> dict[int, int] | None:
    color: dict[int, int] = {}
    for s in vertices:
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def shortest_odd_cycle(
    vertices: Sequence[int], adj: Mapping[int, Iterable[int]]
) -> tuple[int, ...] | None:
    """A shortest odd cycle of an undirected loop-free graph, or None.

    A shortest odd cycle has no chord: a chord would split it into two
    shorter cycles, one of them odd.
    """
    best: tuple[int, ...] | None = None
    for s in vertices:
        dist = {s: 0}
        parent = {s: None}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
        for u in dist:
            for v in adj[u]:
                if v in dist and dist[u] == dist[v] and u < v:
                    length = 2 * dist[u] + 1
                    if best is not None and length >= len(best):
                        continue
                    left, right = [], []
                    x = u
                    while x is not None:
                        left.append(x)
                        x = parent[x]
                    x = v
                    while x is not None:
                        right.append(x)
                        x = parent[x]
                    # both paths end at s; drop the second copy
                    cycle = list(reversed(left)) + right[:-1]
                    if len(set(cycle)) == length:
                        best = tuple(cycle)
    return best


def is_bipartite(g: GraphView, mode: str = "standard") -> BipartiteResult:
    """Test 2-colorability of an undirected loop-free graph.

    ``mode="strict"`` additionally demands that both color classes be
    nonempty; the two modes differ only on edgeless graphs with one vertex.
    """
    if mode not in ("standard", "strict"):
        raise InvalidParameter(f"unknown bipartite mode {mode!r}")
    if not g.is_undirected():
        raise InvalidStructure("is_bipartite needs an undirected graph")
    if not g.is_loop_free():
        raise InvalidStructure("is_bipartite needs a loop-free graph")
    vertices = list(range(g.size))
    adj = {x: sorted(g.neighbors(x)) for x in vertices}
    coloring = _two_coloring(vertices, adj)
    if coloring is None:
        return BipartiteResult(False, odd_cycle=shortest_odd_cycle(vertices, adj), reason="odd cycle")
    parts = [[x for x in vertices if coloring[x] == c] for c in (0, 1)]
    if mode == "strict" and not parts[1]:
        # an isolated vertex may switch sides, so only a 1-vertex graph is stuck
        movable = [x for x in parts[0] if not adj[x]]
        if len(parts[0]) < 2 or not movable:
            return BipartiteResult(False, reason="no partition into two nonempty parts")
        parts[0].remove(movable[-1])
        parts[1].append(movable[-1])
    return BipartiteResult(True, parts=(tuple(parts[0]), tuple(parts[1])))
