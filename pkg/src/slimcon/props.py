"""Combinatorial properties of finite distributive lattices.

Everything here is phrased through the maximal join-irreducible elements of a
distributive lattice D and the graph E on them: two distinct maximal
join-irreducibles are adjacent when some join-irreducible lies below both.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any

from .errors import InvalidParameter, InvalidStructure, PreconditionError
from .order import (
    Lattice,
    distributivity_witness,
    is_distributive,
    join_irreducibles,
    semimodularity_witness,
    slim_witness,
)
from .structures import GraphView, _two_coloring, is_bipartite, shortest_odd_cycle

__all__ = [
    "PropertyReport",
    "MaxJirGraph",
    "max_jir_graph",
    "has_two_cover",
    "has_bmep",
    "bmep_readings",
    "v_sets",
    "w_sets",
    "is_vw_element",
    "is_cyclic",
    "is_multicyclic",
    "cyclic_elements",
    "multicyclic_elements",
    "dcep_witness",
    "has_dcep",
    "order_report",
    "element_report",
    "recheck_witness",
]

log = logging.getLogger(__name__)

_FALLBACK_CAP = 16


@dataclass
class PropertyReport:
    """Verdict of a property check with a machine-checkable witness."""

    property: str
    verdict: bool
    witness: Any = None
    notes: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict

    def to_json(self) -> dict:
        obj = {"property": self.property, "verdict": self.verdict, "witness": self.witness}
        if self.notes:
            obj["notes"] = self.notes
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "PropertyReport":
        return cls(obj["property"], bool(obj["verdict"]), obj.get("witness"), obj.get("notes", {}))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class MaxJirGraph:
    """The graph E on maxJ(D); vertices are lattice element ids."""

    def __init__(self, d: Lattice):
        self.lattice = d
        self.jir = tuple(d.join_irreducibles)
        self.jmask = sum(1 << j for j in self.jir)
        self.vertices = tuple(j for j in self.jir if not (d.up[j] & self.jmask & ~(1 << j)))
        self.vmask = sum(1 << v for v in self.vertices)
        self.adj: dict[int, int] = {}
        for a in self.vertices:
            self.adj[a] = sum(
                1 << b for b in self.vertices if b != a and d.down[a] & d.down[b] & self.jmask
            )

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.adj[a] >> b & 1)

    def below(self, x: int) -> int:
        """maxJ(D) & down(x) as a bitmask over lattice ids."""
        return self.vmask & self.lattice.down[x]

    def neighbours(self, a: int, within: int | None = None) -> list[int]:
        m = self.adj[a] if within is None else self.adj[a] & within
        return _bits(m)

    def edges(self, within: int | None = None) -> list[tuple[int, int]]:
        vs = self.vertices if within is None else _bits(within)
        return [(a, b) for a in vs for b in self.neighbours(a, within) if a < b]

    def restrict(self, x: int) -> GraphView:
        """Spanned subgraph on maxJ(D) & down(x), reindexed; ``origin`` maps back."""
        return self._view(self.below(x))

    def as_graph(self) -> GraphView:
        return self._view(self.vmask)

    def _view(self, within: int) -> GraphView:
        vs = _bits(within)
        pos = {v: i for i, v in enumerate(vs)}
        g = GraphView(max(len(vs), 1), [(pos[a], pos[b]) for a in vs for b in self.neighbours(a, within)])
        g.origin = tuple(vs)
        return g


def _require_distributive(d: Lattice):
    if not isinstance(d, Lattice):
        raise InvalidStructure("expected a Lattice")
    if not is_distributive(d):
        raise InvalidStructure("the lattice is not distributive")


def max_jir_graph(d: Lattice) -> MaxJirGraph:
    cached = d.__dict__.get("_maxjir_graph")
    if cached is None:
        _require_distributive(d)
        cached = MaxJirGraph(d)
        d._maxjir_graph = cached
    return cached


def _jposet(d: Lattice):
    cached = d.__dict__.get("_jposet")
    if cached is None:
        cached = join_irreducibles(d)
        d._jposet = cached
    return cached


def has_two_cover(d: Lattice) -> PropertyReport:
    """Every join-irreducible has at most two covers inside J(D)."""
    _require_distributive(d)
    jp = _jposet(d)
    for i in range(jp.n):
        ups = jp.upper_covers(i)
        if len(ups) > 2:
            return PropertyReport(
                "two-cover", False, {"element": jp.origin[i], "covers": [jp.origin[u] for u in ups]}
            )
    return PropertyReport("two-cover", True)


def _require_two_cover(d: Lattice):
    if not d.__dict__.get("_two_cover_ok"):
        if not has_two_cover(d):
            raise PreconditionError("the lattice does not satisfy the Two-cover Property")
        d._two_cover_ok = True


def _bipartite_report(name: str, vs: list[int], adj: dict[int, list[int]], mode: str) -> PropertyReport:
    coloring = _two_coloring(vs, adj)
    if coloring is None:
        cycle = shortest_odd_cycle(vs, adj)
        return PropertyReport(name, False, {"odd_cycle": list(cycle)})
    parts = [[v for v in vs if coloring[v] == c] for c in (0, 1)]
    if mode == "strict" and not parts[1]:
        movable = [v for v in parts[0] if not adj[v]]
        if len(parts[0]) < 2 or not movable:
            return PropertyReport(name, False, {"reason": "no partition into two nonempty parts"})
        parts[0].remove(movable[-1])
        parts[1].append(movable[-1])
    return PropertyReport(name, True, {"parts": parts})


def bmep_readings(d: Lattice) -> tuple[dict[int, list[int]], dict[int, list[int]]]:
    """Adjacency of maxJ(D) under the two readings.

    The first links maximal join-irreducibles with any common join-irreducible
    lower bound; the second only those sharing a lower cover inside J(D).
    """
    g = max_jir_graph(d)
    jp = _jposet(d)
    pos = {v: i for i, v in enumerate(jp.origin)}
    graph_adj = {a: g.neighbours(a) for a in g.vertices}
    cover_adj = {}
    for a in g.vertices:
        la = set(jp.lower_covers(pos[a]))
        cover_adj[a] = [b for b in g.vertices if b != a and la & set(jp.lower_covers(pos[b]))]
    return graph_adj, cover_adj


def has_bmep(d: Lattice, *, reading: str = "graph", mode: str = "standard") -> PropertyReport:
    """Bipartite Maximal Elements Property.

    ``reading="graph"`` tests the E graph; ``reading="cover"`` tests the graph
    of common lower covers in J(D).  ``mode`` is as for ``is_bipartite``.
    """
    if reading not in ("graph", "cover"):
        raise InvalidParameter(f"unknown BMEP reading {reading!r}")
    if mode not in ("standard", "strict"):
        raise InvalidParameter(f"unknown bipartite mode {mode!r}")
    graph_adj, cover_adj = bmep_readings(d)
    adj = graph_adj if reading == "graph" else cover_adj
    report = _bipartite_report("bmep", sorted(adj), adj, mode)
    report.notes = {"reading": reading, "mode": mode}
    return report


# -- V-sets, W-sets and VW-elements ------------------------------------------

def _check_element(d: Lattice, x: int):
    if not 0 <= x < d.n:
        raise InvalidParameter(f"element {x} is not in the lattice")


def v_sets(d: Lattice, x: int) -> list[tuple[int, int]]:
    """Adjacent pairs of maxJ(D) & down(x)."""
    _check_element(d, x)
    g = max_jir_graph(d)
    return g.edges(g.below(x))


def _paths4(g: MaxJirGraph, within: int) -> list[tuple[int, int, int, int]]:
    out = set()
    for a, b in g.edges(within):
        for p, q in ((a, b), (b, a)):
            # p - q is the middle edge; extend on both sides without chords
            for s in g.neighbours(p, within):
                if s == q or g.adjacent(s, q):
                    continue
                for t in g.neighbours(q, within):
                    if t in (p, s) or g.adjacent(t, p) or g.adjacent(t, s):
                        continue
                    path = (s, p, q, t)
                    out.add(min(path, path[::-1]))
    return sorted(out)


def w_sets(d: Lattice, x: int) -> list[tuple[int, int, int, int]]:
    """4-subsets of maxJ(D) & down(x) inducing a path, listed in path order."""
    _check_element(d, x)
    g = max_jir_graph(d)
    return _paths4(g, g.below(x))


def _vw_failure(g: MaxJirGraph, d: Lattice, x: int) -> dict | None:
    if x == d.bottom:
        return {"reason": "zero element"}
    h = g.below(x)
    if d.join_all(_bits(h)) != x:
        return {"reason": "not the join of its maximal join-irreducibles"}
    vcount = {a: 0 for a in _bits(h)}
    wcount = dict(vcount)
    for a, b in g.edges(h):
        vcount[a] += 1
        vcount[b] += 1
    for path in _paths4(g, h):
        for a in path:
            wcount[a] += 1
    for a in _bits(h):
        if wcount[a] == 1 or (wcount[a] == 0 and vcount[a] == 1):
            continue
        return {"reason": "bad maximal join-irreducible", "element": a, "v_sets": vcount[a], "w_sets": wcount[a]}
    return None


def is_vw_element(d: Lattice, x: int) -> PropertyReport:
    """x is nonzero, the join of H = maxJ(D) & down(x), and each member of H lies
    in exactly one W-set of x, or in no W-set and exactly one V-set."""
    _check_element(d, x)
    g = max_jir_graph(d)
    fail = _vw_failure(g, d, x)
    if fail is not None:
        return PropertyReport("vw", False, dict(fail, x=x))
    return PropertyReport("vw", True, {"x": x, "v_sets": [list(e) for e in v_sets(d, x)], "w_sets": [list(w) for w in w_sets(d, x)]})


# -- cyclic and multicyclic elements -----------------------------------------

def _degrees_two(g: MaxJirGraph, h: int) -> bool:
    return all(bin(g.adj[a] & h).count("1") == 2 for a in _bits(h))


def _connected(g: MaxJirGraph, h: int) -> bool:
    if not h:
        return False
    start = h & -h
    seen, frontier = start, start
    while frontier:
        nxt = 0
        for a in _bits(frontier):
            nxt |= g.adj[a] & h
        frontier = nxt & ~seen
        seen |= nxt
    return seen == h


def is_multicyclic(d: Lattice, x: int) -> bool:
    """H = maxJ(D) & down(x) is a disjoint union of spanned circles and x = join(H)."""
    _check_element(d, x)
    g = max_jir_graph(d)
    h = g.below(x)
    return bool(h) and _degrees_two(g, h) and d.join_all(_bits(h)) == x


def is_cyclic(d: Lattice, x: int) -> bool:
    """H = maxJ(D) & down(x) is one spanned circle (so |H| >= 3) and x = join(H)."""
    _require_two_cover(d)
    return is_multicyclic(d, x) and _connected(max_jir_graph(d), max_jir_graph(d).below(x))


def multicyclic_elements(d: Lattice) -> list[int]:
    return [x for x in range(d.n) if is_multicyclic(d, x)]


def cyclic_elements(d: Lattice) -> list[int]:
    """All cyclic elements; defined only under the Two-cover Property."""
    _require_two_cover(d)
    g = max_jir_graph(d)
    return [x for x in multicyclic_elements(d) if _connected(g, g.below(x))]


def _cycle_order(g: MaxJirGraph, h: int) -> list[int]:
    start = (h & -h).bit_length() - 1
    order = [start]
    prev, cur = None, start
    while True:
        nbrs = g.neighbours(cur, h)
        nxt = min(v for v in nbrs if v != prev) if prev is None else next(v for v in nbrs if v != prev)
        if nxt == start:
            return order
        order.append(nxt)
        prev, cur = cur, nxt


def _alternating_partition(cycle: list[int]) -> tuple[list[int], list[int]] | None:
    m = len(cycle)
    if m % 2:
        return None
    if m % 4 == 0:
        u = [a for i, a in enumerate(cycle) if i % 4 in (0, 1)]
    else:
        u = [a for i, a in enumerate(cycle) if i < 4 or i % 4 in (2, 3)]
    v = [a for a in cycle if a not in u]
    return u, v


def _try_split(d: Lattice, g: MaxJirGraph, x: int, u: list[int], v: list[int]) -> tuple[int, int] | None:
    if not u or not v:
        return None
    y, z = d.join_all(u), d.join_all(v)
    if d.join(y, z) != x or g.below(y) & g.below(z):
        return None
    if _vw_failure(g, d, y) is None and _vw_failure(g, d, z) is None:
        return y, z
    return None


def dcep_witness(d: Lattice, x: int) -> dict | None:
    """VW-elements y, z with y v z = x and no common maximal join-irreducible below.

    Tries the alternating partition of the circle first, then every split of
    H = maxJ(D) & down(x) into two parts (|H| <= 16).  Returns a dict with
    ``y``, ``z``, ``u``, ``v`` and ``route``, or None.
    """
    _require_two_cover(d)
    if not is_cyclic(d, x):
        raise PreconditionError(f"element {x} is not cyclic")
    g = max_jir_graph(d)
    h = g.below(x)
    cycle = _cycle_order(g, h)
    part = _alternating_partition(cycle)
    if part is not None:
        found = _try_split(d, g, x, *part)
        if found is not None:
            return {"x": x, "y": found[0], "z": found[1], "u": part[0], "v": part[1], "route": "alternating"}
    if len(cycle) > _FALLBACK_CAP:
        raise PreconditionError(f"exhaustive split search is capped at {_FALLBACK_CAP} elements")
    first, rest = cycle[0], cycle[1:]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            u = [first, *extra]
            v = [a for a in rest if a not in extra]
            found = _try_split(d, g, x, u, v)
            if found is not None:
                if part is not None:
                    log.warning("alternating partition failed for cyclic element %d; exhaustive split used", x)
                return {"x": x, "y": found[0], "z": found[1], "u": u, "v": v, "route": "exhaustive"}
    return None


def has_dcep(d: Lattice) -> PropertyReport:
    """Decomposable Cyclic Elements Property, with one decomposition per cyclic element."""
    _require_distributive(d)
    _require_two_cover(d)
    found = []
    for x in cyclic_elements(d):
        w = dcep_witness(d, x)
        if w is None:
            return PropertyReport("dcep", False, {"cyclic": x})
        found.append(w)
    routes = sorted({w["route"] for w in found})
    return PropertyReport("dcep", True, {"decompositions": found}, {"routes": routes} if routes else {})


def order_report(l: Lattice, prop: str) -> PropertyReport:
    """Report for ``distributive``, ``semimodular`` or ``slim``; negative witnesses are triples."""
    if not isinstance(l, Lattice):
        raise InvalidStructure("expected a Lattice")
    finder = {"distributive": distributivity_witness, "semimodular": semimodularity_witness, "slim": slim_witness}.get(prop)
    if finder is None:
        raise InvalidParameter(f"unknown order property {prop!r}")
    w = finder(l)
    return PropertyReport(prop, w is None, None if w is None else {"elements": list(w)})


def element_report(d: Lattice, prop: str, x: int | None = None) -> PropertyReport:
    """``cyclic``, ``multicyclic`` or ``vw`` at ``x``; without ``x``, whether any such element exists."""
    check = {"cyclic": is_cyclic, "multicyclic": is_multicyclic}.get(prop)
    if prop == "vw":
        if x is None:
            raise InvalidParameter("the vw check needs an element")
        return is_vw_element(d, x)
    if check is None:
        raise InvalidParameter(f"unknown element property {prop!r}")
    if x is not None:
        return PropertyReport(prop, check(d, x), {"x": x})
    found = cyclic_elements(d) if prop == "cyclic" else multicyclic_elements(d)
    return PropertyReport(prop, bool(found), {"x": found[0]} if found else {"elements": []})


# -- witness rechecking -------------------------------------------------------

def _recheck_bipartite(vs: list[int], adj: dict[int, list[int]], report: PropertyReport) -> bool:
    w = report.witness or {}
    if report.verdict:
        parts = w.get("parts")
        if not parts or sorted(parts[0] + parts[1]) != sorted(vs):
            return False
        side = {a: 0 for a in parts[0]} | {a: 1 for a in parts[1]}
        return all(side[a] != side[b] for a in vs for b in adj[a])
    cycle = w.get("odd_cycle")
    if cycle is None:
        return False
    m = len(cycle)
    if m % 2 == 0 or len(set(cycle)) != m or any(a not in adj for a in cycle):
        return False
    return all(cycle[(i + 1) % m] in adj[cycle[i]] for i in range(m))


def _recheck_order(l: Lattice, prop: str, w: list[int]) -> bool:
    if any(not 0 <= a < l.n for a in w):
        return False
    J, M = l.join, l.meet
    if prop == "distributive":
        x, y, z = w
        return J(J(M(x, y), M(y, z)), M(z, x)) != M(M(J(x, y), J(y, z)), J(z, x))
    if prop == "semimodular":
        x, y, z = w
        a, b = J(x, z), J(y, z)
        return l.is_cover(x, y) and a != b and not l.is_cover(a, b)
    jir = set(l.join_irreducibles)
    return (
        len(set(w)) == 3
        and set(w) <= jir
        and all(not l.leq(a, b) for a in w for b in w if a != b)
    )


def recheck_witness(d, report: PropertyReport) -> bool:
    """Independently confirm the witness carried by ``report`` against ``d``."""
    prop, w = report.property, report.witness
    if prop == "bipartite":
        if not isinstance(d, GraphView):
            raise InvalidStructure("bipartite witnesses refer to graphs")
        vs = list(range(d.size))
        adj = {a: sorted(d.neighbors(a)) for a in vs}
        if not report.verdict and w and w.get("reason"):
            return not is_bipartite(d, mode="strict")
        return _recheck_bipartite(vs, adj, report)
    if prop == "two-cover":
        if report.verdict:
            return bool(has_two_cover(d))
        jp = _jposet(d)
        pos = {v: i for i, v in enumerate(jp.origin)}
        e, covers = w["element"], w["covers"]
        return (
            e in pos
            and len(set(covers)) == len(covers) >= 3
            and all(c in pos and jp.is_cover(pos[e], pos[c]) for c in covers)
        )
    if prop == "bmep":
        reading = report.notes.get("reading", "graph")
        adj = bmep_readings(d)[0 if reading == "graph" else 1]
        if not report.verdict and w and w.get("reason"):
            return not has_bmep(d, reading=reading, mode="strict")
        return _recheck_bipartite(sorted(adj), adj, report)
    if prop in ("cyclic", "multicyclic"):
        check = is_cyclic if prop == "cyclic" else is_multicyclic
        if "x" not in w:
            found = cyclic_elements(d) if prop == "cyclic" else multicyclic_elements(d)
            return not report.verdict and not found
        return check(d, w["x"]) == report.verdict
    if prop in ("distributive", "semimodular", "slim"):
        if report.verdict:
            return bool(order_report(d, prop))
        return _recheck_order(d, prop, w["elements"])
    if prop == "vw":
        return bool(is_vw_element(d, w["x"])) == report.verdict
    if prop == "dcep":
        g = max_jir_graph(d)
        if not report.verdict:
            x = w["cyclic"]
            return is_cyclic(d, x) and dcep_witness(d, x) is None
        decs = w["decompositions"]
        if sorted(dec["x"] for dec in decs) != cyclic_elements(d):
            return False
        for dec in decs:
            x, y, z = dec["x"], dec["y"], dec["z"]
            if d.join(y, z) != x or g.below(y) & g.below(z):
                return False
            if _vw_failure(g, d, y) is not None or _vw_failure(g, d, z) is not None:
                return False
        return True
    raise InvalidParameter(f"no witness checker for property {prop!r}")
