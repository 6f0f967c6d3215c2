"""Feynman graphs of massless phi^3 in six dimensions.

A graph has internal vertices of two kinds: ordinary 3-valent vertices and
2-valent insertion vertices ``s0``/``s1`` left behind when a self-energy
subgraph is contracted (``s0`` the constant structure, ``s1`` the p^2
structure).  External legs are counted per vertex.  Every graph carries an
external-structure marker: ``s0`` or ``s1`` for two-point graphs, ``s0``
otherwise.

Subgraphs are sets of internal-edge indices.  A subgraph is admissible when
each of its connected components is 1PI and superficially divergent, i.e.
has two or three external half-edges.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .algebra import UNIT, HopfInstance, Monomial, Tensor
from .trees import LEAF, RootedTree, B_plus

VERTEX = "v3"
INSERTION_TYPES = ("s0", "s1")
VALENCE = {"v3": 3, "s0": 2, "s1": 2}

FILE_TYPES = {
    "internal-3valent": "v3",
    "insertion-s0": "s0",
    "insertion-s1": "s1",
}
FILE_TYPES_INV = {v: k for k, v in FILE_TYPES.items()}

MAX_PERMUTATIONS = 200_000


class GraphError(ValueError):
    """Malformed graph data."""


class AdmissibilityError(ValueError):
    """A subgraph fails the admissibility predicate."""


class DomainError(ValueError):
    """Operation requires a 1PI graph."""


class UnsupportedGraph(ValueError):
    """The graph lies outside what the toy machinery covers."""


@dataclass(frozen=True)
class FeynGraph:
    """A canonically labelled graph; build with :meth:`build`."""

    types: tuple[str, ...]
    legs: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    marker: str

    @classmethod
    def build(cls, types: Iterable[str], legs: Iterable[int], edges: Iterable[tuple[int, int]],
              marker: str | None = None) -> FeynGraph:
        types = tuple(types)
        legs = tuple(legs)
        edges = tuple(tuple(sorted(e)) for e in edges)
        _validate(types, legs, edges)
        n_ext = sum(legs)
        if marker is None:
            marker = "s1" if n_ext == 2 else "s0"
        if marker not in INSERTION_TYPES or (marker == "s1" and n_ext != 2):
            raise GraphError(f"marker {marker!r} not allowed for a {n_ext}-point graph")
        types, legs, edges = _canonical(types, legs, tuple(sorted(edges)))
        return cls(types, legs, edges, marker)

    def with_marker(self, marker: str) -> FeynGraph:
        return FeynGraph.build(self.types, self.legs, self.edges, marker)

    # gradings --------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.types)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_external(self) -> int:
        return sum(self.legs)

    @property
    def loops(self) -> int:
        return self.n_edges - self.n_vertices + 1

    @property
    def sort_key(self):
        return (self.loops, self.n_external, self.n_vertices, self.types, self.legs, self.edges, self.marker)

    def __lt__(self, other: FeynGraph) -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return graph_name(self)


def _validate(types, legs, edges) -> None:
    n = len(types)
    if len(legs) != n:
        raise GraphError("legs and vertex lists differ in length")
    deg = [0] * n
    for a, b in edges:
        if not (0 <= a < n and 0 <= b < n):
            raise GraphError(f"edge {(a, b)} references a missing vertex")
        if a == b:
            raise GraphError("self-loops (tadpoles) are not supported")
        deg[a] += 1
        deg[b] += 1
    for v, t in enumerate(types):
        if t not in VALENCE:
            raise GraphError(f"unknown vertex type {t!r}")
        if deg[v] + legs[v] != VALENCE[t]:
            raise GraphError(f"vertex {v} of type {t} has incidence {deg[v] + legs[v]}")


@lru_cache(maxsize=None)
def _canonical(types, legs, edges):
    """Relabel vertices to the lexicographically least encoding.

    Colour refinement narrows the search; the remaining ties are broken by
    trying every permutation inside each colour class.
    """
    n = len(types)
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    colour = [(types[v], legs[v], len(adj[v])) for v in range(n)]
    for _ in range(n):
        new = [(colour[v], tuple(sorted(colour[u] for u in adj[v]))) for v in range(n)]
        ranks = {c: i for i, c in enumerate(sorted(set(new)))}
        new = [ranks[c] for c in new]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    classes: dict = defaultdict(list)
    for v in range(n):
        classes[colour[v]].append(v)
    order = sorted(classes)
    count = math.prod(math.factorial(len(classes[c])) for c in order)
    if count > MAX_PERMUTATIONS:
        raise UnsupportedGraph(f"canonical labelling would try {count} permutations")
    best = None
    for perms in itertools.product(*(itertools.permutations(classes[c]) for c in order)):
        old_order = [v for p in perms for v in p]
        new_id = {v: i for i, v in enumerate(old_order)}
        enc = tuple(sorted(tuple(sorted((new_id[a], new_id[b]))) for a, b in edges))
        if best is None or enc < best[0]:
            best = (enc, old_order)
    enc, old_order = best
    return (tuple(types[v] for v in old_order), tuple(legs[v] for v in old_order), enc)


# -- catalog and file format ---------------------------------------------------

def from_json(data: Mapping) -> FeynGraph:
    """Read the documented JSON graph object."""
    try:
        verts = data["vertices"]
        ids = [v["id"] for v in verts]
        index = {vid: i for i, vid in enumerate(ids)}
        raw_types = [v["type"] for v in verts]
        stubs = {index[v["id"]] for v in verts if v["type"] == "external-stub"}
        legs = [0] * len(ids)
        for leg in data.get("externalLegs", []):
            legs[index[leg[0]]] += 1
        edges = []
        for a, b in data["internalEdges"]:
            ia, ib = index[a], index[b]
            # an edge to a stub vertex is an external leg of the other end
            if ia in stubs and ib in stubs:
                raise GraphError("edge between two external stubs")
            if ia in stubs:
                legs[ib] += 1
            elif ib in stubs:
                legs[ia] += 1
            else:
                edges.append((ia, ib))
    except (KeyError, TypeError, IndexError) as exc:
        raise GraphError(f"malformed graph JSON: {exc!r}") from None
    keep = [i for i in range(len(ids)) if i not in stubs]
    renum = {old: new for new, old in enumerate(keep)}
    types = []
    for i in keep:
        t = raw_types[i]
        if t not in FILE_TYPES:
            raise GraphError(f"unknown vertex type {t!r}")
        types.append(FILE_TYPES[t])
    marker = data.get("extStructure")
    return FeynGraph.build(types, [legs[i] for i in keep],
                           [(renum[a], renum[b]) for a, b in edges], marker)


def to_json(g: FeynGraph, name: str | None = None) -> dict:
    out = {} if name is None else {"name": name}
    out["vertices"] = [{"id": i, "type": FILE_TYPES_INV[t]} for i, t in enumerate(g.types)]
    out["internalEdges"] = [list(e) for e in g.edges]
    legs = []
    for v, k in enumerate(g.legs):
        legs.extend([v] * k)
    out["externalLegs"] = [[v, k] for k, v in enumerate(legs)]
    out["extStructure"] = g.marker
    return out


@lru_cache(maxsize=None)
def _load_catalog(path: str | None) -> dict[str, FeynGraph]:
    out = {}
    if path is None:
        files = [f for f in resources.files("renormhopf").joinpath("catalog").iterdir()
                 if f.name.endswith(".json")]
    else:
        files = sorted(Path(path).glob("*.json"))
    for f in sorted(files, key=lambda f: f.name):
        data = json.loads(f.read_text())
        out[data.get("name", f.name[:-5])] = from_json(data)
    return out


def catalog(path: str | None = None) -> dict[str, FeynGraph]:
    """Named graphs shipped with the package, or loaded from ``path``."""
    return dict(_load_catalog(path))


def get(name: str, path: str | None = None) -> FeynGraph:
    """Catalog graph by name; a ``_s0``/``_s1`` suffix selects the other marker."""
    cat = _load_catalog(path)
    base, _, marker = name.rpartition("_")
    if name not in cat and base in cat and marker in INSERTION_TYPES:
        try:
            return cat[base].with_marker(marker)
        except GraphError:
            pass
    if name not in cat:
        raise KeyError(f"unknown graph {name!r}; catalog has {sorted(cat)}")
    return cat[name]


def graph_name(g: FeynGraph) -> str:
    """Catalog name (with a marker suffix when it differs) or a structural encoding."""
    for name, h in _load_catalog(None).items():
        if (h.types, h.legs, h.edges) == (g.types, g.legs, g.edges):
            return name if h.marker == g.marker else f"{name}_{g.marker}"
    verts = ",".join(t + ("'" * k) for t, k in zip(g.types, g.legs))
    edges = " ".join(f"{a}-{b}" for a, b in g.edges)
    return f"G<{verts}|{edges}>_{g.marker}"


# -- structure ---------------------------------------------------------------

def _connected(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> bool:
    vertices = list(vertices)
    if not vertices:
        return True
    adj = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {vertices[0]}
    stack = [vertices[0]]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen >= set(vertices)


def _one_pi(vertices, edges) -> bool:
    edges = list(edges)
    if not _connected(vertices, edges):
        return False
    return all(_connected(vertices, edges[:i] + edges[i + 1:]) for i in range(len(edges)))


def is_one_pi(g: FeynGraph) -> bool:
    """Connected, and still connected after deleting any one internal edge."""
    return _one_pi(range(g.n_vertices), g.edges)


def gradings(g: FeynGraph) -> dict[str, int]:
    """Internal edges I, vertices V, v = V - 1 and loops L = I - V + 1."""
    return {"I": g.n_edges, "V": g.n_vertices, "v": g.n_vertices - 1, "L": g.loops}


def superficial_degree(g: FeynGraph) -> int:
    """6L - 2I, plus 2 for every insertion vertex (which splits a propagator).

    Equals 6 - 2N for N external legs.
    """
    n_ins = sum(1 for t in g.types if t != VERTEX)
    return 6 * g.loops - 2 * g.n_edges + 2 * n_ins


@dataclass(frozen=True)
class Component:
    vertices: frozenset[int]
    edges: frozenset[int]
    n_external: int


@dataclass(frozen=True)
class Subgraph:
    """An edge subset of a graph with its connected components."""

    edges: frozenset[int]
    components: tuple[Component, ...]


def _components(g: FeynGraph, subset: frozenset[int]) -> list[Component]:
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in subset:
        a, b = g.edges[i]
        parent.setdefault(a, a)
        parent.setdefault(b, b)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict = defaultdict(lambda: (set(), set()))
    for i in subset:
        r = find(g.edges[i][0])
        groups[r][0].update(g.edges[i])
        groups[r][1].add(i)
    out = []
    for vs, es in groups.values():
        half = sum(VALENCE[g.types[v]] for v in vs) - 2 * len(es)
        out.append(Component(frozenset(vs), frozenset(es), half))
    return sorted(out, key=lambda c: sorted(c.edges))


def _admissible_component(g: FeynGraph, c: Component) -> bool:
    if c.n_external not in (2, 3):
        return False
    edges = [g.edges[i] for i in sorted(c.edges)]
    if not _one_pi(c.vertices, edges):
        return False
    # contraction must not leave a self-loop
    return not any(i not in c.edges and a in c.vertices and b in c.vertices
                   for i, (a, b) in enumerate(g.edges))


def check_admissible(g: FeynGraph, edges: Iterable[int]) -> Subgraph:
    subset = frozenset(edges)
    if not subset:
        raise AdmissibilityError("subgraph is empty")
    if subset == frozenset(range(g.n_edges)):
        raise AdmissibilityError("subgraph has an empty complement")
    if not subset <= frozenset(range(g.n_edges)):
        raise AdmissibilityError("edge index out of range")
    comps = _components(g, subset)
    for c in comps:
        if not _admissible_component(g, c):
            raise AdmissibilityError(f"component on edges {sorted(c.edges)} is not 1PI and divergent")
    return Subgraph(subset, tuple(comps))


@lru_cache(maxsize=None)
def divergent_subgraphs(g: FeynGraph) -> tuple[Subgraph, ...]:
    """All proper nonempty admissible edge subsets, by brute force over 2^I subsets."""
    if not is_one_pi(g):
        raise DomainError("divergent subgraphs are only defined for 1PI graphs")
    out = []
    full = g.n_edges
    for r in range(1, full):
        for combo in itertools.combinations(range(full), r):
            subset = frozenset(combo)
            comps = _components(g, subset)
            if all(_admissible_component(g, c) for c in comps):
                out.append(Subgraph(subset, tuple(comps)))
    return tuple(out)


def component_graph(g: FeynGraph, c: Component, marker: str) -> FeynGraph:
    verts = sorted(c.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    types = [g.types[v] for v in verts]
    inner_deg = defaultdict(int)
    edges = []
    for i in sorted(c.edges):
        a, b = g.edges[i]
        inner_deg[a] += 1
        inner_deg[b] += 1
        edges.append((idx[a], idx[b]))
    legs = [VALENCE[g.types[v]] - inner_deg[v] for v in verts]
    return FeynGraph.build(types, legs, edges, marker)


def quotient(g: FeynGraph, gamma: Subgraph | Iterable[int], markers: Iterable[str] | None = None) -> FeynGraph:
    """Contract each component of ``gamma`` to one vertex.

    Three-point components become ordinary vertices; two-point components
    become insertion vertices whose type is taken from ``markers`` (one per
    two-point component, default ``s1``).
    """
    if not isinstance(gamma, Subgraph):
        gamma = check_admissible(g, gamma)
    else:
        check_admissible(g, gamma.edges)
    two_point = [c for c in gamma.components if c.n_external == 2]
    markers = list(markers) if markers is not None else ["s1"] * len(two_point)
    if len(markers) != len(two_point):
        raise ValueError("need one marker per two-point component")
    mark_of = dict(zip((id(c) for c in two_point), markers))
    new_of: dict[int, int] = {}
    types: list[str] = []
    legs: list[int] = []
    for v in range(g.n_vertices):
        if not any(v in c.vertices for c in gamma.components):
            new_of[v] = len(types)
            types.append(g.types[v])
            legs.append(g.legs[v])
    for c in gamma.components:
        k = len(types)
        types.append(VERTEX if c.n_external == 3 else mark_of[id(c)])
        legs.append(sum(g.legs[v] for v in c.vertices))
        for v in c.vertices:
            new_of[v] = k
    edges = [(new_of[a], new_of[b]) for i, (a, b) in enumerate(g.edges) if i not in gamma.edges]
    q = FeynGraph.build(types, legs, edges, g.marker)
    if not is_one_pi(q):
        raise AdmissibilityError("quotient is not 1PI")
    return q


def marker_choices(c: Component) -> tuple[str, ...]:
    return INSERTION_TYPES if c.n_external == 2 else ("s0",)


@lru_cache(maxsize=None)
def coproduct_graph(g: FeynGraph) -> Tensor:
    """``g(x)1 + 1(x)g + sum gamma_(i) (x) g/gamma_(i)`` over admissible gamma and markers i."""
    if not is_one_pi(g):
        raise DomainError(f"{graph_name(g)} is not 1PI")
    out: dict = defaultdict(Fraction)
    out[((g,), UNIT)] += 1
    out[(UNIT, (g,))] += 1
    for sub in divergent_subgraphs(g):
        two_point = [c for c in sub.components if c.n_external == 2]
        for marks in itertools.product(INSERTION_TYPES, repeat=len(two_point)):
            mark_of = dict(zip((id(c) for c in two_point), marks))
            left = tuple(sorted(component_graph(g, c, mark_of.get(id(c), "s0")) for c in sub.components))
            right = quotient(g, sub, marks)
            out[(left, (right,))] += 1
    return {k: v for k, v in out.items() if v}


class GraphInstance(HopfInstance):
    """Hopf algebra generated by the closure of a set of seed graphs under the coproduct."""

    name = "graphs"

    def __init__(self, seeds: Iterable[FeynGraph] | None = None):
        seeds = list(catalog().values()) if seeds is None else list(seeds)
        gens: set[FeynGraph] = set()
        todo = []
        for s in seeds:
            todo.append(s)
            if s.n_external == 2:
                todo.append(s.with_marker("s0" if s.marker == "s1" else "s1"))
        while todo:
            g = todo.pop()
            if g in gens:
                continue
            gens.add(g)
            for (a, b) in coproduct_graph(g):
                todo.extend(x for x in a + b if x not in gens)
        self._by_degree: dict[int, list[FeynGraph]] = defaultdict(list)
        for g in gens:
            self._by_degree[g.loops].append(g)
        for v in self._by_degree.values():
            v.sort()

    def degree(self, g: FeynGraph) -> int:
        return g.loops

    def sort_key(self, g: FeynGraph):
        return g.sort_key

    def generators(self, degree: int) -> list[FeynGraph]:
        return list(self._by_degree.get(degree, []))

    def generator_coproduct(self, g: FeynGraph) -> Tensor:
        return coproduct_graph(g)

    def render(self, g: FeynGraph) -> str:
        return graph_name(g)


# -- Lie structure -----------------------------------------------------------

def insertion_count(g1: FeynGraph, g2: FeynGraph, g: FeynGraph) -> int:
    """Connected subgraphs of ``g`` isomorphic to ``g1`` with quotient ``g2``.

    The marker of ``g1`` fixes the type of the contracted vertex.
    """
    count = 0
    for sub in divergent_subgraphs(g):
        if len(sub.components) != 1:
            continue
        c = sub.components[0]
        if g1.marker not in marker_choices(c) or component_graph(g, c, g1.marker) != g1:
            continue
        if quotient(g, sub, [g1.marker] if c.n_external == 2 else []) == g2:
            count += 1
    return count


def insertions(host: FeynGraph, piece: FeynGraph) -> set[FeynGraph]:
    """Every graph obtained by inserting ``piece`` into ``host``.

    A three-point piece replaces an ordinary vertex; a two-point piece with
    marker ``m`` replaces an insertion vertex of type ``m``; convergent
    pieces have no insertion places.  All ways of
    attaching the piece's external legs are tried.  Results keep the host's
    marker.
    """
    if piece.n_external not in (2, 3):
        return set()  # convergent pieces are never contracted
    target = VERTEX if piece.n_external == 3 else piece.marker
    piece_ports = [v for v in range(piece.n_vertices) for _ in range(piece.legs[v])]
    out: set[FeynGraph] = set()
    for v in range(host.n_vertices):
        if host.types[v] != target:
            continue
        keep = [u for u in range(host.n_vertices) if u != v]
        new_of = {u: i for i, u in enumerate(keep)}
        off = len(keep)
        types = [host.types[u] for u in keep] + list(piece.types)
        base_legs = [host.legs[u] for u in keep] + [0] * piece.n_vertices
        base_edges = [(new_of[a], new_of[b]) for a, b in host.edges if v not in (a, b)]
        base_edges += [(a + off, b + off) for a, b in piece.edges]
        # half-edges at v: other endpoints of edges, or None for an external leg
        ends = [b if a == v else a for a, b in host.edges if v in (a, b)]
        ends = [new_of[u] for u in ends] + [None] * host.legs[v]
        for perm in itertools.permutations(piece_ports):
            legs = list(base_legs)
            edges = list(base_edges)
            for end, port in zip(ends, perm):
                if end is None:
                    legs[port + off] += 1
                else:
                    edges.append((end, port + off))
            out.add(FeynGraph.build(types, legs, edges, host.marker))
    return out


# -- toy map to rooted trees ----------------------------------------------------

def _killed(g: FeynGraph) -> bool:
    return (g.n_external == 2 and g.marker == "s0") or "s0" in g.types or g.n_external > 3


@lru_cache(maxsize=None)
def tree_image(g: FeynGraph) -> dict[tuple[RootedTree, ...], Fraction]:
    """Image of a generator under the map to rooted forests used by the toy character.

    Sends a primitive divergent graph to the single vertex and a graph with
    subdivergences to the sum, over its maximal admissible subgraphs M,
    of B+ applied to the image of M.  Graphs carrying a constant-structure
    insertion, two-point graphs with the constant marker, and convergent
    graphs go to zero.
    """
    if _killed(g):
        return {}
    maximal = []
    for sub in divergent_subgraphs(g):
        two_point = [c for c in sub.components if c.n_external == 2]
        q = quotient(g, sub, ["s1"] * len(two_point))
        if not divergent_subgraphs(q):
            maximal.append((sub, q))
    if not maximal:
        if g.loops != 1:
            raise UnsupportedGraph(f"{graph_name(g)} is a multi-loop primitive")
        return {(LEAF,): Fraction(1)}
    out: dict = defaultdict(Fraction)
    for sub, q in maximal:
        if q.loops != 1:
            raise UnsupportedGraph(f"skeleton {graph_name(q)} has {q.loops} loops")
        parts = [component_graph(g, c, "s1" if c.n_external == 2 else "s0") for c in sub.components]
        images = {(): Fraction(1)}
        for p in parts:
            img = tree_image(p)
            nxt: dict = defaultdict(Fraction)
            for f1, c1 in images.items():
                for f2, c2 in img.items():
                    nxt[tuple(sorted(f1 + f2))] += c1 * c2
            images = nxt
        for f, c in images.items():
            if c:
                out[(B_plus(f),)] += c
    return {k: v for k, v in out.items() if v}
