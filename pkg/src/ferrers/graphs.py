"""Edge ideals of graphs (loops allowed) obtained by specializing Ferrers ideals."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Callable, Iterator, Sequence

from .complex import build_shape_complex, specialize_labels
from .core import Monomial, MonomialIdeal, Shape, VariableContext, validate_shape
from .errors import (
    ConditionFailed,
    IsolatedVertex,
    MalformedInput,
    NotDegreeTwo,
    NotShapeRepresentable,
    NotThreshold,
)
from .oracle import InvariantReport
from .resolution import BettiTable, betti_closed_form_totals, betti_from_faces


@dataclass(frozen=True)
class Graph:
    """Simple graph on [m]; ``edges`` holds pairs (i, j) with i < j, ``loops`` single vertices."""

    m: int
    edges: frozenset
    loops: frozenset = frozenset()

    def __post_init__(self):
        edges = set()
        for e in self.edges:
            i, j = sorted(int(v) for v in e)
            if i == j:
                raise MalformedInput("use 'loops' for loops")
            edges.add((i, j))
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "loops", frozenset(int(v) for v in self.loops))
        used = [v for e in edges for v in e] + list(self.loops)
        if any(v < 1 or v > self.m for v in used):
            raise MalformedInput(f"vertex out of range 1..{self.m}")

    @classmethod
    def complete(cls, m: int, loops: bool = False) -> "Graph":
        return cls(m, frozenset((i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)),
                   frozenset(range(1, m + 1)) if loops else frozenset())

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return i in self.loops
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        out = {j for e in self.edges if v in e for j in e if j != v}
        if v in self.loops:
            out.add(v)
        return out

    def degree(self, v: int, within: set[int] | None = None) -> int:
        """Number of neighbours (a loop counts once), optionally inside ``within``."""
        nb = self.neighbors(v)
        return len(nb if within is None else nb & within)

    def degree_sequence(self) -> list[int]:
        return sorted((self.degree(v) for v in range(1, self.m + 1)), reverse=True)

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(1, self.m + 1) if not self.neighbors(v)]

    def relabel(self, ordering: Sequence[int]) -> "Graph":
        """Vertex ``ordering[k]`` becomes vertex k+1."""
        new = {old: k + 1 for k, old in enumerate(ordering)}
        return Graph(self.m, frozenset((new[i], new[j]) for i, j in self.edges), frozenset(new[v] for v in self.loops))

    def to_json(self) -> dict:
        return {"m": self.m, "edges": [list(e) for e in sorted(self.edges)], "loops": sorted(self.loops)}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        try:
            return cls(int(data["m"]), frozenset(tuple(e) for e in data.get("edges", [])),
                       frozenset(data.get("loops", [])))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad graph file: {exc}") from None

    def to_dot(self) -> str:
        lines = ["graph G {"]
        lines += [f"  {v};" for v in range(1, self.m + 1)]
        lines += [f"  {i} -- {j};" for i, j in sorted(self.edges)]
        lines += [f"  {v} -- {v};" for v in sorted(self.loops)]
        return "\n".join(lines + ["}"]) + "\n"


def edge_ideal(G: Graph) -> MonomialIdeal:
    gens = []
    for i, j in sorted(G.edges):
        e = [0] * G.m
        e[i - 1] = e[j - 1] = 1
        gens.append(Monomial(tuple(e)))
    for v in sorted(G.loops):
        e = [0] * G.m
        e[v - 1] = 2
        gens.append(Monomial(tuple(e)))
    return MonomialIdeal(VariableContext.x(G.m), tuple(gens))


def graph_of_ideal(ideal: MonomialIdeal) -> Graph:
    """Inverse of :func:`edge_ideal` for ideals generated in degree two."""
    edges, loops = set(), set()
    for g in ideal.minimize().generators:
        if g.degree != 2:
            raise NotDegreeTwo(f"generator {ideal.context.format(g.exps)} does not have degree two")
        sup = g.support()
        if len(sup) == 1:
            loops.add(sup[0] + 1)
        else:
            edges.add((sup[0] + 1, sup[1] + 1))
    return Graph(ideal.nvars, frozenset(edges), frozenset(loops))


def order_vertices(G: Graph, choose: Callable[[list[int]], int] = min) -> list[int]:
    """Repeatedly take a vertex of highest degree among those not yet chosen.

    ``choose`` breaks ties (default: smallest label). Returns the vertices in
    their new order.
    """
    if G.isolated_vertices():
        raise IsolatedVertex(f"isolated vertices {G.isolated_vertices()}")
    remaining = set(range(1, G.m + 1))
    order = []
    while remaining:
        degs = {v: G.degree(v, remaining) for v in remaining}
        top = max(degs.values())
        v = choose(sorted(u for u, d in degs.items() if d == top))
        order.append(v)
        remaining.discard(v)
    return order


def all_vertex_orderings(G: Graph) -> Iterator[list[int]]:
    """Every ordering the procedure can produce under some tie-breaking."""
    if G.isolated_vertices():
        raise IsolatedVertex(f"isolated vertices {G.isolated_vertices()}")

    def rec(prefix, remaining):
        if not remaining:
            yield list(prefix)
            return
        degs = {v: G.degree(v, remaining) for v in remaining}
        top = max(degs.values())
        for v in sorted(u for u, d in degs.items() if d == top):
            yield from rec(prefix + [v], remaining - {v})

    yield from rec([], set(range(1, G.m + 1)))


@dataclass(frozen=True)
class ShapeDerivation:
    ordering: tuple[int, ...]
    n: int
    lam: tuple[int, ...]
    mu: tuple[int, ...]
    graph: Graph  # relabeled along ``ordering``

    def shape(self) -> Shape:
        return validate_shape(self.lam, self.mu)

    def to_json(self) -> dict:
        return {"ordering": list(self.ordering), "n": self.n, "lambda": list(self.lam), "mu": list(self.mu)}


def derive_shape(G: Graph, ordering: Sequence[int] | None = None) -> ShapeDerivation:
    """Read off n, lambda and mu from the ordered graph."""
    if ordering is None:
        ordering = order_vertices(G)
    H = G.relabel(ordering)
    m = G.m
    upper = [i for i in range(1, m + 1) if any(H.has_edge(i, j) for j in range(i, m + 1))]
    if not upper:
        raise NotShapeRepresentable("graph has no edges")
    n = max(upper)
    lam, mu = [], []
    for i in range(1, n + 1):
        nb = H.neighbors(i)
        later = [j for j in nb if j >= i]
        if not later:
            raise NotShapeRepresentable(f"vertex {i} has no neighbour j >= {i}")
        lam.append(max(nb))
        mu.append(min(later) - 1)
    if lam[0] != m or any(a < b for a, b in zip(lam, lam[1:])):
        raise NotShapeRepresentable(f"lambda={tuple(lam)} is not a partition with lambda_1 = {m}")
    return ShapeDerivation(tuple(ordering), n, tuple(lam), tuple(mu), H)


def check_condition(G: Graph, d: ShapeDerivation) -> bool:
    """mu weakly increasing, mu_i >= i-1, and every diagram cell (i, j) an edge."""
    H = d.graph
    if any(a > b for a, b in zip(d.mu, d.mu[1:])):
        return False
    if any(u < i for i, u in enumerate(d.mu)):
        return False
    return all(H.has_edge(i, j) for i in range(1, d.n + 1) for j in range(d.mu[i - 1] + 1, d.lam[i - 1] + 1))


def _restore(exps: Sequence[int], ordering: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(exps)
    for k, old in enumerate(ordering):
        out[old - 1] = exps[k]
    return tuple(out)


def resolution_betti(G: Graph, d: ShapeDerivation) -> BettiTable:
    """Multigraded Betti table read off the specialized complex, in G's own labels."""
    Xbar = specialize_labels(build_shape_complex(d.shape()))
    table = betti_from_faces(Xbar)
    counts = {(i, _restore(a, d.ordering)): v for (i, a), v in table.entries.items() if i > 0}
    return BettiTable.from_counts(G.m, counts)


def _closed_form_report(m: int, shape: Shape, height: int, depth: int, betti: BettiTable | None) -> InvariantReport:
    totals = betti_closed_form_totals(shape)
    graded = {(0, 0): 1}
    graded.update({(i, i + 1): b for i, b in enumerate(totals) if i > 0})
    dim = m - height
    return InvariantReport(
        nvars=m,
        betti_totals=totals,
        graded=graded,
        pdim=m - depth,
        depth=depth,
        height=height,
        dim=dim,
        reg=2,
        cohen_macaulay=depth == dim,
        betti=betti,
    )


def analyze(G: Graph, ordering: Sequence[int] | None = None) -> InvariantReport:
    """Closed-form invariants of S/I_G when the condition holds."""
    d = derive_shape(G, ordering)
    if not check_condition(G, d):
        raise ConditionFailed(f"condition fails for lambda={d.lam}, mu={d.mu}")
    shape = d.shape()
    spans = [shape.lam[j] - shape.mu[j] + j for j in range(shape.n)]
    height = min(min(spans), shape.n)
    depth = G.m - max(spans)
    report = _closed_form_report(G.m, shape, height, depth, resolution_betti(G, d))
    cm_test = min(spans) == max(spans) <= shape.n
    assert cm_test == report.cohen_macaulay
    return report


@dataclass(frozen=True)
class ThresholdCertificate:
    weights: tuple[int, ...]  # weights[v-1] for vertex v
    creation: tuple[tuple[int, str], ...]  # (vertex, "isolated" | "dominating") in creation order

    def verify(self, G: Graph) -> bool:
        w = self.weights
        return all(
            G.has_edge(i, j) == (w[i - 1] + w[j - 1] > 0)
            for i in range(1, G.m + 1)
            for j in range(i + 1, G.m + 1)
        )


def is_threshold(G: Graph) -> ThresholdCertificate | None:
    """Peel isolated or dominating vertices; None if the peeling gets stuck."""
    if G.loops:
        raise MalformedInput("threshold recognition needs a loop-free graph")
    remaining = set(range(1, G.m + 1))
    peeled = []
    while remaining:
        pick = None
        for v in sorted(remaining):
            deg = G.degree(v, remaining)
            if deg == 0:
                pick = (v, "isolated")
                break
            if deg == len(remaining) - 1:
                pick = (v, "dominating")
                break
        if pick is None:
            return None
        peeled.append(pick)
        remaining.discard(pick[0])
    weights = [0] * G.m
    for k, (v, kind) in enumerate(peeled):
        size = G.m - k  # strictly decreasing along the peel order
        weights[v - 1] = size if kind == "dominating" else -size
    cert = ThresholdCertificate(tuple(weights), tuple(reversed(peeled)))
    if not cert.verify(G):
        raise AssertionError("reconstructed weights do not realize the graph")
    return cert


def graph_from_creation_sequence(seq: str) -> Graph:
    """Vertex k+1 is added at step k as isolated ('i') or dominating ('d'); seq[0] is ignored."""
    edges = set()
    for k, c in enumerate(seq):
        if c not in "id":
            raise MalformedInput("creation sequence uses 'i' and 'd'")
        if k and c == "d":
            edges.update((j, k + 1) for j in range(1, k + 1))
    return Graph(len(seq), frozenset(edges))


def threshold_creation_sequences(max_m: int) -> Iterator[str]:
    """Creation sequences of threshold graphs on 2..max_m vertices without isolated vertices."""
    for m in range(2, max_m + 1):
        for mid in product("id", repeat=m - 2):
            yield "i" + "".join(mid) + "d"


@dataclass(frozen=True)
class ThresholdShape:
    """Shape of a threshold graph ordered by decreasing degree.

    ``lam`` is the largest-neighbour index of each of the first n vertices,
    which equals degree + 1 there; ``printed_n``/``printed_lam`` apply the
    degree-based definitions literally and are kept for comparison.
    """

    ordering: tuple[int, ...]
    degrees: tuple[int, ...]
    n: int
    lam: tuple[int, ...]
    mu: tuple[int, ...]
    printed_n: int
    printed_lam: tuple[int, ...]
    agrees_with_general: bool

    def shape(self) -> Shape:
        return validate_shape(self.lam, self.mu)

    def to_json(self) -> dict:
        return {
            "ordering": list(self.ordering),
            "degrees": list(self.degrees),
            "n": self.n,
            "lambda": list(self.lam),
            "mu": list(self.mu),
            "printed_reading": {"n": self.printed_n, "lambda": list(self.printed_lam)},
            "agrees_with_general_procedure": self.agrees_with_general,
        }


def threshold_shape(G: Graph) -> ThresholdShape:
    if G.isolated_vertices():
        raise IsolatedVertex(f"isolated vertices {G.isolated_vertices()}")
    if is_threshold(G) is None:
        raise NotThreshold("graph is not threshold")
    ordering = tuple(sorted(range(1, G.m + 1), key=lambda v: (-G.degree(v), v)))
    degrees = tuple(G.degree(v) for v in ordering)
    n = max(i for i in range(1, G.m + 1) if degrees[i - 1] >= i)
    lam = tuple(d + 1 for d in degrees[:n])
    mu = tuple(range(1, n + 1))
    printed = [i for i in range(1, G.m + 1) if degrees[i - 1] >= i + 1]
    printed_n = max(printed) if printed else 0
    try:
        general = derive_shape(G, ordering)
        agrees = (general.n, general.lam, general.mu) == (n, lam, mu)
    except NotShapeRepresentable:
        agrees = False
    return ThresholdShape(ordering, degrees, n, lam, mu, printed_n, degrees[:printed_n], agrees)


def threshold_report(G: Graph) -> InvariantReport:
    """Height n, depth 1, regularity 2 and the Betti numbers sum_j C(lambda_j - 1, i) - C(n, i+1)."""
    ts = threshold_shape(G)
    d = derive_shape(G, ts.ordering)
    return _closed_form_report(G.m, ts.shape(), ts.n, 1, resolution_betti(G, d))


def _degree_two_pairs(ideal: MonomialIdeal) -> set[tuple[int, int]]:
    pairs = set()
    for g in ideal.generators:
        if g.degree != 2:
            raise NotDegreeTwo("ideal is not generated in degree two")
        sup = g.support()
        pairs.add((sup[0], sup[-1]))
    return pairs


def is_strongly_stable_deg2(ideal: MonomialIdeal) -> bool:
    pairs = _degree_two_pairs(ideal.minimize())
    for a, b in pairs:
        if any((min(a, k), max(a, k)) not in pairs for k in range(b)):
            return False
        if any((k, b) not in pairs for k in range(a)):
            return False
    return True


def is_squarefree_strongly_stable_deg2(ideal: MonomialIdeal) -> bool:
    pairs = _degree_two_pairs(ideal.minimize())
    if any(a == b for a, b in pairs):
        return False
    for a, b in pairs:
        if any((min(a, k), max(a, k)) not in pairs for k in range(b) if k != a):
            return False
        if any((k, b) not in pairs for k in range(a)):
            return False
    return True
