"""Congruence graphs and connectedness reports.

:class:`CongruenceGraph` is a small undirected multigraph over hashable
nodes whose edges carry the congruence characteristic, an optional label,
and an optional lifting-theorem verdict.  ``mazur_report`` assembles the
graph of integral eigensystem classes at one level (including classes from
every divisor level) with an edge wherever two classes collide mod ell, and
reports the connected components together with the characteristics that had
to be dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import DomainError, divisors, is_prime, primes_up_to
from .dims import dim_cusp_forms
from .eigensystems import decompose, sturm_bound
from .lifting import _divides_mod, integral_classes
from .mlt import MltVerdict


@dataclass(frozen=True)
class Edge:
    u: object
    v: object
    ell: int
    label: str = ""
    verdict: MltVerdict | None = None

    def reversed(self) -> "Edge":
        return Edge(self.v, self.u, self.ell, self.label, self.verdict)


class CongruenceGraph:
    """Undirected multigraph; insertion order fixes all tie-breaking."""

    def __init__(self) -> None:
        self._adj: dict[object, list[Edge]] = {}
        self._edges: list[Edge] = []

    def add_node(self, u) -> None:
        self._adj.setdefault(u, [])

    def add_edge(self, u, v, ell: int, label: str = "", verdict=None) -> Edge:
        edge = Edge(u, v, ell, label, verdict)
        self.add_node(u)
        self.add_node(v)
        self._adj[u].append(edge)
        self._adj[v].append(edge.reversed())
        self._edges.append(edge)
        return edge

    @property
    def nodes(self) -> list:
        return list(self._adj)

    @property
    def edges(self) -> list[Edge]:
        return list(self._edges)

    def components(self) -> list[tuple]:
        """Connected components, each in insertion order, ordered by their
        first-seen node."""
        parent: dict[object, object] = {u: u for u in self._adj}

        def root(x):
            while parent[x] is not x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self._edges:
            ru, rv = root(e.u), root(e.v)
            if ru is not rv:
                parent[rv] = ru
        groups: dict[object, list] = {}
        for u in self._adj:
            groups.setdefault(root(u), []).append(u)
        return [tuple(g) for g in groups.values()]

    def connected(self, u, v) -> bool:
        for comp in self.components():
            if u in comp:
                return v in comp
        return False

    def _distances(self, target, mlt_only: bool) -> dict[object, int]:
        dist = {target: 0}
        frontier = [target]
        while frontier:
            nxt = []
            for u in frontier:
                for e in self._adj[u]:
                    if mlt_only and e.verdict is None:
                        continue
                    if e.v not in dist:
                        dist[e.v] = dist[u] + 1
                        nxt.append(e.v)
            frontier = nxt
        return dist

    def chain_search(self, src, dst, mlt_only: bool = False) -> list[Edge] | None:
        """Shortest edge path from src to dst; among shortest paths the
        sequence of (ell, label) pairs is lexicographically smallest.
        ``mlt_only`` restricts to edges carrying a verdict."""
        if src not in self._adj or dst not in self._adj:
            raise DomainError("chain endpoints must be graph nodes")
        if src == dst:
            return []
        dist = self._distances(dst, mlt_only)
        if src not in dist:
            return None
        path: list[Edge] = []
        cur = src
        while cur != dst:
            options = [
                e
                for e in self._adj[cur]
                if not (mlt_only and e.verdict is None)
                and e.v in dist
                and dist[e.v] == dist[cur] - 1
            ]
            step = min(options, key=lambda e: (e.ell, e.label))
            path.append(step)
            cur = step.v
        return path


@dataclass(frozen=True)
class MazurReport:
    N: int
    k: int
    nodes: tuple[tuple[int, int, int], ...]
    characteristics_used: tuple[int, ...]
    characteristics_dropped: tuple[tuple[int, str], ...]
    witnesses: tuple[tuple[int, tuple[int, ...]], ...]
    edges: tuple[tuple[tuple[int, int, int], tuple[int, int, int], int], ...]
    components: tuple[tuple[tuple[int, int, int], ...], ...]
    connected: bool
    graph: CongruenceGraph = field(compare=False, repr=False, default=None)


def _collision_cliques(N, k, ell, node_info, qs):
    """Nodes matched by each mod-ell orbit at level N; one list per orbit."""
    systems = decompose(N, k, ell)
    if sum(s.block_dim for s in systems) != 2 * dim_cusp_forms(N, k):
        raise DomainError("dimension anomaly at this characteristic")
    cliques = []
    for s in systems:
        hits = []
        for label, container, idx in node_info:
            ok = True
            for q in qs:
                if q == ell or q == container.anchor:
                    continue
                F = container.factor_for(idx, q)
                if not _divides_mod(s.min_poly(q), F, ell):
                    ok = False
                    break
            if ok:
                hits.append(label)
        if not hits:
            raise DomainError("orbit matches no integral class at this characteristic")
        cliques.append(hits)
    return cliques


def mazur_report(N: int, k: int, ell_range) -> MazurReport:
    """Connectedness of the classes at level N and its divisors under mod-ell
    collisions for every usable prime in ``ell_range``.

    Classes appearing at several levels are identified by their exact Hecke
    factors away from N and kept at the lowest level.  A characteristic that
    cannot be used (divides the level, too small for the weight, dimension
    anomaly, ...) is recorded with its reason rather than silently skipped.
    """
    qs = [q for q in primes_up_to(sturm_bound(N, k)) if N % q]
    node_info = []
    seen: dict[tuple, tuple[int, int, int]] = {}
    for M in divisors(N):
        if dim_cusp_forms(M, k) == 0:
            continue
        container = integral_classes(M, k)
        for cls in container.classes:
            fingerprint = tuple(container.factor_for(cls.index, q) for q in qs)
            if fingerprint in seen:
                continue
            seen[fingerprint] = cls.label
            node_info.append((cls.label, container, cls.index))

    graph = CongruenceGraph()
    for label, _, _ in node_info:
        graph.add_node(label)

    used = []
    dropped = []
    witnesses = []
    edges = []
    for ell in sorted(set(ell_range)):
        if not is_prime(ell):
            continue
        comparison = tuple(q for q in qs if q != ell)
        if not comparison:
            dropped.append((ell, "no comparison primes below the bound"))
            continue
        try:
            cliques = _collision_cliques(N, k, ell, node_info, qs)
        except DomainError as exc:
            dropped.append((ell, str(exc)))
            continue
        used.append(ell)
        witnesses.append((ell, comparison))
        ell_edges = set()
        for hits in cliques:
            for i in range(len(hits)):
                for j in range(i + 1, len(hits)):
                    ell_edges.add((hits[i], hits[j]))
        for u, v in sorted(ell_edges):
            graph.add_edge(u, v, ell)
            edges.append((u, v, ell))

    components = tuple(graph.components())
    return MazurReport(
        N=N,
        k=k,
        nodes=tuple(label for label, _, _ in node_info),
        characteristics_used=tuple(used),
        characteristics_dropped=tuple(dropped),
        witnesses=tuple(witnesses),
        edges=tuple(edges),
        components=components,
        connected=len(components) <= 1,
        graph=graph,
    )
