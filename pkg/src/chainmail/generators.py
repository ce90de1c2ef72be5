"""Constructors for connectivity pairs over powerset lattices, plus the
named fixture registry used by the tests and the CLI.

All powerset-based constructors index the lattice so that element ``i``
IS the vertex subset with bitmask ``i``; order is subset inclusion.  The
vertex count is capped (default 5, so a 32-element lattice) because the
lattice and every family over it grow exponentially; fixtures that need
more pass an explicit cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence

from .config import DEFAULT_VERTEX_CAP
from .errors import FormatError, GuardExceeded, PreconditionError
from .connectivity import ConnectivityPair
from .poset import FinitePoset, bits_of, mask_of


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: tuple  # sorted (a, b) tuples with a < b

    def __post_init__(self):
        for a, b in self.edges:
            if a == b:
                raise FormatError("self-loops are not allowed")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise FormatError(f"edge ({a},{b}) out of range")
        object.__setattr__(
            self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges))
        )

    @staticmethod
    def from_edges(n: int, edges: Iterable) -> "Graph":
        return Graph(n, tuple(tuple(e) for e in edges))

    def adjacency(self) -> list:
        adj = [0] * self.n
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj

    def is_connected_set(self, vmask: int) -> bool:
        if not vmask:
            return False
        adj = self.adjacency()
        start = vmask & -vmask
        comp = start
        frontier = start
        while frontier:
            grown = 0
            for v in bits_of(frontier):
                grown |= adj[v]
            grown &= vmask & ~comp
            comp |= grown
            frontier = grown
        return comp == vmask


@dataclass(frozen=True)
class Hypergraph:
    """Vertex set 0..n-1 with a list of hyperedges (vertex subsets)."""

    n: int
    hyperedges: tuple  # sorted tuples of vertices

    def __post_init__(self):
        for e in self.hyperedges:
            for v in e:
                if not 0 <= v < self.n:
                    raise FormatError(f"hyperedge vertex {v} out of range")
        object.__setattr__(
            self,
            "hyperedges",
            tuple(sorted(tuple(sorted(set(e))) for e in self.hyperedges)),
        )

    def is_connected_set(self, vmask: int) -> bool:
        """Non-empty, and one chain-component of the hyperedges inside the
        set covers all of it.  Chains are sequences of hyperedges lying in
        the set in which consecutive edges intersect."""
        if not vmask:
            return False
        inside = [mask_of(e) for e in self.hyperedges if mask_of(e) & ~vmask == 0]
        if not inside:
            return False
        k = len(inside)
        parent = list(range(k))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(k):
            for j in range(i + 1, k):
                if inside[i] & inside[j]:
                    parent[find(i)] = find(j)
        unions: Dict[int, int] = {}
        for i in range(k):
            r = find(i)
            unions[r] = unions.get(r, 0) | inside[i]
        return any(u & ~vmask == 0 and vmask & ~u == 0 for u in unions.values())


def _check_cap(vertices: int, cap: int) -> None:
    if vertices > cap:
        raise GuardExceeded(
            f"{vertices} vertices exceeds the cap of {cap} (the lattice is the powerset)"
        )


def graph_connectivity_pair(g: Graph, cap: int = DEFAULT_VERTEX_CAP) -> ConnectivityPair:
    """(powerset of vertices, non-empty connected vertex sets)."""
    _check_cap(g.n, cap)
    lattice = FinitePoset.powerset_lattice(g.n)
    connected = frozenset(m for m in range(1 << g.n) if g.is_connected_set(m))
    return ConnectivityPair(lattice, connected)


def hypergraph_connectivity_pair(h: Hypergraph, cap: int = DEFAULT_VERTEX_CAP) -> ConnectivityPair:
    """(powerset of vertices, hyperedge-chain-connected sets)."""
    _check_cap(h.n, cap)
    lattice = FinitePoset.powerset_lattice(h.n)
    connected = frozenset(m for m in range(1 << h.n) if h.is_connected_set(m))
    return ConnectivityPair(lattice, connected)


def is_k_connected_set(g: Graph, vmask: int, k: int) -> bool:
    """Connected, and still connected and non-empty after deleting any
    k-1 or fewer vertices.

    Read literally this admits small sets: a two-vertex edge minus one
    vertex is a non-empty connected singleton, so edges are 2-connected.
    """
    if k < 1:
        raise PreconditionError("k must be a positive integer")
    if not g.is_connected_set(vmask):
        return False
    members = list(bits_of(vmask))
    for pick in range(1, 1 << len(members)):
        if bin(pick).count("1") > k - 1:
            continue
        removed = 0
        for i, v in enumerate(members):
            if pick >> i & 1:
                removed |= 1 << v
        rest = vmask & ~removed
        if not rest or not g.is_connected_set(rest):
            return False
    return True


def k_connectivity_pair(g: Graph, k: int, cap: int = DEFAULT_VERTEX_CAP) -> ConnectivityPair:
    """(powerset of vertices, k-connected vertex sets)."""
    _check_cap(g.n, cap)
    lattice = FinitePoset.powerset_lattice(g.n)
    connected = frozenset(m for m in range(1 << g.n) if is_k_connected_set(g, m, k))
    return ConnectivityPair(lattice, connected)


def topology_pair(n: int, opens: Sequence[Iterable[int]], cap: int = DEFAULT_VERTEX_CAP) -> ConnectivityPair:
    """(powerset of points, open sets); the kernel map is topological
    interior."""
    _check_cap(n, cap)
    masks = sorted({mask_of(o) for o in opens})
    full = (1 << n) - 1
    mset = set(masks)
    if 0 not in mset or full not in mset:
        raise FormatError("a topology must contain the empty set and the whole space")
    for a in masks:
        for b in masks:
            if a | b not in mset or a & b not in mset:
                raise FormatError("open sets must be closed under union and intersection")
    lattice = FinitePoset.powerset_lattice(n)
    return ConnectivityPair(lattice, frozenset(masks))


def topological_connected_sets_pair(n: int, opens: Sequence[Iterable[int]], cap: int = DEFAULT_VERTEX_CAP) -> ConnectivityPair:
    """(powerset of points, connected sets of the topology): sets that no
    two disjoint-on-them open sets can split."""
    _check_cap(n, cap)
    topo = topology_pair(n, opens, cap)
    masks = sorted(topo.connected)

    def connected(smask: int) -> bool:
        if not smask:
            return False
        for u in masks:
            for v in masks:
                if u & v & smask:
                    continue
                if smask & ~(u | v):
                    continue
                if u & smask and v & smask:
                    return False
        return True

    lattice = FinitePoset.powerset_lattice(n)
    return ConnectivityPair(lattice, frozenset(m for m in range(1 << n) if connected(m)))


# ---------------------------------------------------------------------------
# forests
# ---------------------------------------------------------------------------

def forest_poset_check(p: FinitePoset) -> bool:
    """Whether the poset is a disjoint union of root-at-top trees.

    Four equivalent formulations are evaluated independently and must
    agree: (1) no element has two upper covers, (2) every mail is linearly
    ordered, (3) every up-set is a chain, (4) each order component has one
    maximal element and a tree-shaped cover diagram.
    """
    cover_up: Dict[int, List[int]] = {a: [] for a in range(p.n)}
    for a, b in p.covers:
        cover_up[a].append(b)
    cond1 = all(len(v) <= 1 for v in cover_up.values())

    cond2 = next(iter(p.reduced_mails()), None) is None

    cond3 = True
    for x in range(p.n):
        ups = list(bits_of(p.up[x]))
        for i in range(len(ups)):
            for j in range(i + 1, len(ups)):
                a, b = ups[i], ups[j]
                if not (p.leq(a, b) or p.leq(b, a)):
                    cond3 = False
    cond4 = True
    for comp in p.order_connected_components():
        edges = [e for e in p.covers if e[0] in comp]
        maxima = [a for a in comp if p.up[a] == 1 << a]
        if len(edges) != len(comp) - 1 or len(maxima) != 1:
            cond4 = False

    if not cond1 == cond2 == cond3 == cond4:
        raise RuntimeError("internal inconsistency: the four forest formulations disagree")
    return cond1


def downset_lattice_pair(p: FinitePoset) -> ConnectivityPair:
    """(lattice of down-closed subsets ordered by inclusion, principal
    down-sets).  For forest posets this pair is a separated Serra
    connectivity, hence absolute."""
    if p.n > 20:
        raise GuardExceeded("down-set lattice construction is capped at 2^20 subsets")
    downsets = []
    for x in range(1 << p.n):
        if all(p.down[a] & ~x == 0 for a in bits_of(x)):
            downsets.append(x)
    downsets.sort(key=lambda m: (bin(m).count("1"), tuple(bits_of(m))))
    index = {m: i for i, m in enumerate(downsets)}
    k = len(downsets)
    rows = []
    for i, a in enumerate(downsets):
        row = 0
        for j, b in enumerate(downsets):
            if a & ~b == 0:
                row |= 1 << j
        rows.append(row)
    lattice = FinitePoset(k, tuple(rows))
    principal = frozenset(index[p.down[x]] for x in range(p.n))
    return ConnectivityPair(lattice, principal)


def divisor_lattice(n: int = 360) -> FinitePoset:
    """Divisors of n under divisibility; n itself is the top element."""
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    rows = []
    for a in divisors:
        row = 0
        for j, b in enumerate(divisors):
            if b % a == 0:
                row |= 1 << j
        rows.append(row)
    return FinitePoset(len(divisors), tuple(rows))


def prime_power_divisor_indices(n: int = 360) -> frozenset:
    """Indices of the divisors of n that are non-trivial prime powers."""
    divisors = [d for d in range(1, n + 1) if n % d == 0]

    def is_prime_power(d: int) -> bool:
        if d < 2:
            return False
        for q in range(2, d + 1):
            if d % q == 0:
                while d % q == 0:
                    d //= q
                return d == 1
        return False

    return frozenset(i for i, d in enumerate(divisors) if is_prime_power(d))


# ---------------------------------------------------------------------------
# fixture registry
# ---------------------------------------------------------------------------

def _exa_a_poset() -> FinitePoset:
    # seven elements, numbered 1..7 in the figures, here 0..6
    return FinitePoset.from_cover_pairs(
        7, [(0, 1), (0, 2), (3, 4), (3, 5), (1, 4), (2, 4), (2, 5), (4, 6), (5, 6)]
    )


def _m3() -> FinitePoset:
    return FinitePoset.from_cover_pairs(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def _n5() -> FinitePoset:
    # pentagon: 0 < 1 < 2 < 4 and 0 < 3 < 4
    return FinitePoset.from_cover_pairs(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


def _exa_n_pair() -> ConnectivityPair:
    lattice = FinitePoset.from_cover_pairs(6, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)])
    return ConnectivityPair(lattice, frozenset({1, 2, 3, 5}))


def _exa_x_pair() -> ConnectivityPair:
    # bottom, three atoms, their join, then a separate top above it
    lattice = FinitePoset.from_cover_pairs(6, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (4, 5)])
    return ConnectivityPair(lattice, frozenset({1, 2, 3}))


def _two_diamond_graph() -> Graph:
    return Graph.from_edges(
        7, [(0, 1), (1, 3), (3, 2), (2, 0), (3, 4), (4, 6), (6, 5), (5, 3)]
    )


def _exa_g_forest() -> FinitePoset:
    # one two-leaf tree plus a disjoint two-chain
    return FinitePoset.from_cover_pairs(5, [(0, 2), (1, 2), (3, 4)])


def _exa_ab_pair() -> ConnectivityPair:
    # a non-distributive complete lattice with a freshly attached bottom;
    # the old elements are the connectivity
    base = _n5()
    n = base.n
    rows = [(1 << (n + 1)) - 1]  # new bottom below everything
    for a in range(n):
        rows.append(base.up[a] << 1)
    lattice = FinitePoset(n + 1, tuple(rows))
    return ConnectivityPair(lattice, frozenset(range(1, n + 1)))


_FIXTURES: Dict[str, object] = {}


def _register(name: str, builder, description: str) -> None:
    _FIXTURES[name] = (builder, description)


_register("exaA", _exa_a_poset, "7-element connected chainmail that is no connectivity space's poset of connected sets")
_register("M3", _m3, "diamond lattice: bottom, three atoms, top")
_register("N5", _n5, "pentagon lattice: a 2-chain and a 1-chain between bottom and top")
_register("exaB", lambda: graph_connectivity_pair(Graph.from_edges(3, [(0, 1), (1, 2)])), "connected sets of the 3-path graph over its powerset")
_register("exaC", lambda: topological_connected_sets_pair(3, [[], [0], [0, 1], [0, 1, 2]]), "connected sets of a 3-point topological space")
_register("exaE", lambda: FinitePoset.powerset_lattice(3), "closed sets of a discrete 3-point space (a Boolean lattice)")
_register("exaG", _exa_g_forest, "forest poset: a two-leaf tree plus a disjoint 2-chain")
_register("exaH", lambda: hypergraph_connectivity_pair(Hypergraph(3, ((0,), (1,), (0, 1, 2)))), "hypergraph connectivity; one vertex lies in no singleton hyperedge")
_register("exaI", lambda: topology_pair(2, [[], [0], [0, 1]]), "two-point topology whose kernel map is interior")
_register("sierpinski", lambda: topology_pair(2, [[], [0], [0, 1]]), "alias of exaI")
_register("exaJ", lambda: k_connectivity_pair(_two_diamond_graph(), 2, cap=7), "2-connected sets of two diamonds glued at a vertex")
_register("exaK", lambda: downset_lattice_pair(_exa_g_forest()), "down-set lattice of a forest with principal down-sets as connectivity")
_register("exaM", lambda: ConnectivityPair(FinitePoset.powerset_lattice(3), frozenset(m for m in range(8) if bin(m & ~1).count("1") == 1)), "sets whose part outside a fixed subset is a singleton")
_register("exaN", _exa_n_pair, "chainmail inside a lattice that is not a subchainmail of it")
_register("exaT", lambda: ConnectivityPair(divisor_lattice(360), prime_power_divisor_indices(360)), "divisors of 360 under divisibility with prime powers as connectivity")
_register("exaU", lambda: ConnectivityPair(FinitePoset.powerset_lattice(3), frozenset({1, 2, 4})), "Boolean lattice with its atoms as connectivity")
_register("exaV", lambda: ConnectivityPair(FinitePoset.powerset_lattice(3), frozenset({3, 5, 6})), "three pairwise-overlapping doubletons: an antichain connectivity")
_register("exaW", lambda: ConnectivityPair(FinitePoset.powerset_lattice(3), frozenset({3, 6})), "two overlapping doubletons: a separated, non-typical connectivity")
_register("exaX", _exa_x_pair, "three atoms under a coatom and top: typical but neither separated nor saturated")
_register("exaAA", lambda: _exterior_as_absolute_fixture(), "the exterior of exaA as an absolute connectivity lattice (not a frame)")
_register("exaAB", _exa_ab_pair, "a complete lattice over a new bottom; old elements are the connectivity")


def _exterior_as_absolute_fixture() -> ConnectivityPair:
    from .exterior import exterior_as_absolute

    return exterior_as_absolute(_exa_a_poset())


def fixture_names() -> list:
    return sorted(_FIXTURES)


def fixture_description(name: str) -> str:
    if name not in _FIXTURES:
        raise FormatError(f"unknown fixture {name!r}")
    return _FIXTURES[name][1]


@lru_cache(maxsize=None)
def named_fixture(name: str):
    """The registered structure for a fixture name: a FinitePoset or a
    ConnectivityPair."""
    if name not in _FIXTURES:
        raise FormatError(f"unknown fixture {name!r}; see `chainmail fixtures`")
    return _FIXTURES[name][0]()
