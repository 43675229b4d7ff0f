"""Exact combinatorial subroutines the solvers reduce to.

Cliques, independent sets, clique partitions, colorings, matchings, and the
bipartite/interval/degree-2 fast paths. Vertices keep their original labels
throughout; every routine takes an optional ``within`` bitmask restricting
the vertex set. Clique searches may internally switch between the graph and
its complement (a maximum clique is a maximum independent set of the
complement), whichever side is sparser.

Tie-breaking: clique searches return the lexicographically smallest member
list among optimal solutions. Other routines are deterministic by fixed
scan order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DegreeTooHigh, OutOfRange, RepMismatch
from .model import Coalition, iter_bits, mask_of


@dataclass(frozen=True)
class UGraph:
    """Simple undirected graph as symmetric bitmask rows, no self-loops."""

    n: int
    adj: tuple[int, ...]

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "UGraph":
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise OutOfRange(f"bad edge ({u}, {v}) for {n} vertices")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return UGraph(n, tuple(rows))

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def complement(self) -> "UGraph":
        full = self.all_mask
        return UGraph(self.n, tuple(full & ~a & ~(1 << v) for v, a in enumerate(self.adj)))

    def edge_count(self, within: int | None = None) -> int:
        m = self.all_mask if within is None else within
        return sum((self.adj[v] & m).bit_count() for v in iter_bits(m)) // 2

    def max_degree(self, within: int | None = None) -> int:
        m = self.all_mask if within is None else within
        return max(((self.adj[v] & m).bit_count() for v in iter_bits(m)), default=0)

    def components(self, within: int | None = None) -> list[int]:
        """Connected component masks, ordered by smallest vertex."""
        m = self.all_mask if within is None else within
        comps = []
        while m:
            start = m & -m
            comp = start
            frontier = start
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self.adj[v] & m
                nxt &= ~comp
                comp |= nxt
                frontier = nxt
            comps.append(comp)
            m &= ~comp
        return comps


# ---------------------------------------------------------------------------
# Maximum clique / independent set
# ---------------------------------------------------------------------------


def _greedy_clique(adj: Sequence[int], within: int) -> int:
    """Greedy clique mask used as a branch-and-bound incumbent."""
    best = 0
    pool = within
    # seed by descending degree (within), a handful of starts
    verts = sorted(iter_bits(pool), key=lambda v: -(adj[v] & within).bit_count())
    for seed in verts[:8]:
        clique = 1 << seed
        cand = adj[seed] & within
        while cand:
            v = max(iter_bits(cand), key=lambda u: (adj[u] & cand).bit_count())
            clique |= 1 << v
            cand &= adj[v]
        if clique.bit_count() > best.bit_count():
            best = clique
    return best


def _color_sort(adj: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    """Greedy-color vertices of mask ``p``; return (order, bound) with
    vertices sorted by ascending color and bound[i] = color of order[i]."""
    classes: list[int] = []
    order: list[int] = []
    bound: list[int] = []
    for v in iter_bits(p):
        for ci, cmask in enumerate(classes):
            if not (cmask & adj[v]):
                classes[ci] = cmask | (1 << v)
                break
        else:
            classes.append(1 << v)
    for ci, cmask in enumerate(classes):
        for v in iter_bits(cmask):
            order.append(v)
            bound.append(ci + 1)
    return order, bound


def _clique_bnb(adj: Sequence[int], within: int, target: int | None = None) -> int:
    """Return a maximum-clique mask within ``within``.

    With ``target`` set, stop as soon as a clique of that size is found (the
    returned clique then has size >= target, or the true maximum if smaller).
    """
    best_mask = _greedy_clique(adj, within)
    best = best_mask.bit_count()
    if target is not None and best >= target:
        return best_mask

    def expand(rmask: int, rsize: int, p: int) -> bool:
        nonlocal best, best_mask
        order, bound = _color_sort(adj, p)
        for i in range(len(order) - 1, -1, -1):
            if rsize + bound[i] <= best:
                return False
            v = order[i]
            nmask = rmask | (1 << v)
            np = p & adj[v]
            if rsize + 1 > best:
                best = rsize + 1
                best_mask = nmask
                if target is not None and best >= target:
                    return True
            if np:
                if expand(nmask, rsize + 1, np):
                    return True
            p &= ~(1 << v)
        return False

    expand(0, 0, within)
    return best_mask


def _is_reduce(adj: Sequence[int], m: int) -> tuple[int, int]:
    """Independent-set reductions on mask ``m``: repeatedly take vertices of
    degree 0 and 1. Returns (forced_mask, remaining_mask)."""
    forced = 0
    changed = True
    while changed:
        changed = False
        for v in iter_bits(m):
            if not (m >> v & 1):
                continue  # removed earlier in this pass
            d = adj[v] & m
            k = d.bit_count()
            if k == 0:
                forced |= 1 << v
                m &= ~(1 << v)
                changed = True
            elif k == 1:
                forced |= 1 << v
                m &= ~((1 << v) | d)
                changed = True
    return forced, m


def _max_is_mask(adj: Sequence[int], within: int) -> int:
    """Maximum independent set mask, exact. Decomposes over components and
    applies degree-0/1 reductions; cores are solved as cliques of the
    complement."""
    n = len(adj)
    total = 0
    g = UGraph(n, tuple(adj))
    for comp in g.components(within):
        forced, rest = _is_reduce(adj, comp)
        total |= forced
        if rest:
            comp_adj = [(~adj[v]) & rest & ~(1 << v) for v in range(n)]
            total |= _clique_bnb(comp_adj, rest)
    return total


def max_clique(g: UGraph, within: int | None = None) -> Coalition:
    """A maximum clique; ties broken to the lexicographically smallest
    member list."""
    m = g.all_mask if within is None else within
    if not m:
        return Coalition(())
    size = clique_number(g, m)
    return Coalition.from_mask(_lex_min_clique(g, m, size))


def clique_number(g: UGraph, within: int | None = None) -> int:
    m = g.all_mask if within is None else within
    if not m:
        return 0
    if 2 * g.edge_count(m) > m.bit_count() * (m.bit_count() - 1) // 2:
        return _max_is_mask(g.complement().adj, m).bit_count()
    return _clique_bnb(g.adj, m).bit_count()


def _has_clique(g: UGraph, within: int, k: int) -> bool:
    """Decision: is there a clique of size k within the mask?"""
    if k <= 0:
        return True
    if within.bit_count() < k:
        return False
    if k == 1:
        return within != 0
    if 2 * g.edge_count(within) > within.bit_count() * (within.bit_count() - 1) // 2:
        # dense: answer via independent sets of the complement
        comp_adj = g.complement().adj
        forced, rest = _is_reduce(comp_adj, within)
        got = forced.bit_count()
        if got >= k:
            return True
        best = 0
        for cmask in UGraph(g.n, tuple(comp_adj)).components(rest):
            sub = [(~comp_adj[v]) & cmask & ~(1 << v) for v in range(g.n)]
            best += _clique_bnb(sub, cmask).bit_count()
        return got + best >= k
    return _clique_bnb(g.adj, within, target=k).bit_count() >= k


def _lex_min_clique(g: UGraph, within: int, k: int) -> int:
    """Lexicographically smallest clique of size exactly ``k``; 0 if none."""
    if k == 0:
        return 0
    prefix = 0
    cand = within
    for _ in range(k):
        found = False
        for v in iter_bits(cand):
            rest = cand & g.adj[v]
            need = k - prefix.bit_count() - 1
            if rest.bit_count() >= need and _has_clique(g, rest, need):
                prefix |= 1 << v
                cand = rest
                found = True
                break
        if not found:
            return 0
    return prefix


def has_clique_of_size(g: UGraph, k: int, through: int | None = None, within: int | None = None) -> Coalition | None:
    """Some clique of exactly size ``k`` (containing ``through`` if given),
    lexicographically smallest, else None."""
    m = g.all_mask if within is None else within
    if k < 1 or k > m.bit_count():
        return None
    if through is not None:
        if not (m >> through) & 1:
            return None
        rest = m & g.adj[through]
        if not _has_clique(g, rest, k - 1):
            return None
        return Coalition.from_mask((1 << through) | _lex_min_clique(g, rest, k - 1))
    if not _has_clique(g, m, k):
        return None
    return Coalition.from_mask(_lex_min_clique(g, m, k))


def vertex_in_clique_of_size(g: UGraph, v: int, k: int, within: int) -> bool:
    """Decision form of has_clique_of_size(..., through=v), no witness."""
    if k < 1 or not (within >> v) & 1:
        return False
    return _has_clique(g, within & g.adj[v], k - 1)


def max_independent_set(g: UGraph, within: int | None = None) -> Coalition:
    m = g.all_mask if within is None else within
    return Coalition.from_mask(_max_is_mask(g.adj, m))


# ---------------------------------------------------------------------------
# Partition into cliques of a fixed size
# ---------------------------------------------------------------------------


def _size_k_cliques_through(g: UGraph, pivot: int, avail: int, k: int) -> Iterable[int]:
    """Yield masks of size-k cliques containing ``pivot`` within ``avail``,
    in lexicographic member order."""
    out: list[int] = []

    def grow(cmask: int, csize: int, cand: int) -> None:
        if csize == k:
            out.append(cmask)
            return
        need = k - csize
        c = cand
        while c:
            low = c & -c
            v = low.bit_length() - 1
            c ^= low
            if (c | low).bit_count() < need:
                break
            grow(cmask | low, csize + 1, c & g.adj[v])

    grow(1 << pivot, 1, avail & g.adj[pivot])
    return out


def partition_into_cliques_of_size(
    g: UGraph, k: int, within: int | None = None
) -> list[Coalition] | None:
    """Partition all vertices into cliques of exactly size ``k``, or None.

    Exact backtracking: branch on the lowest-index unassigned vertex over
    all size-k cliques containing it.
    """
    m = g.all_mask if within is None else within
    if k < 1:
        raise OutOfRange("clique size must be positive")
    cnt = m.bit_count()
    if cnt % k:
        return None
    if k == 1:
        return [Coalition((v,)) for v in iter_bits(m)]

    blocks: list[int] = []

    def feasible(avail: int) -> bool:
        # every unassigned vertex still needs k-1 available neighbors
        for v in iter_bits(avail):
            if (g.adj[v] & avail).bit_count() < k - 1:
                return False
        return True

    def solve(avail: int) -> bool:
        if not avail:
            return True
        if not feasible(avail):
            return False
        pivot = (avail & -avail).bit_length() - 1
        for cmask in _size_k_cliques_through(g, pivot, avail, k):
            blocks.append(cmask)
            if solve(avail & ~cmask):
                return True
            blocks.pop()
        return False

    if not solve(m):
        return None
    return [Coalition.from_mask(b) for b in blocks]


# ---------------------------------------------------------------------------
# Maximum matching (general graphs, blossom contraction)
# ---------------------------------------------------------------------------


def max_matching(g: UGraph, within: int | None = None) -> list[tuple[int, int]]:
    """Maximum-cardinality matching via augmenting paths with blossom
    shrinking (O(V^3)). Deterministic by vertex scan order."""
    m = g.all_mask if within is None else within
    n = g.n
    verts = list(iter_bits(m))
    match = [-1] * n
    parent = [-1] * n
    base = list(range(n))
    q: list[int] = []
    in_queue = [False] * n
    in_blossom = [False] * n

    def lca(a: int, b: int) -> int:
        used = [False] * n
        while True:
            a = base[a]
            used[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if used[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            in_blossom[base[v]] = True
            in_blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    def find_augmenting(root: int) -> int:
        nonlocal q
        for v in verts:
            parent[v] = -1
            base[v] = v
            in_queue[v] = False
        q = [root]
        in_queue[root] = True
        qi = 0
        while qi < len(q):
            v = q[qi]
            qi += 1
            for to in iter_bits(g.adj[v] & m):
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    # odd cycle: contract the blossom
                    cur = lca(v, to)
                    for i in verts:
                        in_blossom[i] = False
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in verts:
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not in_queue[i]:
                                in_queue[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to
                    if not in_queue[match[to]]:
                        in_queue[match[to]] = True
                        q.append(match[to])
        return -1

    for v in verts:
        if match[v] == -1:
            u = find_augmenting(v)
            while u != -1:
                pv = parent[u]
                ppv = match[pv]
                match[u] = pv
                match[pv] = u
                u = ppv

    return [(v, match[v]) for v in verts if match[v] > v]


# ---------------------------------------------------------------------------
# Coloring
# ---------------------------------------------------------------------------


def k_coloring(g: UGraph, k: int, within: int | None = None) -> dict[int, int] | None:
    """Proper coloring with at most ``k`` colors (0-based), or None.

    Exact DSATUR-ordered backtracking with symmetry capping (a vertex may
    open at most one new color).
    """
    m = g.all_mask if within is None else within
    if k < 1:
        raise OutOfRange("color count must be positive")
    verts = list(iter_bits(m))
    if not verts:
        return {}
    color: dict[int, int] = {}
    neighbor_colors: dict[int, set[int]] = {v: set() for v in verts}

    def pick() -> int | None:
        best_v, best_key = None, None
        for v in verts:
            if v in color:
                continue
            key = (len(neighbor_colors[v]), (g.adj[v] & m).bit_count(), -v)
            if best_key is None or key > best_key:
                best_v, best_key = v, key
        return best_v

    def solve(used: int) -> bool:
        v = pick()
        if v is None:
            return True
        limit = min(k, used + 1)
        for c in range(limit):
            if c in neighbor_colors[v]:
                continue
            color[v] = c
            touched = []
            for u in iter_bits(g.adj[v] & m):
                if u not in color and c not in neighbor_colors[u]:
                    neighbor_colors[u].add(c)
                    touched.append(u)
            if solve(max(used, c + 1)):
                return True
            for u in touched:
                neighbor_colors[u].discard(c)
            del color[v]
        return False

    if not solve(0):
        return None
    return color


def bipartition(g: UGraph, within: int | None = None) -> tuple[dict[int, int] | None, list[int] | None]:
    """BFS 2-coloring. Returns (coloring, None) or (None, odd_cycle)."""
    m = g.all_mask if within is None else within
    color: dict[int, int] = {}
    parent: dict[int, int] = {}
    for start in iter_bits(m):
        if start in color:
            continue
        color[start] = 0
        parent[start] = -1
        queue = [start]
        while queue:
            v = queue.pop(0)
            for u in iter_bits(g.adj[v] & m):
                if u not in color:
                    color[u] = color[v] ^ 1
                    parent[u] = v
                    queue.append(u)
                elif color[u] == color[v]:
                    # reconstruct the odd cycle through v..u
                    pv: list[int] = []
                    x = v
                    while x != -1:
                        pv.append(x)
                        x = parent[x]
                    pu: list[int] = []
                    x = u
                    while x not in pv:
                        pu.append(x)
                        x = parent[x]
                    join = pv.index(x)
                    cycle = pv[: join + 1] + list(reversed(pu))
                    return None, cycle
    return color, None


# ---------------------------------------------------------------------------
# Interval representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalRep:
    """Closed intervals [lo, hi], one per vertex, rational endpoints."""

    intervals: tuple[tuple[Fraction, Fraction], ...]

    @property
    def n(self) -> int:
        return len(self.intervals)

    def overlap(self, a: int, b: int) -> bool:
        la, ra = self.intervals[a]
        lb, rb = self.intervals[b]
        return la <= rb and lb <= ra

    def matches(self, g: UGraph, within: int | None = None) -> bool:
        m = g.all_mask if within is None else within
        vs = list(iter_bits(m))
        return all(
            self.overlap(a, b) == bool(g.adj[a] >> b & 1) for i, a in enumerate(vs) for b in vs[i + 1 :]
        )

    def require_match(self, g: UGraph, within: int | None = None) -> None:
        if self.n != g.n:
            raise RepMismatch(f"{self.n} intervals for {g.n} vertices")
        if not self.matches(g, within):
            raise RepMismatch("intervals contradict adjacency")


def interval_clique_partition(
    rep: IntervalRep, g: UGraph, k: int, within: int | None = None
) -> list[Coalition] | None:
    """Partition into cliques of exactly size ``k`` on an interval graph.

    Greedy by earliest right endpoint: that interval lies in a unique
    maximal clique, and taking the k-1 earliest-ending overlappers is
    exchange-safe. Exact for valid representations.
    """
    m = g.all_mask if within is None else within
    rep.require_match(g, m)
    if k < 1:
        raise OutOfRange("clique size must be positive")
    alive = sorted(iter_bits(m), key=lambda v: (rep.intervals[v][1], rep.intervals[v][0], v))
    if len(alive) % k:
        return None
    out: list[Coalition] = []
    alive_set = set(alive)
    for v in alive:
        if v not in alive_set:
            continue
        # alive overlappers of v all contain v's right endpoint
        over = [u for u in alive if u in alive_set and u != v and rep.overlap(u, v)]
        if len(over) < k - 1:
            return None
        block = [v] + over[: k - 1]
        for u in block:
            alive_set.discard(u)
        out.append(Coalition.of(block))
    return out


def interval_coloring(
    rep: IntervalRep, g: UGraph, k: int, within: int | None = None
) -> dict[int, int] | None:
    """Sweep-line greedy coloring, exact on interval graphs."""
    m = g.all_mask if within is None else within
    rep.require_match(g, m)
    if k < 1:
        raise OutOfRange("color count must be positive")
    verts = sorted(iter_bits(m), key=lambda v: (rep.intervals[v][0], rep.intervals[v][1], v))
    color: dict[int, int] = {}
    for v in verts:
        used = {color[u] for u in color if g.adj[v] >> u & 1}
        c = 0
        while c in used:
            c += 1
        if c >= k:
            return None
        color[v] = c
    return color


# ---------------------------------------------------------------------------
# Degree-2 graphs: chains, cycles, singletons
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Degree2Component:
    kind: str  # 'singleton' | 'path' | 'cycle'
    vertices: tuple[int, ...]  # in traversal order


def degree2_decompose(g: UGraph, within: int | None = None) -> list[Degree2Component]:
    """Classify the components of a max-degree-2 graph."""
    m = g.all_mask if within is None else within
    if g.max_degree(m) > 2:
        raise DegreeTooHigh("graph has a vertex of degree > 2")
    out: list[Degree2Component] = []
    seen = 0
    for v in iter_bits(m):
        if seen >> v & 1:
            continue
        deg = (g.adj[v] & m).bit_count()
        if deg == 0:
            seen |= 1 << v
            out.append(Degree2Component("singleton", (v,)))
            continue
        # find a path end in v's component, else it is a cycle
        compmask = 0
        stack = [v]
        while stack:
            x = stack.pop()
            if compmask >> x & 1:
                continue
            compmask |= 1 << x
            stack.extend(iter_bits(g.adj[x] & m & ~compmask))
        ends = [u for u in iter_bits(compmask) if (g.adj[u] & m).bit_count() == 1]
        start = min(ends) if ends else min(iter_bits(compmask))
        order = [start]
        prev = -1
        cur = start
        while True:
            nxts = [u for u in iter_bits(g.adj[cur] & compmask) if u != prev]
            if not nxts:
                break
            prev, cur = cur, nxts[0]
            if cur == start:
                break
            order.append(cur)
        seen |= compmask
        kind = "path" if ends else "cycle"
        out.append(Degree2Component(kind, tuple(order)))
    return out


def max_is_degree2(g: UGraph, within: int | None = None) -> Coalition:
    """Maximum independent set of a max-degree-2 graph: all singletons,
    alternate picks from each path (both ends in), alternate on cycles."""
    picks: list[int] = []
    for comp in degree2_decompose(g, within):
        vs = comp.vertices
        if comp.kind == "cycle":
            picks.extend(vs[i] for i in range(0, len(vs) - 1, 2))
        else:
            picks.extend(vs[i] for i in range(0, len(vs), 2))
    return Coalition.of(picks)
