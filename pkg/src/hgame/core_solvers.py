"""Solvers for the four problems without neutrals (find / verify / strict
existence / strict verify) plus bounded-partition-count and bounded-
coalition-size variants, with automatic dispatch to special-class fast
paths (bipartite, interval, enemy degree <= 2, friend degree <= 3).

Every fast path must produce the same verdict as the generic path; tests
enforce this. Strict-core reasoning rests on the clique level structure:
peel agents by the largest clique they belong to among the not-yet-peeled
vertices; a strictly core stable partition must place every level-k agent
in a size-k friendship clique inside her level.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import BudgetExceeded, DegreeTooHigh, HgameError, ModeMismatch, ValidationError
from .model import (
    Coalition,
    GameInstance,
    Mode,
    Partition,
    iter_bits,
    validate_partition,
)
from .preferences import (
    BlockingCertificate,
    is_blocking,
    is_weakly_blocking,
)
from . import graph_kernels as gk
from .graph_kernels import IntervalRep, UGraph

GENERIC = "generic"
BIPARTITE_FRIEND = "bipartite-friend"
BIPARTITE_ENEMY = "bipartite-enemy"
INTERVAL_FRIEND = "interval-friend"
INTERVAL_ENEMY = "interval-enemy"
ENEMY_DEGREE_2 = "enemy-degree-2"
FRIEND_DEGREE_3 = "friend-degree-3"
NEUTRAL = "neutral-search"

STRATEGIES = (
    GENERIC,
    BIPARTITE_FRIEND,
    BIPARTITE_ENEMY,
    INTERVAL_FRIEND,
    INTERVAL_ENEMY,
    ENEMY_DEGREE_2,
    FRIEND_DEGREE_3,
)


@dataclass(frozen=True)
class LevelSets:
    """Masks of the clique level decomposition, indexed by clique size.

    ``masks[k]`` holds the agents peeled at size k; index 0 is unused.
    """

    n: int
    masks: tuple[int, ...]

    def level_of(self, agent: int) -> int:
        for k in range(self.n, 0, -1):
            if self.masks[k] >> agent & 1:
                return k
        raise HgameError(f"agent {agent} not in any level")

    def nonempty(self) -> list[int]:
        return [k for k in range(self.n, 0, -1) if self.masks[k]]

    def strict_coalition_count(self) -> int | None:
        """Number of coalitions every strictly core stable partition has,
        or None when some level is not divisible by its size."""
        total = 0
        for k in self.nonempty():
            c = self.masks[k].bit_count()
            if c % k:
                return None
            total += c // k
        return total


@dataclass
class SolveReport:
    answer: str  # "yes" | "no" | "stable" | "blocked"
    partition: Partition | None = None
    certificate: BlockingCertificate | None = None
    strategy_used: str = GENERIC
    elapsed: float = 0.0
    notes: dict = field(default_factory=dict)


def friend_graph(instance: GameInstance) -> UGraph:
    return UGraph(instance.n, instance.friend_masks)


def enemy_graph(instance: GameInstance) -> UGraph:
    return UGraph(instance.n, instance.enemy_masks)


def _require_complete(instance: GameInstance) -> None:
    if instance.mode is not Mode.COMPLETE:
        raise ModeMismatch("this solver requires a complete-mode instance")


def interval_rep_of(instance: GameInstance) -> IntervalRep | None:
    if instance.intervals is None:
        return None
    return IntervalRep(instance.intervals)


def dispatch_strategy(instance: GameInstance, problem: str = "cf") -> str:
    """Deterministic strategy tag for an instance/problem pair."""
    if problem not in ("cf", "cv", "sce", "scv"):
        raise ValidationError(f"unknown problem {problem!r}")
    if instance.mode is Mode.WITH_NEUTRALS:
        return NEUTRAL
    rep = interval_rep_of(instance)
    gf = friend_graph(instance)
    ge = enemy_graph(instance)
    if rep is not None:
        if rep.matches(gf):
            return INTERVAL_FRIEND
        if rep.matches(ge):
            return INTERVAL_ENEMY
    if ge.max_degree() <= 2:
        return ENEMY_DEGREE_2
    if gk.bipartition(gf)[0] is not None:
        return BIPARTITE_FRIEND
    if gk.bipartition(ge)[0] is not None:
        return BIPARTITE_ENEMY
    if problem == "sce" and gf.max_degree() <= 3:
        return FRIEND_DEGREE_3
    return GENERIC


# ---------------------------------------------------------------------------
# Strategy-aware clique/IS primitives. All return answers about the
# friendship graph; enemy-side strategies answer via independent sets of the
# enemy graph.
# ---------------------------------------------------------------------------


def _bipartite_max_is(g: UGraph, within: int) -> int:
    """Maximum independent set mask of a bipartite graph (Koenig)."""
    coloring, odd = gk.bipartition(g, within)
    if coloring is None:
        raise ValidationError("graph is not bipartite")
    left = 0
    for v, c in coloring.items():
        if c == 0:
            left |= 1 << v
    matching = gk.max_matching(g, within)
    mate = {}
    for u, v in matching:
        mate[u] = v
        mate[v] = u
    matched = 0
    for u in mate:
        matched |= 1 << u
    # alternating reachability from unmatched left vertices
    z = left & within & ~matched
    frontier = z
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            if left >> v & 1:  # left -> right via non-matching edges
                for u in iter_bits(g.adj[v] & within & ~z):
                    if mate.get(v) != u:
                        nxt |= 1 << u
            else:  # right -> left via matching edge
                u = mate.get(v)
                if u is not None and not (z >> u & 1):
                    nxt |= 1 << u
        nxt &= ~z
        z |= nxt
        frontier = nxt
    right = within & ~left
    cover = (left & within & ~z) | (right & z)
    return within & ~cover


def _interval_max_is(rep: IntervalRep, g: UGraph, within: int) -> int:
    """Greedy earliest-right-endpoint independent set; maximum on interval
    graphs."""
    picked = 0
    for v in sorted(iter_bits(within), key=lambda u: (rep.intervals[u][1], rep.intervals[u][0], u)):
        if picked and (g.adj[v] & picked):
            continue
        picked |= 1 << v
    return picked


def _interval_max_clique(rep: IntervalRep, g: UGraph, within: int) -> int:
    best = 0
    for v in iter_bits(within):
        point = rep.intervals[v][1]
        members = 0
        for u in iter_bits(within):
            lo, hi = rep.intervals[u]
            if lo <= point <= hi:
                members |= 1 << u
        if members.bit_count() > best.bit_count():
            best = members
    return best


class _Ops:
    """Clique primitives specialized per strategy, all exact."""

    def __init__(self, instance: GameInstance, strategy: str):
        self.instance = instance
        self.strategy = strategy
        self.gf = friend_graph(instance)
        self.ge = enemy_graph(instance)
        self.rep = interval_rep_of(instance)
        if strategy in (INTERVAL_FRIEND, INTERVAL_ENEMY):
            if self.rep is None:
                raise ValidationError(f"strategy {strategy} requires interval lines")
            self.rep.require_match(self.gf if strategy == INTERVAL_FRIEND else self.ge)
        if strategy == ENEMY_DEGREE_2 and self.ge.max_degree() > 2:
            raise DegreeTooHigh("strategy enemy-degree-2 requires enemy degree <= 2")
        if strategy == BIPARTITE_FRIEND and gk.bipartition(self.gf)[0] is None:
            raise ValidationError("strategy bipartite-friend requires a bipartite friendship graph")
        if strategy == BIPARTITE_ENEMY and gk.bipartition(self.ge)[0] is None:
            raise ValidationError("strategy bipartite-enemy requires a bipartite enemy graph")

    # -- maximum clique ----------------------------------------------------

    def max_clique_mask(self, within: int) -> int:
        s = self.strategy
        if not within:
            return 0
        if s == BIPARTITE_FRIEND:
            for v in iter_bits(within):
                nb = self.gf.adj[v] & within
                if nb:
                    return (1 << v) | (nb & -nb)
            return within & -within
        if s == BIPARTITE_ENEMY:
            return _bipartite_max_is(self.ge, within)
        if s == INTERVAL_FRIEND:
            return _interval_max_clique(self.rep, self.gf, within)
        if s == INTERVAL_ENEMY:
            return _interval_max_is(self.rep, self.ge, within)
        if s == ENEMY_DEGREE_2:
            return gk.max_is_degree2(self.ge, within).mask
        return gk.max_clique(self.gf, within).mask

    def clique_number(self, within: int) -> int:
        return self.max_clique_mask(within).bit_count()

    # -- fixed-size clique lookup -------------------------------------------

    def find_clique(self, k: int, within: int, through: int | None = None) -> int:
        """Mask of a clique of exactly size k (through a vertex if given),
        or 0 when none exists."""
        if k < 1 or within.bit_count() < k:
            return 0
        if through is not None and not (within >> through & 1):
            return 0
        s = self.strategy
        if s in (GENERIC, FRIEND_DEGREE_3, BIPARTITE_FRIEND):
            c = gk.has_clique_of_size(self.gf, k, through=through, within=within)
            return 0 if c is None else c.mask
        # enemy-side strategies: take a maximum independent set and trim
        if through is None:
            m = self.max_clique_mask(within)
            return self._trim(m, k) if m.bit_count() >= k else 0
        rest = within & ~(1 << through) & ~self.ge.adj[through]
        best = self.max_clique_mask(rest) | (1 << through)
        return self._trim_keep(best, k, through) if best.bit_count() >= k else 0

    @staticmethod
    def _trim(mask: int, k: int) -> int:
        out = 0
        for v in iter_bits(mask):
            if k == 0:
                break
            out |= 1 << v
            k -= 1
        return out

    @staticmethod
    def _trim_keep(mask: int, k: int, keep: int) -> int:
        out = 1 << keep
        k -= 1
        for v in iter_bits(mask & ~(1 << keep)):
            if k == 0:
                break
            out |= 1 << v
            k -= 1
        return out

    def in_clique(self, v: int, k: int, within: int) -> bool:
        s = self.strategy
        if s in (GENERIC, FRIEND_DEGREE_3):
            return gk.vertex_in_clique_of_size(self.gf, v, k, within)
        if s == BIPARTITE_FRIEND:
            if k > 2:
                return False
            if k == 2:
                return bool(self.gf.adj[v] & within)
            return True
        return self.find_clique(k, within, through=v) != 0

    # -- partition a level into cliques of exactly size k --------------------

    def partition_level(self, level_mask: int, k: int) -> list[Coalition] | None:
        s = self.strategy
        cnt = level_mask.bit_count()
        if cnt % k:
            return None
        if k == 1:
            return [Coalition((v,)) for v in iter_bits(level_mask)]
        if s == BIPARTITE_FRIEND:
            # k can only be 2: a perfect matching of the level
            pairs = gk.max_matching(self.gf, level_mask)
            if 2 * len(pairs) != cnt:
                return None
            return [Coalition(p) for p in sorted(tuple(sorted(p)) for p in pairs)]
        if s == INTERVAL_FRIEND:
            return gk.interval_clique_partition(self.rep, self.gf, k, level_mask)
        if s in (BIPARTITE_ENEMY, INTERVAL_ENEMY, ENEMY_DEGREE_2):
            q = cnt // k
            if s == BIPARTITE_ENEMY:
                return self._bipartite_enemy_level(level_mask, k, q)
            if s == INTERVAL_ENEMY:
                colors = gk.interval_coloring(self.rep, self.ge, q, level_mask)
            else:
                colors = gk.k_coloring(self.ge, q, level_mask)
            if colors is None:
                return None
            return _classes_of(colors, k)
        return gk.partition_into_cliques_of_size(self.gf, k, level_mask)

    def _bipartite_enemy_level(self, level_mask: int, k: int, q: int) -> list[Coalition] | None:
        if q == 1:
            if any(self.ge.adj[v] & level_mask for v in iter_bits(level_mask)):
                return None
            return [Coalition.from_mask(level_mask)]
        if q > 2:
            # two independent sets bound the level size at 2k for bipartite
            # enemy graphs, so this cannot happen; stay safe anyway
            colors = gk.k_coloring(self.ge, q, level_mask)
            return None if colors is None else _classes_of(colors, k)
        # choose one side per component so the first class has exactly k
        comps = self.ge.components(level_mask)
        sides: list[tuple[int, int]] = []
        for comp in comps:
            col, odd = gk.bipartition(self.ge, comp)
            if col is None:
                return None
            a = 0
            for v, c in col.items():
                if c == 0:
                    a |= 1 << v
            sides.append((a, comp & ~a))
        target = k
        reach = {0: []}
        for a, b in sides:
            nxt: dict[int, list[int]] = {}
            for tot, picks in reach.items():
                for side in (a, b):
                    t = tot + side.bit_count()
                    if t <= target and t not in nxt:
                        nxt[t] = picks + [side]
            reach = nxt
        if target not in reach:
            return None
        first = 0
        for side in reach[target]:
            first |= side
        second = level_mask & ~first
        out = [Coalition.from_mask(first)]
        if second:
            out.append(Coalition.from_mask(second))
        return out


def _classes_of(colors: dict[int, int], k: int) -> list[Coalition] | None:
    groups: dict[int, list[int]] = {}
    for v, c in colors.items():
        groups.setdefault(c, []).append(v)
    out = []
    for c in sorted(groups):
        if len(groups[c]) != k:
            return None
        out.append(Coalition.of(groups[c]))
    return out


# ---------------------------------------------------------------------------
# CF: find a core stable partition (always exists in complete mode)
# ---------------------------------------------------------------------------


def solve_cf(instance: GameInstance, strategy: str | None = None) -> Partition:
    """Greedy removal of maximum friendship cliques; the result is core
    stable."""
    _require_complete(instance)
    ops = _Ops(instance, strategy or dispatch_strategy(instance, "cf"))
    remaining = instance.all_mask
    groups: list[Coalition] = []
    while remaining:
        m = ops.max_clique_mask(remaining)
        if not m:
            raise HgameError("internal: empty clique from nonempty vertex set")
        groups.append(Coalition.from_mask(m))
        remaining &= ~m
    return Partition.of(groups)


# ---------------------------------------------------------------------------
# CV: verify core stability
# ---------------------------------------------------------------------------


def verify_cv(
    instance: GameInstance, partition: Partition, strategy: str | None = None
) -> BlockingCertificate | None:
    """None iff core stable. Processes coalitions largest first: a coalition
    that is not a friendship clique yields an aggrieved singleton; otherwise
    a strictly larger clique among the not-yet-processed agents blocks."""
    _require_complete(instance)
    validate_partition(instance, partition)
    ops = _Ops(instance, strategy or dispatch_strategy(instance, "cv"))
    ordered = sorted(partition.coalitions, key=lambda c: (-len(c), c.members))
    remaining = instance.all_mask
    for coal in ordered:
        cm = coal.mask
        for a in coal:
            if instance.enemy_masks[a] & cm:
                cert = is_blocking(instance, partition, Coalition((a,)))
                if cert is None:
                    raise HgameError("internal: aggrieved singleton does not block")
                return cert
        bigger = ops.find_clique(len(coal) + 1, remaining)
        if bigger:
            cert = is_blocking(instance, partition, Coalition.from_mask(bigger))
            if cert is None:
                raise HgameError("internal: found clique does not block")
            return cert
        remaining &= ~cm
    return None


# ---------------------------------------------------------------------------
# Clique level decomposition and SCE / SCV
# ---------------------------------------------------------------------------


def compute_levels(instance: GameInstance, strategy: str | None = None) -> LevelSets:
    """Peel agents by the largest clique size they participate in among the
    remaining agents, from n down to 1."""
    _require_complete(instance)
    ops = _Ops(instance, strategy or dispatch_strategy(instance, "sce"))
    n = instance.n
    masks = [0] * (n + 1)
    alive = instance.all_mask
    k = n
    while alive:
        omega = ops.clique_number(alive)
        k = min(k, omega)
        x = 0
        for v in iter_bits(alive):
            if ops.in_clique(v, k, alive):
                x |= 1 << v
        masks[k] = x
        alive &= ~x
        k -= 1
    return LevelSets(n, tuple(masks))


def exists_sce(instance: GameInstance, strategy: str | None = None) -> Partition | None:
    """A strictly core stable partition, or None if there is none: every
    level must split into friendship cliques of exactly its size."""
    _require_complete(instance)
    strategy = strategy or dispatch_strategy(instance, "sce")
    ops = _Ops(instance, strategy)
    levels = compute_levels(instance, strategy)
    groups: list[Coalition] = []
    for k in levels.nonempty():
        blocks = ops.partition_level(levels.masks[k], k)
        if blocks is None:
            return None
        for b in blocks:
            if len(b) != k:
                raise HgameError("internal: level block of wrong size")
        groups.extend(blocks)
    if instance.n == 0:
        return Partition(())
    witness = Partition.of(groups)
    if verify_scv(instance, witness, strategy) is not None:
        raise HgameError("internal: strict-core witness failed verification")
    return witness


def verify_scv(
    instance: GameInstance, partition: Partition, strategy: str | None = None
) -> BlockingCertificate | None:
    """None iff strictly core stable.

    Criterion: all coalitions are friendship cliques and every agent peeled
    at level k sits in a coalition of size exactly k. Certificates: an
    aggrieved singleton for a non-clique coalition, else a size-k clique
    through a violating agent at the largest violating level (largest-first
    is what makes the clique weakly blocking).
    """
    _require_complete(instance)
    validate_partition(instance, partition)
    strategy = strategy or dispatch_strategy(instance, "scv")
    ops = _Ops(instance, strategy)
    for coal in sorted(partition.coalitions):
        cm = coal.mask
        for a in coal:
            if instance.enemy_masks[a] & cm:
                cert = is_blocking(instance, partition, Coalition((a,)))
                if cert is None:
                    raise HgameError("internal: aggrieved singleton does not block")
                return cert
    levels = compute_levels(instance, strategy)
    sizes = [0] * instance.n
    for coal in partition.coalitions:
        for a in coal:
            sizes[a] = len(coal)
    for k in range(instance.n, 0, -1):
        violators = [v for v in iter_bits(levels.masks[k]) if sizes[v] != k]
        if not violators:
            continue
        p = violators[0]
        bmask = ops.find_clique(k, levels.masks[k], through=p)
        if not bmask:
            raise HgameError("internal: level member without a level clique")
        cert = is_weakly_blocking(instance, partition, Coalition.from_mask(bmask))
        if cert is None:
            raise HgameError("internal: level certificate does not weakly block")
        return cert
    return None


# ---------------------------------------------------------------------------
# Bounded variants
# ---------------------------------------------------------------------------


def exists_ce_bounded_coalition(
    instance: GameInstance, k: int, strategy: str | None = None
) -> Partition | None:
    """Core stable partition with max coalition size <= k: exists iff the
    friendship clique number is <= k (a larger clique blocks everything)."""
    _require_complete(instance)
    if k < 1:
        raise ValidationError("coalition size bound must be >= 1")
    ops = _Ops(instance, strategy or dispatch_strategy(instance, "cf"))
    if instance.n == 0:
        return Partition(())
    if ops.clique_number(instance.all_mask) > k:
        return None
    witness = solve_cf(instance, strategy)
    if witness.max_coalition_size() > k:
        raise HgameError("internal: greedy partition exceeds the clique number")
    return witness


def exists_sce_bounded_coalition(
    instance: GameInstance, k: int, strategy: str | None = None
) -> Partition | None:
    """Strictly core stable partition with max coalition size <= k."""
    _require_complete(instance)
    if k < 1:
        raise ValidationError("coalition size bound must be >= 1")
    gf = friend_graph(instance)
    if k == 2:
        # no triangle, and the non-isolated vertices have a perfect matching
        if gk.has_clique_of_size(gf, 3) is not None:
            return None
        nonisolated = 0
        for v in range(instance.n):
            if gf.adj[v]:
                nonisolated |= 1 << v
        pairs = gk.max_matching(gf, nonisolated)
        if 2 * len(pairs) != nonisolated.bit_count():
            return None
        groups = [Coalition(tuple(sorted(p))) for p in pairs]
        groups += [Coalition((v,)) for v in iter_bits(instance.all_mask & ~nonisolated)]
        witness = Partition.of(groups) if instance.n else Partition(())
        if verify_scv(instance, witness) is not None:
            raise HgameError("internal: matching witness failed strict verification")
        return witness
    ops = _Ops(instance, strategy or dispatch_strategy(instance, "sce"))
    if instance.n and ops.clique_number(instance.all_mask) > k:
        return None
    return exists_sce(instance, strategy)


def exists_ce_bounded_partitions(
    instance: GameInstance,
    k: int,
    strategy: str | None = None,
    budget: int = 10_000_000,
) -> Partition | None:
    """Core stable partition with at most k coalitions.

    k = 1 needs an empty enemy graph; k = 2 is polynomial (one bipartition
    class per enemy component must be a maximum independent set of the
    component); k >= 3 falls back to exact search over proper colorings of
    the enemy graph with a stability check per candidate.
    """
    _require_complete(instance)
    if k < 1:
        raise ValidationError("partition count bound must be >= 1")
    n = instance.n
    if n == 0:
        return Partition(())
    ge = enemy_graph(instance)
    max_enemy_deg = ge.max_degree()
    if k >= max_enemy_deg + 1 or k >= n:
        # every core stable partition has at most (enemy degree + 1)
        # nonempty coalitions, and the greedy one is core stable
        witness = solve_cf(instance, strategy)
        if len(witness) > k:
            raise HgameError("internal: greedy partition exceeds enemy degree bound")
        return witness
    if k == 1:
        if any(m for m in instance.enemy_masks):
            return None
        return Partition.of([range(n)])
    if k == 2:
        groups = _two_class_stable(instance, ge)
        if groups is None:
            return None
        witness = Partition.of(groups)
        if verify_cv(instance, witness, strategy) is not None:
            raise HgameError("internal: two-class witness is not stable")
        return witness
    return _search_bounded_partitions(instance, k, strict=False, budget=budget, strategy=strategy)


def _two_class_stable(instance: GameInstance, ge: UGraph) -> list[Coalition] | None:
    """Two-coalition core stable partition: a maximum independent set of the
    enemy graph whose complement is also independent. Exists iff the enemy
    graph is bipartite and in every component one bipartition class is a
    maximum independent set of that component."""
    first = 0
    for comp in ge.components():
        col, _odd = gk.bipartition(ge, comp)
        if col is None:
            return None
        a = 0
        for v, c in col.items():
            if c == 0:
                a |= 1 << v
        b = comp & ~a
        alpha = _bipartite_max_is(ge, comp).bit_count()
        if a.bit_count() == alpha:
            first |= a
        elif b.bit_count() == alpha:
            first |= b
        else:
            return None
    second = instance.all_mask & ~first
    out = [Coalition.from_mask(first)]
    if second:
        out.append(Coalition.from_mask(second))
    return out


def exists_sce_bounded_partitions(
    instance: GameInstance,
    k: int,
    strategy: str | None = None,
    budget: int = 10_000_000,
) -> Partition | None:
    """Strictly core stable partition with at most k coalitions. All strict
    witnesses share the same coalition count (each level contributes its
    size divided by the clique size), so the bound is a pure arithmetic
    check on top of strict existence."""
    _require_complete(instance)
    if k < 1:
        raise ValidationError("partition count bound must be >= 1")
    witness = exists_sce(instance, strategy)
    if witness is None:
        return None
    if len(witness) <= k:
        return witness
    return None


def _search_bounded_partitions(
    instance: GameInstance, k: int, strict: bool, budget: int, strategy: str | None
) -> Partition | None:
    """Exact search over partitions into <= k friendship cliques, i.e. over
    proper colorings of the enemy graph, checking stability per candidate.
    Documented exponential; guarded by a node budget."""
    n = instance.n
    ge = enemy_graph(instance)
    order = sorted(range(n), key=lambda v: -(ge.adj[v]).bit_count())
    colors = [-1] * n
    nodes = 0

    def candidate() -> Partition:
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(colors[v], []).append(v)
        return Partition.of(groups.values())

    result: Partition | None = None

    def rec(i: int, used: int) -> bool:
        nonlocal nodes, result
        if i == n:
            part = candidate()
            check = verify_scv if strict else verify_cv
            if check(instance, part, strategy) is None:
                result = part
                return True
            return False
        v = order[i]
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"bounded-partition search exceeded {budget} nodes")
        for c in range(min(k, used + 1)):
            ok = True
            for u in iter_bits(ge.adj[v]):
                if colors[u] == c:
                    ok = False
                    break
            if ok:
                colors[v] = c
                if rec(i + 1, max(used, c + 1)):
                    return True
                colors[v] = -1
        return False

    rec(0, 0)
    return result


# ---------------------------------------------------------------------------
# Enemy-degree-2 characterization of strict core existence
# ---------------------------------------------------------------------------


def sce_enemy_degree2(instance: GameInstance) -> bool:
    """Strict core existence when every agent has at most two enemies:
    components of the enemy graph must be (1) only triangles, or (2) only
    odd paths, or (3) only even paths and even cycles."""
    _require_complete(instance)
    ge = enemy_graph(instance)
    if ge.max_degree() > 2:
        raise DegreeTooHigh("enemy graph degree exceeds 2")
    comps = gk.degree2_decompose(ge)
    if not comps:
        return True
    only_c3 = all(c.kind == "cycle" and len(c.vertices) == 3 for c in comps)
    only_odd_paths = all(
        c.kind in ("path", "singleton") and len(c.vertices) % 2 == 1 for c in comps
    )
    only_even = all(
        c.kind in ("path", "cycle") and len(c.vertices) % 2 == 0 for c in comps
    )
    return only_c3 or only_odd_paths or only_even


# ---------------------------------------------------------------------------
# Invariant helper used throughout the test suite
# ---------------------------------------------------------------------------


def check_stable_partition_invariants(instance: GameInstance, partition: Partition) -> None:
    """Structural facts every verified-stable partition must satisfy."""
    from .preferences import is_friendship_clique
    from .model import degree_profile

    for c in partition.coalitions:
        if not is_friendship_clique(instance, c):
            raise HgameError(f"stable partition has a non-clique coalition {c.members}")
    if instance.n:
        omega = gk.clique_number(friend_graph(instance))
        if partition.max_coalition_size() != omega:
            raise HgameError("largest stable coalition must equal the clique number")
        if len(partition) > degree_profile(instance).max_enemy_degree + 1:
            raise HgameError("stable partition has more coalitions than enemy degree + 1")
