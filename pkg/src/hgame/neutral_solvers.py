"""Stability with neutral relations: blocking search, verification, and
core / strict-core existence by exact search over enemy-free partitions.

Two facts drive the search design:

* In any (strictly) core stable partition every coalition is enemy-free,
  since an agent with an enemy deviates alone. Blocking coalitions of an
  enemy-free partition are themselves enemy-free, and can be assumed
  connected in the friendship graph (a component of a blocking set blocks
  on its own).
* Stability depends only on each agent's (enemy, friend) counts. Splitting
  a coalition into its friendship components preserves every count, so the
  unbounded existence search may restrict itself to coalitions that are
  enemy-free and friendship-connected. With a partition-count bound that
  canonicalization is unsound (merging matters), so bounded searches range
  over arbitrary enemy-free sets.

All searches are budgeted and raise BudgetExceeded instead of hanging.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded, HgameError
from .model import Coalition, GameInstance, Partition, iter_bits, validate_partition
from .preferences import BlockingCertificate, is_blocking, is_weakly_blocking

DEFAULT_BUDGET = 10_000_000


def _is_connected(fm: tuple, mask: int) -> bool:
    if not mask:
        return True
    comp = mask & -mask
    frontier = comp
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= fm[v]
        nxt &= mask & ~comp
        comp |= nxt
        frontier = nxt
    return comp == mask


@dataclass
class SearchStats:
    nodes: int = 0
    budget: int = DEFAULT_BUDGET
    candidates: list[int] | None = None  # trace of enumerated coalition masks

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")


def _current_friend_counts(instance: GameInstance, partition: Partition) -> list[int]:
    out = [0] * instance.n
    for c in partition.coalitions:
        m = c.mask
        for a in iter_bits(m):
            out[a] = (instance.friend_masks[a] & m & ~(1 << a)).bit_count()
    return out


def _make_alpha(instance: GameInstance) -> "callable":
    """Memoized maximum enemy-free subset of a mask (a maximum independent
    set of the enemy graph), as (size, lex-smallest witness mask). Exact up
    to 22 bits; beyond that the mask itself is used as an upper bound."""
    em = instance.enemy_masks
    cache: dict[int, tuple[int, int]] = {}

    def alpha(mask: int) -> tuple[int, int]:
        cnt = mask.bit_count()
        if cnt > 22:
            return cnt, mask
        got = cache.get(mask)
        if got is not None:
            return got

        def rec(m: int) -> tuple[int, int]:
            if not m:
                return 0, 0
            low = m & -m
            v = low.bit_length() - 1
            rest = m & ~low
            tsize, twit = rec(rest & ~em[v])
            take = (tsize + 1, twit | low)
            if take[0] == m.bit_count():
                return take
            skip = rec(rest)
            return take if take[0] >= skip[0] else skip

        res = rec(mask)
        cache[mask] = res
        return res

    return alpha


def _capped_fixpoint(
    instance: GameInstance,
    alpha,
    cur_f: list[int],
    closed_mask: int,
    capped: int,
    seeds: int,
) -> int:
    """Newly capped agents: a closed agent is capped once her current
    friend count meets the best she could get in any enemy-free set that
    avoids capped agents (capped agents cannot strictly improve, so no
    strictly blocking coalition contains them). Capping one agent can cap
    her neighbors, so iterate to a fixpoint from the seed agents."""
    fm = instance.friend_masks
    queue = list(iter_bits(seeds & closed_mask & ~capped))
    added = 0
    while queue:
        a = queue.pop()
        bit = 1 << a
        if (capped | added) & bit:
            continue
        avail = fm[a] & ~(capped | added)
        if cur_f[a] >= avail.bit_count() or cur_f[a] >= alpha(avail)[0]:
            added |= bit
            queue.extend(iter_bits(fm[a] & closed_mask & ~(capped | added)))
    return added


def _blocks_search(
    instance: GameInstance,
    required,
    strict_over,
    *,
    weak: bool,
    allowed: int,
    must_touch: int,
    stats: SearchStats,
    find_all_min: bool,
) -> int | None:
    """DFS over connected enemy-free sets whose members all reach their
    required friend count inside the set (weak mode additionally needs one
    member strictly above her ``strict_over`` threshold).

    Returns the first valid mask, or with ``find_all_min`` the valid mask
    minimal by (size, member list). Enemy-free here is relative to the
    instance; ``allowed`` restricts the universe, ``must_touch`` must be
    intersected. ``required``/``strict_over`` only need ``__getitem__``.
    """
    fm = instance.friend_masks
    em = instance.enemy_masks
    best: tuple[int, tuple[int, ...]] | None = None
    best_mask: int | None = None

    def consider(bmask: int) -> bool:
        nonlocal best, best_mask
        # exact validity check for the current set
        strict_seen = False
        for a in iter_bits(bmask):
            cnt = (fm[a] & bmask).bit_count()
            if cnt < required[a]:
                return False
            if cnt > strict_over[a]:
                strict_seen = True
        if not strict_seen:
            return False
        if not (bmask & must_touch):
            return False
        key = (bmask.bit_count(), tuple(iter_bits(bmask)))
        if best is None or key < best:
            best = key
            best_mask = bmask
        return True

    def grow(bmask: int, enm: int, ext: list[int], exti: int, banned: int, base: int) -> bool:
        stats.tick()
        if consider(bmask) and not find_all_min:
            return True
        if best is not None and not find_all_min:
            return True
        # vertices that could still join this set on some extension branch
        pool = bmask | (base & ~banned & ~enm & ~bmask)
        cap = best[0] if (best is not None and find_all_min) else None
        for a in iter_bits(bmask):
            if (fm[a] & pool).bit_count() < required[a]:
                return False
        if not (pool & must_touch):
            return False
        if cap is not None and bmask.bit_count() >= cap:
            return False  # only strictly smaller sets can beat the incumbent
        skipped = 0
        for j in range(exti, len(ext)):
            v = ext[j]
            vbit = 1 << v
            if not (vbit & bmask) and not (em[v] & bmask):
                nbmask = bmask | vbit
                ext2 = list(ext)
                for u in iter_bits(fm[v] & base & ~nbmask):
                    if u not in ext2:
                        ext2.append(u)
                if grow(nbmask, enm | em[v], ext2, j + 1, banned | skipped, base):
                    if not find_all_min:
                        return True
            skipped |= vbit
        return False

    if not find_all_min and must_touch != allowed:
        if not weak:
            # strict decision mode: every member of a block strictly
            # improves, so a block touching must_touch has a root inside
            # it; enumerate around those roots (prior roots banned to
            # dedupe)
            prior = 0
            for root in iter_bits(must_touch & allowed):
                if required[root] > (fm[root] & allowed).bit_count():
                    prior |= 1 << root
                    continue
                base = allowed & ~prior & ~(1 << root)
                ext = list(iter_bits(fm[root] & base))
                if grow(1 << root, em[root], ext, 0, 0, base):
                    return best_mask
                prior |= 1 << root
            return best_mask
        # weak decision mode: some member improves strictly; root the
        # enumeration at each potential strict improver, forcing the root
        # strict (duplicates across roots are fine, we stop at the first
        # hit; must_touch is enforced through the reachability pool)
        class _Boost:
            __slots__ = ("inner", "root", "over")

            def __init__(self, inner, root: int, over):
                self.inner = inner
                self.root = root
                self.over = over

            def __getitem__(self, a: int) -> int:
                base_req = self.inner[a]
                if a == self.root:
                    return max(base_req, self.over[a] + 1)
                return base_req

        base_required = required
        for root in iter_bits(allowed):
            if strict_over[root] + 1 > (fm[root] & allowed).bit_count():
                continue
            base = allowed & ~(1 << root)
            ext = list(iter_bits(fm[root] & base))
            required = _Boost(base_required, root, strict_over)
            hit = grow(1 << root, em[root], ext, 0, 0, base)
            required = base_required
            if hit:
                return best_mask
        return best_mask

    # friendship components of the allowed set: a block is connected, so
    # roots whose component misses must_touch can be skipped outright
    comp_left = allowed
    components: list[int] = []
    while comp_left:
        start = comp_left & -comp_left
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= fm[v]
            nxt &= allowed & ~comp
            comp |= nxt
            frontier = nxt
        components.append(comp)
        comp_left &= ~comp
    for comp in components:
        if not (comp & must_touch):
            continue
        for root in iter_bits(comp):
            base = comp >> root << root & ~(1 << root)
            ext = list(iter_bits(fm[root] & base))
            if grow(1 << root, em[root], ext, 0, 0, base):
                if not find_all_min:
                    return best_mask
    return best_mask


def find_blocking_neutral(
    instance: GameInstance,
    partition: Partition,
    weak: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> BlockingCertificate | None:
    """A (weakly if ``weak``) blocking coalition, minimal by size then by
    member list, or None iff the partition is (strictly if ``weak``) core
    stable. Accepts complete-mode instances as well."""
    validate_partition(instance, partition)
    if instance.n == 0:
        return None
    # an agent with an enemy in her own coalition blocks alone
    from .preferences import aggrieved_singleton

    lone = aggrieved_singleton(instance, partition)
    if lone is not None:
        cert = is_blocking(instance, partition, Coalition((lone,)))
        if cert is None:
            raise HgameError("internal: aggrieved singleton does not block")
        return cert
    cur_f = _current_friend_counts(instance, partition)
    required = [f if weak else f + 1 for f in cur_f]
    stats = SearchStats(budget=budget)
    mask = _blocks_search(
        instance,
        required,
        cur_f,
        weak=weak,
        allowed=instance.all_mask,
        must_touch=instance.all_mask,
        stats=stats,
        find_all_min=True,
    )
    if mask is None:
        return None
    build = is_weakly_blocking if weak else is_blocking
    cert = build(instance, partition, Coalition.from_mask(mask))
    if cert is None:
        raise HgameError("internal: blocking search returned a non-blocking set")
    return cert


# ---------------------------------------------------------------------------
# Existence by exact search over enemy-free partitions
# ---------------------------------------------------------------------------


def _twin_classes(instance: GameInstance) -> list[list[int]]:
    """Groups of interchangeable agents: same relations to everyone else
    and to each other (swapping two of them is a game automorphism)."""
    n = instance.n
    fm, em = instance.friend_masks, instance.enemy_masks
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in range(n):
        for b in range(a + 1, n):
            pair = (1 << a) | (1 << b)
            if fm[a] & ~pair != fm[b] & ~pair or em[a] & ~pair != em[b] & ~pair:
                continue
            if bool(fm[a] >> b & 1) != bool(fm[b] >> a & 1):
                continue
            parent[find(b)] = find(a)
    groups: dict[int, list[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), []).append(a)
    return [sorted(g) for g in groups.values() if len(g) > 1]


def _enemy_free_sets_through(
    instance: GameInstance,
    pivot: int,
    remaining: int,
    *,
    connected: bool,
    max_size: int | None,
    stats: SearchStats,
    twins: list[list[int]] | None = None,
) -> list[int]:
    """All enemy-free subsets of ``remaining`` containing ``pivot``,
    connected in the friendship graph when requested. Ordered largest
    first, then lexicographically. Each set is produced exactly once
    (members are taken in nondecreasing frontier position)."""
    fm = instance.friend_masks
    em = instance.enemy_masks
    avail = remaining & ~(1 << pivot)
    out: list[int] = []

    def grow(bmask: int, ext: list[int], exti: int) -> None:
        stats.tick()
        out.append(bmask)
        if max_size is not None and bmask.bit_count() >= max_size:
            return
        for j in range(exti, len(ext)):
            v = ext[j]
            vbit = 1 << v
            if vbit & bmask or (em[v] & bmask):
                continue
            nbmask = bmask | vbit
            if connected:
                ext2 = list(ext)
                for u in iter_bits(fm[v] & avail & ~nbmask):
                    if u not in ext2:
                        ext2.append(u)
            else:
                ext2 = ext
            grow(nbmask, ext2, j + 1)

    if connected:
        ext0 = list(iter_bits(fm[pivot] & avail))
    else:
        ext0 = list(iter_bits(avail))
    grow(1 << pivot, ext0, 0)
    if twins:
        # symmetry breaking: only use a prefix of each class of
        # interchangeable agents still unassigned
        kept = []
        for c in out:
            ok = True
            for cls in twins:
                used = [a for a in cls if c >> a & 1]
                if not used:
                    continue
                prefix = [a for a in cls if remaining >> a & 1][: len(used)]
                if used != prefix:
                    ok = False
                    break
            if ok:
                kept.append(c)
        out = kept
    out.sort(key=lambda m: (-m.bit_count(), tuple(iter_bits(m))))
    if stats.candidates is not None:
        stats.candidates.extend(out)
    return out


def _exists_stable_neutral(
    instance: GameInstance,
    *,
    weak: bool,
    budget: int,
    max_partitions: int | None = None,
    max_coalition: int | None = None,
    trace: list[int] | None = None,
) -> Partition | None:
    """DFS over enemy-free partitions; branch on the lowest unassigned
    agent. Each closed coalition fixes its members' scores, and a closure
    is pruned when some set of already-closed agents (touching the new
    coalition) blocks: such a set blocks every completion."""
    n = instance.n
    if n == 0:
        return Partition(())
    stats = SearchStats(budget=budget, candidates=trace)
    connected = max_partitions is None and max_coalition is None
    fm = instance.friend_masks
    alpha = _make_alpha(instance)
    cur_f = [0] * n
    closed: list[int] = []
    closed_mask = 0
    capped = 0  # closed agents that can never strictly improve again
    failed: set = set()

    class _Thresholds:
        """Per-agent score thresholds for the closure block search: closed
        agents compare against their fixed score, unassigned ones against
        the best final score any completion could still give them. A block
        beating the thresholds of all its members blocks every completion."""

        __slots__ = ("delta", "remaining")

        def __init__(self, delta: int, remaining: int):
            self.delta = delta
            self.remaining = remaining

        def __getitem__(self, a: int) -> int:
            if closed_mask >> a & 1:
                return cur_f[a] + self.delta
            ceiling = potub_cache.get(a)
            if ceiling is None:
                ceiling = alpha(fm[a] & self.remaining)[0]
                potub_cache[a] = ceiling
            return ceiling + self.delta

    potub_cache: dict[int, int] = {}

    def closure_blocked(new_mask: int) -> bool:
        remaining_after = instance.all_mask & ~closed_mask
        potub_cache.clear()
        dropped = 0
        for a in iter_bits(new_mask):
            dropped |= fm[a]
        dropped &= remaining_after
        touch = new_mask | dropped
        # unassigned agents may strengthen a block when their reachable
        # ceiling is already beaten; a few friendship hops around the
        # closure suffice (pruning only, the closed side stays complete)
        reach = touch
        for _hop in range(3):
            nxt = 0
            for v in iter_bits(reach):
                nxt |= fm[v]
            nxt &= ~reach
            if not nxt:
                break
            reach |= nxt
        allowed = (closed_mask if weak else closed_mask & ~capped) | (remaining_after & reach)
        required = _Thresholds(0 if weak else 1, remaining_after)
        strict_over = _Thresholds(0, remaining_after)
        # quick reject: someone near the closure must be able to gain at all
        tempted = False
        for a in iter_bits(touch):
            if (fm[a] & allowed).bit_count() >= required[a] and (
                weak or (fm[a] & allowed).bit_count() > strict_over[a]
            ):
                tempted = True
                break
        if not tempted:
            return False
        found = _blocks_search(
            instance,
            required,
            strict_over,
            weak=weak,
            allowed=allowed,
            must_touch=touch,
            stats=stats,
            find_all_min=False,
        )
        return found is not None

    def env_signature(region: int) -> tuple:
        """Scores of closed agents whose scores can still matter for the
        region: reachable from it through friendships among closed agents
        that could join a future blocking coalition (for strict blocking,
        capped agents never can)."""
        relevant = closed_mask if weak else closed_mask & ~capped
        frontier = 0
        for v in iter_bits(region):
            frontier |= fm[v]
        frontier &= relevant
        seen = 0
        while frontier:
            seen |= frontier
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= fm[v]
            frontier = nxt & relevant & ~seen
        return (region, seen, tuple(cur_f[a] for a in iter_bits(seen)))

    def components_of(mask: int) -> list[int]:
        comps = []
        left = mask
        while left:
            start = left & -left
            comp = start
            frontier = start
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= fm[v]
                nxt &= mask & ~comp
                comp |= nxt
                frontier = nxt
            comps.append(comp)
            left &= ~comp
        return comps

    def close(cand: int) -> int:
        nonlocal closed_mask, capped
        for a in iter_bits(cand):
            cur_f[a] = (fm[a] & cand).bit_count()
        closed.append(cand)
        closed_mask |= cand
        newly = 0
        if not weak:
            newly = _capped_fixpoint(instance, alpha, cur_f, closed_mask, capped, cand)
        capped |= newly
        return newly

    def undo(cand: int, newly: int) -> None:
        nonlocal closed_mask, capped
        closed.pop()
        closed_mask &= ~cand
        capped &= ~newly
        for a in iter_bits(cand):
            cur_f[a] = 0

    twins = _twin_classes(instance)

    def candidates(pivot: int, region: int) -> list[int]:
        return _enemy_free_sets_through(
            instance,
            pivot,
            region,
            connected=connected,
            max_size=max_coalition,
            stats=stats,
            twins=twins,
        )

    em = instance.enemy_masks

    class _Done:
        __slots__ = ("flag",)

        def __init__(self) -> None:
            self.flag = False

    def dfs_structured(comps: tuple) -> bool:
        """Solve friendship components strictly left to right. A sentinel
        object marks the point where a component's agents are all assigned,
        which makes failure attributable: if a component never completes,
        that fact depends only on the component and the scores of the
        closed agents reachable from it, and is memoized. The suffix key
        does the same for the whole unassigned set, collapsing sibling
        arrangements that leave identical relevant boundaries."""
        if not comps:
            return True
        head = comps[0]
        if isinstance(head, _Done):
            head.flag = True
            return dfs_structured(comps[1:])
        sig = env_signature(head)
        if sig in failed:
            return False
        whole = 0
        for c in comps:
            if not isinstance(c, _Done):
                whole |= c
        suffix_sig = env_signature(whole) if whole != head else None
        if suffix_sig is not None and suffix_sig in failed:
            return False
        def pivot_key(v: int) -> tuple[int, int, int]:
            nb = fm[v] & head
            two_hop = 0
            for u in iter_bits(nb):
                two_hop += (fm[u] & head).bit_count()
            return (nb.bit_count(), two_hop, v)

        pivot = min(iter_bits(head), key=pivot_key)
        cands = candidates(pivot, head)
        # stability-aware order: coalitions that leave no member able to
        # improve again (under the capping fixpoint) are exactly how stable
        # partitions look locally, so try those first; probing is bounded
        # and only affects the order
        probe = min(len(cands), 24)
        if probe > 1:
            keys = []
            for idx in range(probe):
                cand = cands[idx]
                boundary = 0
                for a in iter_bits(cand):
                    cur_f[a] = (fm[a] & cand).bit_count()
                    boundary |= fm[a]
                newly = _capped_fixpoint(
                    instance, alpha, cur_f, closed_mask | cand, capped, cand
                )
                stranded = (cand & ~(capped | newly)).bit_count()
                hurt = (boundary & head & ~cand).bit_count()
                for a in iter_bits(cand):
                    cur_f[a] = 0
                keys.append((stranded + hurt, idx))
            keys.sort()
            cands = [cands[idx] for _s, idx in keys] + cands[probe:]
        done = _Done()
        for cand in cands:
            stats.tick()
            newly = close(cand)
            if not closure_blocked(cand):
                frags = components_of(head & ~cand)
                if dfs_structured(tuple(frags) + (done,) + comps[1:]):
                    return True
            undo(cand, newly)
        if not done.flag:
            failed.add(sig)
        if suffix_sig is not None:
            failed.add(suffix_sig)
        return False

    def dfs_flat(remaining: int) -> bool:
        """Bounded searches: coalitions may span friendship components, so
        solve over the whole remaining set without decomposition."""
        if not remaining:
            return True
        if max_partitions is not None:
            need_at_least = 1
            if max_coalition is not None:
                need_at_least = -(-remaining.bit_count() // max_coalition)
            if len(closed) + need_at_least > max_partitions:
                return False
        pivot = min(iter_bits(remaining), key=lambda v: ((fm[v] & remaining).bit_count(), v))
        for cand in candidates(pivot, remaining):
            stats.tick()
            newly = close(cand)
            if not closure_blocked(cand):
                if dfs_flat(remaining & ~cand):
                    return True
            undo(cand, newly)
        return False

    if connected:
        ok = dfs_structured(tuple(components_of(instance.all_mask)))
    else:
        ok = dfs_flat(instance.all_mask)
    if ok:
        return Partition.of(Coalition.from_mask(m).members for m in closed)
    return None


def exists_ce_neutral(
    instance: GameInstance, budget: int = DEFAULT_BUDGET, trace: list[int] | None = None
) -> Partition | None:
    """A core stable partition, or None. Accepts complete-mode inputs."""
    part = _exists_stable_neutral(instance, weak=False, budget=budget, trace=trace)
    return _reverify(instance, part, weak=False, budget=budget)


def exists_sce_neutral(
    instance: GameInstance, budget: int = DEFAULT_BUDGET, trace: list[int] | None = None
) -> Partition | None:
    """A strictly core stable partition, or None."""
    part = _exists_stable_neutral(instance, weak=True, budget=budget, trace=trace)
    return _reverify(instance, part, weak=True, budget=budget)


def exists_ce_neutral_bounded(
    instance: GameInstance,
    max_partitions: int | None = None,
    max_coalition: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Partition | None:
    """Core stable partition obeying the given bounds; stability is still
    checked against unrestricted blocking coalitions."""
    part = _exists_stable_neutral(
        instance,
        weak=False,
        budget=budget,
        max_partitions=max_partitions,
        max_coalition=max_coalition,
    )
    return _reverify(instance, part, weak=False, budget=budget)


def exists_sce_neutral_bounded(
    instance: GameInstance,
    max_partitions: int | None = None,
    max_coalition: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> Partition | None:
    part = _exists_stable_neutral(
        instance,
        weak=True,
        budget=budget,
        max_partitions=max_partitions,
        max_coalition=max_coalition,
    )
    return _reverify(instance, part, weak=True, budget=budget)


def _reverify(
    instance: GameInstance, part: Partition | None, *, weak: bool, budget: int
) -> Partition | None:
    if part is None:
        return None
    if find_blocking_neutral(instance, part, weak=weak, budget=budget) is not None:
        raise HgameError("internal: existence witness failed re-verification")
    return part
