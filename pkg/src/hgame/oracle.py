"""Independent brute-force ground truth for every solver and for the source
problems behind the gadget generators.

Everything here is deliberately naive: exhaustive enumeration behind hard
size guards that raise instead of truncating. Canonical coalition order is
increasing size, then lexicographic member list.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator

from .errors import SizeGuard
from .model import Coalition, GameInstance, Partition, iter_bits
from .graph_kernels import UGraph

PARTITION_GUARD = 12
SUBSET_GUARD = 20


def all_partitions(n: int) -> Iterator[Partition]:
    """All Bell(n) partitions of [0, n), via restricted growth strings."""
    if n > PARTITION_GUARD:
        raise SizeGuard(f"all_partitions guarded at n <= {PARTITION_GUARD}")
    if n == 0:
        yield Partition(())
        return

    code = [0] * n

    def rec(i: int, maxc: int) -> Iterator[Partition]:
        if i == n:
            groups: dict[int, list[int]] = {}
            for a, c in enumerate(code):
                groups.setdefault(c, []).append(a)
            yield Partition.of(groups.values())
            return
        for c in range(maxc + 2):
            code[i] = c
            yield from rec(i + 1, max(maxc, c))

    yield from rec(1, 0)


def canonical_coalitions(n: int) -> Iterator[Coalition]:
    """All nonempty coalitions in canonical order: size, then lex."""
    for size in range(1, n + 1):
        for members in combinations(range(n), size):
            yield Coalition(members)


def brute_stability(
    instance: GameInstance, partition: Partition, strict: bool
) -> Coalition | None:
    """First (weakly if ``strict``) blocking coalition in canonical order,
    or None iff the partition is (strictly) core stable.

    Direct evaluation of the definitions, sweeping all 2^n - 1 coalitions.
    """
    n = instance.n
    if n > SUBSET_GUARD:
        raise SizeGuard(f"brute_stability guarded at n <= {SUBSET_GUARD}")
    fm = instance.friend_masks
    em = instance.enemy_masks
    cur: list[tuple[int, int]] = []
    for a in range(n):
        m = partition.mask_of_agent(a) & ~(1 << a)
        cur.append(((em[a] & m).bit_count(), (fm[a] & m).bit_count()))

    def pref(e1: int, f1: int, e2: int, f2: int) -> bool:
        return e1 < e2 or (e1 == e2 and f1 > f2)

    for cand in canonical_coalitions(n):
        cmask = cand.mask
        ok = True
        any_strict = False
        for a in cand.members:
            others = cmask & ~(1 << a)
            e_new = (em[a] & others).bit_count()
            f_new = (fm[a] & others).bit_count()
            e_old, f_old = cur[a]
            if pref(e_old, f_old, e_new, f_new):
                ok = False
                break
            if pref(e_new, f_new, e_old, f_old):
                any_strict = True
            elif not strict:
                ok = False
                break
        if ok and any_strict:
            return cand
    return None


# ---------------------------------------------------------------------------
# Source problems of the hardness gadgets
# ---------------------------------------------------------------------------

SAT_VAR_GUARD = 20
GRAPH_GUARD = 15
SET_GUARD = 20


def brute_sat3(clauses: Iterable[tuple[int, ...]], n_vars: int) -> tuple[bool, ...] | None:
    """Satisfying assignment for clauses of nonzero DIMACS-style literals
    (variable i is literal i+1 / -(i+1)), or None. Exhaustive."""
    if n_vars > SAT_VAR_GUARD:
        raise SizeGuard(f"brute_sat3 guarded at {SAT_VAR_GUARD} variables")
    clauses = [tuple(c) for c in clauses]
    for bits in product((False, True), repeat=n_vars):
        if all(any((lit > 0) == bits[abs(lit) - 1] for lit in cl) for cl in clauses):
            return tuple(bits)
    return None


def brute_3coloring(g: UGraph) -> list[int] | None:
    """Exhaustive proper 3-coloring, or None."""
    if g.n > GRAPH_GUARD:
        raise SizeGuard(f"brute_3coloring guarded at {GRAPH_GUARD} vertices")
    for colors in product(range(3), repeat=g.n):
        if all(
            colors[u] != colors[v]
            for u in range(g.n)
            for v in iter_bits(g.adj[u] >> (u + 1) << (u + 1))
        ):
            return list(colors)
    return None


def brute_triangle_partition(g: UGraph) -> list[Coalition] | None:
    """Partition of all vertices into triangles, by exhaustive recursion."""
    if g.n > GRAPH_GUARD:
        raise SizeGuard(f"brute_triangle_partition guarded at {GRAPH_GUARD} vertices")
    if g.n % 3:
        return None

    out: list[Coalition] = []

    def rec(avail: int) -> bool:
        if not avail:
            return True
        v = (avail & -avail).bit_length() - 1
        rest = avail & ~(1 << v)
        for u, w in combinations(list(iter_bits(rest & g.adj[v])), 2):
            if g.adj[u] >> w & 1:
                out.append(Coalition((v, u, w)))
                if rec(avail & ~mask3(v, u, w)):
                    return True
                out.pop()
        return False

    def mask3(a: int, b: int, c: int) -> int:
        return (1 << a) | (1 << b) | (1 << c)

    return out if rec(g.all_mask) else None


def brute_exact_cover(n_elements: int, sets: list[tuple[int, ...]]) -> list[int] | None:
    """Indices of a subfamily covering every element exactly once, or None.
    Exhaustive over subfamilies, smallest index vector first."""
    if len(sets) > SET_GUARD:
        raise SizeGuard(f"brute_exact_cover guarded at {SET_GUARD} sets")
    full = (1 << n_elements) - 1
    masks = []
    for s in sets:
        m = 0
        for e in s:
            if not 0 <= e < n_elements:
                raise SizeGuard(f"element {e} out of range")
            m |= 1 << e
        masks.append(m)

    # include-first recursion gives the lexicographically smallest index list
    def rec2(i: int, covered: int, chosen: list[int]) -> list[int] | None:
        if covered == full:
            return list(chosen)
        if i == len(sets):
            return None
        if not (masks[i] & covered):
            chosen.append(i)
            r = rec2(i + 1, covered | masks[i], chosen)
            if r is not None:
                return r
            chosen.pop()
        return rec2(i + 1, covered, chosen)

    return rec2(0, 0, [])


def brute_independent_set(g: UGraph, k: int) -> Coalition | None:
    """Lexicographically first independent set of size ``k``, or None."""
    if g.n > SET_GUARD:
        raise SizeGuard(f"brute_independent_set guarded at {SET_GUARD} vertices")
    if k < 0:
        return None
    if k == 0:
        return Coalition(())
    for members in combinations(range(g.n), k):
        if all(not (g.adj[u] >> v & 1) for u, v in combinations(members, 2)):
            return Coalition(members)
    return None
