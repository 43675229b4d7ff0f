"""Gadget instance generators: the hardness reductions made executable,
plus random instances and parsers for the source-problem file formats.

Each generator builds its game from a source instance so that the source
answer and the game answer coincide; the round-trip tests against the
brute-force oracles are the deepest correctness checks in the repo. All
generators can also return a name map (structured label -> agent id) which
the CLI serializes as comments, since debugging a gadget without the
labels is hopeless.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    BadProbabilities,
    DegreeTooHigh,
    FrequencyExceeded,
    LiteralCountExceeded,
    LiteralCountMismatch,
    NotCubic,
    ParseError,
    ValidationError,
)
from .graph_kernels import UGraph, k_coloring
from .model import Coalition, GameInstance, Mode, Partition, iter_bits, new_instance


# ---------------------------------------------------------------------------
# Source-problem types and file formats
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF with DIMACS-style literals (+v / -v, 1-based variables)."""

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != 3:
                raise ValidationError("every clause must have exactly 3 literals")
            vs = [abs(l) for l in cl]
            if any(l == 0 or abs(l) > self.n_vars for l in cl):
                raise ValidationError(f"literal out of range in clause {cl}")
            if len(set(vs)) != 3:
                raise ValidationError(f"clause {cl} repeats a variable")

    def literal_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for cl in self.clauses:
            for lit in cl:
                counts[lit] = counts.get(lit, 0) + 1
        return counts

    def max_literal_occurrences(self) -> int:
        return max(self.literal_counts().values(), default=0)


@dataclass(frozen=True)
class X3cInstance:
    """Exact Cover by 3-Sets: elements 0..3n-1 and size-3 subsets."""

    n_elements: int
    sets: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n_elements % 3:
            raise ValidationError("element count must be a multiple of 3")
        for s in self.sets:
            if len(set(s)) != 3:
                raise ValidationError(f"set {s} must hold 3 distinct elements")
            if any(not 0 <= e < self.n_elements for e in s):
                raise ValidationError(f"set {s} has an element out of range")

    def element_frequency(self) -> int:
        counts = [0] * self.n_elements
        for s in self.sets:
            for e in s:
                counts[e] += 1
        return max(counts, default=0)


def parse_dimacs_cnf(text: str) -> CnfFormula:
    n_vars = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno)
            n_vars = int(parts[2])
            continue
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError as exc:
            raise ParseError(f"bad literal in {line!r}", lineno) from exc
    if n_vars is None:
        raise ParseError("missing 'p cnf' header")
    clauses: list[tuple[int, ...]] = []
    cur: list[int] = []
    for t in tokens:
        if t == 0:
            if cur:
                clauses.append(tuple(cur))
                cur = []
        else:
            cur.append(t)
    if cur:
        clauses.append(tuple(cur))
    for cl in clauses:
        if len(cl) != 3:
            raise ParseError(f"clause {cl} does not have exactly 3 literals")
    return CnfFormula(n_vars, tuple(clauses))  # type: ignore[arg-type]


def parse_edge_list(text: str) -> UGraph:
    """DIMACS-style graph: 'p edge <n> <m>' then 'e <u> <v>' with 1-based
    vertex ids; 'c' comment lines."""
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) < 3 or parts[1] not in ("edge", "col"):
                raise ParseError("expected 'p edge <n> <m>'", lineno)
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge before 'p' header", lineno)
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(f"edge ({parts[1]}, {parts[2]}) out of range", lineno)
            if u != v and (min(u, v), max(u, v)) not in {(min(a, b), max(a, b)) for a, b in edges}:
                edges.append((u, v))
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge' header")
    return UGraph.from_edges(n, edges)


def parse_x3c(text: str) -> X3cInstance:
    """Format: 'elements <3n>' then 'set <e1> <e2> <e3>' lines, 1-based."""
    n_elements = None
    sets: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "elements":
            n_elements = int(parts[1])
        elif parts[0] == "set":
            if n_elements is None:
                raise ParseError("set before 'elements' header", lineno)
            if len(parts) != 4:
                raise ParseError("expected 'set <e1> <e2> <e3>'", lineno)
            es = tuple(int(p) - 1 for p in parts[1:])
            if any(not 0 <= e < n_elements for e in es):
                raise ParseError("element out of range", lineno)
            sets.append(es)  # type: ignore[arg-type]
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if n_elements is None:
        raise ParseError("missing 'elements' header")
    return X3cInstance(n_elements, tuple(sets))


class _Namer:
    def __init__(self) -> None:
        self.names: dict[str, int] = {}
        self.count = 0

    def make(self, label: str) -> int:
        if label in self.names:
            raise ValidationError(f"duplicate agent label {label}")
        self.names[label] = self.count
        self.count += 1
        return self.names[label]


def _complete_from_enemies(n: int, enemies: Sequence[tuple[int, int]]) -> GameInstance:
    """Complete-mode instance specified by its enemy pairs."""
    em = [0] * n
    for a, b in enemies:
        em[a] |= 1 << b
        em[b] |= 1 << a
    friends = [(i, j) for i in range(n) for j in range(i + 1, n) if not (em[i] >> j & 1)]
    return new_instance(n, friends, [], Mode.COMPLETE)


def _maybe_names(result, names: dict[str, int], with_names: bool):
    if not with_names:
        return result
    if isinstance(result, tuple):
        return (*result, names)
    return result, names


# ---------------------------------------------------------------------------
# The 20-agent no-instance (core stability can fail with neutrals)
# ---------------------------------------------------------------------------


def _ring_blocker(nm: _Namer, prefix: str, spokes: int):
    """Agents and relations of one ring blocker: per spoke i a main pair
    (a1, a2) and a connector pair (b1, b2); the only enemy-free coalitions
    of interest are inside the spoke sets T_i (two consecutive main pairs
    plus the connectors between them)."""
    a1, a2, b1, b2 = {}, {}, {}, {}
    for i in range(spokes):
        a1[i] = nm.make(f"{prefix}a1_{i}")
        a2[i] = nm.make(f"{prefix}a2_{i}")
        b1[i] = nm.make(f"{prefix}b1_{i}")
        b2[i] = nm.make(f"{prefix}b2_{i}")
    friends: list[tuple[int, int]] = []
    enemies: list[tuple[int, int]] = []
    for i in range(spokes):
        j = (i + 1) % spokes
        friends.append((a1[i], a2[i]))
        friends.append((b1[i], b2[i]))
        friends += [(a1[i], a1[j]), (a1[i], a2[j]), (a2[i], a1[j]), (a2[i], a2[j])]
        friends += [(a1[i], b1[i]), (a1[i], b2[i]), (a2[i], b1[i]), (a2[i], b2[i])]
        friends.append((a1[j], b1[i]))
        friends.append((a2[j], b2[i]))
    # connectors: enemies with everything outside their spoke set
    members = [a1, a2, b1, b2]
    all_ids = [d[i] for i in range(spokes) for d in members]
    for i in range(spokes):
        j = (i + 1) % spokes
        keep = {b1[i], b2[i], a1[i], a2[i], a1[j], a2[j]}
        for z, conn in ((1, b1), (2, b2)):
            for other in all_ids:
                if other not in keep and other != conn[i]:
                    enemies.append((conn[i], other))
    # main pairs: enemies at ring distance two
    for i in range(spokes):
        for j in ((i + 2) % spokes, (i - 2) % spokes):
            for x in (a1[i], a2[i]):
                for y in (a1[j], a2[j]):
                    enemies.append((x, y))
    tsets = []
    for i in range(spokes):
        j = (i + 1) % spokes
        tsets.append(frozenset({a1[i], a2[i], b1[i], b2[i], a1[j], a2[j]}))
    entries = {i: (b1[i], b2[i], a1[(i + 1) % spokes], a2[(i + 1) % spokes]) for i in range(spokes)}
    return friends, enemies, tsets, entries


def _dedupe(pairs: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    seen = set()
    out = []
    for a, b in pairs:
        key = (min(a, b), max(a, b))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def gen_fig2(with_names: bool = False):
    """The 20-agent symmetric instance with neutrals admitting no core
    stable partition: five main pairs on a ring, connector pairs between
    consecutive ones."""
    nm = _Namer()
    friends, enemies, tsets, _entries = _ring_blocker(nm, "", 5)
    inst = new_instance(20, _dedupe(friends), _dedupe(enemies), Mode.WITH_NEUTRALS)
    return _maybe_names(inst, nm.names, with_names)


def fig2_spoke_sets(names: dict[str, int] | None = None) -> list[frozenset[int]]:
    """The five spoke sets of the 20-agent instance; every enemy-free
    coalition with two or more members is a subset of one of them."""
    if names is None:
        _inst, names = gen_fig2(with_names=True)
    out = []
    for i in range(5):
        j = (i + 1) % 5
        out.append(
            frozenset(
                names[x]
                for x in (f"a1_{i}", f"a2_{i}", f"b1_{i}", f"b2_{i}", f"a1_{j}", f"a2_{j}")
            )
        )
    return out


# ---------------------------------------------------------------------------
# 3-Coloring (degree <= 4) -> core existence with 3 coalitions
# ---------------------------------------------------------------------------


def gen_3col_to_ce3(graph: UGraph, with_names: bool = False):
    """Per input vertex one main agent plus two dummies forming an enemy
    triangle; main agents are enemies iff adjacent; everything else friends.
    The game has a (strictly) core stable partition into 3 coalitions iff
    the input graph is 3-colorable."""
    if graph.max_degree() > 4:
        raise DegreeTooHigh("3-coloring gadget requires input degree <= 4")
    nm = _Namer()
    main, d1, d2 = {}, {}, {}
    for v in range(graph.n):
        main[v] = nm.make(f"m_{v}")
        d1[v] = nm.make(f"d_{v}")
        d2[v] = nm.make(f"d'_{v}")
    enemies: list[tuple[int, int]] = []
    for v in range(graph.n):
        enemies += [(main[v], d1[v]), (main[v], d2[v]), (d1[v], d2[v])]
        for u in iter_bits(graph.adj[v] >> (v + 1) << (v + 1)):
            enemies.append((main[v], main[u]))
    inst = _complete_from_enemies(3 * graph.n, _dedupe(enemies))
    from .model import degree_profile

    if inst.n != 3 * graph.n or degree_profile(inst).max_enemy_degree > 6:
        raise ValidationError("internal: 3-coloring gadget shape check failed")
    return _maybe_names(inst, nm.names, with_names)


# ---------------------------------------------------------------------------
# Triangle packing -> strict core existence (friendship degree 4)
# ---------------------------------------------------------------------------


def gen_tripack_to_sce(graph: UGraph, with_names: bool = False):
    """Friendship graph isomorphic to the input (complete mode). The game
    admits a strictly core stable partition iff the input splits into
    triangles, provided the input satisfies the two-neighborhood shape."""
    nm = _Namer()
    for v in range(graph.n):
        nm.make(f"v_{v}")
    friends = [(u, v) for u in range(graph.n) for v in iter_bits(graph.adj[u] >> (u + 1) << (u + 1))]
    inst = new_instance(graph.n, friends, [], Mode.COMPLETE)
    return _maybe_names(inst, nm.names, with_names)


def neighborhood_compliant(graph: UGraph) -> bool:
    """Every vertex has degree 4 and its neighborhood induces either two
    disjoint edges or a 3-edge star."""
    for v in range(graph.n):
        nb = list(iter_bits(graph.adj[v]))
        if len(nb) != 4:
            return False
        induced = [(a, b) for i, a in enumerate(nb) for b in nb[i + 1 :] if graph.adj[a] >> b & 1]
        if len(induced) == 2:
            if len({x for e in induced for x in e}) != 4:
                return False
        elif len(induced) == 3:
            deg: dict[int, int] = {}
            for a, b in induced:
                deg[a] = deg.get(a, 0) + 1
                deg[b] = deg.get(b, 0) + 1
            if sorted(deg.values()) != [1, 1, 1, 3]:
                return False
        else:
            return False
    return True


def line_graph(g: UGraph) -> UGraph:
    edges = [(u, v) for u in range(g.n) for v in iter_bits(g.adj[u] >> (u + 1) << (u + 1))]
    lg_edges = []
    for i, (a, b) in enumerate(edges):
        for j in range(i + 1, len(edges)):
            c, d = edges[j]
            if {a, b} & {c, d}:
                lg_edges.append((i, j))
    return UGraph.from_edges(len(edges), lg_edges)


def tripack_library() -> list[tuple[str, UGraph, bool]]:
    """Neighborhood-compliant triangle-packing inputs with known verdicts:
    line graphs of cubic triangle-free graphs (packable iff the base graph
    is bipartite)."""

    def cycle(n: int, extra: list[tuple[int, int]]) -> UGraph:
        return UGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)] + extra)

    k33 = UGraph.from_edges(6, [(i, j + 3) for i in range(3) for j in range(3)])
    cube = UGraph.from_edges(
        8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]
    )
    m10 = cycle(10, [(i, i + 5) for i in range(5)])
    wagner = cycle(8, [(i, i + 4) for i in range(4)])
    prism5 = UGraph.from_edges(
        10, [(i, (i + 1) % 5) for i in range(5)] + [(5 + i, 5 + (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
    )
    petersen = UGraph.from_edges(
        10, [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    )
    bases = [
        ("L(K33)", k33, True),
        ("L(cube)", cube, True),
        ("L(moebius10)", m10, True),
        ("L(wagner)", wagner, False),
        ("L(prism5)", prism5, False),
        ("L(petersen)", petersen, False),
    ]
    return [(name, line_graph(g), packable) for name, g, packable in bases]


# ---------------------------------------------------------------------------
# 3SAT (literals at most twice) -> core verification, enemy degree 8/16
# ---------------------------------------------------------------------------


def _plus(lam: int, d: int) -> int:
    return (lam + d) % 3


def gen_3sat_to_cv(formula: CnfFormula, strict_variant: bool = False, with_names: bool = False):
    """Three interchangeable near-maximum friendship cliques plus lone
    consistency agents form the initial partition; a strictly larger clique
    (the only possible block) exists iff the formula is satisfiable. The
    strict variant duplicates everything except the consistency agents so
    the blocking coalition becomes weakly blocking."""
    if formula.max_literal_occurrences() > 2:
        raise LiteralCountExceeded("every literal may appear at most twice")
    n, m = formula.n_vars, len(formula.clauses)
    nm = _Namer()
    T = {(i, l): nm.make(f"T_{i}({l})") for i in range(1, n + 1) for l in range(3)}
    F = {(i, l): nm.make(f"F_{i}({l})") for i in range(1, n + 1) for l in range(3)}
    P = {(i, l): nm.make(f"P_{i}({l})") for i in range(1, n + 1) for l in range(3)}
    C = {
        (j, t, l): nm.make(f"c{t}_{j}({l})")
        for j in range(1, m + 1)
        for t in range(1, 7)
        for l in range(3)
    }
    Q = {(j, l): nm.make(f"Q_{j}({l})") for j in range(1, m + 1) for l in range(3)}
    Ph = {l: nm.make(f"Phat({l})") for l in range(3)}

    def lit_agent(lit: int, lam: int) -> int:
        return T[(abs(lit), lam)] if lit > 0 else F[(abs(lit), lam)]

    enemies: list[tuple[int, int]] = []
    groups: list[list[int]] = []
    for i in range(1, n + 1):
        groups += [[T[(i, l)] for l in range(3)], [F[(i, l)] for l in range(3)], [P[(i, l)] for l in range(3)]]
    for j in range(1, m + 1):
        groups += [[C[(j, t, l)] for l in range(3)] for t in range(1, 7)]
        groups.append([Q[(j, l)] for l in range(3)])
    groups.append([Ph[l] for l in range(3)])
    for g in groups:
        enemies += [(g[0], g[1]), (g[0], g[2]), (g[1], g[2])]

    for lam in range(3):
        for i in range(1, n + 1):
            enemies.append((T[(i, lam)], F[(i, lam)]))
            enemies.append((P[(i, lam)], T[(i, _plus(lam, 2))]))
            enemies.append((P[(i, lam)], F[(i, _plus(lam, 2))]))
            if i != n:
                enemies.append((P[(i, lam)], P[(i + 1, _plus(lam, 1))]))
                enemies.append((P[(i, lam)], P[(i + 1, _plus(lam, 2))]))
        for j, clause in enumerate(formula.clauses, start=1):
            for b, lit in enumerate(clause, start=1):
                enemies.append((lit_agent(lit, lam), C[(j, b, lam)]))
            for t1, t2 in ((1, 2), (1, 4), (2, 4), (3, 5), (3, 6), (5, 6), (4, 5)):
                enemies.append((C[(j, t1, lam)], C[(j, t2, lam)]))
            enemies.append((Q[(j, lam)], C[(j, 6, _plus(lam, 1))]))
            if j != m:
                enemies.append((Q[(j, lam)], Q[(j + 1, _plus(lam, 1))]))
                enemies.append((Q[(j, lam)], Q[(j + 1, _plus(lam, 2))]))
        enemies.append((Ph[lam], P[(1, _plus(lam, 1))]))
        enemies.append((Ph[lam], P[(1, _plus(lam, 2))]))
        enemies.append((Ph[lam], Q[(1, _plus(lam, 1))]))
        enemies.append((Ph[lam], Q[(1, _plus(lam, 2))]))

    def coalition_a(lam: int) -> list[int]:
        out = []
        for i in range(1, n + 1):
            out += [T[(i, lam)], F[(i, _plus(lam, 2))], P[(i, _plus(lam, 2))]]
        for j, clause in enumerate(formula.clauses, start=1):
            if clause[0] > 0:
                out += [C[(j, 1, _plus(lam, 2))], C[(j, 4, lam)], C[(j, 5, _plus(lam, 2))], C[(j, 6, lam)]]
            else:
                out += [C[(j, 1, lam)], C[(j, 4, _plus(lam, 2))], C[(j, 5, lam)], C[(j, 6, _plus(lam, 2))]]
            out += [C[(j, 2, _plus(lam, 1))], C[(j, 3, _plus(lam, 1))], Q[(j, lam)]]
        return out

    base_count = nm.count
    enemies = _dedupe(enemies)

    if not strict_variant:
        inst = _complete_from_enemies(base_count, enemies)
        parts = [coalition_a(l) for l in range(3)] + [[Ph[l]] for l in range(3)]
        partition = Partition.of(parts)
        _check_cv_gadget(inst, partition, n, m, enemy_bound=8, clique_size=3 * n + 7 * m)
        return _maybe_names((inst, partition), nm.names, with_names)

    dup = {}
    for label, a in list(nm.names.items()):
        if label.startswith("Phat"):
            continue
        dup[a] = nm.make(label + "'")
    strict_enemies = list(enemies)
    for a, b in enemies:
        da, db = dup.get(a), dup.get(b)
        if da is not None and db is not None:
            strict_enemies += [(a, db), (da, b), (da, db)]
        elif da is not None:  # b is a consistency agent
            strict_enemies.append((da, b))
        elif db is not None:
            strict_enemies.append((a, db))
    inst = _complete_from_enemies(nm.count, _dedupe(strict_enemies))
    parts = []
    for l in range(3):
        base = coalition_a(l)
        parts.append(base + [dup[a] for a in base])
    parts += [[Ph[l]] for l in range(3)]
    partition = Partition.of(parts)
    _check_cv_gadget(inst, partition, n, m, enemy_bound=16, clique_size=2 * (3 * n + 7 * m))
    return _maybe_names((inst, partition), nm.names, with_names)


def _check_cv_gadget(inst: GameInstance, partition: Partition, n: int, m: int, enemy_bound: int, clique_size: int) -> None:
    from .model import degree_profile
    from .preferences import is_friendship_clique

    if degree_profile(inst).max_enemy_degree > enemy_bound:
        raise ValidationError("internal: verification gadget exceeds its enemy-degree bound")
    big = [c for c in partition.coalitions if len(c) > 1]
    if len(big) != 3 or any(len(c) != clique_size for c in big):
        raise ValidationError("internal: initial coalitions have the wrong size")
    for c in big:
        if not is_friendship_clique(inst, c):
            raise ValidationError("internal: initial coalition is not a friendship clique")


# ---------------------------------------------------------------------------
# Independent Set (degree <= 3) -> core verification with 3 coalitions
# ---------------------------------------------------------------------------


def gen_is_to_cv3(graph: UGraph, k: int, with_names: bool = False):
    """Three color classes of the input padded with class dummies to size
    k'-1 each form the initial partition; a blocking coalition exists iff
    the input has an independent set of size k."""
    if graph.max_degree() > 3:
        raise NotCubic("independent-set gadget requires input degree <= 3")
    if k < 1:
        raise ValidationError("independent-set target must be positive")
    # pad with isolated vertices until k' exceeds 3|V'|/4
    pad = max(0, 3 * graph.n - 4 * k + 1)
    nv = graph.n + pad
    kk = k + pad
    g2 = UGraph(nv, tuple(list(graph.adj) + [0] * pad))
    coloring = k_coloring(g2, 3)
    if coloring is None:
        raise ValidationError("input graph is not 3-colorable (K4 component)")
    classes = [set(v for v, c in coloring.items() if c == i) for i in range(3)]
    # balance: largest class strictly below 3|V'|/4
    limit = 3 * nv / 4
    while max(len(cl) for cl in classes) >= limit:
        big = max(range(3), key=lambda i: len(classes[i]))
        small = [i for i in range(3) if len(classes[i]) < nv / 4]
        moved = False
        for v in sorted(classes[big]):
            for tgt in small:
                if all(not (g2.adj[v] >> u & 1) for u in classes[tgt]):
                    classes[big].discard(v)
                    classes[tgt].add(v)
                    moved = True
                    break
            if moved:
                break
        if not moved:
            raise ValidationError("internal: balancing the 3-coloring failed")
    if any(len(cl) > kk - 1 for cl in classes):
        raise ValidationError("internal: class exceeds coalition capacity")
    nm = _Namer()
    main = {v: nm.make(f"v_{v}") for v in range(nv)}
    dummies: list[list[int]] = []
    for j in range(3):
        dummies.append([nm.make(f"d{j + 1}_{t + 1}") for t in range(kk - 1 - len(classes[j]))])
    enemies: list[tuple[int, int]] = []
    for u in range(nv):
        for v in iter_bits(g2.adj[u] >> (u + 1) << (u + 1)):
            enemies.append((main[u], main[v]))
    for j in range(3):
        for jj in range(j + 1, 3):
            enemies += [(a, b) for a in dummies[j] for b in dummies[jj]]
        for v in range(nv):
            if v not in classes[j]:
                enemies += [(main[v], d) for d in dummies[j]]
    inst = _complete_from_enemies(nm.count, _dedupe(enemies))
    parts = [[main[v] for v in classes[j]] + dummies[j] for j in range(3)]
    partition = Partition.of(parts)
    if any(len(c) != kk - 1 for c in partition.coalitions):
        raise ValidationError("internal: initial coalitions must all have size k-1")
    return _maybe_names((inst, partition), nm.names, with_names)


# ---------------------------------------------------------------------------
# 3SAT (literals exactly twice) -> core existence with neutrals
# ---------------------------------------------------------------------------


def gen_3sat_to_ce_neutral(formula: CnfFormula, with_names: bool = False):
    """A ring blocker per variable (5 spokes) and per clause (7 spokes);
    literal agents can pacify either their variable blocker or the clause
    blockers where the literal occurs, never both. A core stable partition
    exists iff the formula is satisfiable."""
    counts = formula.literal_counts()
    n = formula.n_vars
    for v in range(1, n + 1):
        for lit in (v, -v):
            if counts.get(lit, 0) != 2:
                raise LiteralCountMismatch(
                    f"literal {lit} appears {counts.get(lit, 0)} times, needs exactly 2"
                )
    nm = _Namer()
    pos_lit, neg_lit, rewards = {}, {}, {}
    friends: list[tuple[int, int]] = []
    enemies: list[tuple[int, int]] = []
    var_entries = {}
    clause_entries = {}
    for i in range(1, n + 1):
        pos_lit[i] = nm.make(f"y_{i}")
        neg_lit[i] = nm.make(f"~y_{i}")
        rewards[i] = [nm.make(f"r{z}_{i}") for z in range(1, 5)]
        fr, en, _tsets, entries = _ring_blocker(nm, f"X{i}.", 5)
        friends += fr
        enemies += en
        var_entries[i] = entries[0]
        enemies.append((pos_lit[i], neg_lit[i]))
        for e in entries[0]:
            friends += [(e, pos_lit[i]), (e, neg_lit[i])]
        rs = rewards[i]
        friends += [(a, b) for ai, a in enumerate(rs) for b in rs[ai + 1 :]]
        friends += [(r, pos_lit[i]) for r in rs] + [(r, neg_lit[i]) for r in rs]
    for j in range(1, len(formula.clauses) + 1):
        fr, en, _tsets, entries = _ring_blocker(nm, f"C{j}.", 7)
        friends += fr
        enemies += en
        clause_entries[j] = entries
    for j, clause in enumerate(formula.clauses, start=1):
        entries = clause_entries[j]
        for b, lit in enumerate(clause, start=1):
            lit_agent = pos_lit[abs(lit)] if lit > 0 else neg_lit[abs(lit)]
            centry = entries[2 * b - 1]
            for e in centry:
                friends.append((e, lit_agent))
            blockers = list(var_entries[abs(lit)]) + rewards[abs(lit)]
            enemies += [(e, x) for e in centry for x in blockers]
    inst = new_instance(nm.count, _dedupe(friends), _dedupe(enemies), Mode.WITH_NEUTRALS)
    if inst.n != 26 * n + 28 * len(formula.clauses):
        raise ValidationError("internal: neutral gadget agent count is off")
    from .model import degree_profile

    # connector entries of a variable blocker reach 18 in-blocker relations
    # plus 2 literal friends plus 16 clause-side enemies
    if degree_profile(inst).max_total_degree > 36:
        raise ValidationError("internal: neutral gadget exceeds degree 36")
    return _maybe_names(inst, nm.names, with_names)


# ---------------------------------------------------------------------------
# Exact Cover by 3-Sets -> neutral SCE / CV / SCV gadgets
# ---------------------------------------------------------------------------


def _require_bipartite_union(inst: GameInstance, side1: set[int]) -> None:
    for a in range(inst.n):
        both = inst.friend_masks[a] | inst.enemy_masks[a]
        for b in iter_bits(both):
            if (a in side1) == (b in side1):
                raise ValidationError("internal: union graph is not bipartite as constructed")


def gen_x3c_to_sce_neutral(x3c: X3cInstance, with_names: bool = False):
    """Element agents must join a set agent covering them; set-holder rows
    absorb the leftover set agents. A strictly core stable partition exists
    iff the instance has an exact cover."""
    n3, m = x3c.n_elements, len(x3c.sets)
    n = n3 // 3
    if m < n:
        raise ValidationError("need at least n sets for a cover to be possible")
    dum_c = 3 * (m - n) + 4
    nm = _Namer()
    a = {i: nm.make(f"a_{i + 1}") for i in range(n3)}
    s = {j: nm.make(f"s_{j + 1}") for j in range(m)}
    t = {(j, z): nm.make(f"t{z}_{j + 1}") for j in range(m) for z in range(1, dum_c + 1)}
    e = {(l, z): nm.make(f"e{z}_{l + 1}") for l in range(m - n) for z in range(1, 4)}
    d = {(l, w): nm.make(f"d{w}_{l + 1}") for l in range(m - n) for w in range(1, m + 2)}
    friends: list[tuple[int, int]] = []
    enemies: list[tuple[int, int]] = []
    for j, members in enumerate(x3c.sets):
        for i in members:
            friends.append((a[i], s[j]))
        for z in range(1, dum_c + 1):
            friends.append((s[j], t[(j, z)]))
        for l in range(m - n):
            for z in range(1, 4):
                friends.append((s[j], e[(l, z)]))
    for l in range(m - n):
        for z in range(1, 4):
            for w in range(1, m + 2):
                friends.append((e[(l, z)], d[(l, w)]))
    for j in range(m):
        for jj in range(m):
            if jj != j:
                for z in range(1, dum_c + 1):
                    enemies.append((s[j], t[(jj, z)]))
    for l in range(m - n):
        for ll in range(m - n):
            if ll != l:
                for z in range(1, 4):
                    for w in range(1, m + 2):
                        enemies.append((e[(l, z)], d[(ll, w)]))
    for i in range(n3):
        for l in range(m - n):
            for w in range(1, m + 2):
                enemies.append((a[i], d[(l, w)]))
    inst = new_instance(nm.count, _dedupe(friends), _dedupe(enemies), Mode.WITH_NEUTRALS)
    expected = n3 + m * (3 * (m - n) + 5) + (m - n) * (m + 4)
    if inst.n != expected:
        raise ValidationError("internal: exact-cover gadget agent count is off")
    side1 = set(a.values()) | set(t.values()) | set(e.values())
    _require_bipartite_union(inst, side1)
    return _maybe_names(inst, nm.names, with_names)


def gen_x3c_to_cv_neutral(x3c: X3cInstance, variant: str = "two_partitions", with_names: bool = False):
    """Core verification gadget: a strictly blocking coalition exists iff
    the instance has an exact cover. Variant ``two_partitions`` starts from
    two big coalitions, ``small_coalitions`` from coalitions of size <= 3."""
    if variant not in ("two_partitions", "small_coalitions"):
        raise ValidationError(f"unknown variant {variant!r}")
    if x3c.element_frequency() > 3:
        raise FrequencyExceeded("every element may appear in at most three sets")
    n3, m = x3c.n_elements, len(x3c.sets)
    nm = _Namer()
    a = {i: nm.make(f"a_{i + 1}") for i in range(n3)}
    x = {i: nm.make(f"x_{i + 1}") for i in range(n3)}
    y = {i: nm.make(f"y_{i + 1}") for i in range(n3)}
    s = {j: nm.make(f"s_{j + 1}") for j in range(m)}
    t = {(j, z): nm.make(f"t{z}_{j + 1}") for j in range(m) for z in (1, 2)}
    d = {(j, i): nm.make(f"d_{i + 1}_{j + 1}") for j, mem in enumerate(x3c.sets) for i in mem}
    e = {(j, i): nm.make(f"e_{i + 1}_{j + 1}") for j, mem in enumerate(x3c.sets) for i in mem}
    hats: dict[tuple[str, int, int], int] = {}
    if variant == "small_coalitions":
        for i in range(n3):
            hats[("a", i, 1)] = nm.make(f"ahat1_{i + 1}")
            hats[("a", i, 2)] = nm.make(f"ahat2_{i + 1}")
            hats[("x", i, 1)] = nm.make(f"xhat1_{i + 1}")
            hats[("x", i, 2)] = nm.make(f"xhat2_{i + 1}")
    friends: list[tuple[int, int]] = []
    enemies: list[tuple[int, int]] = []
    for j, members in enumerate(x3c.sets):
        friends += [(s[j], t[(j, 1)]), (s[j], t[(j, 2)])]
        for i in members:
            friends += [(s[j], d[(j, i)]), (d[(j, i)], a[i]), (d[(j, i)], e[(j, i)])]
    for i in range(n3):
        friends += [(x[i], y[i]), (x[i], a[i]), (x[i], a[(i + 1) % n3])]
    for i in range(n3):
        sets_with_i = [j for j, mem in enumerate(x3c.sets) if i in mem]
        for j in sets_with_i:
            for jj in sets_with_i:
                if jj != j:
                    enemies.append((d[(j, i)], s[jj]))
    if variant == "small_coalitions":
        for i in range(n3):
            friends += [(hats[("a", i, 1)], a[i]), (hats[("a", i, 2)], a[i])]
            friends += [(hats[("x", i, 1)], x[i]), (hats[("x", i, 2)], x[i])]
    inst = new_instance(nm.count, _dedupe(friends), _dedupe(enemies), Mode.WITH_NEUTRALS)
    side1 = set(a.values()) | set(y.values()) | set(s.values()) | set(e.values())
    side1 |= {v for (kind, i, z), v in hats.items() if kind == "x"}
    _require_bipartite_union(inst, side1)
    if variant == "two_partitions":
        c1 = list(a.values()) + list(x.values()) + list(s.values()) + list(t.values())
        c2 = list(y.values()) + list(d.values()) + list(e.values())
        partition = Partition.of([c1, c2])
    else:
        parts = []
        for i in range(n3):
            parts.append([a[i], hats[("a", i, 1)], hats[("a", i, 2)]])
            parts.append([x[i], hats[("x", i, 1)], hats[("x", i, 2)]])
            parts.append([y[i]])
        for j, members in enumerate(x3c.sets):
            parts.append([s[j], t[(j, 1)], t[(j, 2)]])
            for i in members:
                parts.append([d[(j, i)], e[(j, i)]])
        partition = Partition.of(parts)
    return _maybe_names((inst, partition), nm.names, with_names)


def gen_x3c_to_scv_neutral(x3c: X3cInstance, variant: str = "two_partitions", with_names: bool = False):
    """Strict-core verification gadget: a weakly blocking coalition exists
    iff the instance has an exact cover. The lone agent g is the only one
    able to strictly improve."""
    if variant not in ("two_partitions", "small_coalitions"):
        raise ValidationError(f"unknown variant {variant!r}")
    if x3c.element_frequency() > 3:
        raise FrequencyExceeded("every element may appear in at most three sets")
    n3, m = x3c.n_elements, len(x3c.sets)
    nm = _Namer()
    a = {i: nm.make(f"a_{i + 1}") for i in range(n3)}
    b = {i: nm.make(f"b_{i + 1}") for i in range(n3)}
    bp = {i: nm.make(f"b'_{i + 1}") for i in range(n3)}
    x = {i: nm.make(f"x_{i + 1}") for i in range(n3 - 1)}
    s = {j: nm.make(f"s_{j + 1}") for j in range(m)}
    t = {(j, z): nm.make(f"t{z}_{j + 1}") for j in range(m) for z in (1, 2, 3)}
    tp = {(j, z): nm.make(f"t'{z}_{j + 1}") for j in range(m) for z in (1, 2, 3)}
    d = {(j, i): nm.make(f"d_{i + 1}_{j + 1}") for j, mem in enumerate(x3c.sets) for i in mem}
    e = {(j, i, z): nm.make(f"e{z}_{i + 1}_{j + 1}") for j, mem in enumerate(x3c.sets) for i in mem for z in (1, 2)}
    ep = {(j, i, z): nm.make(f"e'{z}_{i + 1}_{j + 1}") for j, mem in enumerate(x3c.sets) for i in mem for z in (1, 2)}
    g = nm.make("g")
    h = nm.make("h")
    hp = nm.make("h'")
    small = variant == "small_coalitions"
    bh: dict[tuple[int, int], int] = {}
    bph: dict[tuple[int, int], int] = {}
    yy: dict[tuple[int, int], int] = {}
    yp: dict[tuple[int, int], int] = {}
    if small:
        for i in range(n3):
            zs = (1,) if i in (0, n3 - 1) else (1, 2)
            for z in zs:
                bh[(i, z)] = nm.make(f"bhat{z}_{i + 1}")
                bph[(i, z)] = nm.make(f"b'hat{z}_{i + 1}")
        for i in range(n3 - 1):
            for z in (1, 2):
                yy[(i, z)] = nm.make(f"y{z}_{i + 1}")
                yp[(i, z)] = nm.make(f"y'{z}_{i + 1}")

    friends: list[tuple[int, int]] = []
    enemies: list[tuple[int, int]] = []
    for j, members in enumerate(x3c.sets):
        for i in members:
            friends += [(s[j], d[(j, i)]), (d[(j, i)], a[i])]
            for z in (1, 2):
                friends += [(d[(j, i)], e[(j, i, z)]), (e[(j, i, z)], ep[(j, i, z)])]
                enemies += [(ep[(j, i, z)], a[i]), (ep[(j, i, z)], s[j])]
        for z in (1, 2, 3):
            friends += [(s[j], t[(j, z)]), (t[(j, z)], tp[(j, z)])]
            enemies += [(tp[(j, z)], d[(j, i)]) for i in members]
    for i in range(n3 - 1):
        friends += [(x[i], a[i]), (x[i], a[i + 1])]
    for i in range(n3):
        friends += [(a[i], b[i]), (b[i], bp[i])]
        for j, mem in enumerate(x3c.sets):
            if i in mem:
                enemies.append((bp[i], d[(j, i)]))
            if i != 0 and (i - 1) in mem:
                enemies.append((bp[i], d[(j, i - 1)]))
    for i in range(n3):
        sets_with_i = [j for j, mem in enumerate(x3c.sets) if i in mem]
        for j in sets_with_i:
            for jj in sets_with_i:
                if jj != j:
                    enemies.append((d[(j, i)], s[jj]))
    friends += [(a[0], h), (a[0], g), (h, hp)]
    enemies += [(g, hp), (g, bp[0])]
    if small:
        for (i, z), agent in bh.items():
            friends += [(agent, a[i]), (agent, bph[(i, z)])]
        for (i, z), agent in bph.items():
            for j, mem in enumerate(x3c.sets):
                if i in mem:
                    enemies.append((agent, d[(j, i)]))
                if i != 0 and (i - 1) in mem:
                    enemies.append((agent, d[(j, i - 1)]))
            if i == 0:
                enemies.append((agent, g))
        # the primed guards additionally fence off the chain agents
        for i in range(n3):
            guards = [bp[i]] + [bph[(i, z)] for z in ((1,) if i in (0, n3 - 1) else (1, 2))]
            for guard in guards:
                if i != n3 - 1:
                    enemies.append((guard, x[i]))
                if i != 0:
                    enemies.append((guard, x[i - 1]))
        for (i, z), agent in yy.items():
            friends += [(agent, x[i]), (agent, yp[(i, z)])]
        for (i, z), agent in yp.items():
            enemies += [(agent, a[i]), (agent, a[i + 1])]
    inst = new_instance(nm.count, _dedupe(friends), _dedupe(enemies), Mode.WITH_NEUTRALS)
    side1 = set(a.values()) | set(bp.values()) | set(s.values()) | set(tp.values()) | set(e.values()) | {hp}
    side1 |= set(bph.values()) | set(yy.values())
    _require_bipartite_union(inst, side1)
    if not small:
        c1 = (
            list(a.values()) + list(b.values()) + list(bp.values()) + list(x.values())
            + list(s.values()) + list(t.values()) + list(tp.values()) + [h, hp]
        )
        c2 = list(d.values()) + list(e.values()) + list(ep.values())
        partition = Partition.of([c1, c2, [g]])
    else:
        parts = [[h, hp, a[0], b[0], bp[0], bh[(0, 1)], bph[(0, 1)]]]
        for i in range(1, n3 - 1):
            parts.append([a[i], b[i], bp[i], bh[(i, 1)], bh[(i, 2)], bph[(i, 1)], bph[(i, 2)]])
        parts.append([a[n3 - 1], b[n3 - 1], bp[n3 - 1], bh[(n3 - 1, 1)], bph[(n3 - 1, 1)]])
        for i in range(n3 - 1):
            parts.append([x[i], yy[(i, 1)], yy[(i, 2)], yp[(i, 1)], yp[(i, 2)]])
        for j, members in enumerate(x3c.sets):
            parts.append([s[j]] + [t[(j, z)] for z in (1, 2, 3)] + [tp[(j, z)] for z in (1, 2, 3)])
            for i in members:
                parts.append([d[(j, i)]] + [e[(j, i, z)] for z in (1, 2)] + [ep[(j, i, z)] for z in (1, 2)])
        parts.append([g])
        partition = Partition.of(parts)
    return _maybe_names((inst, partition), nm.names, with_names)


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def gen_random(
    n: int,
    p_friend: float,
    p_enemy: float | None = None,
    seed: int = 0,
    mode: Mode | str = Mode.COMPLETE,
) -> GameInstance:
    """Deterministic random instance. Stream contract: a single
    ``random.Random(seed)`` generator, unordered pairs visited in
    lexicographic order, one draw per pair; friend if the draw is below
    p_friend, enemy if below p_friend + p_enemy, else neutral."""
    mode = Mode(mode)
    if not 0 <= p_friend <= 1:
        raise BadProbabilities("p_friend must lie in [0, 1]")
    if mode is Mode.COMPLETE:
        if p_enemy is not None and abs(p_enemy - (1 - p_friend)) > 1e-12:
            raise BadProbabilities("complete mode forces p_enemy = 1 - p_friend")
        p_enemy = 1 - p_friend
    if p_enemy is None:
        raise BadProbabilities("p_enemy is required with neutrals")
    if p_enemy < 0 or p_friend + p_enemy > 1 + 1e-12:
        raise BadProbabilities("need p_friend + p_enemy <= 1")
    rng = random.Random(seed)
    friends, enemies = [], []
    for i in range(n):
        for j in range(i + 1, n):
            r = rng.random()
            if r < p_friend:
                friends.append((i, j))
            elif r < p_friend + p_enemy:
                enemies.append((i, j))
    if mode is Mode.COMPLETE:
        return new_instance(n, friends, [], mode)
    return new_instance(n, friends, enemies, mode)
