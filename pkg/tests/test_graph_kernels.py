import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from hgame.errors import DegreeTooHigh, RepMismatch
from hgame import graph_kernels as gk
from hgame.graph_kernels import IntervalRep, UGraph


def rand_graph(rng, n, p):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return UGraph.from_edges(n, edges)


def brute_max_clique_size(g):
    for size in range(g.n, 0, -1):
        for comb in combinations(range(g.n), size):
            if all(g.adj[u] >> v & 1 for u, v in combinations(comb, 2)):
                return size
    return 0


def brute_matching_size(g):
    edges = [(i, j) for i in range(g.n) for j in range(i + 1, g.n) if g.adj[i] >> j & 1]
    best = 0

    def rec(i, used, cnt):
        nonlocal best
        best = max(best, cnt)
        for k in range(i, len(edges)):
            u, v = edges[k]
            if not (used >> u & 1) and not (used >> v & 1):
                rec(k + 1, used | 1 << u | 1 << v, cnt + 1)

    rec(0, 0, 0)
    return best


def path(n):
    return UGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return UGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return UGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


PETERSEN = UGraph.from_edges(
    10,
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
     (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
)


class TestMaxClique:
    def test_triangle(self):
        assert max(len(gk.max_clique(complete(3)).members), 0) == 3

    def test_paper_friendship_path_lex_tiebreak(self):
        g = path(3)
        assert gk.max_clique(g).members == (0, 1)

    def test_random_vs_enumeration(self, rng):
        for _ in range(50):
            n = rng.randint(1, 14)
            g = rand_graph(rng, n, 0.5)
            assert len(gk.max_clique(g).members) == brute_max_clique_size(g)

    def test_lex_minimality(self, rng):
        for _ in range(30):
            n = rng.randint(2, 10)
            g = rand_graph(rng, n, rng.random())
            got = gk.max_clique(g)
            size = len(got.members)
            all_max = sorted(
                c
                for c in combinations(range(n), size)
                if all(g.adj[u] >> v & 1 for u, v in combinations(c, 2))
            )
            assert got.members == all_max[0]

    def test_clique_is_duality(self, rng):
        for _ in range(30):
            n = rng.randint(1, 12)
            g = rand_graph(rng, n, rng.random())
            assert len(gk.max_clique(g).members) == len(
                gk.max_independent_set(g.complement()).members
            )


class TestHasCliqueOfSize:
    def test_k4_through_vertex(self):
        got = gk.has_clique_of_size(complete(4), 4, through=0)
        assert got is not None and got.members == (0, 1, 2, 3)

    def test_triangle_free_path(self):
        assert gk.has_clique_of_size(path(4), 3) is None

    def test_random_sweep(self, rng):
        for _ in range(12):
            n = rng.randint(1, 9)
            g = rand_graph(rng, n, rng.random())
            for k in range(1, n + 1):
                for v in range(n):
                    got = gk.has_clique_of_size(g, k, through=v)
                    want = any(
                        v in c and all(g.adj[a] >> b & 1 for a, b in combinations(c, 2))
                        for c in combinations(range(n), k)
                    )
                    assert (got is not None) == want
                    if got is not None:
                        assert v in got.members and len(got.members) == k


class TestPartitionIntoCliques:
    def test_two_triangles(self):
        g = UGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        blocks = gk.partition_into_cliques_of_size(g, 3)
        assert blocks is not None and sorted(b.members for b in blocks) == [(0, 1, 2), (3, 4, 5)]

    def test_path_pairs(self):
        blocks = gk.partition_into_cliques_of_size(path(4), 2)
        assert blocks is not None and sorted(b.members for b in blocks) == [(0, 1), (2, 3)]

    def test_matches_matching_for_pairs(self, rng):
        for _ in range(40):
            n = rng.choice([2, 4, 6, 8])
            g = rand_graph(rng, n, rng.random())
            got = gk.partition_into_cliques_of_size(g, 2)
            perfect = brute_matching_size(g) * 2 == n
            assert (got is not None) == perfect
            if got:
                assert all(len(b) == 2 for b in got)

    def test_indivisible_count(self):
        assert gk.partition_into_cliques_of_size(complete(5), 2) is None


class TestMatching:
    def test_single_edge(self):
        assert gk.max_matching(UGraph.from_edges(2, [(0, 1)])) == [(0, 1)]

    def test_c5(self):
        assert len(gk.max_matching(cycle(5))) == 2

    def test_petersen_perfect(self):
        assert len(gk.max_matching(PETERSEN)) == 5

    def test_random_vs_brute(self, rng):
        for _ in range(60):
            n = rng.randint(1, 11)
            g = rand_graph(rng, n, rng.random())
            m = gk.max_matching(g)
            assert len(m) == brute_matching_size(g)
            flat = [x for e in m for x in e]
            assert len(flat) == len(set(flat))
            assert all(g.adj[u] >> v & 1 for u, v in m)


class TestColoring:
    def test_bipartite_two_colors(self):
        assert gk.k_coloring(cycle(6), 2) is not None

    def test_k4_needs_four(self):
        assert gk.k_coloring(complete(4), 3) is None
        assert gk.k_coloring(complete(4), 4) is not None

    def test_random_vs_exhaustive(self, rng):
        for _ in range(25):
            n = rng.randint(1, 8)
            g = rand_graph(rng, n, rng.random())
            for k in (1, 2, 3, 4):
                got = gk.k_coloring(g, k)
                want = any(
                    all(assign[u] != assign[v] for u in range(n) for v in range(u + 1, n) if g.adj[u] >> v & 1)
                    for assign in product(range(k), repeat=n)
                )
                assert (got is not None) == want
                if got is not None:
                    assert all(
                        got[u] != got[v]
                        for u in range(n)
                        for v in range(u + 1, n)
                        if g.adj[u] >> v & 1
                    )
                    assert all(0 <= c < k for c in got.values())


class TestBipartition:
    def test_even_cycle(self):
        col, odd = gk.bipartition(cycle(6))
        assert col is not None and odd is None

    def test_odd_cycle_witness(self):
        col, odd = gk.bipartition(cycle(5))
        assert col is None and len(odd) % 2 == 1
        for i, v in enumerate(odd):
            u = odd[(i + 1) % len(odd)]
            assert cycle(5).adj[v] >> u & 1

    def test_matches_two_coloring(self, rng):
        for _ in range(40):
            n = rng.randint(1, 10)
            g = rand_graph(rng, n, rng.random() * 0.5)
            col, odd = gk.bipartition(g)
            assert (col is not None) == (gk.k_coloring(g, 2) is not None)


def make_rep(intervals):
    ivs = tuple((Fraction(a), Fraction(b)) for a, b in intervals)
    n = len(ivs)
    rep = IntervalRep(ivs)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rep.overlap(i, j)]
    return rep, UGraph.from_edges(n, edges)


class TestInterval:
    def test_mutual_overlap_triple(self):
        rep, g = make_rep([(0, 2), (1, 3), (1, 2)])
        blocks = gk.interval_clique_partition(rep, g, 3)
        assert blocks is not None and blocks[0].members == (0, 1, 2)

    def test_chain_pairs(self):
        rep, g = make_rep([(0, 1), (1, 2), (2, 3), (3, 4)])
        blocks = gk.interval_clique_partition(rep, g, 2)
        assert blocks is not None
        assert sorted(b.members for b in blocks) == [(0, 1), (2, 3)]

    def test_cardinality_none(self):
        rep, g = make_rep([(0, 1), (1, 2), (2, 3)])
        assert gk.interval_clique_partition(rep, g, 2) is None

    def test_mismatch_raises(self):
        rep, g = make_rep([(0, 1), (2, 3)])
        bad = UGraph.from_edges(2, [(0, 1)])
        with pytest.raises(RepMismatch):
            gk.interval_clique_partition(rep, bad, 2)

    def test_partition_matches_backtracking(self, rng):
        for _ in range(40):
            n = rng.randint(1, 9)
            ivs = []
            for _ in range(n):
                a = rng.randint(0, 12)
                ivs.append((a, a + rng.randint(0, 6)))
            rep, g = make_rep(ivs)
            for k in (1, 2, 3):
                greedy = gk.interval_clique_partition(rep, g, k)
                generic = gk.partition_into_cliques_of_size(g, k)
                assert (greedy is None) == (generic is None), (ivs, k)
                if greedy:
                    assert all(len(b) == k for b in greedy)

    def test_nested_coloring_depth(self):
        rep, g = make_rep([(0, 10), (1, 9), (2, 8)])
        assert gk.interval_coloring(rep, g, 3) is not None
        assert gk.interval_coloring(rep, g, 2) is None

    def test_coloring_matches_backtracking(self, rng):
        for _ in range(40):
            n = rng.randint(1, 9)
            ivs = []
            for _ in range(n):
                a = rng.randint(0, 12)
                ivs.append((a, a + rng.randint(0, 6)))
            rep, g = make_rep(ivs)
            for k in (1, 2, 3, 4):
                assert (gk.interval_coloring(rep, g, k) is None) == (gk.k_coloring(g, k) is None)


class TestDegree2:
    def test_classify(self):
        g = UGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])
        kinds = sorted((c.kind, len(c.vertices)) for c in gk.degree2_decompose(g))
        assert kinds == [("cycle", 3), ("path", 3)]

    def test_isolated(self):
        g = UGraph(3, (0, 0, 0))
        assert all(c.kind == "singleton" for c in gk.degree2_decompose(g))

    def test_degree_guard(self):
        with pytest.raises(DegreeTooHigh):
            gk.degree2_decompose(UGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
        with pytest.raises(DegreeTooHigh):
            gk.max_is_degree2(UGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))

    def test_max_is_examples(self):
        assert len(gk.max_is_degree2(path(5)).members) == 3
        assert len(gk.max_is_degree2(cycle(6)).members) == 3

    def test_max_is_vs_clique_complement(self, rng):
        for _ in range(40):
            n = rng.randint(1, 12)
            # random graph with max degree <= 2: sample edges greedily
            deg = [0] * n
            edges = []
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
            rng.shuffle(pairs)
            for i, j in pairs:
                if deg[i] < 2 and deg[j] < 2 and rng.random() < 0.6:
                    edges.append((i, j))
                    deg[i] += 1
                    deg[j] += 1
            g = UGraph.from_edges(n, edges)
            got = gk.max_is_degree2(g)
            assert len(got.members) == len(gk.max_clique(g.complement()).members)
            # result is independent
            assert all(
                not (g.adj[u] >> v & 1) for u, v in combinations(got.members, 2)
            )
