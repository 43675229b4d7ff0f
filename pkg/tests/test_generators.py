import random

import pytest

from hgame.errors import (
    BadProbabilities,
    DegreeTooHigh,
    FrequencyExceeded,
    LiteralCountExceeded,
    LiteralCountMismatch,
    NotCubic,
    ValidationError,
)
from hgame.model import Mode, degree_profile, serialize_instance
from hgame.preferences import is_friendship_clique
from hgame import generators as gen
from hgame import oracle
from hgame.generators import CnfFormula, X3cInstance
from hgame.graph_kernels import UGraph, bipartition


class TestFig2:
    def test_shape(self):
        inst, names = gen.gen_fig2(with_names=True)
        assert inst.n == 20
        assert inst.mode is Mode.WITH_NEUTRALS
        # every connector has exactly four friends, all inside her spoke set
        spokes = gen.fig2_spoke_sets(names)
        for i in range(5):
            for z in (1, 2):
                a = names[f"b{z}_{i}"]
                friends = inst.friend_masks[a]
                assert friends.bit_count() == 4
                members = {v for v in range(20) if friends >> v & 1} | {a}
                assert any(members <= t for t in spokes)

    def test_golden_serialization_is_stable(self):
        a = serialize_instance(gen.gen_fig2())
        b = serialize_instance(gen.gen_fig2())
        assert a == b
        assert a.startswith("agents 20\nmode neutrals\n")


class TestThreeColoring:
    def rand_graph(self, rng, n):
        while True:
            edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
            g = UGraph.from_edges(n, edges)
            if g.max_degree() <= 4:
                return g

    def test_shape(self, rng):
        g = self.rand_graph(rng, 5)
        inst = gen.gen_3col_to_ce3(g)
        assert inst.n == 3 * g.n
        assert inst.mode is Mode.COMPLETE
        assert degree_profile(inst).max_enemy_degree <= 6

    def test_degree_guard(self):
        star = UGraph.from_edges(6, [(0, i) for i in range(1, 6)])
        with pytest.raises(DegreeTooHigh):
            gen.gen_3col_to_ce3(star)

    def test_round_trip(self, rng):
        from hgame import core_solvers as cs

        for _ in range(10):
            g = self.rand_graph(rng, rng.randint(3, 6))
            want = oracle.brute_3coloring(g) is not None
            inst = gen.gen_3col_to_ce3(g)
            assert (cs.exists_ce_bounded_partitions(inst, 3) is not None) == want
            assert (cs.exists_sce(inst) is not None) == want


class TestTripack:
    def test_library_compliance_and_verdicts(self):
        for name, g, packable in gen.tripack_library():
            assert gen.neighborhood_compliant(g), name
            assert (oracle.brute_triangle_partition(g) is not None) == packable, name

    def test_friendship_graph_isomorphic(self):
        _name, g, _p = gen.tripack_library()[0]
        inst = gen.gen_tripack_to_sce(g)
        assert inst.n == g.n
        assert inst.friend_masks == g.adj

    def test_round_trip(self):
        from hgame import core_solvers as cs

        for name, g, packable in gen.tripack_library():
            inst = gen.gen_tripack_to_sce(g)
            assert (cs.exists_sce(inst) is not None) == packable, name


class TestSat3CV:
    def formula(self):
        return CnfFormula(3, ((1, 2, 3), (-1, -2, -3)))

    def test_shape_plain(self):
        f = self.formula()
        inst, part = gen.gen_3sat_to_cv(f)
        n, m = f.n_vars, len(f.clauses)
        assert inst.n == 9 * n + 21 * m + 3
        big = [c for c in part.coalitions if len(c) > 1]
        assert len(big) == 3 and all(len(c) == 3 * n + 7 * m for c in big)
        assert degree_profile(inst).max_enemy_degree <= 8
        for c in big:
            assert is_friendship_clique(inst, c)

    def test_shape_strict(self):
        f = self.formula()
        inst, part = gen.gen_3sat_to_cv(f, strict_variant=True)
        n, m = f.n_vars, len(f.clauses)
        big = [c for c in part.coalitions if len(c) > 1]
        assert all(len(c) == 2 * (3 * n + 7 * m) for c in big)
        assert degree_profile(inst).max_enemy_degree <= 16

    def test_literal_count_guard(self):
        f = CnfFormula(3, ((1, 2, 3), (1, 2, -3), (1, -2, 3)))
        with pytest.raises(LiteralCountExceeded):
            gen.gen_3sat_to_cv(f)

    def test_round_trip_small(self, rng):
        from hgame import core_solvers as cs

        f = self.formula()
        want = oracle.brute_sat3(f.clauses, f.n_vars) is not None
        inst, part = gen.gen_3sat_to_cv(f)
        assert (cs.verify_cv(inst, part) is not None) == want


class TestIsCV3:
    def test_shape_and_round_trip(self, rng):
        from hgame import core_solvers as cs

        for _ in range(8):
            n = rng.randint(4, 7)
            while True:
                edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3]
                g = UGraph.from_edges(n, edges)
                if g.max_degree() <= 3:
                    break
            k = rng.randint(2, n - 1)
            want = oracle.brute_independent_set(g, k) is not None
            inst, part = gen.gen_is_to_cv3(g, k)
            assert len(part) == 3
            sizes = {len(c) for c in part.coalitions}
            assert len(sizes) == 1  # all coalitions of size k'-1
            assert (cs.verify_cv(inst, part) is not None) == want

    def test_not_cubic_guard(self):
        star = UGraph.from_edges(5, [(0, i) for i in range(1, 5)])
        with pytest.raises(NotCubic):
            gen.gen_is_to_cv3(star, 2)


class TestSat3CENeutral:
    def formula(self):
        return CnfFormula(3, ((1, 2, 3), (1, -2, -3), (-1, 2, -3), (-1, -2, 3)))

    def test_shape(self):
        f = self.formula()
        inst = gen.gen_3sat_to_ce_neutral(f)
        assert inst.n == 26 * f.n_vars + 28 * len(f.clauses)
        assert inst.mode is Mode.WITH_NEUTRALS
        assert degree_profile(inst).max_total_degree <= 36

    def test_exactly_twice_guard(self):
        f = CnfFormula(3, ((1, 2, 3), (-1, -2, -3)))
        with pytest.raises(LiteralCountMismatch):
            gen.gen_3sat_to_ce_neutral(f)


class TestX3CGadgets:
    def cover_yes(self):
        return X3cInstance(6, ((0, 1, 2), (3, 4, 5), (1, 3, 4)))

    def cover_no(self):
        return X3cInstance(6, ((0, 1, 2), (0, 3, 4), (1, 4, 5)))

    def test_sce_shape(self):
        x = self.cover_yes()
        inst = gen.gen_x3c_to_sce_neutral(x)
        n3, m = x.n_elements, len(x.sets)
        n = n3 // 3
        assert inst.n == n3 + m * (3 * (m - n) + 5) + (m - n) * (m + 4)

    def test_sce_round_trip(self):
        from hgame import neutral_solvers as ns

        assert ns.exists_sce_neutral(gen.gen_x3c_to_sce_neutral(self.cover_yes())) is not None
        assert ns.exists_sce_neutral(gen.gen_x3c_to_sce_neutral(self.cover_no())) is None

    def test_cv_round_trip_both_variants(self):
        from hgame import neutral_solvers as ns

        for x, want in ((self.cover_yes(), True), (self.cover_no(), False)):
            for variant in ("two_partitions", "small_coalitions"):
                inst, part = gen.gen_x3c_to_cv_neutral(x, variant)
                got = ns.find_blocking_neutral(inst, part, weak=False)
                assert (got is not None) == want, variant
                if variant == "small_coalitions":
                    assert part.max_coalition_size() <= 3

    def test_scv_round_trip_both_variants(self):
        from hgame import neutral_solvers as ns

        for x, want in ((self.cover_yes(), True), (self.cover_no(), False)):
            for variant in ("two_partitions", "small_coalitions"):
                inst, part = gen.gen_x3c_to_scv_neutral(x, variant)
                got = ns.find_blocking_neutral(inst, part, weak=True)
                assert (got is not None) == want, variant

    def test_frequency_guard(self):
        x = X3cInstance(6, ((0, 1, 2), (0, 1, 3), (0, 1, 4), (0, 1, 5)))
        with pytest.raises(FrequencyExceeded):
            gen.gen_x3c_to_cv_neutral(x)
        with pytest.raises(FrequencyExceeded):
            gen.gen_x3c_to_scv_neutral(x)


class TestRandom:
    def test_extremes(self):
        inst = gen.gen_random(5, 1.0, seed=3)
        assert all(
            inst.are_friends(i, j) for i in range(5) for j in range(5) if i != j
        )
        inst = gen.gen_random(5, 0.0, seed=3)
        assert all(
            inst.are_enemies(i, j) for i in range(5) for j in range(5) if i != j
        )

    def test_seed_reproducibility(self):
        a = serialize_instance(gen.gen_random(9, 0.4, 0.3, seed=11, mode="neutrals"))
        b = serialize_instance(gen.gen_random(9, 0.4, 0.3, seed=11, mode="neutrals"))
        c = serialize_instance(gen.gen_random(9, 0.4, 0.3, seed=12, mode="neutrals"))
        assert a == b
        assert a != c

    def test_stream_contract(self):
        # pairs visited lexicographically, one draw per pair
        seed, n, pf, pe = 7, 6, 0.3, 0.4
        rng = random.Random(seed)
        want_f, want_e = [], []
        for i in range(n):
            for j in range(i + 1, n):
                r = rng.random()
                if r < pf:
                    want_f.append((i, j))
                elif r < pf + pe:
                    want_e.append((i, j))
        inst = gen.gen_random(n, pf, pe, seed=seed, mode="neutrals")
        assert inst.friend_pairs() == want_f
        assert inst.enemy_pairs() == want_e

    def test_bad_probabilities(self):
        with pytest.raises(BadProbabilities):
            gen.gen_random(4, 0.8, 0.5, seed=0, mode="neutrals")
        with pytest.raises(BadProbabilities):
            gen.gen_random(4, 0.8, 0.5, seed=0, mode="complete")


class TestParsers:
    def test_dimacs_cnf(self):
        f = gen.parse_dimacs_cnf("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n")
        assert f.n_vars == 3 and f.clauses == ((1, -2, 3), (-1, 2, -3))

    def test_edge_list(self):
        g = gen.parse_edge_list("c g\np edge 4 3\ne 1 2\ne 2 3\ne 3 4\n")
        assert g.n == 4 and g.adj[1] == 0b101

    def test_x3c(self):
        x = gen.parse_x3c("elements 6\nset 1 2 3\nset 4 5 6\n")
        assert x.n_elements == 6 and x.sets == ((0, 1, 2), (3, 4, 5))

    def test_formula_validation(self):
        with pytest.raises(ValidationError):
            CnfFormula(2, ((1, 2, 2),))
        with pytest.raises(ValidationError):
            CnfFormula(2, ((1, 2, 3),))


def test_generator_outputs_pass_model_validation(rng):
    # serialization round-trips imply the relation maps are symmetric and
    # mode-consistent
    from hgame.model import parse_instance

    outs = [
        gen.gen_fig2(),
        gen.gen_3col_to_ce3(UGraph.from_edges(4, [(0, 1), (1, 2)])),
        gen.gen_tripack_to_sce(gen.tripack_library()[0][1]),
        gen.gen_3sat_to_cv(CnfFormula(3, ((1, 2, 3), (-1, -2, -3))))[0],
        gen.gen_x3c_to_sce_neutral(X3cInstance(6, ((0, 1, 2), (3, 4, 5)))),
        gen.gen_random(8, 0.4, 0.2, seed=1, mode="neutrals"),
    ]
    for inst in outs:
        assert parse_instance(serialize_instance(inst)) == inst
