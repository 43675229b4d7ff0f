import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgame.errors import (
    ConflictingRelation,
    DuplicateAgent,
    IncompleteRelation,
    MissingAgent,
    OutOfRange,
    ParseError,
)
from hgame.model import (
    Coalition,
    Mode,
    Partition,
    degree_profile,
    new_instance,
    parse_instance,
    parse_partition,
    serialize_instance,
    serialize_partition,
)
from conftest import paper_example, random_complete, random_neutral, random_partition


def test_paper_example_complement():
    inst = paper_example()
    assert inst.enemy_pairs() == [(0, 2)]
    assert inst.relation(0, 2) == "enemy"
    assert inst.relation(2, 0) == "enemy"
    assert inst.relation(0, 1) == "friend"


def test_singleton_instance():
    inst = new_instance(1, [], [], Mode.COMPLETE)
    assert inst.n == 1
    assert inst.friend_masks == (0,)
    assert inst.enemy_masks == (0,)


def test_conflicting_relation():
    with pytest.raises(ConflictingRelation):
        new_instance(3, [(0, 1)], [(0, 1)], Mode.COMPLETE)


def test_double_listing_rejected():
    with pytest.raises(ConflictingRelation):
        new_instance(3, [(0, 1), (1, 0)], [])


def test_out_of_range():
    with pytest.raises(OutOfRange):
        new_instance(3, [(0, 3)], [])
    with pytest.raises(OutOfRange):
        new_instance(3, [(1, 1)], [])


def test_incomplete_relation():
    # explicit enemies must be the exact complement in complete mode
    with pytest.raises(IncompleteRelation):
        new_instance(3, [(0, 1)], [(0, 2)], Mode.COMPLETE)
    inst = new_instance(3, [(0, 1)], [(0, 2), (1, 2)], Mode.COMPLETE)
    assert inst.relation(1, 2) == "enemy"


def test_symmetry_every_pair_exactly_one_relation(rng):
    for _ in range(30):
        n = rng.randint(1, 9)
        inst = random_neutral(rng, n) if rng.random() < 0.5 else random_complete(rng, n)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                assert inst.relation(i, j) == inst.relation(j, i)
                kinds = [inst.are_friends(i, j), inst.are_enemies(i, j)]
                assert sum(kinds) <= 1
                if inst.mode is Mode.COMPLETE:
                    assert sum(kinds) == 1


def test_complete_degree_sum(rng):
    for _ in range(20):
        n = rng.randint(1, 10)
        inst = random_complete(rng, n)
        for i in range(n):
            assert inst.friend_masks[i].bit_count() + inst.enemy_masks[i].bit_count() == n - 1


def test_degree_profile_examples(rng):
    prof = degree_profile(paper_example())
    assert (prof.max_friend_degree, prof.max_enemy_degree, prof.max_total_degree) == (2, 1, 2)
    edgeless = new_instance(5, [], [], Mode.WITH_NEUTRALS)
    assert degree_profile(edgeless) == degree_profile(edgeless).__class__(0, 0, 0)
    inst = random_neutral(rng, 8)
    prof = degree_profile(inst)
    assert prof.max_friend_degree == max(
        sum(inst.are_friends(i, j) for j in range(8) if j != i) for i in range(8)
    )
    assert prof.max_enemy_degree == max(
        sum(inst.are_enemies(i, j) for j in range(8) if j != i) for i in range(8)
    )


def test_parse_paper_example():
    text = "agents 3\nmode complete\nfriend 1 2\nfriend 2 3\n"
    inst = parse_instance(text)
    assert inst.friend_pairs() == [(0, 1), (1, 2)]
    assert inst.enemy_pairs() == [(0, 2)]


def test_parse_empty_instance():
    inst = parse_instance("agents 0\nmode complete\n")
    assert inst.n == 0
    assert serialize_instance(inst) == "agents 0\nmode complete\n"


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as ei:
        parse_instance("agents 3\nmode complete\nfriend 1 4\n")
    assert "line 3" in str(ei.value)
    with pytest.raises(ParseError):
        parse_instance("mode complete\n")
    with pytest.raises(ParseError):
        parse_instance("agents 2\n")
    with pytest.raises(ParseError):
        parse_instance("agents 2\nmode complete\nnonsense 1 2\n")


def test_round_trip_random_instances(rng):
    for _ in range(100):
        n = rng.randint(0, 10)
        inst = random_neutral(rng, n) if rng.random() < 0.5 else random_complete(rng, n)
        text = serialize_instance(inst)
        again = parse_instance(text)
        assert again == inst
        assert serialize_instance(again) == text


def test_interval_lines_round_trip():
    text = (
        "agents 3\nmode complete\nfriend 1 2\nfriend 2 3\n"
        "interval 1 0 1\ninterval 2 1/2 2\ninterval 3 3/2 3\n"
    )
    inst = parse_instance(text)
    assert inst.intervals is not None
    assert inst.intervals[1] == (Fraction(1, 2), Fraction(2))
    assert parse_instance(serialize_instance(inst)) == inst


def test_interval_lines_must_cover_all_agents():
    with pytest.raises(ParseError):
        parse_instance("agents 2\nmode complete\nfriend 1 2\ninterval 1 0 1\n")


def test_parse_partition_examples():
    inst = paper_example()
    part = parse_partition("1 2\n3\n", inst)
    assert [c.members for c in part.coalitions] == [(0, 1), (2,)]
    singles = parse_partition("1\n2\n3\n", inst)
    assert len(singles) == 3
    with pytest.raises(DuplicateAgent):
        parse_partition("1 2\n2 3\n", inst)
    with pytest.raises(MissingAgent):
        parse_partition("1 2\n", inst)


def test_partition_round_trip(rng):
    inst = random_complete(rng, 7)
    for _ in range(20):
        part = random_partition(rng, 7)
        text = serialize_partition(part)
        assert parse_partition(text, inst) == part


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 8), st.randoms(use_true_random=False))
def test_serialization_is_canonical_fixed_point(n, pyrandom):
    rng = random.Random(pyrandom.getrandbits(32))
    inst = random_neutral(rng, n)
    once = serialize_instance(inst)
    assert serialize_instance(parse_instance(once)) == once


def test_coalition_canonical_order():
    c = Coalition.of([3, 1, 2, 1])
    assert c.members == (1, 2, 3)
    assert Coalition.from_mask(0b1010).members == (1, 3)
    assert len(c) == 3 and 2 in c
