import random

import pytest

from hgame.model import GameInstance, Mode, Partition, new_instance


def random_complete(rng: random.Random, n: int, p: float | None = None) -> GameInstance:
    p = rng.choice([0.2, 0.35, 0.5, 0.65, 0.8]) if p is None else p
    friends = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return new_instance(n, friends)


def random_neutral(rng: random.Random, n: int) -> GameInstance:
    pf = rng.choice([0.2, 0.35, 0.5])
    pe = rng.choice([0.15, 0.3, 0.45])
    friends, enemies = [], []
    for i in range(n):
        for j in range(i + 1, n):
            r = rng.random()
            if r < pf:
                friends.append((i, j))
            elif r < pf + pe:
                enemies.append((i, j))
    return new_instance(n, friends, enemies, Mode.WITH_NEUTRALS)


def random_partition(rng: random.Random, n: int) -> Partition:
    k = rng.randint(1, n)
    groups = [[] for _ in range(k)]
    for a in range(n):
        groups[rng.randrange(k)].append(a)
    return Partition.of(g for g in groups if g)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def paper_example() -> GameInstance:
    """Three agents, friendship path, the endpoints are enemies."""
    return new_instance(3, [(0, 1), (1, 2)])


def paper_example_neutral() -> GameInstance:
    """Neutrals variant: one friendship, one enemy pair, one neutral pair."""
    return new_instance(3, [(0, 1)], [(0, 2)], Mode.WITH_NEUTRALS)
