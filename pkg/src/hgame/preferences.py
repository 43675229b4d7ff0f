"""Preference relation, (weak) blocking tests, friendship-clique checks.

This module is the semantic ground truth the solvers are measured against:
an agent compares coalitions by enemy count first (fewer is better), then
by friend count (more is better). Weak preference is implemented literally
as the negation of strict preference in the other direction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AgentNotInCoalition
from .model import AgentId, Coalition, GameInstance, Partition, iter_bits, validate_partition


@dataclass(frozen=True, order=True)
class Score:
    """Counts of an agent's enemies and friends inside one coalition."""

    enemy_count: int
    friend_count: int

    def beats(self, other: "Score") -> bool:
        """Strict preference: fewer enemies, then more friends."""
        return self.enemy_count < other.enemy_count or (
            self.enemy_count == other.enemy_count and self.friend_count > other.friend_count
        )


@dataclass(frozen=True)
class BlockingCertificate:
    """A coalition plus per-agent score evidence that it (weakly) blocks."""

    coalition: Coalition
    strict_improvers: frozenset[AgentId]
    per_agent: dict[AgentId, tuple[Score, Score]]  # agent -> (old, new)

    def is_strict(self) -> bool:
        return self.strict_improvers == frozenset(self.coalition.members)


def score_mask(instance: GameInstance, agent: AgentId, coalition_mask: int) -> Score:
    others = coalition_mask & ~(1 << agent)
    return Score(
        (instance.enemy_masks[agent] & others).bit_count(),
        (instance.friend_masks[agent] & others).bit_count(),
    )


def score(instance: GameInstance, agent: AgentId, coalition: Coalition) -> Score:
    if agent not in coalition:
        raise AgentNotInCoalition(f"agent {agent} not in coalition {coalition.members}")
    return score_mask(instance, agent, coalition.mask)


def prefers(instance: GameInstance, agent: AgentId, s1: Coalition, s2: Coalition) -> bool:
    if agent not in s1 or agent not in s2:
        raise AgentNotInCoalition(f"agent {agent} must belong to both coalitions")
    return score(instance, agent, s1).beats(score(instance, agent, s2))


def weakly_prefers(instance: GameInstance, agent: AgentId, s1: Coalition, s2: Coalition) -> bool:
    return not prefers(instance, agent, s2, s1)


def is_friendship_clique(instance: GameInstance, coalition: Coalition) -> bool:
    m = coalition.mask
    return all(m & ~instance.friend_masks[a] & ~(1 << a) == 0 for a in coalition)


def _certificate(
    instance: GameInstance, partition: Partition, cand: Coalition, *, weak: bool
) -> BlockingCertificate | None:
    cmask = cand.mask
    per_agent: dict[AgentId, tuple[Score, Score]] = {}
    strict: set[AgentId] = set()
    for a in cand:
        old = score_mask(instance, a, partition.mask_of_agent(a))
        new = score_mask(instance, a, cmask)
        if old.beats(new):
            return None  # a would refuse to join
        if new.beats(old):
            strict.add(a)
        per_agent[a] = (old, new)
    if weak:
        if not strict:
            return None
    elif len(strict) != len(cand):
        return None
    return BlockingCertificate(cand, frozenset(strict), per_agent)


def is_blocking(
    instance: GameInstance, partition: Partition, coalition: Coalition
) -> BlockingCertificate | None:
    """Certificate iff every member strictly prefers ``coalition``."""
    if len(coalition) == 0:
        raise AgentNotInCoalition("blocking candidate must be nonempty")
    validate_partition(instance, partition)
    return _certificate(instance, partition, coalition, weak=False)


def is_weakly_blocking(
    instance: GameInstance, partition: Partition, coalition: Coalition
) -> BlockingCertificate | None:
    """Certificate iff all members weakly prefer and at least one strictly."""
    if len(coalition) == 0:
        raise AgentNotInCoalition("blocking candidate must be nonempty")
    validate_partition(instance, partition)
    return _certificate(instance, partition, coalition, weak=True)


def aggrieved_singleton(instance: GameInstance, partition: Partition) -> AgentId | None:
    """Smallest agent with an enemy in her own coalition, if any.

    Such an agent alone is always a strictly blocking coalition.
    """
    own = [0] * instance.n
    for c in partition.coalitions:
        m = c.mask
        for a in iter_bits(m):
            own[a] = m
    for a in range(instance.n):
        if instance.enemy_masks[a] & own[a]:
            return a
    return None
