"""Game representation, validation, and file I/O.

Agents are 0-based integers in memory and 1-based in every file format and
CLI surface. Relations are stored as two adjacency bitmasks per agent
(friends, enemies); a neutral pair is one with neither bit set. In
``complete`` mode the enemy graph is exactly the complement of the
friendship graph, so no pair is neutral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    ConflictingRelation,
    DuplicateAgent,
    IncompleteRelation,
    InvalidPartition,
    MissingAgent,
    OutOfRange,
    ParseError,
)

AgentId = int


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(agents: Iterable[int]) -> int:
    m = 0
    for a in agents:
        m |= 1 << a
    return m


class Mode(str, Enum):
    COMPLETE = "complete"
    WITH_NEUTRALS = "neutrals"


@dataclass(frozen=True, order=True)
class Coalition:
    """A set of agents in canonical sorted order."""

    members: tuple[AgentId, ...]

    @staticmethod
    def of(agents: Iterable[AgentId]) -> "Coalition":
        return Coalition(tuple(sorted(set(agents))))

    @staticmethod
    def from_mask(mask: int) -> "Coalition":
        return Coalition(tuple(iter_bits(mask)))

    @property
    def mask(self) -> int:
        return mask_of(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, agent: AgentId) -> bool:
        return agent in self.members

    def __iter__(self) -> Iterator[AgentId]:
        return iter(self.members)


@dataclass(frozen=True)
class Partition:
    """Disjoint coalitions covering all agents, in canonical order."""

    coalitions: tuple[Coalition, ...]

    @staticmethod
    def of(groups: Iterable[Iterable[AgentId]]) -> "Partition":
        return Partition(tuple(sorted(Coalition.of(g) for g in groups if len(Coalition.of(g)) > 0)))

    def coalition_of(self, agent: AgentId) -> Coalition:
        for c in self.coalitions:
            if agent in c:
                return c
        raise MissingAgent(f"agent {agent} not covered by partition")

    def mask_of_agent(self, agent: AgentId) -> int:
        return self.coalition_of(agent).mask

    def __len__(self) -> int:
        return len(self.coalitions)

    def __iter__(self) -> Iterator[Coalition]:
        return iter(self.coalitions)

    def max_coalition_size(self) -> int:
        return max((len(c) for c in self.coalitions), default=0)


@dataclass(frozen=True)
class DegreeProfile:
    max_friend_degree: int
    max_enemy_degree: int
    max_total_degree: int


@dataclass(frozen=True)
class GameInstance:
    """Immutable game: agent count, mode, and symmetric relation bitmasks."""

    n: int
    mode: Mode
    friend_masks: tuple[int, ...]
    enemy_masks: tuple[int, ...]
    # Optional interval representation: one closed [lo, hi] per agent.
    intervals: tuple[tuple[Fraction, Fraction], ...] | None = field(default=None)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def friends_of(self, agent: AgentId) -> int:
        return self.friend_masks[agent]

    def enemies_of(self, agent: AgentId) -> int:
        return self.enemy_masks[agent]

    def neutrals_of(self, agent: AgentId) -> int:
        return self.all_mask & ~self.friend_masks[agent] & ~self.enemy_masks[agent] & ~(1 << agent)

    def are_friends(self, a: AgentId, b: AgentId) -> bool:
        return bool(self.friend_masks[a] >> b & 1)

    def are_enemies(self, a: AgentId, b: AgentId) -> bool:
        return bool(self.enemy_masks[a] >> b & 1)

    def relation(self, a: AgentId, b: AgentId) -> str:
        if a == b:
            raise OutOfRange("relation of an agent with herself is undefined")
        if self.are_friends(a, b):
            return "friend"
        if self.are_enemies(a, b):
            return "enemy"
        return "neutral"

    def friend_pairs(self) -> list[tuple[AgentId, AgentId]]:
        return [(i, j) for i in range(self.n) for j in iter_bits(self.friend_masks[i] >> (i + 1) << (i + 1))]

    def enemy_pairs(self) -> list[tuple[AgentId, AgentId]]:
        return [(i, j) for i in range(self.n) for j in iter_bits(self.enemy_masks[i] >> (i + 1) << (i + 1))]

    def with_intervals(self, intervals: Sequence[tuple[Fraction, Fraction]]) -> "GameInstance":
        ivs = tuple((Fraction(lo), Fraction(hi)) for lo, hi in intervals)
        if len(ivs) != self.n:
            raise OutOfRange(f"expected {self.n} intervals, got {len(ivs)}")
        return GameInstance(self.n, self.mode, self.friend_masks, self.enemy_masks, ivs)


def _check_pair(n: int, i: int, j: int) -> None:
    if not (0 <= i < n and 0 <= j < n):
        raise OutOfRange(f"pair ({i}, {j}) out of range for {n} agents")
    if i == j:
        raise OutOfRange(f"self-pair ({i}, {i}) is not allowed")


def new_instance(
    n: int,
    friends: Iterable[tuple[AgentId, AgentId]],
    enemies: Iterable[tuple[AgentId, AgentId]] = (),
    mode: Mode | str = Mode.COMPLETE,
) -> GameInstance:
    """Build a validated instance from unordered pair lists.

    In complete mode the enemy list may be empty (the complement of the
    friendship relation is derived) or must equal that complement exactly.
    """
    mode = Mode(mode)
    if n < 0:
        raise OutOfRange("agent count must be nonnegative")
    fm = [0] * n
    em = [0] * n
    seen_f: set[tuple[int, int]] = set()
    for i, j in friends:
        _check_pair(n, i, j)
        key = (min(i, j), max(i, j))
        if key in seen_f:
            raise ConflictingRelation(f"friend pair {key} listed twice")
        seen_f.add(key)
        fm[i] |= 1 << j
        fm[j] |= 1 << i
    seen_e: set[tuple[int, int]] = set()
    for i, j in enemies:
        _check_pair(n, i, j)
        key = (min(i, j), max(i, j))
        if key in seen_e:
            raise ConflictingRelation(f"enemy pair {key} listed twice")
        if key in seen_f:
            raise ConflictingRelation(f"pair {key} listed as both friend and enemy")
        seen_e.add(key)
        em[i] |= 1 << j
        em[j] |= 1 << i
    if mode is Mode.COMPLETE:
        if not seen_e:
            full = (1 << n) - 1
            for i in range(n):
                em[i] = full & ~fm[i] & ~(1 << i)
        else:
            for i in range(n):
                for j in range(i + 1, n):
                    if not (fm[i] >> j & 1) and not (em[i] >> j & 1):
                        raise IncompleteRelation(
                            f"complete mode: pair ({i}, {j}) is neither friend nor enemy"
                        )
    return GameInstance(n, mode, tuple(fm), tuple(em))


def degree_profile(instance: GameInstance) -> DegreeProfile:
    mf = max((m.bit_count() for m in instance.friend_masks), default=0)
    me = max((m.bit_count() for m in instance.enemy_masks), default=0)
    mt = max(
        ((f | e).bit_count() for f, e in zip(instance.friend_masks, instance.enemy_masks)),
        default=0,
    )
    return DegreeProfile(mf, me, mt)


# ---------------------------------------------------------------------------
# File formats. Instance files are line oriented:
#   agents <n>
#   mode complete|neutrals
#   friend <i> <j>
#   enemy <i> <j>
#   interval <i> <lo> <hi>     (rational endpoints, e.g. 1/2)
# with 1-based agent ids and '#' comment lines. Partition files hold one
# coalition per line as space-separated 1-based ids.
# ---------------------------------------------------------------------------


def _parse_fraction(text: str, lineno: int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational number {text!r}", lineno) from exc


def parse_instance(text: str) -> GameInstance:
    n: int | None = None
    mode: Mode | None = None
    friends: list[tuple[int, int]] = []
    enemies: list[tuple[int, int]] = []
    intervals: dict[int, tuple[Fraction, Fraction]] = {}

    def agent(tok: str, lineno: int) -> int:
        try:
            v = int(tok)
        except ValueError as exc:
            raise ParseError(f"bad agent id {tok!r}", lineno) from exc
        if n is None:
            raise ParseError("agent id before 'agents' header", lineno)
        if not (1 <= v <= n):
            raise ParseError(f"agent id {v} out of range 1..{n}", lineno)
        return v - 1

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "agents":
            if n is not None:
                raise ParseError("duplicate 'agents' header", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'agents <n>'", lineno)
            n = int(parts[1])
        elif kind == "mode":
            if len(parts) != 2 or parts[1] not in ("complete", "neutrals"):
                raise ParseError("expected 'mode complete|neutrals'", lineno)
            mode = Mode(parts[1])
        elif kind in ("friend", "enemy"):
            if len(parts) != 3:
                raise ParseError(f"expected '{kind} <i> <j>'", lineno)
            pair = (agent(parts[1], lineno), agent(parts[2], lineno))
            (friends if kind == "friend" else enemies).append(pair)
        elif kind == "interval":
            if len(parts) != 4:
                raise ParseError("expected 'interval <i> <lo> <hi>'", lineno)
            a = agent(parts[1], lineno)
            lo = _parse_fraction(parts[2], lineno)
            hi = _parse_fraction(parts[3], lineno)
            if hi < lo:
                raise ParseError(f"empty interval [{lo}, {hi}]", lineno)
            if a in intervals:
                raise ParseError(f"duplicate interval for agent {a + 1}", lineno)
            intervals[a] = (lo, hi)
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)
    if n is None:
        raise ParseError("missing 'agents' header")
    if mode is None:
        raise ParseError("missing 'mode' header")
    inst = new_instance(n, friends, enemies, mode)
    if intervals:
        missing = [i + 1 for i in range(n) if i not in intervals]
        if missing:
            raise ParseError(f"interval lines present but agents {missing} have none")
        inst = inst.with_intervals([intervals[i] for i in range(n)])
    return inst


def serialize_instance(instance: GameInstance) -> str:
    """Canonical text form: lexicographically sorted edges, friends before
    enemies; complete-mode enemy edges are omitted (they are derived)."""
    lines = [f"agents {instance.n}", f"mode {instance.mode.value}"]
    for i, j in instance.friend_pairs():
        lines.append(f"friend {i + 1} {j + 1}")
    if instance.mode is Mode.WITH_NEUTRALS:
        for i, j in instance.enemy_pairs():
            lines.append(f"enemy {i + 1} {j + 1}")
    if instance.intervals is not None:
        for i, (lo, hi) in enumerate(instance.intervals):
            lines.append(f"interval {i + 1} {lo} {hi}")
    return "\n".join(lines) + "\n"


def validate_partition(instance: GameInstance, partition: Partition) -> Partition:
    seen = 0
    for c in partition.coalitions:
        if len(c) == 0:
            raise InvalidPartition("empty coalition")
        m = c.mask
        if m & ~instance.all_mask:
            raise OutOfRange("coalition member out of range")
        if m & seen:
            dup = next(iter_bits(m & seen))
            raise DuplicateAgent(f"agent {dup + 1} appears in two coalitions")
        seen |= m
    if seen != instance.all_mask:
        miss = next(iter_bits(instance.all_mask & ~seen))
        raise MissingAgent(f"agent {miss + 1} missing from partition")
    return partition


def parse_partition(text: str, instance: GameInstance) -> Partition:
    groups: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        group: list[int] = []
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError as exc:
                raise ParseError(f"bad agent id {tok!r}", lineno) from exc
            if not (1 <= v <= instance.n):
                raise ParseError(f"agent id {v} out of range 1..{instance.n}", lineno)
            if v - 1 in group:
                raise DuplicateAgent(f"agent {v} appears twice")
            group.append(v - 1)
        groups.append(group)
    return validate_partition(instance, Partition.of(groups))


def serialize_partition(partition: Partition) -> str:
    lines = [" ".join(str(a + 1) for a in c.members) for c in partition.coalitions]
    return "\n".join(lines) + ("\n" if lines else "")
