"""Hedonic games with enemy-oriented preferences: core and strict core
solvers, verifiers, brute-force oracles, and hardness-gadget generators."""

from .model import (
    Coalition,
    DegreeProfile,
    GameInstance,
    Mode,
    Partition,
    degree_profile,
    new_instance,
    parse_instance,
    parse_partition,
    serialize_instance,
    serialize_partition,
)
from .preferences import (
    BlockingCertificate,
    Score,
    is_blocking,
    is_friendship_clique,
    is_weakly_blocking,
    prefers,
    score,
    weakly_prefers,
)

__all__ = [
    "Coalition",
    "DegreeProfile",
    "GameInstance",
    "Mode",
    "Partition",
    "degree_profile",
    "new_instance",
    "parse_instance",
    "parse_partition",
    "serialize_instance",
    "serialize_partition",
    "BlockingCertificate",
    "Score",
    "is_blocking",
    "is_friendship_clique",
    "is_weakly_blocking",
    "prefers",
    "score",
    "weakly_prefers",
]

__version__ = "0.1.0"
