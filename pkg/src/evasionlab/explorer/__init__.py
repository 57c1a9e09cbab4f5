"""Trigger exploration for user-driven staging."""

from .alphabet import EventAlphabet, discover_alphabet, enumerate_sequences
from .explore import (
    ExplorationBudget, ExplorationReport, explore, forcible_guards, force_guards, handler_written_globals,
)

__all__ = [
    "EventAlphabet", "ExplorationBudget", "ExplorationReport", "discover_alphabet", "enumerate_sequences",
    "explore", "forcible_guards", "force_guards", "handler_written_globals",
]
