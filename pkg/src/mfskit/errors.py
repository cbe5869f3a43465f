"""Exception types and resource-limit configuration shared by all modules."""

from __future__ import annotations

import os
from dataclasses import dataclass


class MfskitError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(MfskitError):
    """Structurally invalid graph, label, or walk query."""


class GraphFormatError(GraphError):
    """Malformed graph file; message carries a line or field diagnostic."""


class LabelingConflictError(GraphError):
    """Sibling-complement constraints cannot be satisfied simultaneously."""


class DimacsError(MfskitError):
    """Malformed or rejected CNF input; message carries a line diagnostic."""


class ReductionError(MfskitError):
    """Invalid input to a reduction post-processing step."""


class ProtocolError(MfskitError):
    """Protocol session cannot proceed (e.g. the challenge walk dead-ends)."""


class ResourceLimitError(MfskitError):
    """A computation was refused because it exceeds a configured limit."""


def _env_int(name, default):
    raw = os.environ.get(name)
    return default if raw is None else int(raw)


@dataclass(frozen=True)
class Limits:
    """Explosion guards for the exponential search and enumeration paths.

    Defaults can be overridden process-wide through the environment
    variables named after each field (MFSKIT_MAX_WALKS etc.).
    """

    max_walks: int = 2**26
    max_sequences: int = 2**26
    max_exact_rounds: int = 12
    max_brute_vertices: int = 22

    @classmethod
    def from_env(cls) -> "Limits":
        return cls(
            max_walks=_env_int("MFSKIT_MAX_WALKS", cls.max_walks),
            max_sequences=_env_int("MFSKIT_MAX_SEQUENCES", cls.max_sequences),
            max_exact_rounds=_env_int("MFSKIT_MAX_EXACT_ROUNDS", cls.max_exact_rounds),
            max_brute_vertices=_env_int(
                "MFSKIT_MAX_BRUTE_VERTICES", cls.max_brute_vertices
            ),
        )


DEFAULT_LIMITS = Limits.from_env()
