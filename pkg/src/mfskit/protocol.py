"""Challenge-response protocol execution and fraud-strategy simulation.

Each session: both sides exchange nonces, derive the session labeling of
the shared graph from a keyed pseudorandom bit stream, then run n timed
rounds where a challenge bit steers one step of a walk and the response is
the label of the vertex reached.  The verifier accepts when every response
matches its own walk and every round's timing flag passes.

The pseudorandom function is NOT a cryptographic primitive here, only a
fixed, documented bit stream so that runs are reproducible: the seed is
the first 8 bytes (big endian) of BLAKE2b over ``len(key) || key || len(N_V)
|| N_V || len(N_P) || N_P`` (lengths as 4-byte big-endian prefixes), and
bits come from the splitmix64 sequence of that seed, each 64-bit block
consumed least-significant bit first.  Bit assignment order: one label bit
per vertex in ascending id order, then for each vertex with two out-edges
in ascending id order, one bit deciding which out-edge is labeled "0".

Timing is abstract: per-round boolean flags stand in for the round-trip
time check, applied identically to every strategy.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from math import sqrt
from typing import Callable, Iterator, Sequence

from .errors import DEFAULT_LIMITS, Limits, ProtocolError
from .graphs import LabeledDigraph
from .walks import most_frequent_sequence

_MASK64 = (1 << 64) - 1


def _splitmix64(state: int) -> Iterator[int]:
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


class PrfStream:
    """Deterministic bit stream from a 64-bit seed (splitmix64 blocks,
    least-significant bit first)."""

    def __init__(self, seed: int):
        self._blocks = _splitmix64(seed & _MASK64)
        self._buf = 0
        self._left = 0

    def bit(self) -> int:
        return self.bits(1)

    def bits(self, k: int) -> int:
        out = 0
        filled = 0
        while filled < k:
            if self._left == 0:
                self._buf = next(self._blocks)
                self._left = 64
            take = min(k - filled, self._left)
            out |= (self._buf & ((1 << take) - 1)) << filled
            self._buf >>= take
            self._left -= take
            filled += take
        return out


def prf_seed(key: bytes, verifier_nonce: bytes, prover_nonce: bytes) -> int:
    h = hashlib.blake2b(digest_size=8)
    for part in (key, verifier_nonce, prover_nonce):
        h.update(len(part).to_bytes(4, "big"))
        h.update(part)
    return int.from_bytes(h.digest(), "big")


def label_graph_from_prf(
    structure: LabeledDigraph,
    key: bytes,
    verifier_nonce: bytes,
    prover_nonce: bytes,
) -> LabeledDigraph:
    """Session labeling: one uniform bit per vertex label, one bit per
    degree-2 vertex choosing its "0" out-edge.  Deterministic in
    (key, nonces); single out-edges are labeled "0"."""
    n = structure.vertex_count
    stream = PrfStream(prf_seed(key, verifier_nonce, prover_nonce))
    word = stream.bits(n)
    labels = tuple("1" if (word >> v) & 1 else "0" for v in range(n))
    edge_labels = []
    for v in range(n):
        deg = len(structure.out_edges[v])
        if deg == 0:
            edge_labels.append(())
        elif deg == 1:
            edge_labels.append(("0",))
        elif deg == 2:
            edge_labels.append(("1", "0") if stream.bits(1) else ("0", "1"))
        else:
            raise ProtocolError(
                f"vertex {v} has out-degree {deg}; protocol graphs need <= 2"
            )
    return LabeledDigraph._unchecked(
        ("0", "1"),
        labels,
        structure.out_edges,
        tuple(edge_labels),
        structure.names,
    )


@dataclass(frozen=True)
class AdversaryStrategy:
    """Prover behavior: "honest" walks and answers truthfully;
    "early-reply" commits to replies before seeing any challenge, by
    default the most-frequent-sequence suffix recomputed per session;
    "greedy-early-reply" is an experimental heuristic that picks each
    reply bit by the larger walk mass one step ahead."""

    kind: str
    replies: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("honest", "early-reply", "greedy-early-reply"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.replies is not None:
            object.__setattr__(self, "replies", tuple(self.replies))


def honest() -> AdversaryStrategy:
    return AdversaryStrategy("honest")


def early_reply(replies: Sequence[str] | str | None = None) -> AdversaryStrategy:
    return AdversaryStrategy(
        "early-reply", tuple(replies) if replies is not None else None
    )


def greedy_early_reply() -> AdversaryStrategy:
    return AdversaryStrategy("greedy-early-reply")


@dataclass(frozen=True)
class ProtocolConfig:
    graph: LabeledDigraph
    start: int
    rounds: int
    key: bytes = b"shared-secret"
    trials: int = 1
    seed: int = 0
    timing: str | tuple[bool, ...] = "all-pass"
    # session-labeling hook, replaceable by any function with the same
    # signature (structure, key, verifier_nonce, prover_nonce) -> graph
    labeler: Callable[..., LabeledDigraph] = label_graph_from_prf

    def __post_init__(self):
        self.graph.check_vertex(self.start)
        if self.rounds < 1:
            raise ValueError("need at least one round")
        if self.timing != "all-pass":
            flags = tuple(bool(b) for b in self.timing)
            if len(flags) != self.rounds:
                raise ValueError("timing flags must cover every round")
            object.__setattr__(self, "timing", flags)

    def timing_flags(self) -> tuple[bool, ...]:
        if self.timing == "all-pass":
            return (True,) * self.rounds
        return self.timing  # type: ignore[return-value]


@dataclass(frozen=True)
class RoundRecord:
    challenge: str
    response: str
    expected: str
    timing_ok: bool


@dataclass(frozen=True)
class SessionTranscript:
    verifier_nonce: str
    prover_nonce: str
    rounds: tuple[RoundRecord, ...]
    accepted: bool
    failed_round: int | None

    def to_json_dict(self) -> dict:
        return {
            "verifier_nonce": self.verifier_nonce,
            "prover_nonce": self.prover_nonce,
            "rounds": [
                {
                    "challenge": r.challenge,
                    "response": r.response,
                    "expected": r.expected,
                    "timing_ok": r.timing_ok,
                }
                for r in self.rounds
            ],
            "accepted": self.accepted,
            "failed_round": self.failed_round,
        }


def _trial_seed(seed: int, index: int) -> int:
    # one mixing step separates trial streams; documented, fixed
    gen = _splitmix64((seed ^ (index * 0xD1342543DE82EF95)) & _MASK64)
    return next(gen)


def _replies_for(
    strategy: AdversaryStrategy,
    labeled: LabeledDigraph,
    start: int,
    rounds: int,
    limits: Limits,
) -> tuple[str, ...]:
    if strategy.replies is not None:
        if len(strategy.replies) != rounds:
            raise ValueError(
                f"fixed replies cover {len(strategy.replies)} rounds, need {rounds}"
            )
        return strategy.replies
    if strategy.kind == "early-reply":
        mfs = most_frequent_sequence(labeled, start, rounds + 1, limits=limits)
        return mfs.sequence[1:]
    # greedy: follow the larger next-step walk mass (ties to "0")
    counts = {start: 1}
    replies = []
    for _ in range(rounds):
        nxt = {"0": {}, "1": {}}
        for v, c in counts.items():
            for w in labeled.out_edges[v]:
                side = nxt[labeled.labels[w]]
                side[w] = side.get(w, 0) + c
        mass0 = sum(nxt["0"].values())
        mass1 = sum(nxt["1"].values())
        sym = "0" if mass0 >= mass1 else "1"
        replies.append(sym)
        counts = nxt[sym]
    return tuple(replies)


def _verifier_walk(labeled: LabeledDigraph, start: int, challenges) -> list[int]:
    walk = []
    v = start
    for c in challenges:
        nxt = labeled.successor(v, c)
        if nxt is None:
            raise ProtocolError(
                f"no out-edge labeled {c!r} at vertex {v}; the configured "
                "graph dead-ends before the last round"
            )
        v = nxt
        walk.append(v)
    return walk


def run_session(
    config: ProtocolConfig,
    strategy: AdversaryStrategy,
    *,
    trial_index: int = 0,
    limits: Limits = DEFAULT_LIMITS,
) -> SessionTranscript:
    """Execute one full session; deterministic in (config.seed, trial_index)."""
    rng = random.Random(_trial_seed(config.seed, trial_index))
    verifier_nonce = rng.getrandbits(64).to_bytes(8, "big")
    prover_nonce = rng.getrandbits(64).to_bytes(8, "big")
    labeled = config.labeler(
        config.graph, config.key, verifier_nonce, prover_nonce
    )
    challenges = [str(rng.getrandbits(1)) for _ in range(config.rounds)]
    timing = config.timing_flags()

    walk = _verifier_walk(labeled, config.start, challenges)
    expected = [labeled.labels[v] for v in walk]
    if strategy.kind == "honest":
        responses = expected[:]  # the honest prover runs the same walk
    else:
        responses = list(
            _replies_for(strategy, labeled, config.start, config.rounds, limits)
        )

    records = []
    failed = None
    for i in range(config.rounds):
        ok = timing[i] and responses[i] == expected[i]
        records.append(
            RoundRecord(challenges[i], responses[i], expected[i], timing[i])
        )
        if not ok and failed is None:
            failed = i + 1
    return SessionTranscript(
        verifier_nonce=verifier_nonce.hex(),
        prover_nonce=prover_nonce.hex(),
        rounds=tuple(records),
        accepted=failed is None,
        failed_round=failed,
    )


@dataclass(frozen=True)
class RateReport:
    trials: int
    accepted: int
    rate: float
    std_error: float
    seed: int
    strategy: str

    def to_json_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "trials": self.trials,
            "accepted": self.accepted,
            "rate": self.rate,
            "std_error": self.std_error,
            "seed": self.seed,
        }


def estimate_success_rate(
    config: ProtocolConfig,
    strategy: AdversaryStrategy,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> RateReport:
    """Acceptance rate over config.trials independent sessions.

    Each trial derives its own stream from (seed, trial index), so results
    are order-independent and reproducible.
    """
    accepted = 0
    for t in range(config.trials):
        if _session_accepts(config, strategy, t, limits):
            accepted += 1
    rate = accepted / config.trials
    std_error = sqrt(rate * (1.0 - rate) / config.trials)
    return RateReport(
        trials=config.trials,
        accepted=accepted,
        rate=rate,
        std_error=std_error,
        seed=config.seed,
        strategy=strategy.kind,
    )


def _session_accepts(config, strategy, trial_index, limits) -> bool:
    # transcript-free fast path; must mirror run_session's decision
    rng = random.Random(_trial_seed(config.seed, trial_index))
    verifier_nonce = rng.getrandbits(64).to_bytes(8, "big")
    prover_nonce = rng.getrandbits(64).to_bytes(8, "big")
    labeled = config.labeler(
        config.graph, config.key, verifier_nonce, prover_nonce
    )
    challenges = [str(rng.getrandbits(1)) for _ in range(config.rounds)]
    timing = config.timing_flags()
    if not all(timing):
        return False
    walk = _verifier_walk(labeled, config.start, challenges)
    if strategy.kind == "honest":
        return True
    replies = _replies_for(strategy, labeled, config.start, config.rounds, limits)
    return all(
        labeled.labels[v] == replies[i] for i, v in enumerate(walk)
    )


def exhaustive_challenge_success(
    labeled: LabeledDigraph,
    start: int,
    rounds: int,
    replies: Sequence[str] | str | None = None,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> tuple[int, int]:
    """Count accepting challenge strings for a FIXED labeled graph.

    With replies=None the early-reply strategy (most-frequent-sequence
    suffix) is used.  Returns (accepting, 2**rounds).
    """
    if labeled.edge_labels is None:
        raise ProtocolError("exhaustive challenge runs need edge labels")
    if replies is None:
        replies = most_frequent_sequence(
            labeled, start, rounds + 1, limits=limits
        ).sequence[1:]
    else:
        replies = tuple(replies)
        if len(replies) != rounds:
            raise ValueError(f"need {rounds} reply symbols")
    accepted = 0
    for mask in range(1 << rounds):
        challenges = [str((mask >> i) & 1) for i in range(rounds)]
        walk = _verifier_walk(labeled, start, challenges)
        if all(labeled.labels[v] == replies[i] for i, v in enumerate(walk)):
            accepted += 1
    return accepted, 1 << rounds
