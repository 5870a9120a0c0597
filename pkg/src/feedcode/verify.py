"""Exhaustive certification of feedback codecs against an adaptive adversary.

The adversary sees the whole transcript and picks each error magnitude
after the sender's symbol is fixed.  Search is depth-first with the
zero-error branch first, so the first failing leaf is the lexicographically
first counterexample.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from typing import Optional

from .capacity import ball_volume, finite_upper_bound_M
from .channel import classify
from .codecs.base import Codec, measure_rate

DEFAULT_NODE_BUDGET = 10**8
MESSAGE_SAMPLE_LIMIT = 4096

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


def node_budget_from_env(default: int = DEFAULT_NODE_BUDGET) -> int:
    raw = os.environ.get("FEEDCODE_NODE_BUDGET")
    if raw is None or not raw.strip():
        return default
    return int(raw.strip(), 10)


@dataclass
class VerifyResult:
    verdict: str
    nodes: int
    counterexample: Optional[tuple[int, ...]] = None
    message: Optional[int] = None
    sampled: bool = False
    messages_checked: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_text(self, q: int) -> str:
        from .session import format_symbols

        lines = [f"VERDICT={self.verdict}", f"nodes={self.nodes}"]
        if self.counterexample is not None:
            lines.append(f"counterexample={format_symbols(self.counterexample, q)}")
            lines.append(f"message={self.message}")
        if self.messages_checked:
            lines.append(f"messages={self.messages_checked}{' (sampled)' if self.sampled else ''}")
        return "\n".join(lines)


class _BudgetExceeded(Exception):
    pass


def tree_size_estimate(codec: Codec, t: int) -> int:
    """Upper bound on leaves of the adversary game tree for one message."""
    return ball_volume(codec.n, min(t, codec.n), codec.r)


def verify_exhaustive(codec: Codec, t: int, m: int, node_budget: int = DEFAULT_NODE_BUDGET,
                      memo: bool = True) -> VerifyResult:
    """Check that ``m`` decodes correctly under every adaptive error strategy of weight <= ``t``."""
    if tree_size_estimate(codec, t) > node_budget:
        return VerifyResult(INCONCLUSIVE, 0, message=m)
    n, q = codec.n, codec.q
    ch = codec.channel
    passed: set = set()
    nodes = 0
    errors: list[int] = []
    received: list[int] = []

    def explore(enc, budget: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise _BudgetExceeded
        pos = len(received)
        if pos == n:
            return codec.decode(received) == m
        key = None
        if memo:
            fp = enc.fingerprint()
            if fp is not None:
                key = (pos, fp, budget)
                if key in passed:
                    return True
        x = enc.emit()
        offsets = ch.offsets(x) if budget > 0 else (0,)
        for i, e in enumerate(offsets):
            child = enc if i == len(offsets) - 1 else enc.copy()
            y = (x + e) % q
            child.observe(y)
            errors.append(e)
            received.append(y)
            ok = explore(child, budget - (1 if e else 0))
            if not ok:
                return False
            errors.pop()
            received.pop()
        if key is not None:
            passed.add(key)
        return True

    try:
        ok = explore(codec.encoder(m), t)
    except _BudgetExceeded:
        return VerifyResult(INCONCLUSIVE, nodes, message=m)
    if ok:
        return VerifyResult(PASS, nodes, message=m)
    ce = tuple(errors) + (0,) * (n - len(errors))
    return VerifyResult(FAIL, nodes, counterexample=ce, message=m)


def _message_plan(M: int, max_messages: int, seed: int) -> tuple[list[int], bool]:
    if M <= max_messages:
        return list(range(1, M + 1)), False
    rng = random.Random(seed)
    picks = {1, M}
    while len(picks) < max_messages:
        picks.add(rng.randint(1, M))
    return sorted(picks), True


def verify_all_messages(codec: Codec, t: Optional[int] = None, node_budget: int = DEFAULT_NODE_BUDGET,
                        max_messages: int = MESSAGE_SAMPLE_LIMIT, seed: int = 0) -> VerifyResult:
    """Run :func:`verify_exhaustive` over every message, or a seeded sample above ``max_messages``.

    ``node_budget`` is shared across all messages.
    """
    t = codec.t if t is None else t
    messages, sampled = _message_plan(codec.M, max_messages, seed)
    total = 0
    for m in messages:
        res = verify_exhaustive(codec, t, m, node_budget - total)
        total += res.nodes
        if res.verdict != PASS:
            res.nodes = total
            res.sampled = sampled
            res.messages_checked = len(messages)
            return res
    return VerifyResult(PASS, total, sampled=sampled, messages_checked=len(messages))


def verify_enumerated(codec: Codec, t: int, m: int) -> VerifyResult:
    """Replay every fixed error vector of weight <= ``t`` through a fresh session.

    A deterministic encoder facing an adaptive adversary still realises one
    fixed error vector, so this flat enumeration reaches the same outcomes
    as the game-tree search, in the same lexicographic order.  It shares no
    search code with :func:`verify_exhaustive` and serves as its oracle;
    cost is ``|offsets|**n`` sessions.
    """
    ch, q = codec.channel, codec.q
    alphabet = sorted(set().union(*(ch.offsets(x) for x in range(q))))
    count = 0
    for errs in itertools.product(alphabet, repeat=codec.n):
        if sum(1 for e in errs if e) > t:
            continue
        enc = codec.encoder(m)
        received = []
        for e in errs:
            x = enc.emit()
            if e not in ch.offsets(x):
                break
            received.append((x + e) % q)
            enc.observe(received[-1])
        else:
            count += 1
            if codec.decode(received) != m:
                return VerifyResult(FAIL, count, counterexample=tuple(errs), message=m)
    return VerifyResult(PASS, count, message=m)


class BoundViolation(AssertionError):
    """A codec carries more messages than the counting bound allows."""


@dataclass
class BoundReport:
    M: int
    bound: int
    rate: float
    bound_rate: float
    gap: float = field(init=False)

    def __post_init__(self):
        self.gap = self.bound_rate - self.rate

    def to_text(self) -> str:
        return (f"M={self.M}\nbound={self.bound}\nrate={self.rate:.9f}\n"
                f"bound_rate={self.bound_rate:.9f}\ngap={self.gap:.9f}")


def check_bound(codec: Codec, t: Optional[int] = None) -> BoundReport:
    t = codec.t if t is None else t
    q, n, r = codec.q, codec.n, codec.r
    # the ball count assumes every input reaches exactly r+1 outputs
    if not classify(codec.channel).is_lambda(r):
        raise ValueError(f"{codec.descriptor()}: counting bound only applies to wraparound channels")
    bound = finite_upper_bound_M(q, r, n, min(t, n))
    if codec.M > bound:
        raise BoundViolation(f"{codec.descriptor()}: M={codec.M} exceeds counting bound {bound}")
    rate = float(measure_rate(codec))
    bound_rate = math.log(bound) / math.log(q) / n if n and bound else 0.0
    return BoundReport(codec.M, bound, rate, bound_rate)
