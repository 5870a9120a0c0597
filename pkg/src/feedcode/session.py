"""One feedback transmission: encoder, adversarial channel, decoder."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .codecs.base import Codec


class AdversaryError(RuntimeError):
    """The adversary broke its contract (budget or channel)."""

    def __init__(self, position: int, magnitude: int, reason: str):
        super().__init__(f"position {position}: magnitude {magnitude} rejected ({reason})")
        self.position = position
        self.magnitude = magnitude


@dataclass(frozen=True)
class Transcript:
    q: int
    message: int
    sent: tuple[int, ...]
    received: tuple[int, ...]
    errors: tuple[int, ...]
    decoded: Optional[int]

    @property
    def weight(self) -> int:
        return sum(1 for e in self.errors if e)

    @property
    def ok(self) -> bool:
        return self.decoded == self.message

    def to_text(self) -> str:
        dec = "FAIL" if self.decoded is None else str(self.decoded)
        return "\n".join([
            f"m={self.message}",
            f"sent={format_symbols(self.sent, self.q)}",
            f"recv={format_symbols(self.received, self.q)}",
            f"err={format_symbols(self.errors, self.q)}",
            f"decoded={dec}",
        ])

    @classmethod
    def from_text(cls, text: str, q: int) -> "Transcript":
        fields = dict(line.split("=", 1) for line in text.strip().splitlines())
        dec = fields["decoded"]
        return cls(
            q=q,
            message=int(fields["m"]),
            sent=tuple(parse_symbols(fields["sent"], q)),
            received=tuple(parse_symbols(fields["recv"], q)),
            errors=tuple(parse_symbols(fields["err"], q)),
            decoded=None if dec == "FAIL" else int(dec),
        )


def format_symbols(symbols: Sequence[int], q: int) -> str:
    if q <= 10:
        return "".join(str(s) for s in symbols)
    return ",".join(str(s) for s in symbols)


def parse_symbols(text: str, q: int) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if "," in text or q > 10:
        out = [int(tok) for tok in text.split(",")]
    else:
        out = [int(ch) for ch in text]
    if any(not 0 <= s < q for s in out):
        raise ValueError(f"symbol outside 0..{q - 1} in {text!r}")
    return out


class Adversary:
    """Chooses the error magnitude at every position.

    Subclasses may look at everything: the codec, the message, and the
    transcript so far.
    """

    def begin(self, codec: Codec, m: int, rng: random.Random) -> None:
        self.codec = codec
        self.m = m
        self.rng = rng

    def next_error(self, position: int, sent: int, transcript: "SessionState", budget: int) -> int:
        raise NotImplementedError


@dataclass
class SessionState:
    sent: list[int]
    received: list[int]
    errors: list[int]


class NullAdversary(Adversary):
    def next_error(self, position, sent, transcript, budget):
        return 0


class ReplayAdversary(Adversary):
    """Replays a fixed error vector."""

    def __init__(self, errors: Sequence[int]):
        self.errors = list(errors)

    def next_error(self, position, sent, transcript, budget):
        return self.errors[position] if position < len(self.errors) else 0


class RandomAdversary(Adversary):
    """Spends the budget at uniformly random positions with random allowed magnitudes."""

    def next_error(self, position, sent, transcript, budget):
        if budget <= 0:
            return 0
        left = self.codec.n - position
        if self.rng.random() * left >= budget:
            return 0
        choices = [e for e in self.codec.channel.offsets(sent) if e]
        return self.rng.choice(choices) if choices else 0


class GreedyAdversary(Adversary):
    """Picks the received symbol reachable from the most inputs; ties favour errors."""

    def next_error(self, position, sent, transcript, budget):
        ch = self.codec.channel
        cols = ch.column_counts()
        best, best_key = 0, None
        for e in ch.offsets(sent):
            if e and budget <= 0:
                continue
            key = (cols[(sent + e) % ch.q], e)
            if best_key is None or key > best_key:
                best, best_key = e, key
        return best


def make_adversary(spec: str, q: int) -> Adversary:
    """``null``, ``random``, ``greedy`` or ``replay:err=<digits>``."""
    name, _, arg = spec.partition(":")
    if name == "null":
        return NullAdversary()
    if name == "random":
        return RandomAdversary()
    if name == "greedy":
        return GreedyAdversary()
    if name == "replay":
        key, _, value = arg.partition("=")
        if key != "err":
            raise ValueError(f"replay adversary needs 'err=<digits>', got {arg!r}")
        return ReplayAdversary(parse_symbols(value, q))
    raise ValueError(f"unknown adversary {spec!r}")


def run_session(codec: Codec, adversary: Adversary, m: int, seed: int = 0,
                budget: Optional[int] = None) -> Transcript:
    """Run one session; ``budget`` defaults to the codec's ``t``."""
    budget = codec.t if budget is None else budget
    ch = codec.channel
    enc = codec.encoder(m)
    adversary.begin(codec, m, random.Random(seed))
    state = SessionState([], [], [])
    for pos in range(codec.n):
        x = enc.emit()
        e = adversary.next_error(pos, x, state, budget)
        if e % ch.q not in ch.offsets(x):
            raise AdversaryError(pos, e, f"{x} cannot become {(x + e) % ch.q} on this channel")
        if e:
            if budget <= 0:
                raise AdversaryError(pos, e, "error budget exhausted")
            budget -= 1
        y = (x + e) % ch.q
        enc.observe(y)
        state.sent.append(x)
        state.received.append(y)
        state.errors.append(e % ch.q)
    return Transcript(
        q=ch.q,
        message=m,
        sent=tuple(state.sent),
        received=tuple(state.received),
        errors=tuple(state.errors),
        decoded=codec.decode(state.received),
    )
