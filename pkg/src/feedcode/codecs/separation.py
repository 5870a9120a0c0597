from __future__ import annotations

from typing import Optional, Sequence

from ..channel import ChannelGraph, SeparationSet, classify, separation_set
from .base import Codec, CodecError, EncoderSession, from_digits, to_digits


class _FixedWordSession(EncoderSession):
    """Sends a precomputed word and ignores feedback."""

    __slots__ = ("word", "pos")

    def __init__(self, word: tuple[int, ...], pos: int = 0):
        self.word = word
        self.pos = pos

    def emit(self) -> int:
        return self.word[self.pos]

    def observe(self, received: int) -> None:
        self.pos += 1

    def copy(self) -> "_FixedWordSession":
        return _FixedWordSession(self.word, self.pos)


class SeparationCodec(Codec):
    """Zero-error code over a set of inputs with pairwise disjoint reachable sets.

    Correct under any number of errors, so ``t = n``.
    """

    kind = "sep"

    def __init__(self, channel: ChannelGraph, n: int, sep: Optional[SeparationSet] = None,
                 channel_name: Optional[str] = None):
        if n < 0:
            raise CodecError("block length must be non-negative")
        sep = separation_set(channel) if sep is None else sep
        if len(sep) < 2:
            raise CodecError("channel has no separable pair: zero rate without separability")
        self.channel = channel
        self.channel_name = channel_name
        self.sep = sep
        self.n = n
        self.t = n
        self.s = len(sep)
        self.M = self.s**n
        self._lookup = {}
        for idx, sym in enumerate(sep.symbols):
            for y in channel.reachable(sym):
                self._lookup[y] = idx

    def word(self, m: int) -> tuple[int, ...]:
        self._check_message(m)
        return tuple(self.sep.symbols[d] for d in to_digits(m - 1, self.s, self.n))

    def encoder(self, m: int) -> EncoderSession:
        return _FixedWordSession(self.word(m))

    def decode(self, received: Sequence[int]) -> Optional[int]:
        digits = []
        for y in received:
            idx = self._lookup.get(y)
            if idx is None:
                return None
            digits.append(idx)
        return from_digits(digits, self.s) + 1

    def descriptor(self) -> str:
        name = self.channel_name
        if name is None:
            cls = classify(self.channel)
            name = f"w{self.q}r{cls.r}" if cls.kind == "Lambda_r" else "custom"
        return f"sep:channel={name},n={self.n}"
