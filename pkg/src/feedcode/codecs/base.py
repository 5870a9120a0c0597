from __future__ import annotations

import math
from abc import ABC, abstractmethod
from fractions import Fraction
from math import comb
from typing import Hashable, Optional, Sequence

from ..channel import ChannelGraph


class CodecError(ValueError):
    """Codec parameters violate a construction precondition."""


def ceil_log(base: int, x: int) -> int:
    """Smallest ``k >= 0`` with ``base**k >= x`` (exact integer arithmetic)."""
    k, p = 0, 1
    while p < x:
        p *= base
        k += 1
    return k


def floor_log(base: int, x: int) -> int:
    """Largest ``k`` with ``base**k <= x``, for ``x >= 1``."""
    k, p = 0, base
    while p <= x:
        p *= base
        k += 1
    return k


def to_digits(value: int, base: int, width: int) -> list[int]:
    """Most-significant-first base-``base`` digits of ``value``, zero padded."""
    out = [0] * width
    for i in range(width - 1, -1, -1):
        value, out[i] = divmod(value, base)
    if value:
        raise ValueError("value does not fit in the requested width")
    return out


def from_digits(digits: Sequence[int], base: int) -> int:
    value = 0
    for d in digits:
        value = value * base + d
    return value


def pattern_count(k: int, w: int, r: int) -> int:
    """Error patterns on ``k`` positions with exactly ``w`` errors of magnitude ``1..r``."""
    return comb(k, w) * r**w


def rank_pattern(errors: Sequence[int], r: int) -> tuple[int, int]:
    """Rank an error pattern among those of the same weight.

    Returns ``(weight, index)`` with ``0 <= index < pattern_count(len, weight, r)``.
    Support is ranked in the combinatorial number system; magnitudes
    ``1..r`` follow as base-``r`` digits.
    """
    support = [i for i, e in enumerate(errors) if e]
    w = len(support)
    sub = sum(comb(pos, j + 1) for j, pos in enumerate(support))
    mags = from_digits([errors[i] - 1 for i in support], r) if w else 0
    return w, sub * r**w + mags


def unrank_pattern(k: int, w: int, index: int, r: int) -> list[int]:
    if not 0 <= index < pattern_count(k, w, r):
        raise ValueError("pattern index out of range")
    sub, mags = divmod(index, r**w)
    support = []
    pos = k
    for j in range(w, 0, -1):
        pos -= 1
        while comb(pos, j) > sub:
            pos -= 1
        support.append(pos)
        sub -= comb(pos, j)
    support.reverse()
    errors = [0] * k
    for pos, m in zip(support, to_digits(mags, r, w)):
        errors[pos] = m + 1
    return errors


class EncoderSession(ABC):
    """One feedback encoding session: alternate :meth:`emit` and :meth:`observe`."""

    @abstractmethod
    def emit(self) -> int:
        """Symbol to send at the current position."""

    @abstractmethod
    def observe(self, received: int) -> None:
        """Feed back the symbol the receiver got for the last emitted one."""

    @abstractmethod
    def copy(self) -> "EncoderSession":
        ...

    def fingerprint(self) -> Optional[Hashable]:
        """Canonical state key for memoised search, or ``None`` if unsupported."""
        return None


class Codec(ABC):
    """A concrete ``(n, M, t)`` feedback code over a channel graph.

    ``t`` is the error budget the code is built for; any-error codecs use
    ``t = n``.
    """

    kind: str
    channel: ChannelGraph
    n: int
    M: int
    t: int

    @property
    def q(self) -> int:
        return self.channel.q

    @property
    def r(self) -> int:
        return self.channel.max_errors_per_symbol

    @abstractmethod
    def encoder(self, m: int) -> EncoderSession:
        ...

    @abstractmethod
    def decode(self, received: Sequence[int]) -> Optional[int]:
        """Message for a received word, or ``None`` when it decodes to nothing."""

    @abstractmethod
    def descriptor(self) -> str:
        ...

    def _check_message(self, m: int) -> None:
        if not 1 <= m <= self.M:
            raise ValueError(f"message {m} outside 1..{self.M}")

    def sent_word(self, m: int, received: Sequence[int]) -> list[int]:
        """Replay the encoder against a received word; returns what it sends."""
        enc = self.encoder(m)
        sent = []
        for y in received:
            sent.append(enc.emit())
            enc.observe(y)
        return sent

    def clean_word(self, m: int) -> list[int]:
        """Sent word of an error-free session."""
        enc = self.encoder(m)
        word = []
        for _ in range(self.n):
            x = enc.emit()
            enc.observe(x)
            word.append(x)
        return word

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor()} M={self.M}>"


def measure_rate(codec: Codec):
    """``log_q(M) / n``; a :class:`~fractions.Fraction` when ``M`` is a power of ``q``."""
    if codec.n == 0:
        return Fraction(0)
    k = floor_log(codec.q, codec.M)
    if codec.q**k == codec.M:
        return Fraction(k, codec.n)
    return math.log(codec.M) / math.log(codec.q) / codec.n
