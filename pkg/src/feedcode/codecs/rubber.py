"""The a-rubber protocol over the complete q-ary channel.

Information digits are ``1..q-1``.  The receiver pushes every received
symbol on a stack; as soon as the top ``a`` entries are zeros they are
removed together with the symbol beneath them.  Through feedback the
sender tracks the same stack: while it is a prefix of the target string
(information digits, then filler ``1``\\ s) the next target digit is sent,
otherwise a ``0`` is sent to rub out the damage.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..channel import complete_channel
from .base import Codec, CodecError, EncoderSession, from_digits, to_digits

FILLER = 1


def push_symbol(stack: list[int], y: int, a: int) -> None:
    """Apply one received symbol to the receiver stack in place."""
    stack.append(y)
    if y == 0 and len(stack) >= a and all(s == 0 for s in stack[-a:]):
        del stack[-a:]
        if stack:
            stack.pop()


def receiver_stack(received: Sequence[int], a: int) -> list[int]:
    stack: list[int] = []
    for y in received:
        push_symbol(stack, y, a)
    return stack


class _RubberSession(EncoderSession):
    __slots__ = ("info", "a", "stack")

    def __init__(self, info: tuple[int, ...], a: int, stack=None):
        self.info = info
        self.a = a
        self.stack = [] if stack is None else stack

    def _target(self, i: int) -> int:
        return self.info[i] if i < len(self.info) else FILLER

    def emit(self) -> int:
        for i, s in enumerate(self.stack):
            if s != self._target(i):
                return 0
        return self._target(len(self.stack))

    def observe(self, received: int) -> None:
        push_symbol(self.stack, received, self.a)

    def copy(self) -> "_RubberSession":
        return _RubberSession(self.info, self.a, list(self.stack))

    def fingerprint(self):
        return tuple(self.stack)


class RubberCodec(Codec):
    kind = "rubber"

    def __init__(self, q: int, a: int, n: int, t: int):
        if q < 2 or a < 1:
            raise CodecError(f"rubber codec needs q >= 2 and a >= 1, got q={q}, a={a}")
        if q == 2 and a == 1:
            raise CodecError("1-rubber over q = 2 carries only one message; use q >= 3 or a >= 2")
        if t < 0:
            raise CodecError("error budget must be non-negative")
        info_len = n - (a + 1) * t
        if info_len < 1:
            raise CodecError(
                f"n={n} too short for t={t} erase-resend cycles: need n >= (a+1)t + 1 = {(a + 1) * t + 1}"
            )
        self.channel = complete_channel(q)
        self.a = a
        self.n = n
        self.t = t
        self.info_len = info_len
        self.M = (q - 1) ** info_len

    def info_string(self, m: int) -> tuple[int, ...]:
        self._check_message(m)
        return tuple(d + 1 for d in to_digits(m - 1, self.q - 1, self.info_len))

    def encoder(self, m: int) -> EncoderSession:
        return _RubberSession(self.info_string(m), self.a)

    def decode(self, received: Sequence[int]) -> Optional[int]:
        stack = receiver_stack(received, self.a)
        if len(stack) < self.info_len:
            return None
        head = stack[: self.info_len]
        if any(s == 0 for s in head):
            return None
        return from_digits([s - 1 for s in head], self.q - 1) + 1

    def descriptor(self) -> str:
        return f"rubber:q={self.q},a={self.a},n={self.n},t={self.t}"
