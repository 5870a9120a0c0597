"""Bootstrap any-error codec for wraparound channels.

Depth ``d`` sends ``a`` raw information symbols, then ships their exact
error report (one magnitude ``0..r`` per position, ``(r+1)**a`` values)
through the depth ``d-1`` codec on the remaining ``n-a`` positions.  The
receiver decodes the tail first and subtracts the reported errors.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from ..channel import make_wraparound
from .base import Codec, CodecError, EncoderSession, from_digits, to_digits
from .separation import SeparationCodec


class _BootstrapSession(EncoderSession):
    __slots__ = ("codec", "digits", "errors", "inner")

    def __init__(self, codec: "BootstrapCodec", digits, errors=None, inner=None):
        self.codec = codec
        self.digits = digits
        self.errors = [] if errors is None else errors
        self.inner = inner

    def emit(self) -> int:
        if self.inner is not None:
            return self.inner.emit()
        return self.digits[len(self.errors)]

    def observe(self, received: int) -> None:
        if self.inner is not None:
            self.inner.observe(received)
            return
        c = self.codec
        self.errors.append((received - self.digits[len(self.errors)]) % c.q)
        if len(self.errors) == c.info_len:
            report = from_digits(self.errors, c.r + 1)
            self.inner = c.inner.encoder(report + 1)

    def copy(self) -> "_BootstrapSession":
        inner = None if self.inner is None else self.inner.copy()
        return _BootstrapSession(self.codec, self.digits, list(self.errors), inner)


class BootstrapCodec(Codec):
    kind = "boot"

    def __init__(self, q: int, r: int, n: int, depth: int):
        if depth < 0:
            raise CodecError("depth must be non-negative")
        if r < 1 or q < 2 * (r + 1):
            raise CodecError(f"base separation codec needs q >= 2(r+1), got q={q}, r={r}")
        self.channel = make_wraparound(q, r)
        self.n = n
        self.t = n
        self.depth = depth
        self.base: Optional[Codec] = None
        self.inner: Optional[Codec] = None
        self.info_len = 0
        if depth == 0:
            self._become(SeparationCodec(self.channel, n), 0)
            return
        prev = bootstrap_codec(q, r, n, depth - 1)
        a = 0
        while a < n and (r + 1) ** (a + 1) <= bootstrap_codec(q, r, n - a - 1, depth - 1).M:
            a += 1
        if a == 0 or q**a < prev.M:
            # no gain from another level at this length
            self._become(prev, prev.effective_depth)
            return
        self.info_len = a
        self.inner = bootstrap_codec(q, r, n - a, depth - 1)
        self.M = q**a
        self.effective_depth = depth

    def _become(self, base: Codec, effective_depth: int) -> None:
        self.base = base
        self.M = base.M
        self.effective_depth = effective_depth

    def encoder(self, m: int) -> EncoderSession:
        self._check_message(m)
        if self.base is not None:
            return self.base.encoder(m)
        return _BootstrapSession(self, to_digits(m - 1, self.q, self.info_len))

    def decode(self, received: Sequence[int]) -> Optional[int]:
        if self.base is not None:
            return self.base.decode(received)
        a = self.info_len
        report = self.inner.decode(received[a:])
        if report is None or report > (self.r + 1) ** a:
            return None
        errors = to_digits(report - 1, self.r + 1, a)
        digits = [(y - e) % self.q for y, e in zip(received[:a], errors)]
        return from_digits(digits, self.q) + 1

    def descriptor(self) -> str:
        return f"boot:q={self.q},r={self.r},n={self.n},depth={self.depth}"


@lru_cache(maxsize=None)
def bootstrap_codec(q: int, r: int, n: int, depth: int) -> BootstrapCodec:
    return BootstrapCodec(q, r, n, depth)
