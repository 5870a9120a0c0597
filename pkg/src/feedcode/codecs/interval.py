"""Shrinking-interval feedback codec for wraparound channels.

Block layout for one session::

    S_1 | S_2 | ... | S_i | report block | metadata block

``S_1`` (length ``k_1``) carries the message as raw q-ary digits.  Once an
interval ``S_j`` has been sent, feedback tells the sender its exact error
pattern with ``t_j`` errors.  If the pattern index fits in the report block
left over, the sender stops and ships it through an any-error inner codec;
otherwise ``S_{j+1}`` carries it as ``ceil(log_q(C(k_j,t_j) r^t_j))`` raw
digits and the process repeats.  The metadata block, fixed length and
always last, carries the sequence ``t_1..t_i`` (as its rank among all
sequences the schedule can produce) so the receiver can recover the
layout, decode the report block, and unwind the corrections right to left.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from ..channel import make_wraparound
from .base import (
    Codec,
    CodecError,
    EncoderSession,
    ceil_log,
    from_digits,
    pattern_count,
    rank_pattern,
    to_digits,
    unrank_pattern,
)
from .separation import SeparationCodec

InnerFactory = Callable[[int], Codec]


class ScheduleError(CodecError):
    """The interval schedule cannot fit some adversary choice of ``t_j``."""

    def __init__(self, interval: int, message: str):
        super().__init__(f"interval {interval}: {message}")
        self.interval = interval


class _Infeasible(Exception):
    def __init__(self, interval: int, message: str):
        self.interval = interval
        self.message = message


class IntervalSchedule:
    """Worst-case layout analysis shared by encoder and decoder.

    A state ``(k, used, budget)`` describes the interval just sent: its
    length, the total positions used by raw intervals so far, and the error
    budget left before it.
    """

    def __init__(self, q: int, r: int, n: int, t: int, k1: int, meta_len: int, inner_M: Callable[[int], int]):
        self.q, self.r, self.n, self.t = q, r, n, t
        self.k1 = k1
        self.meta_len = meta_len
        self.inner_M = inner_M
        self._leaves: dict[tuple[int, int, int], int] = {}

    @property
    def root(self) -> tuple[int, int, int]:
        return (self.k1, self.k1, self.t)

    def step(self, state: tuple[int, int, int], w: int) -> Optional[tuple[int, int, int]]:
        """Next state after ``w`` errors in the current interval; ``None`` means stop."""
        k, used, budget = state
        rep = pattern_count(k, w, self.r)
        avail = self.n - used - self.meta_len
        if self.inner_M(avail) >= rep:
            return None
        k_next = ceil_log(self.q, rep)
        return (k_next, used + k_next, budget - w)

    def report_len(self, state: tuple[int, int, int]) -> int:
        return self.n - state[1] - self.meta_len

    def leaves(self, state: tuple[int, int, int], depth: int = 1) -> int:
        """Number of distinct ``t``-sequences reachable from ``state``."""
        hit = self._leaves.get(state)
        if hit is not None:
            return hit
        k, used, budget = state
        if self.n - used - self.meta_len < 0:
            raise _Infeasible(depth, f"raw intervals use {used} of {self.n - self.meta_len} positions")
        total = 0
        for w in range(min(budget, k) + 1):
            nxt = self.step(state, w)
            if nxt is None:
                total += 1
            else:
                if nxt[1] > self.n - self.meta_len:
                    raise _Infeasible(
                        depth + 1,
                        f"report of {w} errors needs {nxt[0]} raw symbols, "
                        f"only {self.n - self.meta_len - used} remain",
                    )
                total += self.leaves(nxt, depth + 1)
        self._leaves[state] = total
        return total

    def _branch_size(self, state, w) -> int:
        nxt = self.step(state, w)
        return 1 if nxt is None else self.leaves(nxt)

    def rank(self, tseq: Sequence[int]) -> int:
        state, index = self.root, 0
        for w in tseq:
            index += sum(self._branch_size(state, v) for v in range(w))
            state = self.step(state, w)
            if state is None:
                break
        return index

    def unrank(self, index: int) -> Optional[list[int]]:
        state, tseq = self.root, []
        while True:
            k, _, budget = state
            for w in range(min(budget, k) + 1):
                size = self._branch_size(state, w)
                if index < size:
                    break
                index -= size
            else:
                return None
            tseq.append(w)
            state = self.step(state, w)
            if state is None:
                return tseq

    def layout(self, tseq: Sequence[int]) -> list[int]:
        """Raw interval lengths ``k_1..k_i`` for a complete ``t``-sequence."""
        state, ks = self.root, [self.k1]
        for w in tseq[:-1]:
            state = self.step(state, w)
            ks.append(state[0])
        return ks

    def max_intervals(self) -> int:
        def deepest(state) -> int:
            k, _, budget = state
            best = 1
            for w in range(min(budget, k) + 1):
                nxt = self.step(state, w)
                if nxt is not None:
                    best = max(best, 1 + deepest(nxt))
            return best

        return deepest(self.root)


class _IntervalSession(EncoderSession):
    __slots__ = ("codec", "state", "tseq", "digits", "errors", "inner", "left", "phase")

    def __init__(self, codec: "IntervalCodec", digits=None):
        self.codec = codec
        if digits is None:
            return
        self.state = codec.schedule.root
        self.tseq: list[int] = []
        self.digits = digits
        self.errors: list[int] = []
        self.inner = None
        self.left = len(digits)
        self.phase = "raw"
        self._settle()

    def _settle(self) -> None:
        # advance past finished (possibly empty) segments
        c = self.codec
        while self.left == 0 and self.phase != "done":
            if self.phase == "raw":
                w, idx = rank_pattern(self.errors, c.r)
                if w > self.state[2]:
                    # over budget: no decoding guarantee left, idle to the end
                    self.phase = "spent"
                    self.left = -1
                    return
                self.tseq.append(w)
                nxt = c.schedule.step(self.state, w)
                if nxt is None:
                    length = c.schedule.report_len(self.state)
                    self.phase = "report"
                    self.inner = c.inner(length).encoder(idx + 1)
                    self.left = length
                else:
                    self.state = nxt
                    self.digits = to_digits(idx, c.q, nxt[0])
                    self.errors = []
                    self.left = nxt[0]
            elif self.phase == "report":
                self.phase = "meta"
                self.inner = c.inner(c.meta_len).encoder(c.schedule.rank(self.tseq) + 1)
                self.left = c.meta_len
            else:
                self.phase = "done"
                self.inner = None

    def emit(self) -> int:
        if self.phase == "raw":
            return self.digits[len(self.errors)]
        if self.phase == "spent":
            return 0
        if self.phase == "done":
            raise RuntimeError("session already emitted n symbols")
        return self.inner.emit()

    def observe(self, received: int) -> None:
        if self.phase == "raw":
            sent = self.digits[len(self.errors)]
            self.errors.append((received - sent) % self.codec.q)
        elif self.phase == "spent":
            return
        else:
            self.inner.observe(received)
        self.left -= 1
        self._settle()

    def copy(self) -> "_IntervalSession":
        s = _IntervalSession(self.codec)
        s.state = self.state
        s.tseq = list(self.tseq)
        s.digits = self.digits
        s.errors = list(self.errors)
        s.inner = None if self.inner is None else self.inner.copy()
        s.left = self.left
        s.phase = self.phase
        return s


class IntervalCodec(Codec):
    """Shrinking-interval codec correcting up to ``t`` errors.

    ``inner`` maps a block length to an any-error codec over the same
    wraparound channel (default: the separation codec).  ``k_1`` starts at
    ``n - ceil(log_q(C(n,t) r^t))`` and is lowered by ``slack`` symbols;
    with ``slack=None`` the smallest slack whose worst-case schedule fits is
    chosen.
    """

    kind = "interval"

    def __init__(self, q: int, r: int, n: int, t: int, inner: Optional[InnerFactory] = None,
                 slack: Optional[int] = None, inner_descriptor: str = "sep"):
        if r < 1:
            raise CodecError("magnitude must be >= 1")
        if not 0 <= t <= n:
            raise CodecError(f"need 0 <= t <= n, got t={t}, n={n}")
        if t * (r + 1) > n * r:
            raise CodecError(f"t={t} exceeds n*r/(r+1) = {n * r / (r + 1):.3f}")
        self.channel = make_wraparound(q, r)
        self.n, self.t = n, t
        self.inner_descriptor = inner_descriptor
        if inner is None:
            if q < 2 * (r + 1):
                raise CodecError(f"default separation inner codec needs q >= 2(r+1), got q={q}, r={r}")
            channel = self.channel
            inner = lambda length: SeparationCodec(channel, length)  # noqa: E731
        self._factory = inner
        self._inner_cache: dict[int, Codec] = {}
        probe = self.inner(1)
        if probe.M < 2:
            raise CodecError("inner codec must carry at least two messages per symbol block")

        self.k1_nominal = n - ceil_log(q, pattern_count(n, t, r))
        if slack is not None:
            self._build(self.k1_nominal - slack, strict=True)
            self.slack = slack
        else:
            for s in range(self.k1_nominal + 1):
                if self._build(self.k1_nominal - s, strict=False):
                    self.slack = s
                    break
        self.M = q**self.k1

    def inner(self, length: int) -> Codec:
        c = self._inner_cache.get(length)
        if c is None:
            c = self._factory(length)
            self._inner_cache[length] = c
        return c

    def _inner_M(self, length: int) -> int:
        return self.inner(length).M if length >= 0 else 0

    def _build(self, k1: int, strict: bool) -> bool:
        if k1 < 0:
            if strict:
                raise ScheduleError(1, f"k_1 = {k1} is negative")
            return False
        meta_len = 0
        while True:
            sched = IntervalSchedule(self.q, self.r, self.n, self.t, k1, meta_len, self._inner_M)
            try:
                leaves = sched.leaves(sched.root)
            except _Infeasible as exc:
                if strict:
                    raise ScheduleError(exc.interval, exc.message) from None
                return False
            need = 0
            while self._inner_M(need) < leaves:
                need += 1
            if need <= meta_len:
                break
            meta_len = need
        self.k1 = k1
        self.meta_len = meta_len
        self.schedule = sched
        self.meta_count = leaves
        return True

    def encoder(self, m: int) -> EncoderSession:
        self._check_message(m)
        return _IntervalSession(self, to_digits(m - 1, self.q, self.k1))

    def decode(self, received: Sequence[int]) -> Optional[int]:
        n, q, r = self.n, self.q, self.r
        if len(received) != n:
            return None
        meta = self.inner(self.meta_len).decode(received[n - self.meta_len:])
        if meta is None or meta > self.meta_count:
            return None
        tseq = self.schedule.unrank(meta - 1)
        if tseq is None:
            return None
        ks = self.layout(tseq)
        starts = [sum(ks[:j]) for j in range(len(ks))]
        used = sum(ks)
        report = self.inner(n - used - self.meta_len).decode(received[used: n - self.meta_len])
        if report is None or report > pattern_count(ks[-1], tseq[-1], r):
            return None
        index = report - 1
        for j in range(len(ks) - 1, -1, -1):
            seg = received[starts[j]: starts[j] + ks[j]]
            errors = unrank_pattern(ks[j], tseq[j], index, r)
            value = from_digits([(y - e) % q for y, e in zip(seg, errors)], q)
            if j == 0:
                return value + 1 if value < self.M else None
            if value >= pattern_count(ks[j - 1], tseq[j - 1], r):
                return None
            index = value

    def layout(self, tseq: Sequence[int]) -> list[int]:
        return self.schedule.layout(tseq)

    def descriptor(self) -> str:
        return f"interval:q={self.q},r={self.r},n={self.n},t={self.t},inner={self.inner_descriptor}"
