"""Channel graphs for q-ary channels with noiseless feedback.

A channel is a q x q 0/1 matrix; ``adj[i][j]`` is true when sending ``i``
can be received as ``j``.  Wraparound channels of magnitude ``r`` allow
``i -> i + s (mod q)`` for ``s`` in ``0..r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

EXACT_SEARCH_LIMIT = 16


class ChannelError(ValueError):
    """Invalid channel parameters or malformed channel description."""


@dataclass(frozen=True)
class ChannelGraph:
    q: int
    adj: tuple[tuple[bool, ...], ...]
    _rows: tuple[frozenset, ...] = field(init=False, repr=False, compare=False)
    _offsets: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _cols: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.q < 2:
            raise ChannelError(f"alphabet size must be >= 2, got {self.q}")
        adj = tuple(tuple(bool(v) for v in row) for row in self.adj)
        if len(adj) != self.q or any(len(row) != self.q for row in adj):
            raise ChannelError(f"adjacency matrix must be {self.q}x{self.q}")
        for i in range(self.q):
            if not adj[i][i]:
                raise ChannelError(f"missing diagonal one in row {i}")
        object.__setattr__(self, "adj", adj)
        rows = tuple(frozenset(j for j in range(self.q) if adj[i][j]) for i in range(self.q))
        object.__setattr__(self, "_rows", rows)
        offsets = tuple(tuple(sorted((j - i) % self.q for j in rows[i])) for i in range(self.q))
        object.__setattr__(self, "_offsets", offsets)
        cols = tuple(sum(adj[i][j] for i in range(self.q)) for j in range(self.q))
        object.__setattr__(self, "_cols", cols)

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]]) -> "ChannelGraph":
        """Build from per-input reachable sets."""
        q = len(rows)
        adj = [[False] * q for _ in range(q)]
        for i, reach in enumerate(rows):
            for j in reach:
                adj[i][j] = True
        return cls(q, tuple(tuple(r) for r in adj))

    def reachable(self, i: int) -> frozenset:
        return self._rows[i]

    def offsets(self, i: int) -> tuple[int, ...]:
        """Allowed error magnitudes ``(j - i) mod q`` for input ``i``, ascending."""
        return self._offsets[i]

    def row_counts(self) -> list[int]:
        return [len(r) for r in self._rows]

    def column_counts(self) -> list[int]:
        return list(self._cols)

    @property
    def max_errors_per_symbol(self) -> int:
        """Largest number of wrong outputs any input can produce."""
        return max(self.row_counts()) - 1

    def with_edges(self, edges: Iterable[tuple[int, int]]) -> "ChannelGraph":
        adj = [list(row) for row in self.adj]
        for i, j in edges:
            adj[i][j] = True
        return ChannelGraph(self.q, tuple(tuple(r) for r in adj))

    def to_text(self) -> str:
        lines = [f"q={self.q}"]
        lines += ["".join("1" if v else "0" for v in row) for row in self.adj]
        return "\n".join(lines) + "\n"


def make_wraparound(q: int, r: int) -> ChannelGraph:
    if q < 2:
        raise ChannelError(f"alphabet size must be >= 2, got {q}")
    if not 0 <= r <= q - 1:
        raise ChannelError(f"magnitude must satisfy 0 <= r <= q-1, got r={r}, q={q}")
    return ChannelGraph.from_rows([[(i + s) % q for s in range(r + 1)] for i in range(q)])


def identity_channel(q: int) -> ChannelGraph:
    return make_wraparound(q, 0)


def complete_channel(q: int) -> ChannelGraph:
    return make_wraparound(q, q - 1)


@dataclass(frozen=True)
class ChannelClass:
    """Most specific family a channel graph belongs to.

    ``kind`` is one of ``"Lambda_r"``, ``"GammaTilde_1"``, ``"Gamma_r"`` or
    ``"Other"``; ``r`` is the magnitude where it applies.
    """

    kind: str
    r: Optional[int] = None

    def is_gamma(self, r: int) -> bool:
        if self.kind == "GammaTilde_1":
            return r == 1
        return self.kind in ("Gamma_r", "Lambda_r") and self.r == r

    def is_lambda(self, r: int) -> bool:
        return self.kind == "Lambda_r" and self.r == r

    def __str__(self) -> str:
        if self.kind in ("Gamma_r", "Lambda_r"):
            return f"{self.kind}({self.r})"
        return self.kind


def classify(g: ChannelGraph) -> ChannelClass:
    cols = g.column_counts()
    if len(set(cols)) != 1:
        return ChannelClass("Other")
    r = cols[0] - 1
    q = g.q
    if all(g.reachable(i) == frozenset((i + s) % q for s in range(r + 1)) for i in range(q)):
        return ChannelClass("Lambda_r", r)
    if r == 1 and all(c == 2 for c in g.row_counts()):
        return ChannelClass("GammaTilde_1", 1)
    return ChannelClass("Gamma_r", r)


def _disjoint(g: ChannelGraph, a: int, b: int) -> bool:
    # shared zeros are harmless; only a common reachable output confuses a and b
    return not (g.reachable(a) & g.reachable(b))


def separable_pair(g: ChannelGraph) -> Optional[tuple[int, int]]:
    for a, b in combinations(range(g.q), 2):
        if _disjoint(g, a, b):
            return (a, b)
    return None


def confusability_graph(g: ChannelGraph) -> set[tuple[int, int]]:
    """Edges ``(a, b)``, ``a < b``, between inputs that share a possible output."""
    return {(a, b) for a, b in combinations(range(g.q), 2) if not _disjoint(g, a, b)}


def confusability_positive(g: ChannelGraph) -> bool:
    """True iff the zero-error capacity is positive (confusability graph not complete)."""
    return separable_pair(g) is not None


@dataclass(frozen=True)
class SeparationSet:
    symbols: tuple[int, ...]
    exact: bool = True

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)


def _greedy_set(g: ChannelGraph) -> tuple[int, ...]:
    chosen: list[int] = []
    for s in range(g.q):
        if all(_disjoint(g, s, c) for c in chosen):
            chosen.append(s)
    return tuple(chosen)


def _exact_set(g: ChannelGraph) -> tuple[int, ...]:
    q = g.q
    compat = [0] * q
    for a in range(q):
        for b in range(q):
            if a != b and _disjoint(g, a, b):
                compat[a] |= 1 << b

    best: list[int] = list(_greedy_set(g))

    def extend(chosen: list[int], cand: int) -> None:
        nonlocal best
        if len(chosen) + bin(cand).count("1") <= len(best):
            return
        if not cand:
            best = list(chosen)
            return
        while cand:
            if len(chosen) + bin(cand).count("1") <= len(best):
                return
            low = cand & -cand
            s = low.bit_length() - 1
            cand ^= low
            chosen.append(s)
            extend(chosen, cand & compat[s])
            chosen.pop()

    # smallest-symbol-first search keeps the lexicographically first maximum set
    extend([], (1 << q) - 1)
    return tuple(best)


def separation_set(g: ChannelGraph) -> SeparationSet:
    """Largest set of inputs with pairwise disjoint reachable sets.

    Exact (lexicographically first maximum set) for ``q <= 16``; above that
    the greedy smallest-first set is returned with ``exact=False`` as a
    lower bound.
    """
    if g.q <= EXACT_SEARCH_LIMIT:
        return SeparationSet(_exact_set(g), exact=True)
    return SeparationSet(_greedy_set(g), exact=False)


def parse_channel(text: str) -> ChannelGraph:
    lines = [ln.strip() for ln in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines or not lines[0].startswith("q="):
        raise ChannelError("line 1: expected header 'q=<int>'")
    try:
        q = int(lines[0][2:])
    except ValueError:
        raise ChannelError(f"line 1: bad alphabet size {lines[0][2:]!r}") from None
    if q < 2:
        raise ChannelError(f"line 1: alphabet size must be >= 2, got {q}")
    body = lines[1:]
    if len(body) != q:
        raise ChannelError(f"expected {q} matrix rows, found {len(body)}")
    rows = []
    for i, line in enumerate(body):
        lineno = i + 2
        if len(line) != q or set(line) - {"0", "1"}:
            raise ChannelError(f"line {lineno}: expected {q} characters from {{0,1}}, got {line!r}")
        if line[i] != "1":
            raise ChannelError(f"line {lineno}: missing diagonal one at column {i}")
        rows.append(tuple(c == "1" for c in line))
    return ChannelGraph(q, tuple(rows))


def load_channel(path) -> ChannelGraph:
    with open(path) as fh:
        return parse_channel(fh.read())
