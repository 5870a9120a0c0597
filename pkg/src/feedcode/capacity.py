"""Closed-form capacity error functions and the finite counting bound.

Rates are measured in q-ary symbols per channel use.  All curves are
evaluated in double precision; :func:`finite_upper_bound_M` is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, log
from typing import Callable, Iterator, Optional

from scipy.optimize import brentq

BINARY_BREAKPOINT = 1.0 / (3.0 + math.sqrt(5.0))
GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0


def binary_entropy(tau: float) -> float:
    if tau <= 0.0 or tau >= 1.0:
        return 0.0
    return -tau * math.log2(tau) - (1.0 - tau) * math.log2(1.0 - tau)


def log_q(q: float, x: float) -> float:
    return log(x) / log(q)


def _check_tau(tau: float) -> None:
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"error fraction must lie in [0, 1], got {tau}")


@dataclass(frozen=True)
class CapacityPoint:
    tau: float
    rate: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ValueError(f"tau out of range: {self.tau}")
        if not -1e-12 <= self.rate <= 1.0 + 1e-12:
            raise ValueError(f"rate out of range: {self.rate}")


def cf_binary(tau: float) -> float:
    """Capacity error function of the binary channel with feedback."""
    _check_tau(tau)
    if tau <= BINARY_BREAKPOINT:
        return 1.0 - binary_entropy(tau)
    if tau <= 1.0 / 3.0:
        return (1.0 - 3.0 * tau) * math.log2(GOLDEN_RATIO)
    return 0.0


def _qary_first_branch(q: int, tau: float) -> float:
    return 1.0 - binary_entropy(tau) * log_q(q, 2) - tau * log_q(q, q - 1)


def _qary_first_branch_slope(q: int, tau: float) -> float:
    return -log_q(q, (1.0 - tau) / tau) - log_q(q, q - 1)


def cf_qary_upper(q: int, tau: float) -> float:
    """Upper bound on the feedback capacity error function of the complete q-ary channel."""
    if q < 2:
        raise ValueError("q must be >= 2")
    _check_tau(tau)
    if tau <= 1.0 / q:
        return _qary_first_branch(q, tau)
    if tau <= 0.5:
        return (1.0 - 2.0 * tau) * log_q(q, q - 1)
    return 0.0


def _rubber_tangent(q: int, a: int) -> tuple[float, float]:
    """Tangent point and slope of the line through ``(1/(a+1), 0)``."""
    zero = 1.0 / (a + 1)
    hi = min(1.0 / q, zero)

    def miss(t0: float) -> float:
        return _qary_first_branch(q, t0) + _qary_first_branch_slope(q, t0) * (zero - t0)

    # miss -> -inf as t0 -> 0, so a sign change exists whenever miss(hi) > 0
    t0 = brentq(miss, 1e-12, hi, xtol=1e-14, rtol=1e-12) if miss(hi) > 0 else hi
    return t0, _qary_first_branch_slope(q, t0)


def rubber_rate_line(q: int, a: int, tau: float) -> float:
    """Rate line of the a-rubber method: vanishes at ``1/(a+1)``, tangent to the q-ary bound."""
    if q < 2 or a < 1:
        raise ValueError("need q >= 2 and a >= 1")
    if q == 2 and a == 1:
        raise ValueError("the 1-rubber method carries a single message for q = 2 (need q >= 3 or a >= 2)")
    _check_tau(tau)
    zero = 1.0 / (a + 1)
    if tau >= zero:
        return 0.0
    if a == 1:
        return (1.0 - 2.0 * tau) * log_q(q, q - 1)
    t0, slope = _rubber_tangent(q, a)
    return slope * (tau - zero)


def limited_magnitude_status(q: int, r: int) -> str:
    """``"capacity"`` when a theorem certifies the curve for ``(q, r)``, else ``"upper bound only"``."""
    if 1 <= r <= q / 2 - 1 or q > r * r + r + 1:
        return "capacity"
    return "upper bound only"


def cf_limited_magnitude(q: int, r: int, tau: float) -> float:
    """Capacity error function of wraparound channels with magnitude ``r``.

    Outside the certified parameter range (see :func:`limited_magnitude_status`)
    the value is still returned; it is then only an upper bound.
    """
    if q < 2 or not 1 <= r <= q - 1:
        raise ValueError(f"need q >= 2 and 1 <= r <= q-1, got q={q}, r={r}")
    _check_tau(tau)
    if tau <= r / (r + 1):
        return 1.0 - binary_entropy(tau) * log_q(q, 2) - tau * log_q(q, r)
    return 1.0 - log_q(q, r + 1)


def ball_volume(n: int, t: int, r: int) -> int:
    """Number of error patterns of length ``n`` with at most ``t`` nonzero magnitudes in ``1..r``."""
    return sum(comb(n, j) * r**j for j in range(min(t, n) + 1))


def finite_upper_bound_M(q: int, r: int, n: int, t: int) -> int:
    if not 0 <= t <= n:
        raise ValueError(f"need 0 <= t <= n, got t={t}, n={n}")
    return q**n // ball_volume(n, t, r)


def bootstrap_rate_iteration(q: int, r: int, max_iter: int = 200, tol: float = 1e-6) -> tuple[float, int]:
    """Iterate ``R -> R / (log_q(r+1) + R)`` from the separation rate.

    Returns ``(rate, iterations)``; stops once within ``tol`` of the fixed point
    ``1 - log_q(r+1)``.
    """
    c = log_q(q, r + 1)
    s = q // (r + 1)
    if s < 2:
        raise ValueError(f"no separable pair: q={q} < 2(r+1)")
    target = 1.0 - c
    rate = log_q(q, s)
    for i in range(max_iter + 1):
        if abs(rate - target) <= tol:
            return rate, i
        rate = rate / (c + rate)
    return rate, max_iter


CURVE_KINDS = {
    "binary": "binary_bz",
    "binary_bz": "binary_bz",
    "qary_upper": "qary_upper",
    "rubber": "rubber_line",
    "rubber_line": "rubber_line",
    "two_regular": "theorem_2regular",
    "theorem_2regular": "theorem_2regular",
    "lambda_r": "theorem_lambda_r",
    "theorem_lambda_r": "theorem_lambda_r",
}


@dataclass(frozen=True)
class CurveSpec:
    kind: str
    q: int = 2
    r: Optional[int] = None
    a: Optional[int] = None

    def __post_init__(self):
        kind = CURVE_KINDS.get(self.kind)
        if kind is None:
            raise ValueError(f"unknown curve kind {self.kind!r}; choose from {sorted(set(CURVE_KINDS))}")
        object.__setattr__(self, "kind", kind)
        q, r, a = self.q, self.r, self.a
        if kind == "binary_bz":
            if q != 2:
                raise ValueError("binary curve requires q = 2")
        elif q < 2:
            raise ValueError("q must be >= 2")
        if kind == "rubber_line":
            if a is None or a < 1:
                raise ValueError("rubber line requires a >= 1")
            if q == 2 and a == 1:
                raise ValueError("rubber line: q = 2 requires a >= 2 (only one message otherwise)")
        if kind == "theorem_2regular":
            if q <= 3:
                raise ValueError("2-regular theorem requires q > 3")
            object.__setattr__(self, "r", 1)
        if kind == "theorem_lambda_r":
            if r is None or not 1 <= r <= q - 1:
                raise ValueError("limited-magnitude curve requires 1 <= r <= q-1")
            if limited_magnitude_status(q, r) != "capacity":
                raise ValueError(
                    f"(q={q}, r={r}) violates both 1 <= r <= q/2 - 1 and q > r^2+r+1"
                )

    def evaluator(self) -> Callable[[float], float]:
        if self.kind == "binary_bz":
            return cf_binary
        if self.kind == "qary_upper":
            return lambda tau: cf_qary_upper(self.q, tau)
        if self.kind == "rubber_line":
            return lambda tau: rubber_rate_line(self.q, self.a, tau)
        return lambda tau: cf_limited_magnitude(self.q, self.r, tau)


def tau_grid(step: float) -> list[float]:
    if not 0.0 < step <= 1.0:
        raise ValueError(f"step must lie in (0, 1], got {step}")
    count = int(math.floor(1.0 / step + 1e-9))
    taus = [min(i * step, 1.0) for i in range(count + 1)]
    if taus[-1] < 1.0 - 1e-12:
        taus.append(1.0)
    return taus


def sample_curve(spec: CurveSpec, step: float = 0.001) -> list[CapacityPoint]:
    f = spec.evaluator()
    return [CapacityPoint(tau, max(f(tau), 0.0)) for tau in tau_grid(step)]


def curve_csv_lines(spec: CurveSpec, step: float = 0.001) -> Iterator[str]:
    yield "tau,rate"
    for p in sample_curve(spec, step):
        yield f"{p.tau:.9f},{p.rate:.9f}"
