"""Acceptance criteria, one test each.

Each test records PASS/FAIL under its criterion number; the summary at
the end of the run prints one line per criterion.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from feedcode.capacity import (
    BINARY_BREAKPOINT,
    bootstrap_rate_iteration,
    cf_binary,
    cf_limited_magnitude,
    cf_qary_upper,
    finite_upper_bound_M,
    rubber_rate_line,
)
from feedcode.channel import make_wraparound, separable_pair
from feedcode.codecs import BootstrapCodec, IntervalCodec, RubberCodec, SeparationCodec, measure_rate
from feedcode.codecs.descriptor import parse_codec
from feedcode.session import GreedyAdversary, RandomAdversary, ReplayAdversary, format_symbols, run_session
from feedcode.verify import verify_all_messages, verify_enumerated

from conftest import CONSTRUCTED


def h(x):
    return 0.0 if x in (0.0, 1.0) else -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def test_criterion_1_example_replay(criterion):
    done = criterion(1, "rubber q=3 n=5 t=2 reproduces three known adversary transcripts")
    start = time.perf_counter()
    c = RubberCodec(3, 1, 5, 2)
    assert c.M == 2
    for err, sent, received in [("10000", "10111", "20111"),
                                ("10100", "10101", "20201"),
                                ("12000", "10001", "22001")]:
        tr = run_session(c, ReplayAdversary([int(d) for d in err]), 1)
        assert format_symbols(tr.sent, 3) == sent
        assert format_symbols(tr.received, 3) == received
        assert tr.decoded == 1
    assert time.perf_counter() - start < 1
    done()


def test_criterion_2_rubber_certification(criterion):
    done = criterion(2, "exhaustive adaptive certification of rubber codecs")
    for q, n, t in [(3, 5, 2), (3, 7, 2), (4, 6, 1)]:
        start = time.perf_counter()
        res = verify_all_messages(RubberCodec(q, 1, n, t), t, node_budget=10**8)
        assert res.passed, (q, n, t, res.verdict)
        assert not res.sampled
        assert time.perf_counter() - start < 30
    done()


def test_criterion_3_separation_zero_error(criterion):
    done = criterion(3, "separation codec on w4r1: rate 1/2 and zero-error for n <= 6")
    start = time.perf_counter()
    g = make_wraparound(4, 1)
    for n in range(1, 7):
        c = SeparationCodec(g, n)
        rate = measure_rate(c)
        assert rate == Fraction(1, 2)
        assert abs(float(rate) - (1 - math.log(2, 4))) < 1e-15
        for m in range(1, c.M + 1):
            assert verify_enumerated(c, n, m).passed
        assert verify_all_messages(c, n).passed
    assert time.perf_counter() - start < 10
    done()


def test_criterion_4_capacity_numerics(criterion):
    done = criterion(4, "capacity-curve branch continuity and monotonicity")
    start = time.perf_counter()
    tau = 1 / (3 + math.sqrt(5))
    left = 1 - h(tau)
    right = (1 - 3 * tau) * math.log2((1 + math.sqrt(5)) / 2)
    assert abs(left - right) <= 1e-9
    assert abs(left - 0.2965) < 5e-5
    assert abs(cf_binary(BINARY_BREAKPOINT) - left) <= 1e-9
    for q in (3, 4, 5, 8, 16):
        x = 1 / q
        first = 1 - h(x) * math.log(2, q) - x * math.log(q - 1, q)
        second = (1 - 2 * x) * math.log(q - 1, q)
        assert abs(first - second) <= 1e-9
        assert abs(cf_qary_upper(q, x) - rubber_rate_line(q, 1, x)) <= 1e-9
    for q, r in [(4, 1), (9, 2), (8, 3)]:
        x = r / (r + 1)
        first = 1 - h(x) * math.log(2, q) - x * math.log(r, q)
        second = 1 - math.log(r + 1, q)
        assert abs(first - second) <= 1e-9
        assert abs(cf_limited_magnitude(q, r, x) - second) <= 1e-9
    grid = [i / 1000 for i in range(1001)]
    curves = [cf_binary] + [lambda x, q=q: cf_qary_upper(q, x) for q in (3, 4, 8)]
    curves += [lambda x, q=q: rubber_rate_line(q, 1, x) for q in (3, 4, 8)]
    curves += [lambda x, q=q, r=r: cf_limited_magnitude(q, r, x) for q, r in [(4, 1), (9, 2), (8, 3)]]
    for f in curves:
        values = [f(x) for x in grid]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    assert time.perf_counter() - start < 1
    done()


def test_criterion_5_fixed_point(criterion):
    done = criterion(5, "bootstrap rate iteration reaches 1 - log_q(r+1)")
    start = time.perf_counter()
    for q, r in [(5, 1), (7, 2), (9, 2)]:
        rate, iters = bootstrap_rate_iteration(q, r, max_iter=200)
        assert abs(rate - (1 - math.log(r + 1, q))) <= 1e-6
        assert iters <= 200
        # independent loop from the stated start point
        c, x = math.log(r + 1, q), math.log(q // (r + 1), q)
        for _ in range(iters):
            x = x / (c + x)
        assert abs(x - rate) <= 1e-12
    assert time.perf_counter() - start < 0.1
    done()


CATALOG = [
    "rubber:q=3,a=1,n=5,t=2", "rubber:q=3,a=1,n=7,t=2", "rubber:q=4,a=1,n=6,t=1",
    "rubber:q=3,a=2,n=7,t=2", "rubber:q=2,a=2,n=7,t=2", "rubber:q=5,a=3,n=13,t=2",
    "sep:channel=w4r1,n=6", "sep:channel=w9r2,n=3", "sep:channel=w8r3,n=4", "sep:q=4",
    "boot:q=4,r=1,n=8,depth=1", "boot:q=6,r=1,n=9,depth=2", "boot:q=5,r=1,n=12,depth=1",
    "interval:q=4,r=1,n=10,t=1", "interval:q=4,r=1,n=12,t=2", "interval:q=6,r=2,n=12,t=2",
    "interval:q=4,r=1,n=40,t=10", "interval:q=6,r=1,n=14,t=2,inner=boot:depth=1",
    "interval:q=4,r=1,n=128,t=32", "interval:q=4,r=1,n=256,t=64", "interval:q=4,r=1,n=512,t=128",
]


def test_criterion_6_counting_bound(criterion):
    done = criterion(6, "every constructed codec respects the counting bound")
    assert finite_upper_bound_M(3, 2, 5, 2) == 4
    assert 3**5 // sum(math.comb(5, j) * 2**j for j in range(3)) == 4
    for text in CATALOG:
        parse_codec(text)
    assert len(CONSTRUCTED) >= len(CATALOG)
    checked = 0
    for descriptor, wraparound, q, r, n, t, M in sorted(CONSTRUCTED):
        if not wraparound:
            continue
        checked += 1
        bound = q**n // sum(math.comb(n, j) * r**j for j in range(min(t, n) + 1))
        assert bound == finite_upper_bound_M(q, r, n, min(t, n))
        assert M <= bound, descriptor
    assert checked >= len(CATALOG)
    done()


TARGET = 1 - h(0.25) * math.log(2, 4)


@pytest.mark.slow
def test_criterion_7_interval_codec(criterion):
    done = criterion(7, "interval codec exhaustive at n=10,12 and rate trend at tau=1/4")
    start = time.perf_counter()
    for n, t in [(10, 1), (12, 2)]:
        c = IntervalCodec(4, 1, n, t)
        res = verify_all_messages(c, t, max_messages=c.M)
        assert res.passed and not res.sampled and res.messages_checked == c.M
    gaps = []
    for n in (128, 256, 512):
        c = IntervalCodec(4, 1, n, n // 4)
        pick = random.Random(n)
        for adversary in (RandomAdversary, GreedyAdversary):
            for seed in range(1000):
                tr = run_session(c, adversary(), pick.randint(1, c.M), seed=seed)
                assert tr.ok, (n, adversary.__name__, seed)
        gaps.append(TARGET - float(measure_rate(c)))
    assert gaps[-1] <= 0.15
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    assert time.perf_counter() - start < 120
    done()


def test_criterion_8_large_alphabet_separable(criterion):
    done = criterion(8, "separable pair exists whenever q > r^2+r+1, q <= 16")
    start = time.perf_counter()
    checked = 0
    for q in range(2, 17):
        for r in range(q):
            if q > r * r + r + 1:
                pair = separable_pair(make_wraparound(q, r))
                assert pair is not None, (q, r)
                a, b = pair
                assert not ({(a + s) % q for s in range(r + 1)} & {(b + s) % q for s in range(r + 1)})
                checked += 1
    assert checked > 0
    assert time.perf_counter() - start < 0.1
    done()
