"""Command-line front end: ``feedcode {capacity,simulate,verify,channel}``.

Exit codes: 0 success, 1 domain failure, 2 usage or parse error,
3 inconclusive verification.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Optional, Sequence

from .capacity import CurveSpec, curve_csv_lines
from .channel import ChannelError, classify, confusability_positive, separable_pair, separation_set
from .codecs.base import CodecError
from .codecs.descriptor import DescriptorError, parse_codec, resolve_channel, with_budget
from .session import AdversaryError, ReplayAdversary, make_adversary, run_session
from .verify import (
    FAIL,
    INCONCLUSIVE,
    MESSAGE_SAMPLE_LIMIT,
    PASS,
    BoundViolation,
    check_bound,
    node_budget_from_env,
    verify_all_messages,
    verify_exhaustive,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _out(lines, stream) -> None:
    for line in lines:
        stream.write(line + "\n")


def cmd_capacity(args, out) -> int:
    try:
        spec = CurveSpec(args.kind, q=args.q, r=args.r, a=args.a)
        lines = list(curve_csv_lines(spec, args.step))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _out(lines, out)
    return EXIT_OK


def _build_codec(text: str, t: Optional[int] = None):
    if t is not None:
        text = with_budget(text, t)
    try:
        return parse_codec(text)
    except DescriptorError as exc:
        raise UsageError(f"codec descriptor: {exc}") from None
    except (CodecError, ChannelError) as exc:
        raise UsageError(f"codec parameters rejected: {exc}") from None


def cmd_simulate(args, out) -> int:
    codec = _build_codec(args.codec)
    try:
        adversary = make_adversary(args.adversary, codec.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if isinstance(adversary, ReplayAdversary) and len(adversary.errors) > codec.n:
        raise UsageError(f"replay vector has {len(adversary.errors)} entries, block length is {codec.n}")
    if args.m is not None and not 1 <= args.m <= codec.M:
        raise UsageError(f"message {args.m} outside 1..{codec.M}")
    pick = random.Random(args.seed)
    ok = fail = 0
    for i in range(args.sessions):
        m = args.m if args.m is not None else pick.randint(1, codec.M)
        try:
            tr = run_session(codec, adversary, m, seed=args.seed + i, budget=args.budget)
        except AdversaryError as exc:
            raise UsageError(f"adversary contract violation: {exc}") from None
        if not args.quiet:
            out.write(tr.to_text() + "\n\n")
        if tr.ok:
            ok += 1
        else:
            fail += 1
    out.write(f"ok={ok} fail={fail}\n")
    return EXIT_OK if fail == 0 else EXIT_FAIL


def cmd_verify(args, out) -> int:
    codec = _build_codec(args.codec, args.t)
    budget = args.budget
    if budget is None:
        budget = args.t if args.t is not None and codec.kind not in ("rubber", "interval") else codec.t
    nodes = args.node_budget if args.node_budget is not None else node_budget_from_env()
    if args.m is not None:
        if not 1 <= args.m <= codec.M:
            raise UsageError(f"message {args.m} outside 1..{codec.M}")
        res = verify_exhaustive(codec, budget, args.m, nodes)
    else:
        res = verify_all_messages(codec, budget, nodes, max_messages=args.max_messages)
    out.write(res.to_text(codec.q) + "\n")
    try:
        report = check_bound(codec, budget)
    except BoundViolation as exc:
        out.write(f"BOUND=VIOLATED {exc}\n")
        return EXIT_FAIL
    except ValueError:
        report = None
    out.write("bound=n/a\n" if report is None else report.to_text() + "\n")
    return {PASS: EXIT_OK, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}[res.verdict]


def channel_report(g) -> str:
    pair = separable_pair(g)
    sep = separation_set(g)
    parts = [
        f"class={classify(g)}",
        f"sep_pair=({pair[0]},{pair[1]})" if pair else "sep_pair=none",
        f"sep_size={len(sep)}",
        f"zero_error_positive={'true' if confusability_positive(g) else 'false'}",
        f"sep_set={','.join(map(str, sep.symbols))}",
    ]
    if not sep.exact:
        parts.append("sep_size_is_lower_bound=true")
    return " ".join(parts)


def cmd_channel(args, out) -> int:
    try:
        g = resolve_channel(args.channel)
    except (ChannelError, OSError) as exc:
        raise UsageError(f"channel: {exc}") from None
    if args.emit:
        out.write(g.to_text())
    else:
        out.write(channel_report(g) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feedcode", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("capacity", help="sample a capacity error function as CSV")
    c.add_argument("--kind", required=True,
                   help="binary, qary_upper, rubber, two_regular or lambda_r")
    c.add_argument("--q", type=int, default=2)
    c.add_argument("--r", type=int)
    c.add_argument("--a", type=int, default=1)
    c.add_argument("--step", type=float, default=0.001)
    c.set_defaults(func=cmd_capacity)

    s = sub.add_parser("simulate", help="run feedback sessions and print transcripts")
    s.add_argument("--codec", required=True)
    s.add_argument("--adversary", default="null", help="null, random, greedy or replay:err=<digits>")
    s.add_argument("--m", type=int, help="message (default: seeded random per session)")
    s.add_argument("--sessions", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, help="adversary error budget (default: the codec's t)")
    s.add_argument("--quiet", action="store_true", help="print only the summary line")
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="exhaustive adaptive-adversary verification")
    v.add_argument("--codec", required=True)
    v.add_argument("--t", type=int, help="error budget; rebuilds rubber/interval codecs with this t")
    v.add_argument("--budget", type=int, help="verifier error budget, overriding --t")
    v.add_argument("--m", type=int, help="verify a single message")
    v.add_argument("--max-messages", type=int, default=MESSAGE_SAMPLE_LIMIT,
                   help="sample messages above this count")
    v.add_argument("--node-budget", type=int, help="search node limit (env FEEDCODE_NODE_BUDGET)")
    v.set_defaults(func=cmd_verify)

    ch = sub.add_parser("channel", help="analyse a channel graph")
    ch.add_argument("--channel", required=True, help="channel file, or wQrR / completeQ / identityQ")
    ch.add_argument("--emit", action="store_true", help="print the channel file instead of the analysis")
    ch.set_defaults(func=cmd_channel)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"feedcode {args.command}: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        err.write(f"feedcode {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
