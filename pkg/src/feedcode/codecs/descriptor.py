"""Codec descriptor strings, e.g. ``rubber:q=3,a=1,n=5,t=2``.

Forms::

    rubber:q=..,a=..,n=..,t=..
    sep:channel=<file|wQrR|completeQ|identityQ>,n=..     (or sep:q=..,r=..,n=..)
    boot:q=..,r=..,n=..,depth=..
    interval:q=..,r=..,n=..,t=..[,slack=..],inner=<sep|boot:depth=..>

``inner`` must come last; everything after ``inner=`` is the inner descriptor.
"""

from __future__ import annotations

import os
import re
from typing import Optional

from ..channel import ChannelError, ChannelGraph, complete_channel, identity_channel, load_channel, make_wraparound
from .base import Codec
from .bootstrap import bootstrap_codec
from .interval import IntervalCodec
from .rubber import RubberCodec
from .separation import SeparationCodec


class DescriptorError(ValueError):
    def __init__(self, text: str, pos: int, reason: str):
        super().__init__(f"{reason} at column {pos + 1} of {text!r}")
        self.pos = pos


_SHORTHAND = [
    (re.compile(r"w(\d+)r(\d+)$"), lambda m: make_wraparound(int(m[1]), int(m[2]))),
    (re.compile(r"complete(\d+)$"), lambda m: complete_channel(int(m[1]))),
    (re.compile(r"identity(\d+)$"), lambda m: identity_channel(int(m[1]))),
]


def resolve_channel(spec: str) -> ChannelGraph:
    """A channel file path, or one of the shorthands ``w4r1``, ``complete3``, ``identity5``."""
    if os.path.exists(spec):
        return load_channel(spec)
    for pattern, build in _SHORTHAND:
        m = pattern.match(spec)
        if m:
            return build(m)
    raise ChannelError(f"no channel file or shorthand named {spec!r}")


def _split(text: str, start: int) -> tuple[dict[str, tuple[str, int]], Optional[tuple[str, int]]]:
    fields: dict[str, tuple[str, int]] = {}
    inner = None
    pos = start
    while pos < len(text):
        if text.startswith("inner=", pos):
            inner = (text[pos + 6:], pos + 6)
            break
        end = text.find(",", pos)
        end = len(text) if end < 0 else end
        item = text[pos:end]
        key, eq, value = item.partition("=")
        if not eq or not key:
            raise DescriptorError(text, pos, f"expected key=value, got {item!r}")
        if key in fields:
            raise DescriptorError(text, pos, f"duplicate key {key!r}")
        fields[key] = (value, pos + len(key) + 1)
        pos = end + 1
    return fields, inner


def _ints(text: str, fields, required, optional=None) -> dict[str, int]:
    optional = optional or {}
    allowed = set(required) | set(optional)
    out = dict(optional)
    for key, (value, pos) in fields.items():
        if key not in allowed:
            raise DescriptorError(text, pos - len(key) - 1, f"unknown key {key!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise DescriptorError(text, pos, f"{key} must be an integer, got {value!r}") from None
    missing = [k for k in required if k not in out]
    if missing:
        raise DescriptorError(text, len(text), f"missing key(s) {', '.join(missing)}")
    return out


def _inner_factory(text: str, inner: Optional[tuple[str, int]], q: int, r: int):
    if inner is None or inner[0] in ("", "sep"):
        return None, "sep"
    spec, pos = inner
    kind, _, rest = spec.partition(":")
    if kind == "boot":
        fields, _ = _split(rest, 0)
        vals = _ints(rest, fields, [], {"depth": 1})
        depth = vals["depth"]
        return (lambda length: bootstrap_codec(q, r, length, depth)), f"boot:depth={depth}"
    raise DescriptorError(text, pos, f"unknown inner codec {spec!r} (use sep or boot:depth=..)")


def parse_codec(text: str, default_n: Optional[int] = None) -> Codec:
    """Build a codec from a descriptor; construction errors propagate as :class:`CodecError`."""
    kind, colon, _ = text.partition(":")
    start = len(kind) + 1 if colon else len(text)
    fields, inner = _split(text, start)
    if inner is not None and kind != "interval":
        raise DescriptorError(text, inner[1] - 6, "inner= is only valid for interval codecs")
    if kind == "rubber":
        v = _ints(text, fields, ["q", "n", "t"], {"a": 1})
        return RubberCodec(v["q"], v["a"], v["n"], v["t"])
    if kind == "sep":
        name = fields.pop("channel", None)
        if name is not None:
            v = _ints(text, fields, ["n"])
            try:
                channel = resolve_channel(name[0])
            except ChannelError as exc:
                raise DescriptorError(text, name[1], str(exc)) from None
            return SeparationCodec(channel, v["n"], channel_name=name[0])
        v = _ints(text, fields, ["q"], {"r": 1, "n": default_n if default_n is not None else 6})
        return SeparationCodec(make_wraparound(v["q"], v["r"]), v["n"], channel_name=f"w{v['q']}r{v['r']}")
    if kind == "boot":
        v = _ints(text, fields, ["q", "r", "n"], {"depth": 1})
        return bootstrap_codec(v["q"], v["r"], v["n"], v["depth"])
    if kind == "interval":
        v = _ints(text, fields, ["q", "r", "n", "t"], {"slack": None})
        factory, inner_name = _inner_factory(text, inner, v["q"], v["r"])
        return IntervalCodec(v["q"], v["r"], v["n"], v["t"], inner=factory,
                             slack=v["slack"], inner_descriptor=inner_name)
    raise DescriptorError(text, 0, f"unknown codec kind {kind!r} (rubber, sep, boot, interval)")


def with_budget(text: str, t: int) -> str:
    """Rewrite the ``t`` field of a descriptor that has one."""
    kind = text.partition(":")[0]
    if kind not in ("rubber", "interval"):
        return text
    head, sep, inner = text.partition(",inner=")
    if re.search(r"(^|[:,])t=", head):
        head = re.sub(r"(^|[:,])t=[^,]*", lambda m: f"{m[1]}t={t}", head, count=1)
    else:
        head += f",t={t}"
    return head + sep + inner
