"""Shared fixtures.

Every codec built while the suite runs is recorded so the acceptance
module can check all of them against the counting bound.  Acceptance
tests run last and report one line per criterion in the summary.
"""

import pytest

from feedcode.channel import classify
from feedcode.codecs import BootstrapCodec, IntervalCodec, RubberCodec, SeparationCodec

CONSTRUCTED: set[tuple] = set()
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def _track(cls):
    original = cls.__init__

    def __init__(self, *args, **kwargs):
        original(self, *args, **kwargs)
        wraparound = classify(self.channel).is_lambda(self.r)
        CONSTRUCTED.add((self.descriptor(), wraparound, self.q, self.r, self.n, self.t, self.M))

    cls.__init__ = __init__


for _cls in (RubberCodec, SeparationCodec, BootstrapCodec, IntervalCodec):
    _track(_cls)


def pytest_collection_modifyitems(items):
    items.sort(key=lambda item: item.nodeid.startswith("tests/test_acceptance.py"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")


@pytest.fixture
def criterion():
    """Record the pass/fail status of one acceptance criterion."""

    def mark(number: int, title: str):
        ACCEPTANCE[number] = ("FAIL", title)
        return lambda: ACCEPTANCE.__setitem__(number, ("PASS", title))

    return mark
