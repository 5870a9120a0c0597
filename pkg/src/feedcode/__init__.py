"""Feedback error-correcting codes for q-ary wraparound limited-magnitude channels."""

from .capacity import (
    CapacityPoint,
    CurveSpec,
    cf_binary,
    cf_limited_magnitude,
    cf_qary_upper,
    finite_upper_bound_M,
    rubber_rate_line,
)
from .channel import (
    ChannelClass,
    ChannelGraph,
    SeparationSet,
    classify,
    confusability_positive,
    make_wraparound,
    separable_pair,
    separation_set,
)
from .codecs import (
    BootstrapCodec,
    IntervalCodec,
    RubberCodec,
    SeparationCodec,
    bootstrap_codec,
    measure_rate,
)
from .session import Transcript, run_session
from .verify import check_bound, verify_all_messages, verify_exhaustive

__version__ = "0.1.0"
