from .base import Codec, CodecError, EncoderSession, measure_rate
from .bootstrap import BootstrapCodec, bootstrap_codec
from .interval import IntervalCodec, ScheduleError
from .rubber import RubberCodec
from .separation import SeparationCodec

__all__ = [
    "Codec",
    "CodecError",
    "EncoderSession",
    "measure_rate",
    "BootstrapCodec",
    "bootstrap_codec",
    "IntervalCodec",
    "ScheduleError",
    "RubberCodec",
    "SeparationCodec",
]
