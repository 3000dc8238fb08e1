"""Send binary payloads over an SMS-style text channel.

Bytes become code points (control bytes 0-31 are lifted to 256-287), the
text is cut into segments carrying a three-digit index, and the receiver
stores segments as records and rebuilds the payload in index order.
"""

from ._core import (
    ChannelProfile,
    ConflictingDuplicate,
    Error,
    InboxStore,
    MalformedHeader,
    MalformedPpm,
    MalformedText,
    MissingSegments,
    OversizeMessage,
    RangeViolation,
    RgbImage,
    Segment,
    StorageFailure,
    TooManySegments,
    TransferStats,
    UnexpectedSegment,
    __version__,
    decode_text,
    encode_bytes,
    format_stats_csv,
    from_utf8,
    parse,
    parse_ppm,
    read_segments_file,
    reassemble,
    render,
    run_cli,
    segment_count,
    split,
    to_utf8,
    transfer_stats,
    transmit,
    transmit_trace,
    unique_colors,
    write_ppm,
    write_segments_file,
)

DEFAULT_CAPACITY = 70
MAX_SEGMENTS = 1000

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
