"""Authenticated, bandwidth-budgeted sensor uplink.

Wire format per frame:

    4 bytes  big-endian payload-section length (sequence + tag + payload)
    8 bytes  big-endian sequence number, monotonically increasing
    32 bytes HMAC-SHA256 over (sequence bytes + payload)
    N bytes  payload: newline-delimited serialized events, UTF-8

The link is narrow (default 492 kbit/s), so transmission is modelled as a
continuous drain: each frame occupies the wire for frame_bits / rate_cap
seconds and frames never overlap. Under that schedule the bits on the wire in
any 1-second window never exceed the cap, and a saturating burst drains in
total_bits / rate_cap seconds. When the budget is exhausted the schedule
simply extends (backpressure); nothing is ever dropped.

The key comes from the OMR_SENSOR_KEY environment variable or a key file,
never from an argument vector visible in process listings.
"""

import hmac
import hashlib
import io
import os
from dataclasses import dataclass
from pathlib import Path

from ..config import DEFAULT_CONFIG, KEY_ENV_VAR
from .events import SensorEvent

HEADER_LEN = 4
SEQ_LEN = 8
TAG_LEN = 32
FRAME_OVERHEAD = HEADER_LEN + SEQ_LEN + TAG_LEN


class UplinkKeyError(RuntimeError):
    """No authentication key available; the uplink refuses to start."""


class FrameSizeError(ValueError):
    """A single event exceeds the frame payload budget."""


class FrameAuthError(ValueError):
    """Frame failed authentication or framing checks."""


@dataclass(frozen=True)
class LinkBudget:
    rate_cap: int = DEFAULT_CONFIG["uplink"]["rate_cap"]  # bits/sec
    burst: int = DEFAULT_CONFIG["uplink"]["burst"]        # max payload bytes/frame
    shared_key_id: str = DEFAULT_CONFIG["uplink"]["shared_key_id"]

    def validate(self) -> None:
        if self.rate_cap <= 0:
            raise ValueError(f"rate_cap must be > 0, got {self.rate_cap}")
        if self.burst <= 0:
            raise ValueError(f"burst must be > 0, got {self.burst}")


@dataclass(frozen=True)
class Frame:
    sequence: int
    payload: bytes
    tag: bytes
    tx_start: float  # seconds on the simulated wire clock
    tx_end: float

    @property
    def wire_bytes(self) -> int:
        return FRAME_OVERHEAD + len(self.payload)

    @property
    def wire_bits(self) -> int:
        return self.wire_bytes * 8

    def to_bytes(self) -> bytes:
        seq = self.sequence.to_bytes(SEQ_LEN, "big")
        body = seq + self.tag + self.payload
        return len(body).to_bytes(HEADER_LEN, "big") + body


def _tag(key: bytes, sequence: int, payload: bytes) -> bytes:
    return hmac.new(key, sequence.to_bytes(SEQ_LEN, "big") + payload, hashlib.sha256).digest()


def load_uplink_key(key_file: str | Path | None = None, environ=None) -> bytes:
    """Resolve the shared key; refuse to start without one."""
    environ = os.environ if environ is None else environ
    if key_file:
        path = Path(key_file)
        if not path.exists():
            raise UplinkKeyError(f"key file not found: {path}")
        key = path.read_bytes().strip()
    else:
        raw = environ.get(KEY_ENV_VAR, "")
        key = raw.encode("utf-8").strip()
    if not key:
        raise UplinkKeyError(
            f"no uplink key: set {KEY_ENV_VAR} or provide a key file"
        )
    return key


class Uplink:
    """Serializes ordered events into authenticated, rate-capped frames."""

    def __init__(self, key: bytes, budget: LinkBudget | None = None, start_time: float = 0.0):
        if not key:
            raise UplinkKeyError("empty uplink key")
        self._key = key
        self.budget = budget or LinkBudget()
        self.budget.validate()
        self._sequence = 0
        self._wire_free_at = start_time

    def _emit(self, payload: bytes, available_at: float) -> Frame:
        sequence = self._sequence
        self._sequence += 1
        tx_start = max(self._wire_free_at, available_at)
        tx_seconds = (FRAME_OVERHEAD + len(payload)) * 8 / self.budget.rate_cap
        tx_end = tx_start + tx_seconds
        self._wire_free_at = tx_end
        return Frame(sequence, payload, _tag(self._key, sequence, payload), tx_start, tx_end)

    def transmit(self, events, available_at: float = 0.0) -> list[Frame]:
        """Pack events (already ordered by event_id) into frames.

        Event order is preserved across frames. Events are packed greedily up
        to the burst size; an event that alone exceeds the burst is an error
        naming the event, because silently truncating evidence is worse than
        failing loudly.
        """
        frames = []
        pending: list[bytes] = []
        pending_size = 0
        previous_id = ""

        def flush():
            nonlocal pending, pending_size
            if pending:
                frames.append(self._emit(b"".join(pending), available_at))
                pending = []
                pending_size = 0

        for event in events:
            if event.event_id < previous_id:
                raise ValueError(
                    f"events must be ordered by event_id; {event.event_id} follows {previous_id}"
                )
            previous_id = event.event_id
            blob = (event.to_json() + "\n").encode("utf-8")
            if len(blob) > self.budget.burst:
                raise FrameSizeError(
                    f"event {event.event_id} serializes to {len(blob)} bytes, above the "
                    f"frame payload budget of {self.budget.burst}; raise burst or trim detail"
                )
            if pending_size + len(blob) > self.budget.burst:
                flush()
            pending.append(blob)
            pending_size += len(blob)
        flush()
        return frames

    @property
    def drain_time(self) -> float:
        """Wire-clock time at which everything transmitted so far has drained."""
        return self._wire_free_at


def parse_frame(data: bytes, key: bytes) -> tuple[int, list[SensorEvent], int]:
    """Parse and authenticate one frame from a byte buffer.

    Returns (sequence, events, total frame length consumed). Raises
    FrameAuthError for truncated frames or bad tags.
    """
    if len(data) < HEADER_LEN:
        raise FrameAuthError("truncated frame: missing length header")
    body_len = int.from_bytes(data[:HEADER_LEN], "big")
    if body_len < SEQ_LEN + TAG_LEN:
        raise FrameAuthError(f"frame body length {body_len} below minimum")
    end = HEADER_LEN + body_len
    if len(data) < end:
        raise FrameAuthError(f"truncated frame: expected {end} bytes, have {len(data)}")
    sequence = int.from_bytes(data[HEADER_LEN:HEADER_LEN + SEQ_LEN], "big")
    tag = data[HEADER_LEN + SEQ_LEN:HEADER_LEN + SEQ_LEN + TAG_LEN]
    payload = data[HEADER_LEN + SEQ_LEN + TAG_LEN:end]
    if not hmac.compare_digest(tag, _tag(key, sequence, payload)):
        raise FrameAuthError(f"authentication failed for frame sequence {sequence}")
    events = [
        SensorEvent.from_json(line)
        for line in payload.decode("utf-8").splitlines()
        if line.strip()
    ]
    return sequence, events, end


def read_frames(stream, key: bytes):
    """Iterate (sequence, events) over a binary stream of frames.

    Accepts bytes or a binary file object. Authentication failures propagate
    as FrameAuthError; the caller decides whether to stop or resynchronize.
    """
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    while True:
        header = stream.read(HEADER_LEN)
        if not header:
            return
        if len(header) < HEADER_LEN:
            raise FrameAuthError("truncated frame: partial length header")
        body_len = int.from_bytes(header, "big")
        body = stream.read(body_len)
        if len(body) < body_len:
            raise FrameAuthError(f"truncated frame: expected {body_len} body bytes")
        sequence, events, _ = parse_frame(header + body, key)
        yield sequence, events


def window_bits(frames: list[Frame], window_start: float, window_len: float = 1.0) -> float:
    """Bits on the wire during [window_start, window_start + window_len).

    Fluid accounting: a frame contributes proportionally to how much of its
    transmission interval overlaps the window. Used by budget-invariant tests.
    """
    window_end = window_start + window_len
    total = 0.0
    for frame in frames:
        span = frame.tx_end - frame.tx_start
        if span <= 0:
            if window_start <= frame.tx_start < window_end:
                total += frame.wire_bits
            continue
        overlap = min(frame.tx_end, window_end) - max(frame.tx_start, window_start)
        if overlap > 0:
            total += frame.wire_bits * overlap / span
    return total
