"""RFC 3339 UTC timestamps with millisecond precision.

Every timestamp in the system goes through these two functions, so that
re-serialized values are byte-stable: seconds are always two digits, the
fractional part is emitted only when non-zero and always with exactly
three digits, and the zone designator is always ``Z``.
"""

from __future__ import annotations

import re
from datetime import datetime, timezone

_TIMESTAMP_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})(?:\.(\d{1,3}))?(Z|\+00:00)$"
)


def parse_timestamp(text: str) -> datetime:
    """Parse an RFC 3339 UTC timestamp, allowing at most millisecond precision.

    Raises ValueError on anything else, including non-UTC offsets.
    """
    m = _TIMESTAMP_RE.match(text)
    if m is None:
        raise ValueError(f"not an RFC 3339 UTC timestamp with <= millisecond precision: {text!r}")
    year, month, day, hour, minute, second = (int(g) for g in m.groups()[:6])
    frac = m.group(7)
    micros = int(frac.ljust(3, "0")) * 1000 if frac else 0
    return datetime(year, month, day, hour, minute, second, micros, tzinfo=timezone.utc)


def format_timestamp(value: datetime) -> str:
    """Serialize to the canonical form, e.g. ``2022-02-28T09:00:54Z`` or ``...T09:00:54.250Z``."""
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    elif value.tzinfo is not timezone.utc:
        value = value.astimezone(timezone.utc)
    fraction = f".{value.microsecond // 1000:03d}" if value.microsecond else ""
    return (
        f"{value.year:04d}-{value.month:02d}-{value.day:02d}"
        f"T{value.hour:02d}:{value.minute:02d}:{value.second:02d}{fraction}Z"
    )


def is_timestamp(text: str) -> bool:
    try:
        parse_timestamp(text)
    except ValueError:
        return False
    return True
