"""Runtime-tunable enumeration limits.

The CONVRING_CAP environment variable overrides the default cap used by
brute-force enumerations (oracle decoding, distance searches, list
materialization).
"""

import os

DEFAULT_CAP = 1 << 22


def enumeration_cap() -> int:
    raw = os.environ.get("CONVRING_CAP")
    if raw is None:
        return DEFAULT_CAP
    value = int(raw)
    if value < 1:
        raise ValueError("CONVRING_CAP must be a positive integer")
    return value
