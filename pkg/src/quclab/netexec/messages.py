"""Byte-exact message encoding.

Tuples of byte strings are encoded by concatenating, for every field, a
4-byte big-endian length followed by the field bytes.  A classical register
content is the encoding of the triple ``(sender, recipient, payload)``.
Anything that does not decode to exactly three fields is a parse failure.
"""

from __future__ import annotations

import struct
from typing import NamedTuple

ENVIRONMENT = b"environment"
ADVERSARY = b"adversary"
EPSILON = b""
RESERVED_IDS = (ENVIRONMENT, ADVERSARY)


_LEN = struct.Struct(">I")


def pack(*fields: bytes) -> bytes:
    parts = []
    for f in fields:
        parts.append(_LEN.pack(len(f)))
        parts.append(f)
    # join rejects str and other non-bytes fields
    return b"".join(parts)


def unpack(data: bytes, count: int | None = None) -> tuple[bytes, ...] | None:
    """Inverse of :func:`pack`; ``None`` if malformed or the field count differs."""
    if not isinstance(data, (bytes, bytearray)):
        return None
    fields = []
    i, end = 0, len(data)
    while i < end:
        if i + 4 > end:
            return None
        n = _LEN.unpack_from(data, i)[0]
        i += 4
        if i + n > end:
            return None
        fields.append(bytes(data[i : i + n]))
        i += n
    if count is not None and len(fields) != count:
        return None
    return tuple(fields)


class ClassicalMessage(NamedTuple):
    sender: bytes
    recipient: bytes
    payload: bytes

    def encode(self) -> bytes:
        return pack(self.sender, self.recipient, self.payload)

    @classmethod
    def parse(cls, data: bytes) -> "ClassicalMessage | None":
        fields = unpack(data, 3)
        return None if fields is None else cls(*fields)

    def __str__(self) -> str:
        return f"({self.sender.decode(errors='replace')} -> {self.recipient.decode(errors='replace')}: {self.payload!r})"


EMPTY_REGISTER = ClassicalMessage(EPSILON, ENVIRONMENT, EPSILON)
