"""Bitstrings are ``bytes`` over the ASCII alphabet ``b"0"``/``b"1"``.

The same representation is used in machine state and on the wire, so golden
traces stay readable.
"""

from __future__ import annotations

from typing import Iterable, Sequence

def is_bitstring(x: bytes, length: int | None = None) -> bool:
    if type(x) is not bytes:
        return False
    if length is not None and len(x) != length:
        return False
    return not x.translate(None, b"01")


def xor_bits(a: bytes, b: bytes) -> bytes:
    if len(a) != len(b):
        raise ValueError(f"xor of bitstrings of different lengths {len(a)} and {len(b)}")
    return bytes(x ^ y ^ 48 for x, y in zip(a, b))


def restrict(x: Sequence | bytes, indices: Iterable[int]) -> bytes:
    """``x`` restricted to ``indices`` (0-based, in increasing order)."""
    return bytes(x[i] for i in sorted(indices))


def from_int(value: int, length: int) -> bytes:
    if length == 0:
        return b""
    return format(value, f"0{length}b").encode()


def to_mask(indices: Iterable[int], length: int) -> bytes:
    chosen = set(indices)
    return bytes(49 if i in chosen else 48 for i in range(length))


def from_mask(mask: bytes) -> tuple[int, ...]:
    return tuple(i for i, b in enumerate(mask) if b == 49)


def zeros(length: int) -> bytes:
    return b"0" * length
