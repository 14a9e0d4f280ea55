"""Toeplitz hashing over GF(2).

A function with input length ``L`` and output length ``ell`` is given by
``L + ell - 1`` diagonal bits ``d``; its matrix is ``M[j][i] = d[j - i + L - 1]``.
The family of all such matrices is 2-universal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quclab.bitstrings import is_bitstring
from quclab.errors import LengthMismatch
from quclab.netexec import pack, unpack


@dataclass(frozen=True)
class HashFunction:
    diagonals: bytes
    input_len: int
    ell: int

    def __post_init__(self):
        if self.input_len < 0 or self.ell < 1:
            raise ValueError("need input_len >= 0 and ell >= 1")
        if not is_bitstring(self.diagonals, max(self.input_len + self.ell - 1, 0)):
            raise LengthMismatch(
                f"Toeplitz hash needs {self.input_len + self.ell - 1} diagonal bits, "
                f"got {len(self.diagonals)}"
            )

    def matrix(self) -> np.ndarray:
        d = np.frombuffer(self.diagonals, dtype=np.uint8) - 48
        L = self.input_len
        j = np.arange(self.ell)[:, None]
        i = np.arange(L)[None, :]
        return d[j - i + L - 1] if L else np.zeros((self.ell, 0), dtype=np.uint8)

    def __call__(self, x: bytes) -> bytes:
        return hash_eval(self, x)

    def encode(self) -> bytes:
        return pack(str(self.input_len).encode(), self.diagonals)

    @classmethod
    def decode(cls, data: bytes, ell: int) -> "HashFunction | None":
        fields = unpack(data, 2)
        if fields is None or not fields[0].isdigit() or len(fields[0]) > 6:
            return None
        try:
            return cls(fields[1], int(fields[0]), ell)
        except ValueError:
            return None


def hash_sample(input_len: int, ell: int, rng) -> HashFunction:
    """Uniform Toeplitz function.

    ``rng`` is anything with ``random_bits(n)`` (a machine context) or a numpy
    ``Generator``.
    """
    if input_len < 0:
        raise ValueError("input_len must be non-negative")
    count = input_len + ell - 1
    if hasattr(rng, "random_bits"):
        diag = rng.random_bits(count)
    else:
        diag = bytes(48 + int(b) for b in rng.integers(0, 2, size=count))
    return HashFunction(diag, input_len, ell)


def hash_eval(f: HashFunction, x: bytes) -> bytes:
    """``M x`` over GF(2); ``x`` shorter than ``input_len`` is zero-padded on the right."""
    if len(x) > f.input_len:
        raise LengthMismatch(f"input of length {len(x)} for hash with input_len {f.input_len}")
    L, d = f.input_len, f.diagonals
    out = bytearray()
    for j in range(f.ell):
        acc = 0
        for i, xi in enumerate(x):
            if xi == 49 and d[j - i + L - 1] == 49:
                acc ^= 1
        out.append(48 + acc)
    return bytes(out)


def hash_eval_batch(diagonals: np.ndarray, x: np.ndarray, ell: int) -> np.ndarray:
    """Evaluate many Toeplitz functions (rows of ``diagonals``, 0/1 ints) at one input."""
    x = np.asarray(x, dtype=np.int64)
    L = x.shape[0]
    j = np.arange(ell)[:, None]
    i = np.arange(L)[None, :]
    mats = diagonals[:, j - i + L - 1]
    return (mats.astype(np.int64) @ x) % 2
