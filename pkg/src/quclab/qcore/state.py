"""Pure-state qubit pool with BB84 encoding and basis measurement.

The pool keeps the global pure state factorized into independent blocks.
Honest protocol runs only ever create product states, so each qubit usually
lives in its own one-qubit block; blocks merge only when a multi-qubit
unitary entangles them.  This keeps exact enumeration cheap while remaining
a faithful statevector simulation.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from quclab.errors import BadTargets, CapExceeded, LengthMismatch, NotUnitary

CHECK_TOL = 1e-10
NORM_TOL = 1e-12
DEFAULT_QUBIT_CAP = 20

_SQRT_HALF = 1.0 / np.sqrt(2.0)
HADAMARD = np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


class Basis(enum.Enum):
    """Conjugate-coding bases: ``PLUS`` is computational, ``TIMES`` diagonal."""

    PLUS = "+"
    TIMES = "x"

    @classmethod
    def parse(cls, symbol: str | bytes | int) -> "Basis":
        if isinstance(symbol, int):
            symbol = chr(symbol)
        if isinstance(symbol, bytes):
            symbol = symbol.decode()
        if symbol in ("+", "0"):
            return cls.PLUS
        if symbol in ("x", "×", "1"):
            return cls.TIMES
        raise ValueError(f"not a basis symbol: {symbol!r}")

    @property
    def bit(self) -> bytes:
        return b"0" if self is Basis.PLUS else b"1"


def bases_from_bits(bits: bytes) -> tuple[Basis, ...]:
    return tuple(Basis.TIMES if b == 49 else Basis.PLUS for b in bits)


def bases_to_bits(bases: Iterable[Basis]) -> bytes:
    return b"".join(b.bit for b in bases)


def bases_to_str(bases: Iterable[Basis]) -> str:
    return "".join(b.value for b in bases)


def _basis_vector(bit: int, basis: Basis) -> np.ndarray:
    if basis is Basis.PLUS:
        v = np.zeros(2, dtype=complex)
        v[bit] = 1.0
        return v
    sign = -1.0 if bit else 1.0
    return np.array([_SQRT_HALF, sign * _SQRT_HALF], dtype=complex)


@dataclass(frozen=True)
class StateVector:
    """Dense amplitudes of ``num_qubits`` qubits, first qubit most significant."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise LengthMismatch("amplitude array must have length 2**num_qubits")

    @classmethod
    def basis_state(cls, bits: bytes, bases: Sequence[Basis]) -> "StateVector":
        if len(bits) != len(bases):
            raise LengthMismatch(f"{len(bits)} bits but {len(bases)} bases")
        amp = np.ones(1, dtype=complex)
        for b, th in zip(bits, bases):
            amp = np.kron(amp, _basis_vector(b - 48, th))
        return cls(len(bits), amp)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def allclose(self, other: "StateVector", atol: float = CHECK_TOL) -> bool:
        return self.num_qubits == other.num_qubits and np.allclose(
            self.amplitudes, other.amplitudes, atol=atol
        )


@dataclass(frozen=True)
class QubitRegister:
    """An ordered list of distinct qubit handles into a pool."""

    handles: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.handles)) != len(self.handles):
            raise BadTargets("register handles must be distinct")

    def __len__(self) -> int:
        return len(self.handles)

    def __iter__(self):
        return iter(self.handles)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return QubitRegister(self.handles[i])
        return self.handles[i]

    def select(self, indices: Iterable[int]) -> "QubitRegister":
        return QubitRegister(tuple(self.handles[i] for i in indices))

    @classmethod
    def concat(cls, *regs: "QubitRegister | None") -> "QubitRegister":
        return cls(tuple(h for r in regs if r is not None for h in r.handles))


def _apply_1q(psi: np.ndarray, axis: int, gate: np.ndarray) -> np.ndarray:
    out = np.tensordot(gate, psi, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


class QubitPool:
    """The quantum state of one execution.

    Every public operation keeps the state normalized.  Randomness
    (measurement outcomes) is drawn from a *chooser*: either a seeded sampler
    or a branch recorder used by exact enumeration.
    """

    def __init__(self, cap: int = DEFAULT_QUBIT_CAP):
        self.cap = cap
        self._blocks: dict[int, tuple[tuple[int, ...], np.ndarray]] = {}
        self._where: dict[int, int] = {}
        self._next_handle = 0
        self._next_block = 0

    def copy(self) -> "QubitPool":
        # amplitude arrays are never mutated in place, so sharing them is safe
        new = QubitPool.__new__(QubitPool)
        new.cap = self.cap
        new._blocks = dict(self._blocks)
        new._where = dict(self._where)
        new._next_handle = self._next_handle
        new._next_block = self._next_block
        return new

    @property
    def live_qubits(self) -> int:
        return len(self._where)

    def is_live(self, handle: int) -> bool:
        return handle in self._where

    def _reserve(self, count: int) -> tuple[int, ...]:
        if count < 0:
            raise ValueError("negative qubit count")
        if self.live_qubits + count > self.cap:
            raise CapExceeded(
                f"{self.live_qubits} live qubits + {count} requested exceeds cap {self.cap}"
            )
        handles = tuple(range(self._next_handle, self._next_handle + count))
        self._next_handle += count
        return handles

    def _put_block(self, handles: tuple[int, ...], psi: np.ndarray) -> None:
        bid = self._next_block
        self._next_block += 1
        self._blocks[bid] = (handles, psi)
        for h in handles:
            self._where[h] = bid

    def _check(self, reg: QubitRegister) -> None:
        for h in reg.handles:
            if h not in self._where:
                raise BadTargets(f"qubit handle {h} is not live in this pool")

    # -- allocation -------------------------------------------------------

    def allocate(self, state: StateVector) -> QubitRegister:
        handles = self._reserve(state.num_qubits)
        if abs(state.norm() - 1.0) > CHECK_TOL:
            raise ValueError("state is not normalized")
        self._put_block(handles, state.amplitudes.reshape((2,) * state.num_qubits))
        return QubitRegister(handles)

    def encode_bb84(self, bits: bytes, bases: Sequence[Basis]) -> QubitRegister:
        """Prepare ``|bits>_bases`` as a product of fresh qubits."""
        if len(bits) != len(bases):
            raise LengthMismatch(f"{len(bits)} bits but {len(bases)} bases")
        if len(bits) < 1:
            raise LengthMismatch("encode_bb84 needs at least one qubit")
        handles = self._reserve(len(bits))
        for h, b, th in zip(handles, bits, bases):
            if b not in (48, 49):
                raise ValueError(f"not a bit: {chr(b)!r}")
            self._put_block((h,), _basis_vector(b - 48, th))
        return QubitRegister(handles)

    def epr_pairs(self, count: int) -> tuple[QubitRegister, QubitRegister]:
        """``count`` Bell pairs (|00>+|11>)/sqrt2; returns (left halves, right halves)."""
        handles = self._reserve(2 * count)
        bell = np.array([[_SQRT_HALF, 0], [0, _SQRT_HALF]], dtype=complex)
        for i in range(count):
            self._put_block((handles[2 * i], handles[2 * i + 1]), bell)
        return QubitRegister(handles[0::2]), QubitRegister(handles[1::2])

    def release(self, reg: QubitRegister | None) -> None:
        """Forget qubits that are no longer addressable by anyone.

        Releasing a qubit that is still entangled with live qubits keeps the
        block (tracing out would need a mixed state); the qubit simply stops
        counting towards the cap once its whole block is released.
        """
        if reg is None:
            return
        for h in reg.handles:
            bid = self._where.pop(h, None)
            if bid is None:
                continue
            handles, _ = self._blocks[bid]
            if not any(other in self._where for other in handles):
                del self._blocks[bid]

    # -- dynamics ---------------------------------------------------------

    def apply_unitary(self, reg: QubitRegister, targets: Sequence[int], matrix) -> None:
        """Apply ``matrix`` to ``reg[targets]`` (first target most significant)."""
        targets = list(targets)
        if len(set(targets)) != len(targets) or not targets:
            raise BadTargets("targets must be distinct and non-empty")
        if any(t < 0 or t >= len(reg) for t in targets):
            raise BadTargets(f"targets {targets} out of range for register of size {len(reg)}")
        self._check(reg)
        u = np.asarray(matrix, dtype=complex)
        dim = 2 ** len(targets)
        if u.shape != (dim, dim):
            raise NotUnitary(f"matrix shape {u.shape} does not act on {len(targets)} qubits")
        if not np.allclose(u.conj().T @ u, np.eye(dim), atol=CHECK_TOL):
            raise NotUnitary("matrix is not unitary within tolerance")
        qubits = [reg.handles[t] for t in targets]
        bids = list(dict.fromkeys(self._where[h] for h in qubits))
        handles: tuple[int, ...] = ()
        psi = np.ones((), dtype=complex)
        for bid in bids:
            hs, block = self._blocks.pop(bid)
            handles += hs
            psi = np.multiply.outer(psi, block)
        axes = [handles.index(h) for h in qubits]
        k = len(qubits)
        gate = u.reshape((2,) * (2 * k))
        out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), axes))
        out = np.moveaxis(out, list(range(k)), axes)
        self._put_block(handles, out)

    def _measure_one(self, handle: int, basis: Basis, chooser) -> int:
        bid = self._where[handle]
        handles, psi = self._blocks[bid]
        ax = handles.index(handle)
        if basis is Basis.TIMES:
            psi = _apply_1q(psi, ax, HADAMARD)
        flat = np.moveaxis(psi, ax, 0).reshape(2, -1)
        probs = np.sum(np.abs(flat) ** 2, axis=1)
        probs = probs / probs.sum()
        outcome = chooser.weighted((float(probs[0]), float(probs[1])))
        del self._blocks[bid]
        rest = tuple(h for h in handles if h != handle)
        if rest:
            # the rest of the block stays with the remaining qubits
            remaining = flat[outcome] / np.sqrt(probs[outcome])
            remaining = remaining / np.linalg.norm(remaining)
            self._blocks[bid] = (rest, remaining.reshape((2,) * len(rest)))
        self._put_block((handle,), _basis_vector(outcome, basis))
        return outcome

    def measure(self, reg: QubitRegister, bases: Sequence[Basis], chooser) -> bytes:
        """Measure qubit ``i`` of ``reg`` in ``bases[i]``; returns the outcome bits."""
        if len(bases) != len(reg):
            raise LengthMismatch(f"{len(bases)} bases for {len(reg)} qubits")
        self._check(reg)
        return bytes(48 + self._measure_one(h, th, chooser) for h, th in zip(reg.handles, bases))

    def classicalize(self, reg: QubitRegister | None, chooser) -> bytes:
        """Measure ``reg`` in the computational basis, keeping the collapsed qubits."""
        if reg is None or len(reg) == 0:
            return b""
        return self.measure(reg, (Basis.PLUS,) * len(reg), chooser)

    # -- inspection -------------------------------------------------------

    def exact_outcome_distribution(
        self, reg: QubitRegister, bases: Sequence[Basis]
    ) -> dict[bytes, float]:
        """Born-rule distribution of measuring ``reg`` in ``bases``; state untouched."""
        if len(bases) != len(reg):
            raise LengthMismatch(f"{len(bases)} bases for {len(reg)} qubits")
        self._check(reg)
        pos = {h: i for i, h in enumerate(reg.handles)}
        parts = []
        for bid in dict.fromkeys(self._where[h] for h in reg.handles):
            handles, psi = self._blocks[bid]
            for ax, h in enumerate(handles):
                if h in pos and bases[pos[h]] is Basis.TIMES:
                    psi = _apply_1q(psi, ax, HADAMARD)
            p = np.abs(psi) ** 2
            keep = [ax for ax, h in enumerate(handles) if h in pos]
            drop = tuple(ax for ax in range(len(handles)) if ax not in keep)
            marg = p.sum(axis=drop) if drop else p
            parts.append(([pos[handles[ax]] for ax in keep], marg))
        order: list[int] = []
        joint = np.ones(())
        for idx, marg in parts:
            order += idx
            joint = np.multiply.outer(joint, marg)
        joint = np.transpose(joint, np.argsort(order))
        out = {}
        for bits in itertools.product((0, 1), repeat=len(reg)):
            pr = float(joint[bits])
            if pr > NORM_TOL:
                out[bytes(48 + b for b in bits)] = pr
        return out

    def statevector(self, reg: QubitRegister) -> StateVector:
        """Amplitudes of ``reg``; the register must not be entangled with other qubits."""
        self._check(reg)
        members = set(reg.handles)
        handles: tuple[int, ...] = ()
        psi = np.ones((), dtype=complex)
        for bid in dict.fromkeys(self._where[h] for h in reg.handles):
            hs, block = self._blocks[bid]
            if not set(hs) <= members:
                raise BadTargets("register is entangled with qubits outside it")
            handles += hs
            psi = np.multiply.outer(psi, block)
        psi = np.transpose(psi, [handles.index(h) for h in reg.handles])
        return StateVector(len(reg), psi.reshape(-1))

    def norm_error(self) -> float:
        """Largest deviation from unit norm over all blocks."""
        worst = 0.0
        for _, psi in self._blocks.values():
            worst = max(worst, abs(float(np.linalg.norm(psi)) - 1.0))
        return worst
