"""Alice and Bob of the BB84-and-commitments randomized OT protocol.

Wire format (all payloads are :func:`pack` tuples unless noted):

====================  =========================================================
Alice -> Bob          ``("qubits", m)`` with the m qubits attached
Bob -> FCOM/theta/i   ``("commit", b)``, later bare ``open``
Bob -> FCOM/x/i       ``("commit", b)``, later bare ``open``
FCOM -> Alice         bare ``committed``, later ``("open", b)``
Alice -> Bob          bare ``next`` after every notification but the last
Alice -> Bob          ``("T", mask)`` after all 2m commitments
Alice -> Bob          ``("theta", bases)`` after a successful check
Bob -> Alice          ``("I0I1", mask0, mask1)``
Alice -> Bob          ``("fm", f0, f1, m0, m1)``, plus ``t0, t1`` in the OT variant
Alice -> environment  bare ``abort``, or ``(s0, s1)``
Bob -> environment    ``s`` (OT variant: ``s xor t_c``)
====================  =========================================================

Bits are ASCII ``0``/``1``; bases are bits with ``0`` for + and ``1`` for x;
masks are bitstrings over the index range.  Indices in commitment ids are
1-based.  With the trivial commitment scheme, Bob sends
``("com", label, inner)`` straight to Alice, where ``label`` is the id the
functionality instance would have had.
"""

from __future__ import annotations

from quclab.bitstrings import from_mask, is_bitstring, restrict, to_mask, xor_bits
from quclab.idealfunc import (
    ALICE,
    BOB,
    COMMITTED,
    OPEN,
    check_open,
    commit_message,
    open_message,
    parse_commit,
)
from quclab.netexec import ENVIRONMENT, Out, Party, pack, unpack
from quclab.otproto.hashing import HashFunction, hash_eval, hash_sample
from quclab.otproto.params import ProtocolParams
from quclab.qcore import Basis, bases_from_bits

QUBITS = b"qubits"
NEXT = b"next"
ABORT = b"abort"
POKE = b"poke"
TAG_T = b"T"
TAG_THETA = b"theta"
TAG_PARTITION = b"I0I1"
TAG_FM = b"fm"
TAG_COM = b"com"

FLUSH = []  # "processed, nothing new": release a pending message if any


def theta_label(i: int) -> bytes:
    return b"FCOM/theta/%d" % i


def x_label(i: int) -> bytes:
    return b"FCOM/x/%d" % i


def commitment_ids(m: int) -> list[bytes]:
    out = []
    for i in range(1, m + 1):
        out += [theta_label(i), x_label(i)]
    return out


def is_abort(payload: bytes) -> bool:
    if payload == ABORT:
        return True
    fields = unpack(payload)
    return bool(fields) and fields[0] == ABORT


def _entry(sender: bytes, payload: bytes) -> bytes:
    return pack(sender, payload)


def _rand(name: bytes, value: bytes) -> bytes:
    return pack(b"rand", name, value)


class AliceQROT(Party):
    """Alice's program.

    ``variant`` is ``"rot"`` (no input, outputs ``(s0, s1)``) or ``"ot"``
    (input ``(v0, v1)``, sends the masks ``t_i`` and outputs nothing).
    ``commitments`` is ``"fcom"`` or ``"com"`` for the trivial scheme.
    ``source`` is ``"bb84"`` (prepare and measure) or ``"epr"``: Alice sends
    halves of Bell pairs and measures her own half, in a basis she draws at
    that moment, only once the value is needed.  Both sources give every
    other machine exactly the same view.
    ``record_view`` appends Alice's randomness and received messages to her
    output.
    """

    def __init__(self, params: ProtocolParams, variant: str = "rot", commitments: str = "fcom",
                 record_view: bool = False, source: str = "bb84", id: bytes = ALICE,
                 bob: bytes = BOB):
        super().__init__(id)
        if variant not in ("rot", "ot") or commitments not in ("fcom", "com") or source not in ("bb84", "epr"):
            raise ValueError("unknown protocol option")
        self.p = params
        self.variant = variant
        self.commitments = commitments
        self.record_view = record_view
        self.source = source
        self.bob = bob
        self.labels = commitment_ids(params.m)
        self.label_set = frozenset(self.labels)

    def initial_state(self):
        return {
            "outbox": (),
            "phase": "idle",
            "v": None,
            "xt": (None,) * self.p.m,
            "tht": (None,) * self.p.m,
            "halves": None,
            "T": (),
            "committed": frozenset(),
            "comval": {},
            "opened": {},
            "view": (),
        }

    def copy_state(self, state):
        new = dict(state)
        new["comval"] = dict(state["comval"])
        new["opened"] = dict(state["opened"])
        return new

    # -- helpers ------------------------------------------------------------

    def _note(self, state, item: bytes) -> None:
        if self.record_view:
            state["view"] += (item,)

    def _output(self, state, payload: bytes) -> bytes:
        if self.record_view:
            return pack(payload, pack(*state["view"]))
        return payload

    def _abort(self, state) -> list[Out]:
        state["phase"] = "aborted"
        return [self.send(ENVIRONMENT, self._output(state, ABORT))]

    def _basis(self, ctx, state, i: int) -> int:
        if state["tht"][i] is None:
            b = ctx.coin()
            state["tht"] = state["tht"][:i] + (b,) + state["tht"][i + 1:]
            self._note(state, _rand(b"theta~A/%d" % (i + 1), b"01"[b:b + 1]))
        return state["tht"][i]

    def _value(self, ctx, state, i: int) -> int:
        if state["xt"][i] is None:
            basis = Basis.TIMES if self._basis(ctx, state, i) else Basis.PLUS
            bit = ctx.measure(state["halves"].select([i]), (basis,))
            v = bit[0] - 48
            state["xt"] = state["xt"][:i] + (v,) + state["xt"][i + 1:]
            self._note(state, _rand(b"x~A/%d" % (i + 1), bit))
        return state["xt"][i]

    # -- protocol steps -----------------------------------------------------

    def _start(self, ctx, state, payload):
        p = self.p
        if self.variant == "ot":
            fields = unpack(payload, 2)
            if not fields or not all(is_bitstring(f, p.ell) for f in fields):
                return None
            state["v"] = fields
        state["phase"] = "commit"
        reg = self._prepare(ctx, state)
        return [self.send(self.bob, pack(QUBITS, str(p.m).encode()), reg)]

    def _prepare(self, ctx, state):
        """Create the qubits for Bob and return their register."""
        m = self.p.m
        if self.source == "epr":
            mine, theirs = ctx.pool.epr_pairs(m)
            state["halves"] = mine
            return theirs
        xt = ctx.random_bits(m)
        tht = ctx.random_bits(m)
        state["xt"] = tuple(b - 48 for b in xt)
        state["tht"] = tuple(b - 48 for b in tht)
        self._note(state, _rand(b"x~A", xt))
        self._note(state, _rand(b"theta~A", tht))
        return ctx.pool.encode_bb84(xt, bases_from_bits(tht))

    def _commitment_event(self, ctx, state, label: bytes, payload: bytes):
        """A ``committed`` or opening notification for instance ``label``."""
        if state["phase"] == "commit":
            if payload != COMMITTED or label in state["committed"]:
                return None
            state["committed"] = state["committed"] | {label}
            if len(state["committed"]) < 2 * self.p.m:
                return [self.send(self.bob, NEXT)]
            T = ctx.random_subset(self.p.m, self.p.test_size)
            state["T"] = T
            state["phase"] = "open"
            mask = to_mask(T, self.p.m)
            self._note(state, _rand(b"T", mask))
            return [self.send(self.bob, pack(TAG_T, mask))]
        if state["phase"] == "open":
            index = self._label_index(label)
            if index not in state["T"] or label in state["opened"]:
                return None
            if self.commitments == "com":
                value = check_open(state["comval"][label], payload)
                if value is None:
                    return self._abort(state)
            else:
                fields = unpack(payload, 2)
                if not fields or fields[0] != OPEN or not is_bitstring(fields[1], 1):
                    return None
                value = fields[1]
            state["opened"][label] = value[0] - 48
            if len(state["opened"]) < 2 * len(state["T"]):
                return [self.send(self.bob, NEXT)]
            return self._check(ctx, state)
        return None

    def _label_index(self, label: bytes) -> int:
        return int(label.rsplit(b"/", 1)[1]) - 1

    def _check(self, ctx, state):
        for i in state["T"]:
            theta_b = state["opened"][theta_label(i + 1)]
            x_b = state["opened"][x_label(i + 1)]
            if self._basis(ctx, state, i) == theta_b and self._value(ctx, state, i) != x_b:
                return self._abort(state)
        retained = [i for i in range(self.p.m) if i not in state["T"]]
        theta_a = bytes(48 + self._basis(ctx, state, i) for i in retained)
        state["retained"] = tuple(retained)
        state["phase"] = "partition"
        return [self.send(self.bob, pack(TAG_THETA, theta_a))]

    def _partition(self, ctx, state, payload):
        p = self.p
        fields = unpack(payload, 3)
        if not fields or fields[0] != TAG_PARTITION:
            return None
        m0, m1 = fields[1], fields[2]
        if not (is_bitstring(m0, p.n) and is_bitstring(m1, p.n)) or any(
            (a == 49) == (b == 49) for a, b in zip(m0, m1)
        ):
            return self._abort(state)
        x_a = bytes(48 + self._value(ctx, state, i) for i in state["retained"])
        parts = (from_mask(m0), from_mask(m1))
        s = (ctx.random_bits(p.ell), ctx.random_bits(p.ell))
        fs = tuple(hash_sample(max(len(I), p.ell), p.ell, ctx) for I in parts)
        ms = tuple(xor_bits(s[i], hash_eval(fs[i], restrict(x_a, parts[i]))) for i in (0, 1))
        f_enc = (fs[0].encode(), fs[1].encode())
        if self.record_view:
            self._note(state, _rand(b"s", pack(*s)))
            self._note(state, _rand(b"f", pack(*f_enc)))
        fields = [TAG_FM, f_enc[0], f_enc[1], ms[0], ms[1]]
        if self.variant == "ot":
            fields += [xor_bits(s[0], state["v"][0]), xor_bits(s[1], state["v"][1])]
        state["phase"] = "done"
        outs = [self.send(self.bob, pack(*fields))]
        if self.variant == "rot":
            outs.append(self.send(ENVIRONMENT, self._output(state, pack(*s))))
        elif self.record_view:
            outs.append(self.send(ENVIRONMENT, self._output(state, b"")))
        return outs

    def react(self, ctx, state, msg, qreg):
        sender, payload = msg.sender, msg.payload
        if sender == ENVIRONMENT:
            if state["phase"] == "idle":
                return self._start(ctx, state, payload)
            return FLUSH
        if sender in self.label_set and self.commitments == "fcom":
            if self.record_view:
                self._note(state, _entry(sender, payload))
            return self._commitment_event(ctx, state, sender, payload)
        if sender != self.bob:
            return None
        if self.record_view:
            self._note(state, _entry(sender, payload))
        if self.commitments == "com":
            fields = unpack(payload, 3)
            if fields and fields[0] == TAG_COM and fields[1] in self.label_set:
                label, inner = fields[1], fields[2]
                if state["phase"] == "commit" and label not in state["comval"]:
                    value = parse_commit(inner)
                    if value is None or not is_bitstring(value, 1):
                        return None
                    state["comval"][label] = value
                    return self._commitment_event(ctx, state, label, COMMITTED)
                return self._commitment_event(ctx, state, label, inner)
        if state["phase"] == "partition":
            return self._partition(ctx, state, payload)
        return None


class BobQROT(Party):
    """Bob's program; input ``c`` from the environment.

    The hook methods ``_receive_qubits``, ``_openings``, ``_partition`` and
    ``_finish`` carry everything Bob does with quantum data or his choice
    bit, so that a simulator can replace them and keep the rest verbatim.
    """

    def __init__(self, params: ProtocolParams, variant: str = "rot", commitments: str = "fcom",
                 record_view: bool = False, id: bytes = BOB, alice: bytes = ALICE):
        super().__init__(id)
        if variant not in ("rot", "ot") or commitments not in ("fcom", "com"):
            raise ValueError("unknown protocol option")
        self.p = params
        self.variant = variant
        self.commitments = commitments
        self.record_view = record_view
        self.alice = alice

    def initial_state(self):
        return {"outbox": (), "phase": "idle", "c": None, "theta_a": None, "view": ()}

    def _note(self, state, item: bytes) -> None:
        if self.record_view:
            state["view"] += (item,)

    def _output(self, state, payload: bytes) -> bytes:
        if self.record_view:
            return pack(payload, pack(*state["view"]))
        return payload

    def _to_commitment(self, label: bytes, inner: bytes) -> Out:
        if self.commitments == "com":
            return self.send(self.alice, pack(TAG_COM, label, inner))
        return self.send(label, inner)

    # -- hooks --------------------------------------------------------------

    def _receive_qubits(self, ctx, state, qreg) -> list[tuple[bytes, bytes]]:
        """Measure at once in random bases; commit to bases and outcomes."""
        tht = ctx.random_bits(self.p.m)
        xt = ctx.measure(qreg, bases_from_bits(tht))
        ctx.pool.release(qreg)
        state["tht"], state["xt"] = tht, xt
        self._note(state, _rand(b"theta~B", tht))
        self._note(state, _rand(b"x~B", xt))
        commits = []
        for i in range(self.p.m):
            commits.append((theta_label(i + 1), commit_message(tht[i:i + 1])))
            commits.append((x_label(i + 1), commit_message(xt[i:i + 1])))
        return commits

    def _openings(self, ctx, state, T) -> list[tuple[bytes, bytes]]:
        if self.commitments == "com":
            return [(lab(i + 1), open_message(state[key][i:i + 1]))
                    for i in T for lab, key in ((theta_label, "tht"), (x_label, "xt"))]
        return [(lab(i + 1), OPEN) for i in T for lab in (theta_label, x_label)]

    def _partition(self, ctx, state) -> tuple[bytes, bytes]:
        retained = state["retained"]
        theta_b = restrict(state["tht"], retained)
        same = [i for i in range(self.p.n) if theta_b[i] == state["theta_a"][i]]
        state["x_b"] = restrict(state["xt"], retained)
        ic = to_mask(same, self.p.n)
        other = to_mask([i for i in range(self.p.n) if i not in same], self.p.n)
        return (ic, other) if state["c"] == 0 else (other, ic)

    def _finish(self, ctx, state, fs, ms, ts) -> list[Out]:
        c = state["c"]
        s = xor_bits(ms[c], hash_eval(fs[c], restrict(state["x_b"], state["parts"][c])))
        if ts is not None:
            s = xor_bits(s, ts[c])
        return [self.send(ENVIRONMENT, self._output(state, s))]

    # -- protocol steps -----------------------------------------------------

    def _send_partition(self, ctx, state):
        masks = self._partition(ctx, state)
        state["parts"] = (from_mask(masks[0]), from_mask(masks[1]))
        state["phase"] = "fm"
        return [self.send(self.alice, pack(TAG_PARTITION, *masks))]

    def _parse_fm(self, state, payload):
        p = self.p
        count = 7 if self.variant == "ot" else 5
        fields = unpack(payload, count)
        if not fields or fields[0] != TAG_FM:
            return None
        fs = tuple(HashFunction.decode(f, p.ell) for f in fields[1:3])
        if any(f is None for f in fs):
            return None
        if any(fs[i].input_len < len(state["parts"][i]) for i in (0, 1)):
            return None
        rest = fields[3:]
        if not all(is_bitstring(x, p.ell) for x in rest):
            return None
        ts = tuple(rest[2:4]) if self.variant == "ot" else None
        return fs, tuple(rest[0:2]), ts

    def react(self, ctx, state, msg, qreg):
        sender, payload = msg.sender, msg.payload
        p = self.p
        if sender == ENVIRONMENT:
            if state["c"] is None and payload in (b"0", b"1"):
                state["c"] = payload[0] - 48
                self._note(state, _rand(b"c", payload))
                if state["phase"] == "wait-c":
                    return self._send_partition(ctx, state)
            return None
        if sender != self.alice:
            return None
        if self.record_view:
            self._note(state, _entry(sender, payload))
        phase = state["phase"]
        if payload == NEXT:
            return FLUSH
        fields = unpack(payload)
        if not fields:
            return None
        tag = fields[0]
        if phase == "idle" and tag == QUBITS and len(fields) == 2:
            if qreg is None or len(qreg) != p.m or fields[1] != str(p.m).encode():
                return None
            state["phase"] = "committed"
            return [self._to_commitment(lab, inner) for lab, inner in self._receive_qubits(ctx, state, qreg)]
        if phase == "committed" and tag == TAG_T and len(fields) == 2:
            mask = fields[1]
            if not is_bitstring(mask, p.m) or mask.count(b"1") != p.test_size:
                return None
            T = from_mask(mask)
            state["T"] = T
            state["retained"] = tuple(i for i in range(p.m) if i not in T)
            state["phase"] = "opened"
            return [self._to_commitment(lab, inner) for lab, inner in self._openings(ctx, state, T)]
        if phase == "opened" and tag == TAG_THETA and len(fields) == 2:
            if not is_bitstring(fields[1], p.n):
                return None
            state["theta_a"] = fields[1]
            if state["c"] is None:
                state["phase"] = "wait-c"
                return None
            return self._send_partition(ctx, state)
        if phase == "fm" and tag == TAG_FM:
            parsed = self._parse_fm(state, payload)
            if parsed is None:
                return None
            state["phase"] = "done"
            return self._finish(ctx, state, *parsed)
        return None
