"""Exact modular arithmetic on packed slot vectors.

Every payload in this package, whether it models a plaintext, a ciphertext,
or an additive share, is a length-n vector of residues mod p with n a power
of two.  Rotations are cyclic; "left" means slot j of the result reads slot
(j + k) mod n of the input.  All operations are pure and reduce mod p
eagerly, so values never leave [0, p).
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, ParameterError


def is_power_of_two(x: int) -> bool:
    return x > 0 and (x & (x - 1)) == 0


class SlotVector:
    """Immutable vector of residues mod p; length must be a power of two.

    Instances are safe to share between threads: the backing array is marked
    read-only and every operation returns a fresh vector.
    """

    __slots__ = ("slots", "modulus")

    def __init__(self, slots, modulus: int):
        arr = np.atleast_1d(np.asarray(slots, dtype=np.int64))
        if arr.ndim != 1 or not is_power_of_two(arr.size):
            raise DimensionError(
                f"slot count must be a power of two, got shape {arr.shape}"
            )
        if modulus < 2:
            raise ParameterError(f"modulus must be >= 2, got {modulus}")
        arr = arr % modulus
        arr.setflags(write=False)
        self.slots = arr
        self.modulus = int(modulus)

    @classmethod
    def _wrap(cls, arr: np.ndarray, modulus: int) -> "SlotVector":
        # Fast path for internal use: arr is a fresh int64 array already
        # reduced mod `modulus`.
        v = object.__new__(cls)
        arr.setflags(write=False)
        v.slots = arr
        v.modulus = modulus
        return v

    @classmethod
    def zeros(cls, n: int, modulus: int) -> "SlotVector":
        return cls(np.zeros(n, dtype=np.int64), modulus)

    @classmethod
    def constant(cls, value: int, n: int, modulus: int) -> "SlotVector":
        return cls(np.full(n, value, dtype=np.int64), modulus)

    def __len__(self) -> int:
        return self.slots.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, SlotVector):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(
            self.slots, other.slots
        )

    def __repr__(self) -> str:
        head = ", ".join(str(int(s)) for s in self.slots[:8])
        tail = ", ..." if len(self) > 8 else ""
        return f"SlotVector([{head}{tail}], n={len(self)}, p={self.modulus})"

    def tolist(self) -> list[int]:
        return self.slots.tolist()


def _check_compatible(v: SlotVector, w: SlotVector) -> None:
    if len(v) != len(w):
        raise DimensionError(f"length mismatch: {len(v)} vs {len(w)}")
    if v.modulus != w.modulus:
        raise DimensionError(f"modulus mismatch: {v.modulus} vs {w.modulus}")


def rotate_left(v: SlotVector, k: int) -> SlotVector:
    """Cyclic left rotation: result[j] = v[(j + k) mod n]."""
    k = k % len(v)
    if k == 0:
        return v
    return SlotVector._wrap(np.roll(v.slots, -k), v.modulus)


def pointwise(v: SlotVector, w: SlotVector, op: str) -> SlotVector:
    """Slotwise add or mul mod p of two equal-length, equal-modulus vectors."""
    _check_compatible(v, w)
    if op == "add":
        out = (v.slots + w.slots) % v.modulus
    elif op == "mul":
        out = (v.slots * w.slots) % v.modulus
    else:
        raise ParameterError(f"op must be 'add' or 'mul', got {op!r}")
    return SlotVector._wrap(out, v.modulus)


def negate(v: SlotVector) -> SlotVector:
    return SlotVector._wrap((-v.slots) % v.modulus, v.modulus)


def fold_ras(v: SlotVector, start_span: int, end_span: int) -> SlotVector:
    """Rotate-and-sum fold from blocks of `start_span` down to `end_span`.

    Applies v <- v + rotate_left(v, s) for s = start_span/2, start_span/4,
    ..., end_span, i.e. log2(start_span/end_span) iterations.  Afterwards
    slot j holds sum_k v[(j + k*end_span) mod n] over k in
    [0, start_span/end_span).
    """
    n = len(v)
    for name, span in (("start_span", start_span), ("end_span", end_span)):
        if not is_power_of_two(span):
            raise ParameterError(f"{name} must be a power of two, got {span}")
    if start_span > n:
        raise ParameterError(f"start_span {start_span} exceeds slot count {n}")
    if end_span > start_span:
        raise ParameterError(
            f"end_span {end_span} must divide start_span {start_span}"
        )
    out = v.slots
    p = v.modulus
    s = start_span // 2
    while s >= end_span:
        out = (out + np.roll(out, -s)) % p
        s //= 2
    if out is v.slots:
        return v
    return SlotVector._wrap(out, p)


def read_slots(v: SlotVector, slot_map) -> SlotVector:
    """Gather the listed slots into a new (power-of-two length) vector."""
    idx = np.asarray(slot_map, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= len(v)):
        raise DimensionError("slot_map index out of range")
    return SlotVector(v.slots[idx], v.modulus)
