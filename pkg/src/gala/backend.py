"""Functional mock of a packed BFV-style HE backend.

Ciphertexts carry their exact plaintext payload plus a tracked scalar noise
level, and every operation feeds a cost meter.  The mock preserves the three
things the real backend is measured by: payload semantics, operation counts,
and the noise recurrences

    add:      eta(a + b) = eta(a) + eta(b)
    scmult:   eta(a * s) = eta(a) * eta_mult
    rotation: eta(rot a) = eta(a) + eta_rot

Decryption fails (raises) once the noise reaches the budget.  A repeated
rotation of one ciphertext can be decomposed: one DecPerm on the source,
then cheap HstPerm per rotation amount.  Swapping in a real lattice backend
means re-implementing the functions in this module against its API; nothing
above this layer inspects ciphertext internals except through decrypt().
"""
from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace

from .errors import DimensionError, NoiseOverflowError, ParameterError
from .ring import SlotVector, is_power_of_two, rotate_left

# Per-operation costs in milliseconds, calibrated so that one full rotation
# costs ~56 adds and ~34 scalar multiplies (11 Perm = 1.96 ms, 2 Mult =
# 0.01 ms, 11 Add = 0.037 ms in the reference benchmark).  The
# decompose/hoist split is not separately calibrated; only the pair sum
# (= t_perm) is meaningful.
DEFAULT_T_PERM = 0.178
DEFAULT_T_SCMULT = 0.005
DEFAULT_T_ADD = 0.0034
DEFAULT_T_DECPERM = 0.6 * DEFAULT_T_PERM
DEFAULT_T_HSTPERM = 0.4 * DEFAULT_T_PERM


def _is_prime(x: int) -> bool:
    if x < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if x == q:
            return True
        if x % q == 0:
            return False
    # deterministic Miller-Rabin for x < 3.3e24
    d, r = x - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(r - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class CostModel:
    """Per-event milliseconds for the five metered operations."""

    t_perm: float = DEFAULT_T_PERM
    t_scmult: float = DEFAULT_T_SCMULT
    t_add: float = DEFAULT_T_ADD
    t_decperm: float = DEFAULT_T_DECPERM
    t_hstperm: float = DEFAULT_T_HSTPERM

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ParameterError(f"{f.name} must be non-negative")


@dataclass(frozen=True)
class HEParams:
    """Packed-HE parameter set.

    n: slot count, p: plaintext modulus, q_bits: conceptual width of the
    ciphertext modulus, sigma: Gaussian noise std (carried as metadata, never
    used quantitatively).  eta0 / eta_mult / eta_rot drive the noise
    recurrences; noise_budget is the decryption-failure threshold and
    defaults to 2^(q_bits-1) / p.
    """

    n: int = 2048
    p: int = 1048573
    q_bits: int = 60
    sigma: float = 3.2
    eta0: float = 8.0
    eta_mult: float = 1024.0
    eta_rot: float = 2048.0
    noise_budget: float | None = None

    def __post_init__(self):
        if not is_power_of_two(self.n):
            raise ParameterError(f"n must be a power of two, got {self.n}")
        if not _is_prime(self.p):
            raise ParameterError(f"p must be prime, got {self.p}")
        if self.p >= 2**31:
            raise ParameterError("p must fit in 31 bits (int64 product headroom)")
        if self.p >= 2**self.q_bits:
            raise ParameterError("p must be smaller than 2^q_bits")
        if not (self.eta_rot > self.eta_mult > self.eta0 > 1.0):
            raise ParameterError("noise terms must satisfy eta_rot > eta_mult > eta0 > 1")
        if self.noise_budget is None:
            object.__setattr__(self, "noise_budget", 2 ** (self.q_bits - 1) / self.p)
        if self.noise_budget <= self.eta0:
            raise ParameterError("noise_budget must exceed the fresh noise eta0")


class CostMeter:
    """Running counts of metered HE events plus a cost model.

    Counts only ever increase.  A meter is not synchronized; confine each
    instance to one thread and merge() afterwards.
    """

    __slots__ = ("dec_perm", "hst_perm", "full_perm", "sc_mult", "add", "cost_model")

    def __init__(self, cost_model: CostModel | None = None):
        self.dec_perm = 0
        self.hst_perm = 0
        self.full_perm = 0
        self.sc_mult = 0
        self.add = 0
        self.cost_model = cost_model or CostModel()

    def merge(self, other: "CostMeter") -> None:
        self.dec_perm += other.dec_perm
        self.hst_perm += other.hst_perm
        self.full_perm += other.full_perm
        self.sc_mult += other.sc_mult
        self.add += other.add

    def copy(self) -> "CostMeter":
        m = CostMeter(self.cost_model)
        m.merge(self)
        return m

    def as_dict(self, view: str = "split") -> dict[str, int]:
        """Counts under a reporting view.

        "split" reports full rotations and hoisted rotations separately;
        "paired" books every full rotation as one DecPerm + one HstPerm pair
        (the decomposition a real backend performs internally).
        """
        if view == "split":
            return {
                "perm": self.full_perm,
                "dec_perm": self.dec_perm,
                "hst_perm": self.hst_perm,
                "sc_mult": self.sc_mult,
                "add": self.add,
            }
        if view == "paired":
            return {
                "perm": 0,
                "dec_perm": self.dec_perm + self.full_perm,
                "hst_perm": self.hst_perm + self.full_perm,
                "sc_mult": self.sc_mult,
                "add": self.add,
            }
        raise ParameterError(f"unknown view {view!r}")

    def estimated_ms(self, model: CostModel | None = None) -> float:
        m = model or self.cost_model
        return (
            self.full_perm * m.t_perm
            + self.dec_perm * m.t_decperm
            + self.hst_perm * m.t_hstperm
            + self.sc_mult * m.t_scmult
            + self.add * m.t_add
        )

    def __repr__(self) -> str:
        return (
            f"CostMeter(perm={self.full_perm}, dec={self.dec_perm}, "
            f"hst={self.hst_perm}, scmult={self.sc_mult}, add={self.add})"
        )


class MockCiphertext:
    """SlotVector payload + noise level; treat as immutable."""

    __slots__ = ("payload", "noise", "params")

    def __init__(self, payload: SlotVector, noise: float, params: HEParams):
        if len(payload) != params.n:
            raise DimensionError(
                f"payload length {len(payload)} != slot count {params.n}"
            )
        if payload.modulus != params.p:
            raise DimensionError(
                f"payload modulus {payload.modulus} != plaintext modulus {params.p}"
            )
        self.payload = payload
        self.noise = noise
        self.params = params

    @classmethod
    def _wrap(cls, payload: SlotVector, noise: float, params: HEParams):
        c = object.__new__(cls)
        c.payload = payload
        c.noise = noise
        c.params = params
        return c

    def __repr__(self) -> str:
        return f"MockCiphertext(n={self.params.n}, noise={self.noise:g})"


class RotationGroup:
    """Handle produced by one DecPerm; amortizes rotations of one ciphertext."""

    __slots__ = ("source", "decomposed")

    def __init__(self, source: MockCiphertext):
        self.source = source
        self.decomposed = True


def encrypt(x: SlotVector, params: HEParams) -> MockCiphertext:
    """Fresh ciphertext holding x, with noise eta0."""
    if len(x) != params.n:
        raise DimensionError(f"plaintext length {len(x)} != slot count {params.n}")
    if x.modulus != params.p:
        raise DimensionError(f"plaintext modulus {x.modulus} != {params.p}")
    return MockCiphertext._wrap(x, params.eta0, params)


def decrypt(c: MockCiphertext) -> SlotVector:
    """Return the payload, or raise NoiseOverflowError once noise >= budget."""
    if c.noise >= c.params.noise_budget:
        raise NoiseOverflowError(
            f"noise {c.noise:g} reached budget {c.params.noise_budget:g}"
        )
    return c.payload


def he_add(a: MockCiphertext, b: MockCiphertext, meter: CostMeter) -> MockCiphertext:
    """Slotwise ciphertext addition; noises add."""
    if a.params != b.params:
        raise DimensionError("ciphertexts built under different parameter sets")
    out = (a.payload.slots + b.payload.slots) % a.params.p
    meter.add += 1
    return MockCiphertext._wrap(
        SlotVector._wrap(out, a.params.p), a.noise + b.noise, a.params
    )


def he_scmult(a: MockCiphertext, s: SlotVector, meter: CostMeter) -> MockCiphertext:
    """Ciphertext times plaintext vector; noise scales by eta_mult."""
    if len(s) != a.params.n or s.modulus != a.params.p:
        raise DimensionError("plaintext operand does not match ciphertext layout")
    out = (a.payload.slots * s.slots) % a.params.p
    meter.sc_mult += 1
    return MockCiphertext._wrap(
        SlotVector._wrap(out, a.params.p), a.noise * a.params.eta_mult, a.params
    )


def he_perm(a: MockCiphertext, k: int, meter: CostMeter) -> MockCiphertext:
    """Full rotation by k slots; k = 0 is free (no count, no noise)."""
    k = k % a.params.n
    if k == 0:
        return a
    meter.full_perm += 1
    return MockCiphertext._wrap(
        rotate_left(a.payload, k), a.noise + a.params.eta_rot, a.params
    )


def he_decperm(a: MockCiphertext, meter: CostMeter) -> RotationGroup:
    """Decompose a ciphertext for a series of hoisted rotations."""
    meter.dec_perm += 1
    return RotationGroup(a)


def he_hstperm(g: RotationGroup, k: int, meter: CostMeter) -> MockCiphertext:
    """Hoisted rotation of the group's source by k; k = 0 is free."""
    src = g.source
    k = k % src.params.n
    if k == 0:
        return src
    meter.hst_perm += 1
    return MockCiphertext._wrap(
        rotate_left(src.payload, k), src.noise + src.params.eta_rot, src.params
    )


def subtract_plain(
    a: MockCiphertext, r: SlotVector, meter: CostMeter
) -> MockCiphertext:
    """Ciphertext minus plaintext vector, metered as one Add-class event.

    The recurrences do not price plaintext subtraction; it is booked as an
    add with additive noise eta0 (cheap but not free).
    """
    if len(r) != a.params.n or r.modulus != a.params.p:
        raise DimensionError("mask vector does not match ciphertext layout")
    out = (a.payload.slots - r.slots) % a.params.p
    meter.add += 1
    return MockCiphertext._wrap(
        SlotVector._wrap(out, a.params.p), a.noise + a.params.eta0, a.params
    )


_PARAM_KEYS = {"n", "p", "q_bits", "sigma", "eta0", "eta_mult", "eta_rot", "noise_budget"}
_COST_KEYS = {"t_perm", "t_scmult", "t_add", "t_decperm", "t_hstperm"}


def load_cost_config(path) -> tuple[HEParams, CostModel]:
    """Read calibration from a JSON file.

    Recognized keys: t_perm, t_scmult, t_add, t_decperm, t_hstperm, eta0,
    eta_mult, eta_rot, n, p, q_bits (plus sigma and noise_budget).  Missing
    keys keep their defaults; unknown keys are rejected.
    """
    with open(path) as f:
        raw = json.load(f)
    if not isinstance(raw, dict):
        raise ParameterError("cost config must be a JSON object")
    unknown = set(raw) - _PARAM_KEYS - _COST_KEYS
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    params = HEParams(**{k: raw[k] for k in _PARAM_KEYS & set(raw)})
    model = CostModel(**{k: raw[k] for k in _COST_KEYS & set(raw)})
    return params, model


def with_overrides(params: HEParams, n: int | None = None, p: int | None = None) -> HEParams:
    """Copy of params with n and/or p replaced (budget recomputed if default)."""
    kw = {}
    if n is not None:
        kw["n"] = n
    if p is not None:
        kw["p"] = p
        kw["noise_budget"] = None
    return replace(params, **kw) if kw else params
