"""The four packed-HE matrix-vector multiplication schemes.

All four compute w @ x mod p for an n_o x n_i weight matrix against an
encrypted input vector, and finish by splitting the result into additive
shares.  They differ in how the matrix is laid out over ciphertext slots and
where the rotate-and-sum fold happens:

  naive      one plaintext per row, full ciphertext fold per row
  diagonal   cyclic diagonals against a packed input, no fold at all
  gazelle    packed diagonal groups, rotated inputs, ciphertext-domain fold
  gala       packed diagonal groups, rotated *products*, fold deferred to
             the plaintext shares

Meters passed in receive only the linear-phase events, which is what the
complexity tables count (the computation up to the to-be-shared ciphertext).
The share-masking add is booked separately on the outcome's share_meter.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import (
    CostMeter,
    HEParams,
    MockCiphertext,
    decrypt,
    encrypt,
    he_add,
    he_decperm,
    he_hstperm,
    he_perm,
    he_scmult,
)
from .errors import DimensionError, ParameterError
from .ring import SlotVector, fold_ras, is_power_of_two, read_slots, rotate_left
from .sharing import gen_additive_share


@dataclass
class MvTask:
    """One dot-product instance: w is n_o x n_i, both powers of two, n_i <= n.

    Larger matrices must be split by the caller into column blocks of at
    most n columns (see column_blocks).
    """

    n_i: int
    n_o: int
    w: np.ndarray
    params: HEParams

    def __post_init__(self):
        for name, v in (("n_i", self.n_i), ("n_o", self.n_o)):
            if not is_power_of_two(v):
                raise ParameterError(f"{name} must be a power of two, got {v}")
        if not (self.n_o <= self.n_i <= self.params.n):
            raise ParameterError(
                f"need n_o <= n_i <= n, got {self.n_o}x{self.n_i} with n={self.params.n}"
            )
        w = np.asarray(self.w, dtype=np.int64)
        if w.shape != (self.n_o, self.n_i):
            raise DimensionError(f"w has shape {w.shape}, expected {(self.n_o, self.n_i)}")
        self.w = w % self.params.p

    @property
    def copies(self) -> int:
        """How many copies of x fit in one ciphertext."""
        return self.params.n // self.n_i

    @property
    def n_o_padded(self) -> int:
        """Rows after zero-padding small tasks up to one diagonal group."""
        return max(self.n_o, self.copies)

    @property
    def groups(self) -> int:
        """Packed diagonal group count T = n_i * n_o_padded / n (>= 1)."""
        return self.n_i * self.n_o_padded // self.params.n

    def padded_matrix(self) -> np.ndarray:
        if self.n_o_padded == self.n_o:
            return self.w
        wp = np.zeros((self.n_o_padded, self.n_i), dtype=np.int64)
        wp[: self.n_o] = self.w
        return wp

    def slot_map(self) -> list[int]:
        """Slot holding output row j0 after the span n_i -> T fold.

        Row j0 = c*T + o lands at slot c*n_i + o; padded rows are dropped.
        """
        t = self.groups
        return [(j0 // t) * self.n_i + (j0 % t) for j0 in range(self.n_o)]

    def fold_spec(self) -> tuple[int, int]:
        return (self.n_i, self.groups)


@dataclass
class MvOutcome:
    """Result of one scheme run: output ciphertext(s), shares, and meters.

    meter holds the linear-phase event counts only; share_meter holds the
    masking add(s).  slot_map maps output row -> slot index (for naive, slot
    within that row's own ciphertext).
    """

    scheme: str
    output_cipher: MockCiphertext | list[MockCiphertext]
    server_share: SlotVector
    client_share: SlotVector
    slot_map: list[int]
    fold_spec: tuple[int, int]
    meter: CostMeter
    share_meter: CostMeter
    seed: int | None = None


def _resolve_rng(rng) -> tuple[np.random.Generator, int | None]:
    seed = rng if isinstance(rng, int) else None
    return np.random.default_rng(rng), seed


def pack_input(x, task: MvTask) -> SlotVector:
    """Lay out x repeated n/n_i times, the layout the packed schemes expect."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (task.n_i,):
        raise DimensionError(f"x has shape {x.shape}, expected ({task.n_i},)")
    return SlotVector(np.tile(x, task.copies), task.params.p)


def embed_input(x, task: MvTask) -> SlotVector:
    """Lay out x in slots [0, n_i) with zeros elsewhere (naive layout)."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (task.n_i,):
        raise DimensionError(f"x has shape {x.shape}, expected ({task.n_i},)")
    out = np.zeros(task.params.n, dtype=np.int64)
    out[: task.n_i] = x % task.params.p
    return SlotVector._wrap(out, task.params.p)


def column_blocks(w, x, n: int):
    """Split a too-wide matrix/vector into column blocks of n each.

    Yields (w_block, x_block) pairs; per-block dot products sum to the full
    result mod p.
    """
    w = np.asarray(w)
    x = np.asarray(x)
    n_i = w.shape[1]
    if n_i <= n:
        yield w, x
        return
    if n_i % n != 0:
        raise ParameterError(f"n_i={n_i} is not a multiple of the block width {n}")
    for lo in range(0, n_i, n):
        yield w[:, lo : lo + n], x[lo : lo + n]


def encode_gala_weights(task: MvTask) -> list[SlotVector]:
    """Row-encode w into T diagonal plaintexts aligned with the packed input.

    Slot j of plaintext t carries w[r((j - t) mod n)][j mod n_i] where the
    row class r(j) = (j // n_i) * T + (j mod T).  Multiplying plaintext t
    against the packed input and rotating the product left by t makes every
    slot j of the sum a T-term partial sum of row r(j); the span n_i -> T
    fold then completes each row, with row c*T + o read at slot c*n_i + o.
    For a single copy (n_i = n) this reduces to w[(j - t) mod n_o][j].
    """
    n, p = task.params.n, task.params.p
    n_i, t_count = task.n_i, task.groups
    wp = task.padded_matrix()
    j = np.arange(n)
    cols = j % n_i
    out = []
    for t in range(t_count):
        src = (j - t) % n
        rows = (src // n_i) * t_count + (src % t_count)
        out.append(SlotVector._wrap(wp[rows, cols], p))
    return out


def _encode_cyclic_diagonals(task: MvTask) -> list[SlotVector]:
    # d_k[j] = w[j mod n_o][(j + k) mod n_i]; n_i plaintexts, rows cycled.
    n, p = task.params.n, task.params.p
    j = np.arange(n)
    rows = j % task.n_o
    out = []
    for k in range(task.n_i):
        out.append(SlotVector._wrap(task.w[rows, (j + k) % task.n_i], p))
    return out


def _he_fold(ct: MockCiphertext, start: int, end: int, meter: CostMeter) -> MockCiphertext:
    # Ciphertext-domain rotate-and-sum, one Perm + one Add per halving.
    s = start // 2
    while s >= end:
        ct = he_add(ct, he_perm(ct, s, meter), meter)
        s //= 2
    return ct


def _acc(acc, term, meter):
    return term if acc is None else he_add(acc, term, meter)


def _finish_single(task, scheme, ct, fold_spec, slot_map, lin, rng):
    """Mask one output ciphertext and fold both shares in plaintext."""
    rng, seed = _resolve_rng(rng)
    share_meter = CostMeter(lin.cost_model)
    r, masked = gen_additive_share(ct, rng, share_meter)
    start, end = fold_spec
    client = read_slots(fold_ras(decrypt(masked), start, end), slot_map)
    server = read_slots(fold_ras(r, start, end), slot_map)
    return MvOutcome(
        scheme=scheme,
        output_cipher=ct,
        server_share=server,
        client_share=client,
        slot_map=slot_map,
        fold_spec=fold_spec,
        meter=lin,
        share_meter=share_meter,
        seed=seed,
    )


def mv_naive(task: MvTask, ct_x: MockCiphertext, meter: CostMeter, rng=None) -> MvOutcome:
    """One plaintext row per output, full rotate-and-sum fold per row.

    Expects x in slots [0, n_i) with zeros elsewhere.  Produces n_o output
    ciphertexts, row i's result in slot 0 of ciphertext i.
    """
    p, n = task.params.p, task.params.n
    lin = CostMeter(meter.cost_model)
    outs = []
    for i in range(task.n_o):
        row = np.zeros(n, dtype=np.int64)
        row[: task.n_i] = task.w[i]
        u = he_scmult(ct_x, SlotVector._wrap(row, p), lin)
        outs.append(_he_fold(u, task.n_i, 1, lin))
    meter.merge(lin)

    rng, seed = _resolve_rng(rng)
    share_meter = CostMeter(meter.cost_model)
    server = np.empty(task.n_o, dtype=np.int64)
    client = np.empty(task.n_o, dtype=np.int64)
    for i, ct in enumerate(outs):
        r, masked = gen_additive_share(ct, rng, share_meter)
        server[i] = r.slots[0]
        client[i] = decrypt(masked).slots[0]
    return MvOutcome(
        scheme="naive",
        output_cipher=outs,
        server_share=SlotVector._wrap(server, p),
        client_share=SlotVector._wrap(client, p),
        slot_map=[0] * task.n_o,
        fold_spec=(1, 1),
        meter=lin,
        share_meter=share_meter,
        seed=seed,
    )


def mv_diagonal(task: MvTask, ct_xpack: MockCiphertext, meter: CostMeter, rng=None) -> MvOutcome:
    """Cyclic-diagonal baseline: n_i rotations of the input, no fold.

    Expects the packed input (x repeated n/n_i times); output row i sits in
    slot i directly.
    """
    lin = CostMeter(meter.cost_model)
    group = he_decperm(ct_xpack, lin) if task.n_i > 1 else None
    acc = None
    for k, d_k in enumerate(_encode_cyclic_diagonals(task)):
        x_rot = ct_xpack if k == 0 else he_hstperm(group, k, lin)
        acc = _acc(acc, he_scmult(x_rot, d_k, lin), lin)
    meter.merge(lin)
    return _finish_single(
        task, "diagonal", acc, (1, 1), list(range(task.n_o)), lin, rng
    )


def mv_hybrid_gazelle(task: MvTask, ct_xpack: MockCiphertext, meter: CostMeter, rng=None) -> MvOutcome:
    """Diagonal groups + ciphertext-domain fold (the hybrid baseline).

    Rotates the packed input T-1 times (hoisted), multiplies against
    pre-rotated diagonal plaintexts, then folds span n_i -> T inside the HE
    domain before sharing.  Output rows live at the same scattered slots as
    the gala scheme; counts follow the input-rotation form exactly.
    """
    lin = CostMeter(meter.cost_model)
    plains = encode_gala_weights(task)
    group = he_decperm(ct_xpack, lin) if task.groups > 1 else None
    acc = None
    for t, p_t in enumerate(plains):
        x_rot = ct_xpack if t == 0 else he_hstperm(group, t, lin)
        acc = _acc(acc, he_scmult(x_rot, rotate_left(p_t, t), lin), lin)
    folded = _he_fold(acc, task.n_i, task.groups, lin)
    meter.merge(lin)
    return _finish_single(task, "gazelle", folded, (1, 1), task.slot_map(), lin, rng)


def mv_gala(task: MvTask, ct_xpack: MockCiphertext, meter: CostMeter, rng=None) -> MvOutcome:
    """Row-encoding with the fold deferred to the plaintext shares.

    Multiplies the packed input by T diagonal plaintexts, rotates the
    *products* (T-1 full rotations, no hoisted rotations at all), sums, and
    masks.  Server and client then apply the span n_i -> T fold to their
    plaintext shares; row c*T + o is read at slot c*n_i + o.
    """
    lin = CostMeter(meter.cost_model)
    acc = None
    for t, p_t in enumerate(encode_gala_weights(task)):
        acc = _acc(acc, he_perm(he_scmult(ct_xpack, p_t, lin), t, lin), lin)
    meter.merge(lin)
    return _finish_single(
        task, "gala", acc, task.fold_spec(), task.slot_map(), lin, rng
    )


MV_RUNNERS = {
    "naive": mv_naive,
    "diagonal": mv_diagonal,
    "gazelle": mv_hybrid_gazelle,
    "gala": mv_gala,
}


def run_mv(scheme: str, task: MvTask, x, meter: CostMeter, rng=None) -> MvOutcome:
    """Encrypt x under the layout `scheme` expects and run it."""
    if scheme not in MV_RUNNERS:
        raise ParameterError(f"unknown scheme {scheme!r}")
    layout = embed_input if scheme == "naive" else pack_input
    ct = encrypt(layout(x, task), task.params)
    return MV_RUNNERS[scheme](task, ct, meter, rng)
