"""Homomorphic convolution over packed channel ciphertexts.

Images are packed row-major, c_n = n / (u_w * u_h) channels per ciphertext.
A 2D convolution becomes a sum of masked raster rotations of the input; the
masks carry the kernel coefficient at every in-image pixel and zero wherever
the rotation would drag in a neighbouring row, channel band, or wrapped
slot.  For multiple channels the kernel block is traversed along c_n cyclic
diagonals whose partial results are aligned with whole-band rotations.

The two MIMO schemes produce identical payloads and differ only in when
those alignment rotations happen: output_rotation rotates every input-block
partial result (c_i*c_o/c_n^2 groups of c_n-1 rotations), kernel_grouping
adds partial results across input blocks first and rotates once per output
block (c_o/c_n groups), cutting full rotations by a factor of c_i/c_n.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import (
    CostMeter,
    HEParams,
    MockCiphertext,
    encrypt,
    he_add,
    he_decperm,
    he_hstperm,
    he_perm,
    he_scmult,
)
from .errors import DimensionError, ParameterError
from .ring import SlotVector, is_power_of_two


@dataclass
class ConvTask:
    """One convolution instance: u_w x u_h images, c_i in / c_o out channels.

    kernels has shape (c_o, c_i, k_h, k_w) with odd kernel dims.  Stride is
    1 and the output keeps the input size (zero padding at the borders).
    """

    u_w: int
    u_h: int
    c_i: int
    k_w: int
    k_h: int
    c_o: int
    kernels: np.ndarray
    params: HEParams

    def __post_init__(self):
        if self.k_w % 2 == 0 or self.k_h % 2 == 0:
            raise ParameterError(f"kernel dims must be odd, got {self.k_w}x{self.k_h}")
        if min(self.u_w, self.u_h, self.c_i, self.c_o) < 1:
            raise ParameterError("dimensions must be positive")
        if self.image_slots > self.params.n:
            raise ParameterError(
                f"image needs {self.image_slots} slots, ciphertext has {self.params.n}"
            )
        k = np.asarray(self.kernels, dtype=np.int64)
        want = (self.c_o, self.c_i, self.k_h, self.k_w)
        if k.shape != want:
            raise DimensionError(f"kernels have shape {k.shape}, expected {want}")
        self.kernels = k % self.params.p

    @property
    def image_slots(self) -> int:
        return self.u_w * self.u_h

    @property
    def channels_per_ct(self) -> int:
        """c_n, the channel count packed per ciphertext (MIMO packing)."""
        b = self.image_slots
        if self.params.n % b != 0 or not is_power_of_two(self.params.n // b):
            raise ParameterError(
                f"{self.u_w}x{self.u_h} images do not pack a power-of-two "
                f"channel count into {self.params.n} slots"
            )
        return self.params.n // b

    def offsets(self) -> list[tuple[int, int, int]]:
        """(dw, dh, rotation) per kernel tap, raster order, center at 0."""
        ch, cw = self.k_h // 2, self.k_w // 2
        out = []
        for dh in range(-ch, ch + 1):
            for dw in range(-cw, cw + 1):
                out.append((dw, dh, (dh * self.u_w + dw) % self.params.n))
        return out


@dataclass(frozen=True)
class OffsetMask:
    """Masked coefficient vector for one kernel tap.

    mask holds the tap's coefficient at every valid pixel position of every
    packed channel and zero where the source pixel would fall outside the
    image (which also neutralizes rotations across channel-band edges).
    """

    offset: tuple[int, int]
    rotation: int
    mask: SlotVector


def _valid_positions(u_w: int, u_h: int, dw: int, dh: int) -> np.ndarray:
    # 0/1 board over one image band: 1 where (x+dw, y+dh) stays in-image.
    y, x = np.mgrid[0:u_h, 0:u_w]
    ok = (x + dw >= 0) & (x + dw < u_w) & (y + dh >= 0) & (y + dh < u_h)
    return ok.astype(np.int64).ravel()


def _band_fill(board: np.ndarray, n: int) -> np.ndarray:
    # Tile one image band across every complete band of the ciphertext.
    b = board.size
    out = np.zeros(n, dtype=np.int64)
    reps = n // b
    out[: reps * b] = np.tile(board, reps)
    return out


def build_offset_masks(task: ConvTask, kernel2d) -> list[OffsetMask]:
    """One masked coefficient vector per tap of a single 2D kernel."""
    k2 = np.asarray(kernel2d, dtype=np.int64) % task.params.p
    if k2.shape != (task.k_h, task.k_w):
        raise DimensionError(f"kernel has shape {k2.shape}, expected {(task.k_h, task.k_w)}")
    ch, cw = task.k_h // 2, task.k_w // 2
    out = []
    for dw, dh, rot in task.offsets():
        coef = int(k2[dh + ch, dw + cw])
        board = coef * _valid_positions(task.u_w, task.u_h, dw, dh)
        vec = SlotVector._wrap(_band_fill(board, task.params.n), task.params.p)
        out.append(OffsetMask(offset=(dw, dh), rotation=rot, mask=vec))
    return out


def encode_channel_blocks(task: ConvTask, channels) -> list[SlotVector]:
    """Pack (c_i, u_h, u_w) channel grids into c_i/c_n plaintext vectors."""
    c_n = task.channels_per_ct
    data = np.asarray(channels, dtype=np.int64) % task.params.p
    if data.shape != (task.c_i, task.u_h, task.u_w):
        raise DimensionError(
            f"channels have shape {data.shape}, expected {(task.c_i, task.u_h, task.u_w)}"
        )
    if task.c_i % c_n != 0:
        raise ParameterError(f"c_i={task.c_i} must be a multiple of c_n={c_n}")
    flat = data.reshape(task.c_i, -1)
    return [
        SlotVector._wrap(flat[b : b + c_n].ravel(), task.params.p)
        for b in range(0, task.c_i, c_n)
    ]


def encrypt_inputs(task: ConvTask, channels) -> list[MockCiphertext]:
    return [encrypt(v, task.params) for v in encode_channel_blocks(task, channels)]


def unpack_channels(vec: SlotVector, task: ConvTask) -> np.ndarray:
    """Inverse of the packing: one ciphertext payload -> (c_n, u_h, u_w)."""
    c_n = task.channels_per_ct
    return vec.slots.reshape(c_n, task.u_h, task.u_w)


def siso_conv(task: ConvTask, ct_x: MockCiphertext, meter: CostMeter) -> MockCiphertext:
    """Single-channel convolution: sum of masked raster rotations.

    Expects the image row-major in slots [0, u_w*u_h) and zeros elsewhere.
    Uses one DecPerm plus k_w*k_h - 1 hoisted rotations of the input.
    """
    if task.c_i != 1 or task.c_o != 1:
        raise ParameterError("siso_conv requires c_i == c_o == 1")
    masks = build_offset_masks(task, task.kernels[0, 0])
    group = he_decperm(ct_x, meter) if len(masks) > 1 else None
    acc = None
    for m in masks:
        x_rot = ct_x if m.rotation == 0 else he_hstperm(group, m.rotation, meter)
        term = he_scmult(x_rot, m.mask, meter)
        acc = term if acc is None else he_add(acc, term, meter)
    return acc


def _check_mimo(task: ConvTask, cts) -> tuple[int, int, int]:
    c_n = task.channels_per_ct
    if task.c_i % c_n != 0 or task.c_o % c_n != 0:
        raise ParameterError(
            f"c_i={task.c_i} and c_o={task.c_o} must be multiples of c_n={c_n}"
        )
    n_ib = task.c_i // c_n
    if len(cts) != n_ib:
        raise DimensionError(f"expected {n_ib} input ciphertexts, got {len(cts)}")
    return c_n, n_ib, task.c_o // c_n


def _input_rotations(task: ConvTask, ct: MockCiphertext, meter: CostMeter):
    # All raster rotations of one input ciphertext under a common DecPerm,
    # reused across every output block and diagonal.
    amounts = sorted({rot for _, _, rot in task.offsets()})
    if amounts == [0]:
        return {0: ct}
    group = he_decperm(ct, meter)
    return {a: he_hstperm(group, a, meter) for a in amounts}


class _DiagonalPlan:
    """Precomputed masks and kernel gathers for the MIMO diagonal traversal."""

    def __init__(self, task: ConvTask, c_n: int):
        self.task = task
        self.c_n = c_n
        self.offsets = task.offsets()
        self.valid = [
            _band_fill(_valid_positions(task.u_w, task.u_h, dw, dh), task.params.n)
            for dw, dh, _ in self.offsets
        ]
        self.ch = np.arange(c_n)
        self.kh_c, self.kw_c = task.k_h // 2, task.k_w // 2

    def coef_vectors(self, ob: int, ib: int, diag: int):
        """Masked coefficient vector per tap for sub-block (ob, ib), diagonal diag.

        Band ch of the vector carries kernels[ob*c_n + (ch-diag) mod c_n]
        [ib*c_n + ch] at the tap's coefficient position.
        """
        out_rows = ob * self.c_n + (self.ch - diag) % self.c_n
        in_rows = ib * self.c_n + self.ch
        kblock = self.task.kernels[out_rows, in_rows]  # (c_n, k_h, k_w)
        p = self.task.params.p
        vecs = []
        for (dw, dh, rot), valid in zip(self.offsets, self.valid):
            coefs = kblock[:, dh + self.kh_c, dw + self.kw_c]
            flat = (coefs[:, None] * valid.reshape(self.c_n, -1)).ravel()
            vecs.append((rot, SlotVector._wrap(flat, p)))
        return vecs


def _diag_conv(plan, rots, coef_vecs, meter):
    # SISO-like convolution of one rotated-input set against one diagonal.
    acc = None
    for rot, vec in coef_vecs:
        term = he_scmult(rots[rot], vec, meter)
        acc = term if acc is None else he_add(acc, term, meter)
    return acc


def mimo_output_rotation(task: ConvTask, cts, meter: CostMeter) -> list[MockCiphertext]:
    """Output-rotation MIMO baseline: rotate every sub-block's diagonals.

    Each c_n x c_n kernel sub-block (ob, ib) is convolved along its c_n
    diagonals, each diagonal result rotated into kernel order (c_n - 1 full
    rotations per sub-block), then summed across input blocks.
    """
    c_n, n_ib, n_ob = _check_mimo(task, cts)
    b = task.image_slots
    plan = _DiagonalPlan(task, c_n)
    out: list[MockCiphertext | None] = [None] * n_ob
    for ib in range(n_ib):
        rots = _input_rotations(task, cts[ib], meter)
        for ob in range(n_ob):
            for diag in range(c_n):
                v = _diag_conv(plan, rots, plan.coef_vectors(ob, ib, diag), meter)
                v = he_perm(v, diag * b, meter)
                out[ob] = v if out[ob] is None else he_add(out[ob], v, meter)
    return out


def mimo_kernel_grouping(task: ConvTask, cts, meter: CostMeter) -> list[MockCiphertext]:
    """First-add-second-rotate MIMO: group sub-blocks that share kernels.

    Diagonal results are summed across all c_i/c_n input blocks before any
    alignment rotation, so only c_n - 1 full rotations remain per output
    block.  Payloads are identical to mimo_output_rotation.
    """
    c_n, n_ib, n_ob = _check_mimo(task, cts)
    b = task.image_slots
    plan = _DiagonalPlan(task, c_n)
    acc: list[list[MockCiphertext | None]] = [[None] * c_n for _ in range(n_ob)]
    for ib in range(n_ib):
        rots = _input_rotations(task, cts[ib], meter)
        for ob in range(n_ob):
            for diag in range(c_n):
                v = _diag_conv(plan, rots, plan.coef_vectors(ob, ib, diag), meter)
                prev = acc[ob][diag]
                acc[ob][diag] = v if prev is None else he_add(prev, v, meter)
    out = []
    for ob in range(n_ob):
        res = None
        for diag in range(c_n):
            v = he_perm(acc[ob][diag], diag * b, meter)
            res = v if res is None else he_add(res, v, meter)
        out.append(res)
    return out
