"""Brute-force plaintext ground truth for the linear computations.

Direct-definition dot products and convolutions, deliberately kept free of
any packing, diagonal encoding, or rotation machinery so they can stand as
an independent check on the scheme implementations.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError


def dot_mod_p(w, x, p: int) -> np.ndarray:
    """Row-by-row weighted sum: out[i] = sum_j w[i][j] * x[j] mod p."""
    w = np.asarray(w, dtype=np.int64)
    x = np.asarray(x, dtype=np.int64)
    if w.ndim != 2 or x.ndim != 1 or w.shape[1] != x.size:
        raise DimensionError(f"shape mismatch: w {w.shape} vs x {x.shape}")
    out = np.empty(w.shape[0], dtype=np.int64)
    for i in range(w.shape[0]):
        out[i] = int(w[i] @ x) % p
    return out


def conv2d_mod_p(inputs, kernels, p: int) -> np.ndarray:
    """Same-padded stride-1 multi-channel convolution mod p.

    inputs:  (c_i, u_h, u_w) channel grids.
    kernels: (c_o, c_i, k_h, k_w) coefficient grids, k_h and k_w odd.
    Returns (c_o, u_h, u_w): out[o] = sum_i inputs[i] conv kernels[o][i],
    with out-of-image taps treated as zero.
    """
    inputs = np.asarray(inputs, dtype=np.int64)
    kernels = np.asarray(kernels, dtype=np.int64)
    if inputs.ndim != 3 or kernels.ndim != 4:
        raise DimensionError("inputs must be (c_i,u_h,u_w), kernels (c_o,c_i,k_h,k_w)")
    c_i, u_h, u_w = inputs.shape
    c_o, c_i_k, k_h, k_w = kernels.shape
    if c_i_k != c_i:
        raise DimensionError(f"kernel channel count {c_i_k} != input channels {c_i}")
    if k_h % 2 == 0 or k_w % 2 == 0:
        raise DimensionError("kernel dims must be odd")
    ch, cw = k_h // 2, k_w // 2
    padded = np.zeros((c_i, u_h + 2 * ch, u_w + 2 * cw), dtype=np.int64)
    padded[:, ch : ch + u_h, cw : cw + u_w] = inputs % p
    out = np.zeros((c_o, u_h, u_w), dtype=np.int64)
    for dy in range(k_h):
        for dx in range(k_w):
            window = padded[:, dy : dy + u_h, dx : dx + u_w]
            out += np.einsum("oi,iyx->oyx", kernels[:, :, dy, dx] % p, window)
            out %= p
    return out
