"""Plaintext ground-truth checks for the oracle itself."""
import numpy as np
import pytest

from gala.errors import DimensionError
from gala.oracle import conv2d_mod_p, dot_mod_p

P = 97


def test_dot_identity():
    w = np.eye(4, dtype=np.int64)
    x = np.array([5, 6, 7, 8])
    assert dot_mod_p(w, x, P).tolist() == [5, 6, 7, 8]


def test_dot_hand_arithmetic():
    assert dot_mod_p([[2, 3]], [5, 7], 97).tolist() == [31]


def test_dot_zero_matrix():
    assert dot_mod_p(np.zeros((3, 4), dtype=np.int64), [1, 2, 3, 4], P).tolist() == [0, 0, 0]


def test_dot_dim_mismatch():
    with pytest.raises(DimensionError):
        dot_mod_p([[1, 2]], [1, 2, 3], P)


def test_conv_delta_kernel_is_identity():
    rng = np.random.default_rng(0)
    img = rng.integers(0, P, (1, 4, 5))
    k = np.zeros((1, 1, 3, 3), dtype=np.int64)
    k[0, 0, 1, 1] = 1
    assert np.array_equal(conv2d_mod_p(img, k, P)[0], img[0])


def test_conv_corner_partial_sum():
    # top-left output of a 3x3 kernel over a 3x3 image touches exactly the
    # four taps whose source pixel exists: centre, east, south, south-east
    rng = np.random.default_rng(1)
    m = rng.integers(0, P, (3, 3))
    f = rng.integers(0, P, (3, 3))
    out = conv2d_mod_p(m[None], f[None, None], P)
    want = (m[0, 0] * f[1, 1] + m[0, 1] * f[1, 2] + m[1, 0] * f[2, 1] + m[1, 1] * f[2, 2]) % P
    assert out[0, 0, 0] == want


def test_conv_1x1_is_channel_mix():
    rng = np.random.default_rng(2)
    imgs = rng.integers(0, P, (3, 2, 2))
    k = rng.integers(0, P, (2, 3, 1, 1))
    out = conv2d_mod_p(imgs, k, P)
    want = np.einsum("oi,iyx->oyx", k[:, :, 0, 0], imgs) % P
    assert np.array_equal(out, want)


def test_conv_linearity():
    rng = np.random.default_rng(3)
    a = rng.integers(0, P, (2, 3, 3))
    b = rng.integers(0, P, (2, 3, 3))
    k = rng.integers(0, P, (2, 2, 3, 3))
    lhs = conv2d_mod_p((a + b) % P, k, P)
    rhs = (conv2d_mod_p(a, k, P) + conv2d_mod_p(b, k, P)) % P
    assert np.array_equal(lhs, rhs)


def test_conv_shape_errors():
    with pytest.raises(DimensionError):
        conv2d_mod_p(np.zeros((2, 3, 3)), np.zeros((1, 1, 3, 3)), P)
    with pytest.raises(DimensionError):
        conv2d_mod_p(np.zeros((1, 3, 3)), np.zeros((1, 1, 2, 3)), P)
