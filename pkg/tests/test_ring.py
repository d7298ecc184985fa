"""Slot-vector arithmetic: rotations, pointwise ops, rotate-and-sum folds."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gala.errors import DimensionError, ParameterError
from gala.ring import SlotVector, fold_ras, pointwise, read_slots, rotate_left

P = 1048573


def vec(values, p=P):
    return SlotVector(values, p)


def test_rotate_identity():
    v = vec([1, 2, 3, 4])
    assert rotate_left(v, 0) is v
    assert rotate_left(v, 4) is v  # full turn is the identity too


def test_rotate_single_step():
    assert rotate_left(vec([1, 2, 3, 4]), 1).tolist() == [2, 3, 4, 1]


def test_rotate_definition():
    v = vec([10, 20, 30, 40, 50, 60, 70, 80])
    for k in range(8):
        got = rotate_left(v, k)
        assert got.tolist() == [v.slots[(j + k) % 8] for j in range(8)]


@given(st.integers(0, 63), st.integers(0, 1000))
def test_rotate_inverse(seed, k):
    rng = np.random.default_rng(seed)
    v = vec(rng.integers(0, P, 64))
    assert rotate_left(rotate_left(v, k), (64 - k) % 64) == v


@given(st.integers(0, 63), st.integers(0, 200), st.integers(0, 200))
def test_rotate_composition(seed, a, b):
    rng = np.random.default_rng(seed)
    v = vec(rng.integers(0, P, 32))
    lhs = rotate_left(rotate_left(v, a), b)
    assert lhs == rotate_left(v, (a + b) % 32)


def test_pointwise_identities():
    rng = np.random.default_rng(7)
    v = vec(rng.integers(0, P, 16))
    assert pointwise(v, SlotVector.zeros(16, P), "add") == v
    assert pointwise(v, SlotVector.constant(1, 16, P), "mul") == v


def test_pointwise_hand_modular():
    a = vec([6, 2], p=7)
    b = vec([2, 3], p=7)
    assert pointwise(a, b, "add").tolist() == [1, 5]


def test_pointwise_errors():
    v, w = vec([1, 2]), vec([1, 2, 3, 4])
    with pytest.raises(DimensionError):
        pointwise(v, w, "add")
    with pytest.raises(DimensionError):
        pointwise(vec([1, 2], p=7), vec([1, 2], p=11), "mul")
    with pytest.raises(ParameterError):
        pointwise(v, v, "sub")


@given(st.integers(0, 500))
def test_pointwise_commutative_associative(seed):
    rng = np.random.default_rng(seed)
    a, b, c = (vec(rng.integers(0, P, 16)) for _ in range(3))
    for op in ("add", "mul"):
        assert pointwise(a, b, op) == pointwise(b, a, op)
        assert pointwise(pointwise(a, b, op), c, op) == pointwise(a, pointwise(b, c, op), op)


def test_fold_zero_iterations():
    v = vec([5, 6, 7, 8])
    assert fold_ras(v, 4, 4) is v


def test_fold_full_sum():
    assert fold_ras(vec([1, 2, 3, 4]), 4, 1).slots[0] == 10


def test_fold_pairwise():
    got = fold_ras(vec([1, 2, 3, 4]), 4, 2)
    assert got.tolist()[:2] == [4, 6]


def test_fold_errors():
    v = vec([1, 2, 3, 4])
    with pytest.raises(ParameterError):
        fold_ras(v, 3, 1)
    with pytest.raises(ParameterError):
        fold_ras(v, 4, 3)
    with pytest.raises(ParameterError):
        fold_ras(v, 8, 1)  # start beyond the vector
    with pytest.raises(ParameterError):
        fold_ras(v, 2, 4)  # end must divide start


@given(st.integers(0, 300), st.sampled_from([(16, 1), (16, 4), (8, 2), (4, 4), (16, 16)]))
@settings(max_examples=60)
def test_fold_matches_bruteforce(seed, spans):
    # with v zero outside [0, start) the folded slot j < end is the strided
    # block sum
    start, end = spans
    rng = np.random.default_rng(seed)
    data = np.zeros(16, dtype=np.int64)
    data[:start] = rng.integers(0, P, start)
    folded = fold_ras(vec(data), start, end)
    for j in range(end):
        want = sum(int(data[j + k * end]) for k in range(start // end)) % P
        assert folded.slots[j] == want


def test_slotvector_validation():
    with pytest.raises(DimensionError):
        SlotVector([1, 2, 3], P)  # not a power of two
    with pytest.raises(ParameterError):
        SlotVector([1, 2], 1)
    v = SlotVector([-1, 5], 7)
    assert v.tolist() == [6, 5]  # inputs reduced into [0, p)


def test_slots_are_readonly():
    v = vec([1, 2, 3, 4])
    with pytest.raises(ValueError):
        v.slots[0] = 9


def test_read_slots():
    v = vec([10, 20, 30, 40])
    assert read_slots(v, [3, 1]).tolist() == [40, 20]
    with pytest.raises(DimensionError):
        read_slots(v, [4])
