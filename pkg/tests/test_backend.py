"""Mock backend: payload semantics, noise recurrences, metering, config."""
import json

import numpy as np
import pytest

from gala.backend import (
    CostMeter,
    CostModel,
    HEParams,
    MockCiphertext,
    decrypt,
    encrypt,
    he_add,
    he_decperm,
    he_hstperm,
    he_perm,
    he_scmult,
    load_cost_config,
    subtract_plain,
    with_overrides,
)
from gala.errors import DimensionError, NoiseOverflowError, ParameterError
from gala.ring import SlotVector, pointwise, rotate_left

PARAMS = with_overrides(HEParams(), n=64)
P = PARAMS.p


def fresh(rng):
    return encrypt(SlotVector(rng.integers(0, P, PARAMS.n), P), PARAMS)


def test_encrypt_fresh_noise():
    ct = encrypt(SlotVector.zeros(PARAMS.n, P), PARAMS)
    assert ct.noise == PARAMS.eta0 == 8.0
    assert ct.noise < PARAMS.noise_budget
    assert decrypt(ct).tolist() == [0] * PARAMS.n


def test_encrypt_roundtrip_random():
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = SlotVector(rng.integers(0, P, PARAMS.n), P)
        assert decrypt(encrypt(x, PARAMS)) == x


def test_encrypt_length_mismatch():
    with pytest.raises(DimensionError):
        encrypt(SlotVector.zeros(32, P), PARAMS)


def test_decrypt_at_budget_fails():
    ct = MockCiphertext(SlotVector.zeros(64, P), PARAMS.noise_budget, PARAMS)
    with pytest.raises(NoiseOverflowError):
        decrypt(ct)


def test_chained_ras_overflow():
    # predict the failing iteration from the recurrence eta <- 2*eta + eta_rot,
    # then confirm the operational chain crosses at exactly that point
    tiny = HEParams(n=64, noise_budget=1e6)
    meter = CostMeter()
    eta = tiny.eta0
    crossing = None
    for k in range(1, 41):
        eta = 2 * eta + tiny.eta_rot
        if crossing is None and eta >= tiny.noise_budget:
            crossing = k
    assert crossing is not None

    ct = encrypt(SlotVector.zeros(64, tiny.p), tiny)
    for k in range(1, 41):
        ct = he_add(ct, he_perm(ct, 1, meter), meter)
        if k == crossing - 1:
            decrypt(ct)  # still fine one step before
    with pytest.raises(NoiseOverflowError):
        decrypt(ct)


def test_add_payload_and_noise():
    rng = np.random.default_rng(1)
    meter = CostMeter()
    a, b = fresh(rng), fresh(rng)
    c = he_add(a, b, meter)
    assert c.payload == pointwise(a.payload, b.payload, "add")
    assert c.noise == a.noise + b.noise
    assert meter.add == 1

    z = encrypt(SlotVector.zeros(PARAMS.n, P), PARAMS)
    c2 = he_add(a, z, meter)
    assert c2.payload == a.payload
    assert c2.noise == a.noise + PARAMS.eta0


def test_add_oracle_random():
    rng = np.random.default_rng(2)
    meter = CostMeter()
    for _ in range(100):
        a, b = fresh(rng), fresh(rng)
        got = he_add(a, b, meter).payload.slots
        assert np.array_equal(got, (a.payload.slots + b.payload.slots) % P)


def test_scmult():
    rng = np.random.default_rng(3)
    meter = CostMeter()
    a = fresh(rng)
    ones = SlotVector.constant(1, PARAMS.n, P)
    c = he_scmult(a, ones, meter)
    assert c.payload == a.payload
    assert c.noise == a.noise * PARAMS.eta_mult == PARAMS.eta0 * PARAMS.eta_mult
    assert meter.sc_mult == 1
    for _ in range(100):
        s = SlotVector(rng.integers(0, P, PARAMS.n), P)
        got = he_scmult(a, s, meter).payload
        assert got == pointwise(a.payload, s, "mul")


def test_perm():
    rng = np.random.default_rng(4)
    meter = CostMeter()
    a = fresh(rng)
    assert he_perm(a, 0, meter) is a
    assert meter.full_perm == 0 and a.noise == PARAMS.eta0

    c = he_perm(a, 5, meter)
    assert meter.full_perm == 1
    assert c.noise == PARAMS.eta0 + PARAMS.eta_rot
    assert c.payload == rotate_left(a.payload, 5)


def test_decperm_hstperm_amortization():
    rng = np.random.default_rng(5)
    meter = CostMeter()
    a = fresh(rng)
    g = he_decperm(a, meter)
    for k in (1, 2, 3):
        he_hstperm(g, k, meter)
    assert meter.dec_perm == 1 and meter.hst_perm == 3
    assert g.source.payload == a.payload  # group leaves the source untouched

    he_decperm(a, meter)
    assert meter.dec_perm == 2  # no implicit caching of groups


def test_hstperm_matches_perm():
    rng = np.random.default_rng(6)
    m1, m2 = CostMeter(), CostMeter()
    a = fresh(rng)
    g = he_decperm(a, m1)
    for k in (0, 1, 17, 63):
        via_group = he_hstperm(g, k, m1)
        via_perm = he_perm(a, k, m2)
        assert via_group.payload == via_perm.payload
        assert via_group.noise == via_perm.noise
    assert he_hstperm(g, 0, m1) is a


def test_homomorphism_random():
    rng = np.random.default_rng(7)
    meter = CostMeter()
    for _ in range(100):
        x = SlotVector(rng.integers(0, P, PARAMS.n), P)
        y = SlotVector(rng.integers(0, P, PARAMS.n), P)
        k = int(rng.integers(0, PARAMS.n))
        assert decrypt(he_add(encrypt(x, PARAMS), encrypt(y, PARAMS), meter)) == pointwise(x, y, "add")
        assert decrypt(he_scmult(encrypt(x, PARAMS), y, meter)) == pointwise(x, y, "mul")
        assert decrypt(he_perm(encrypt(x, PARAMS), k, meter)) == rotate_left(x, k)


def test_subtract_plain():
    rng = np.random.default_rng(8)
    meter = CostMeter()
    a = fresh(rng)
    r = SlotVector(rng.integers(0, P, PARAMS.n), P)
    c = subtract_plain(a, r, meter)
    assert np.array_equal(c.payload.slots, (a.payload.slots - r.slots) % P)
    assert c.noise == a.noise + PARAMS.eta0
    assert meter.add == 1


def test_params_mismatch_rejected():
    other = HEParams(n=64, p=65537)
    meter = CostMeter()
    a = encrypt(SlotVector.zeros(64, P), PARAMS)
    b = encrypt(SlotVector.zeros(64, 65537), other)
    with pytest.raises(DimensionError):
        he_add(a, b, meter)


def test_default_cost_ratios():
    # one rotation must cost 50-60 adds and 30-38 scalar multiplies
    m = CostModel()
    assert 50 <= m.t_perm / m.t_add <= 60
    assert 30 <= m.t_perm / m.t_scmult <= 38
    assert m.t_decperm + m.t_hstperm == pytest.approx(m.t_perm)


def test_meter_estimate_and_views():
    meter = CostMeter()
    meter.full_perm, meter.dec_perm, meter.hst_perm = 2, 1, 3
    meter.sc_mult, meter.add = 4, 5
    m = meter.cost_model
    want = 2 * m.t_perm + 1 * m.t_decperm + 3 * m.t_hstperm + 4 * m.t_scmult + 5 * m.t_add
    assert meter.estimated_ms() == pytest.approx(want)

    paired = meter.as_dict("paired")
    assert paired["perm"] == 0
    assert paired["dec_perm"] == 3 and paired["hst_perm"] == 5

    other = CostMeter()
    other.add = 10
    other.merge(meter)
    assert other.add == 15 and other.full_perm == 2


def test_param_validation():
    with pytest.raises(ParameterError):
        HEParams(n=100)  # not a power of two
    with pytest.raises(ParameterError):
        HEParams(p=1048575)  # composite
    with pytest.raises(ParameterError):
        HEParams(eta_rot=1.0)  # breaks eta_rot > eta_mult
    with pytest.raises(ParameterError):
        HEParams(noise_budget=1.0)
    assert HEParams().noise_budget == pytest.approx(2**59 / 1048573)


def test_load_cost_config(tmp_path):
    cfg = tmp_path / "cost.json"
    cfg.write_text(json.dumps({"t_perm": 0.2, "eta0": 4.0, "n": 1024}))
    params, model = load_cost_config(cfg)
    assert params.n == 1024 and params.eta0 == 4.0
    assert model.t_perm == 0.2 and model.t_add == CostModel().t_add

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"t_perm": 0.2, "bogus": 1}))
    with pytest.raises(ParameterError):
        load_cost_config(bad)
