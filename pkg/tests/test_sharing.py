"""Additive shares and the deferred plaintext fold."""
import numpy as np
from scipy.stats import chisquare

from gala.backend import CostMeter, HEParams, encrypt, with_overrides
from gala.matvec import MvTask, run_mv
from gala.oracle import dot_mod_p
from gala.ring import SlotVector, fold_ras, negate, pointwise
from gala.sharing import SharePair, finalize_shares, gen_additive_share

PARAMS = HEParams()
P = PARAMS.p


def fresh_ct(seed=0, n=PARAMS.n, params=PARAMS):
    rng = np.random.default_rng(seed)
    return encrypt(SlotVector(rng.integers(0, P, n), P), params)


def test_reconstruction():
    ct = fresh_ct(1)
    meter = CostMeter()
    r, masked = gen_additive_share(ct, np.random.default_rng(2), meter)
    back = pointwise(masked.payload, r, "add")
    assert back == ct.payload
    assert meter.add == 1
    assert masked.noise == ct.noise + PARAMS.eta0


def test_mask_deterministic_under_seed():
    ct = fresh_ct(3)
    r1, _ = gen_additive_share(ct, 42, CostMeter())
    r2, _ = gen_additive_share(ct, 42, CostMeter())
    assert r1 == r2


def test_masked_payload_uniformity():
    # 1e4 slots, 16 coarse buckets over [0, p)
    params = with_overrides(HEParams(), n=8192)
    rng = np.random.default_rng(0)
    payload = SlotVector(rng.integers(0, P // 7, 8192), P)  # skewed secret
    ct = encrypt(payload, params)
    slots = []
    for seed in (10, 11):
        _, masked = gen_additive_share(ct, seed, CostMeter())
        slots.extend(masked.payload.tolist())
    buckets = np.bincount((np.array(slots[:10000]) * 16) // P, minlength=16)
    assert chisquare(buckets).pvalue > 0.01


def test_finalize_identity_fold():
    v = SlotVector(np.arange(16), P)
    r = SlotVector(np.arange(16) * 3, P)
    pair = finalize_shares(v, r, (1, 1), [0, 2, 5, 7])
    assert pair.client_share.tolist() == [0, 2, 5, 7]
    assert pair.server_share.tolist() == [0, 6, 15, 21]


def test_zero_secret_shares_negate():
    rng = np.random.default_rng(5)
    r = SlotVector(rng.integers(0, P, 16), P)
    masked = negate(r)  # secret m = 0, so m - r = -r
    pair = finalize_shares(masked, r, (16, 1), [0])
    assert pair.reconstruct().tolist() == [0]
    assert pair.server_share.slots[0] == (P - pair.client_share.slots[0]) % P


def test_fold_linearity():
    rng = np.random.default_rng(6)
    for _ in range(50):
        m = SlotVector(rng.integers(0, P, 32), P)
        r = SlotVector(rng.integers(0, P, 32), P)
        masked = pointwise(m, negate(r), "add")
        lhs = pointwise(fold_ras(masked, 8, 2), fold_ras(r, 8, 2), "add")
        assert lhs == fold_ras(m, 8, 2)


def test_gala_shares_match_oracle():
    rng = np.random.default_rng(7)
    w = rng.integers(0, P, (16, 128), dtype=np.int64)
    x = rng.integers(0, P, 128, dtype=np.int64)
    task = MvTask(128, 16, w, PARAMS)
    out = run_mv("gala", task, x, CostMeter(), rng=8)
    got = (out.server_share.slots + out.client_share.slots) % P
    assert np.array_equal(got, dot_mod_p(w, x, P))


def test_gala_reconstructs_what_gazelle_outputs():
    # deferring the fold to plaintext shares must reproduce the HE-domain
    # folded slots exactly
    rng = np.random.default_rng(9)
    w = rng.integers(0, P, (8, 256), dtype=np.int64)
    x = rng.integers(0, P, 256, dtype=np.int64)
    task = MvTask(256, 8, w, PARAMS)
    gaz = run_mv("gazelle", task, x, CostMeter(), rng=1)
    gal = run_mv("gala", task, x, CostMeter(), rng=2)
    assert gaz.slot_map == gal.slot_map
    gaz_slots = gaz.output_cipher.payload.slots[gaz.slot_map]
    gal_sum = (gal.server_share.slots + gal.client_share.slots) % P
    assert np.array_equal(gal_sum, gaz_slots)


def test_share_pair_modulus():
    pair = SharePair(SlotVector([1, 2], 7), SlotVector([3, 4], 7))
    assert pair.modulus == 7
    assert pair.reconstruct().tolist() == [4, 6]
