#!/usr/bin/env python3
"""Tour of the mock packed-HE backend.

Shows the slot-vector payloads, the three noise recurrences, the cost meter,
and what happens when accumulated noise hits the decryption budget.
"""
import numpy as np

from gala import (
    CostMeter,
    HEParams,
    NoiseOverflowError,
    SlotVector,
    decrypt,
    encrypt,
    he_add,
    he_decperm,
    he_hstperm,
    he_perm,
    he_scmult,
)


def main():
    params = HEParams(n=8)
    print(f"parameters: n={params.n} slots, p={params.p}, "
          f"noise budget {params.noise_budget:.3g}")
    print(f"noise growth: fresh {params.eta0}, scmult x{params.eta_mult}, "
          f"rotation +{params.eta_rot}\n")

    meter = CostMeter()
    x = SlotVector(np.arange(8), params.p)
    ct = encrypt(x, params)
    print(f"encrypt {x.tolist()} -> noise {ct.noise}")

    rotated = he_perm(ct, 3, meter)
    print(f"rotate by 3      -> {decrypt(rotated).tolist()}  noise {rotated.noise}")

    weights = SlotVector([2] * 8, params.p)
    scaled = he_scmult(ct, weights, meter)
    print(f"scale by 2       -> {decrypt(scaled).tolist()}  noise {scaled.noise}")

    total = he_add(rotated, scaled, meter)
    print(f"add the two      -> {decrypt(total).tolist()}  noise {total.noise}")

    # repeated rotations of one ciphertext share a single decomposition
    group = he_decperm(ct, meter)
    for k in (1, 2, 4):
        he_hstperm(group, k, meter)
    print(f"\nmeter after the session: {meter}")
    print(f"estimated time: {meter.estimated_ms():.4f} ms\n")

    # drive the noise over a tiny budget with rotate-and-sum iterations
    tiny = HEParams(n=8, noise_budget=1e6)
    ct = encrypt(x, tiny)
    step = 0
    try:
        while True:
            ct = he_add(ct, he_perm(ct, 1, CostMeter()), CostMeter())
            step += 1
            decrypt(ct)
    except NoiseOverflowError as e:
        print(f"decryption failed after {step} fold iterations: {e}")


if __name__ == "__main__":
    main()
