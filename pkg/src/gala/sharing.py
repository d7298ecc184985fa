"""Additive secret sharing of linear-layer outputs.

A secret m is split as <m>_server = r and <m>_client = m - r with r uniform
over Z_p^n.  Because the rotate-and-sum fold is linear, both parties may
apply the *same* plaintext fold to their shares after the split; the folded
shares still reconstruct the folded secret.  That deferral is what lets the
dot-product scheme skip its ciphertext-domain fold entirely.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import CostMeter, MockCiphertext, subtract_plain
from .ring import SlotVector, fold_ras, pointwise, read_slots


@dataclass(frozen=True)
class SharePair:
    """Two additive shares over Z_p; slotwise sum reconstructs the secret."""

    server_share: SlotVector
    client_share: SlotVector

    @property
    def modulus(self) -> int:
        return self.server_share.modulus

    def reconstruct(self) -> SlotVector:
        return pointwise(self.server_share, self.client_share, "add")


def gen_additive_share(
    ct: MockCiphertext, rng, meter: CostMeter
) -> tuple[SlotVector, MockCiphertext]:
    """Draw a uniform mask r and return (r, ct - r).

    The server keeps r; the masked ciphertext goes to the client.  The
    subtraction is booked on `meter` as one Add-class event.
    """
    rng = np.random.default_rng(rng)
    p = ct.params.p
    r = SlotVector._wrap(rng.integers(0, p, ct.params.n, dtype=np.int64), p)
    return r, subtract_plain(ct, r, meter)


def finalize_shares(
    masked_plain: SlotVector,
    r: SlotVector,
    fold_spec: tuple[int, int],
    slot_map,
) -> SharePair:
    """Apply the deferred plaintext fold to both shares and read the outputs.

    fold_spec is the (start_span, end_span) pair published by the producing
    scheme; slot_map lists the slot holding each output row after folding.
    With start == end the fold is the identity and shares are direct reads.
    """
    start, end = fold_spec
    client = read_slots(fold_ras(masked_plain, start, end), slot_map)
    server = read_slots(fold_ras(r, start, end), slot_map)
    return SharePair(server_share=server, client_share=client)
