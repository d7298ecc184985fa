"""Closed-form operation counts, noise predictions, and time estimates.

This is the analytic mirror of the executable schemes: for every scheme and
dimension the meter deltas of an actual run must equal count_mv/count_conv
exactly, and the operational output noise must equal predict_noise exactly
under the backend's recurrences.
"""
from __future__ import annotations

from dataclasses import dataclass

from .backend import CostMeter, CostModel, HEParams
from .errors import ParameterError
from .ring import is_power_of_two

MV_SCHEMES = ("naive", "diagonal", "gazelle", "gala")
CONV_SCHEMES = ("gazelle", "gala")


@dataclass(frozen=True)
class OpCounts:
    """Predicted operation counts for one scheme instance.

    view "split" counts full rotations (perm) apart from hoisted ones;
    view "paired" books each full rotation as a DecPerm + HstPerm pair.
    """

    perm: int = 0
    dec_perm: int = 0
    hst_perm: int = 0
    sc_mult: int = 0
    add: int = 0
    view: str = "split"

    def paired(self) -> "OpCounts":
        if self.view == "paired":
            return self
        return OpCounts(
            perm=0,
            dec_perm=self.dec_perm + self.perm,
            hst_perm=self.hst_perm + self.perm,
            sc_mult=self.sc_mult,
            add=self.add,
            view="paired",
        )

    def __add__(self, other: "OpCounts") -> "OpCounts":
        if self.view != other.view:
            raise ParameterError("cannot add counts under different views")
        return OpCounts(
            self.perm + other.perm,
            self.dec_perm + other.dec_perm,
            self.hst_perm + other.hst_perm,
            self.sc_mult + other.sc_mult,
            self.add + other.add,
            self.view,
        )

    @classmethod
    def from_meter(cls, meter: CostMeter, view: str = "split") -> "OpCounts":
        d = meter.as_dict(view)
        return cls(d["perm"], d["dec_perm"], d["hst_perm"], d["sc_mult"], d["add"], view)


def _check_mv_dims(n_i: int, n_o: int, n: int) -> None:
    for name, v in (("n_i", n_i), ("n_o", n_o), ("n", n)):
        if not is_power_of_two(v):
            raise ParameterError(f"{name} must be a power of two, got {v}")
    if not (n_o <= n_i <= n):
        raise ParameterError(f"need n_o <= n_i <= n, got {n_o}x{n_i} with n={n}")


def padded_output_dim(n_i: int, n_o: int, n: int) -> int:
    """Output rows after zero-padding small tasks up to one diagonal group.

    When n_i * n_o < n one packed plaintext already covers the whole matrix;
    rows are padded to n/n_i so the group count n_i*n_o/n clamps to exactly 1.
    """
    return max(n_o, n // n_i)


def diagonal_group_count(n_i: int, n_o: int, n: int) -> int:
    """Number of packed diagonal plaintexts (ScMults) for a dot product."""
    return n_i * padded_output_dim(n_i, n_o, n) // n


def count_mv(scheme: str, n_i: int, n_o: int, n: int) -> OpCounts:
    """Exact operation counts for one n_o x n_i dot product, n slots."""
    _check_mv_dims(n_i, n_o, n)
    if scheme == "naive":
        logni = n_i.bit_length() - 1
        return OpCounts(perm=n_o * logni, sc_mult=n_o, add=n_o * logni)
    if scheme == "diagonal":
        return OpCounts(
            dec_perm=1 if n_i > 1 else 0,
            hst_perm=n_i - 1,
            sc_mult=n_i,
            add=n_i - 1,
        )
    t = diagonal_group_count(n_i, n_o, n)
    if scheme == "gazelle":
        folds = (n // padded_output_dim(n_i, n_o, n)).bit_length() - 1
        return OpCounts(
            perm=folds,
            dec_perm=1 if t > 1 else 0,
            hst_perm=t - 1,
            sc_mult=t,
            add=folds + t - 1,
        )
    if scheme == "gala":
        return OpCounts(perm=t - 1, sc_mult=t, add=t - 1)
    raise ParameterError(f"unknown scheme {scheme!r}")


def _check_conv_dims(u_w, u_h, c_i, c_o, k_w, k_h, n) -> int:
    if k_w % 2 == 0 or k_h % 2 == 0:
        raise ParameterError(f"kernel dims must be odd, got {k_w}x{k_h}")
    b = u_w * u_h
    if b > n or n % b != 0 or not is_power_of_two(n // b):
        raise ParameterError(
            f"image of {b} pixels cannot pack a power-of-two channel count into {n} slots"
        )
    c_n = n // b
    for name, c in (("c_i", c_i), ("c_o", c_o)):
        if c % c_n != 0:
            raise ParameterError(f"{name}={c} must be a multiple of c_n={c_n}")
    return c_n


def count_conv(scheme: str, u_w, u_h, c_i, c_o, k_w, k_h, n) -> OpCounts:
    """Exact operation counts for one same-padded MIMO convolution."""
    c_n = _check_conv_dims(u_w, u_h, c_i, c_o, k_w, k_h, n)
    k = k_w * k_h
    if scheme == "gazelle":
        perm = (c_i * c_o // (c_n * c_n)) * (c_n - 1)
    elif scheme == "gala":
        perm = (c_o // c_n) * (c_n - 1)
    else:
        raise ParameterError(f"unknown scheme {scheme!r}")
    return OpCounts(
        perm=perm,
        dec_perm=(c_i // c_n) if k > 1 else 0,
        hst_perm=(c_i // c_n) * (k - 1),
        sc_mult=k * c_i * c_o // c_n,
        add=(c_o // c_n) * (c_i * k - 1),
    )


def predict_noise(kind: str, dims, params: HEParams) -> float:
    """Closed-form output noise of a scheme under the backend recurrences.

    kind "mv_naive" | "mv_gazelle" | "mv_gala" with dims (n_i, n_o), or
    "conv_gazelle" | "conv_gala" with dims (u_w, u_h, c_i, c_o, k_w, k_h).
    """
    e0, em, er = params.eta0, params.eta_mult, params.eta_rot
    if kind.startswith("mv_"):
        n_i, n_o = dims
        _check_mv_dims(n_i, n_o, params.n)
        if kind == "mv_naive":
            return n_i * e0 * em + (n_i - 1) * er
        n_o_pad = padded_output_dim(n_i, n_o, params.n)
        t = diagonal_group_count(n_i, n_o, params.n)
        if kind == "mv_gazelle":
            return n_i * e0 * em + (
                ((n_i * n_o_pad - params.n) / n_o_pad) * em
                + (params.n - n_o_pad) / n_o_pad
            ) * er
        if kind == "mv_gala":
            return t * e0 * em + (t - 1) * er
    elif kind.startswith("conv_"):
        u_w, u_h, c_i, c_o, k_w, k_h = dims
        c_n = _check_conv_dims(u_w, u_h, c_i, c_o, k_w, k_h, params.n)
        k = k_w * k_h
        eta_d = k * em * e0 + (k - 1) * er * em
        if kind == "conv_gazelle":
            return c_i * eta_d + (c_i // c_n) * (c_n - 1) * er
        if kind == "conv_gala":
            return c_i * eta_d + (c_n - 1) * er
    raise ParameterError(f"unknown noise kind {kind!r}")


def estimate_time(counts: OpCounts, model: CostModel | None = None) -> float:
    """Milliseconds under the cost model (weighted sum of event counts)."""
    m = model or CostModel()
    return (
        counts.perm * m.t_perm
        + counts.dec_perm * m.t_decperm
        + counts.hst_perm * m.t_hstperm
        + counts.sc_mult * m.t_scmult
        + counts.add * m.t_add
    )
