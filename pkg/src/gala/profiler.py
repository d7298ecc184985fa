"""Network-level cost profiling.

Parses a plain-text layer list, models (or actually runs) every linear
layer under both the output-rotation/hybrid baseline and the grouped
schemes, and reports per-layer and accumulated costs.  Nonlinear layers are
carried as zero-cost placeholders so layer indices match the interleaved
linear/nonlinear structure of the source networks.

File format, one layer per line, '#' starts a comment:

    conv <u_w> <u_h> <c_i> <k_w> <k_h> <c_o>
    fc <n_i> <n_o>
    nonlinear <label>

Dimensions may be arbitrary positive integers; profiling pads them to the
nearest valid packed shape (powers of two for fc, channel multiples of c_n
for conv) and splits fc layers wider than one ciphertext into column blocks.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .analytics import OpCounts, count_conv, count_mv, estimate_time
from .backend import CostModel, HEParams
from .conv import ConvTask, encrypt_inputs, mimo_kernel_grouping, mimo_output_rotation, unpack_channels
from .errors import NetworkParseError, ParameterError
from .matvec import MvTask, column_blocks, run_mv
from .oracle import conv2d_mod_p, dot_mod_p
from .ring import is_power_of_two

BASELINE = "gazelle"
GROUPED = "gala"
SCHEMES = (BASELINE, GROUPED)


@dataclass(frozen=True)
class LayerSpec:
    """One network layer; dims are None for kinds that do not use them."""

    kind: str  # "conv" | "fc" | "nonlinear"
    u_w: int | None = None
    u_h: int | None = None
    c_i: int | None = None
    k_w: int | None = None
    k_h: int | None = None
    c_o: int | None = None
    n_i: int | None = None
    n_o: int | None = None
    label: str = ""

    @property
    def is_linear(self) -> bool:
        return self.kind in ("conv", "fc")


def parse_network(text: str) -> list[LayerSpec]:
    """Parse the layer-list format; raises NetworkParseError with line number."""
    specs = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        try:
            if kind == "conv":
                if len(args) != 6:
                    raise ValueError(f"conv takes 6 fields, got {len(args)}")
                u_w, u_h, c_i, k_w, k_h, c_o = map(int, args)
                specs.append(LayerSpec("conv", u_w=u_w, u_h=u_h, c_i=c_i,
                                       k_w=k_w, k_h=k_h, c_o=c_o))
            elif kind == "fc":
                if len(args) != 2:
                    raise ValueError(f"fc takes 2 fields, got {len(args)}")
                n_i, n_o = map(int, args)
                specs.append(LayerSpec("fc", n_i=n_i, n_o=n_o))
            elif kind == "nonlinear":
                specs.append(LayerSpec("nonlinear", label=" ".join(args)))
            else:
                raise ValueError(f"unknown layer kind {kind!r}")
        except ValueError as e:
            raise NetworkParseError(line_no, str(e)) from None
    return specs


def load_network(name_or_path) -> list[LayerSpec]:
    """Read a network file from disk, falling back to the shipped configs."""
    import os

    if os.path.exists(name_or_path):
        with open(name_or_path) as f:
            return parse_network(f.read())
    ref = resources.files("gala").joinpath("networks", str(name_or_path))
    if ref.is_file():
        return parse_network(ref.read_text())
    raise FileNotFoundError(f"network file {name_or_path!r} not found")


def shipped_networks() -> list[str]:
    ref = resources.files("gala").joinpath("networks")
    return sorted(f.name for f in ref.iterdir() if f.name.endswith(".net"))


def _next_pow2(x: int) -> int:
    return 1 if x <= 1 else 1 << (x - 1).bit_length()


def _round_up(x: int, m: int) -> int:
    return ((x + m - 1) // m) * m


def _fc_padded(spec: LayerSpec, n: int) -> tuple[int, int]:
    """(n_i, n_o) after power-of-two padding, with n_i raised to >= n_o."""
    n_o = _next_pow2(spec.n_o)
    if n_o > n:
        raise ParameterError(f"fc output {spec.n_o} exceeds the slot count {n}")
    return max(_next_pow2(spec.n_i), n_o), n_o


def _fc_blocks(spec: LayerSpec, n: int) -> list[tuple[int, int]]:
    """Padded (n_i, n_o) per column block; wide layers split into n-column blocks."""
    n_i, n_o = _fc_padded(spec, n)
    if n_i <= n:
        return [(n_i, n_o)]
    return [(n, n_o)] * (n_i // n)


def _conv_padded(spec: LayerSpec, n: int) -> tuple[int, int, int]:
    b = spec.u_w * spec.u_h
    if b > n or n % b != 0 or not is_power_of_two(n // b):
        raise ParameterError(
            f"{spec.u_w}x{spec.u_h} images do not pack into {n} slots"
        )
    c_n = n // b
    return _round_up(spec.c_i, c_n), _round_up(spec.c_o, c_n), c_n


@dataclass
class LayerProfile:
    index: int
    kind: str
    label: str
    counts: dict[str, OpCounts]
    verified: bool = False


@dataclass
class ProfileReport:
    """Per-layer counts for both schemes plus cost-model time estimates."""

    layers: list[LayerProfile]
    params: HEParams
    cost_model: CostModel
    mode: str

    def totals(self) -> dict[str, OpCounts]:
        out = {s: OpCounts() for s in SCHEMES}
        for layer in self.layers:
            for s in SCHEMES:
                out[s] = out[s] + layer.counts[s]
        return out

    def total_ms(self) -> dict[str, float]:
        return {s: estimate_time(c, self.cost_model) for s, c in self.totals().items()}

    def perm_reduction(self) -> float:
        """Ratio of total full rotations, baseline over grouped."""
        t = self.totals()
        if t[GROUPED].perm == 0:
            return float("inf") if t[BASELINE].perm else 1.0
        return t[BASELINE].perm / t[GROUPED].perm

    def total_speedup(self) -> float:
        ms = self.total_ms()
        return ms[BASELINE] / ms[GROUPED] if ms[GROUPED] else 1.0

    def rows(self) -> list[dict]:
        """Flat report rows: one per layer per scheme, with running totals."""
        cum = {s: 0.0 for s in SCHEMES}
        rows = []
        for layer in self.layers:
            ms = {
                s: estimate_time(layer.counts[s], self.cost_model) for s in SCHEMES
            }
            speedup = ms[BASELINE] / ms[GROUPED] if ms[GROUPED] else 1.0
            for s in SCHEMES:
                cum[s] += ms[s]
                c = layer.counts[s]
                rows.append({
                    "layer_index": layer.index,
                    "kind": layer.kind,
                    "scheme": s,
                    "dec_perm": c.dec_perm,
                    "hst_perm": c.hst_perm,
                    "perm": c.perm,
                    "sc_mult": c.sc_mult,
                    "add": c.add,
                    "est_ms": round(ms[s], 6),
                    "cum_ms": round(cum[s], 6),
                    "speedup": round(speedup, 4),
                })
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        rows = self.rows()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [
            "layer_index", "kind", "scheme", "dec_perm", "hst_perm", "perm",
            "sc_mult", "add", "est_ms", "cum_ms", "speedup"])
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()


def _analytic_counts(spec: LayerSpec, params: HEParams) -> dict[str, OpCounts]:
    if spec.kind == "nonlinear":
        return {s: OpCounts() for s in SCHEMES}
    if spec.kind == "fc":
        out = {s: OpCounts() for s in SCHEMES}
        for n_i, n_o in _fc_blocks(spec, params.n):
            for s in SCHEMES:
                out[s] = out[s] + count_mv(s, n_i, n_o, params.n)
        return out
    c_i, c_o, _ = _conv_padded(spec, params.n)
    return {
        s: count_conv(s, spec.u_w, spec.u_h, c_i, c_o, spec.k_w, spec.k_h, params.n)
        for s in SCHEMES
    }


def _executed_fc(spec: LayerSpec, params: HEParams, model, rng):
    from .backend import CostMeter

    n_i, n_o = _fc_padded(spec, params.n)
    p = params.p
    w = rng.integers(0, p, (n_o, n_i), dtype=np.int64)
    x = rng.integers(0, p, n_i, dtype=np.int64)
    want = dot_mod_p(w, x, p)
    counts = {}
    for scheme_name, runner in ((BASELINE, "gazelle"), (GROUPED, "gala")):
        meter = CostMeter(model)
        got = np.zeros(n_o, dtype=np.int64)
        for wb, xb in column_blocks(w, x, params.n):
            task = MvTask(wb.shape[1], n_o, wb, params)
            outcome = run_mv(runner, task, xb, meter, rng=int(rng.integers(2**31)))
            got = (got + outcome.server_share.slots + outcome.client_share.slots) % p
        if not np.array_equal(got, want):
            raise AssertionError(f"fc layer payload mismatch under {scheme_name}")
        counts[scheme_name] = OpCounts.from_meter(meter)
    return counts


def _executed_conv(spec: LayerSpec, params: HEParams, model, rng):
    from .backend import CostMeter, decrypt

    c_i, c_o, c_n = _conv_padded(spec, params.n)
    p = params.p
    kernels = rng.integers(0, p, (c_o, c_i, spec.k_h, spec.k_w), dtype=np.int64)
    channels = rng.integers(0, p, (c_i, spec.u_h, spec.u_w), dtype=np.int64)
    task = ConvTask(spec.u_w, spec.u_h, c_i, spec.k_w, spec.k_h, c_o, kernels, params)
    want = conv2d_mod_p(channels, kernels, p)
    counts = {}
    for scheme_name, fn in ((BASELINE, mimo_output_rotation), (GROUPED, mimo_kernel_grouping)):
        meter = CostMeter(model)
        cts = encrypt_inputs(task, channels)
        outs = fn(task, cts, meter)
        got = np.concatenate([unpack_channels(decrypt(ct), task) for ct in outs])
        if not np.array_equal(got, want):
            raise AssertionError(f"conv layer payload mismatch under {scheme_name}")
        counts[scheme_name] = OpCounts.from_meter(meter)
    return counts


def profile_network(
    specs: list[LayerSpec],
    params: HEParams | None = None,
    mode: str = "analytic",
    cost_model: CostModel | None = None,
    rng=None,
) -> ProfileReport:
    """Profile every layer under both schemes.

    mode "analytic" evaluates the closed-form counts; "executed" runs the
    schemes on random data, checking every payload against the plaintext
    oracle on the way.  Both modes yield identical counts.
    """
    params = params or HEParams()
    model = cost_model or CostModel()
    if mode not in ("analytic", "executed"):
        raise ParameterError(f"mode must be 'analytic' or 'executed', got {mode!r}")
    rng = np.random.default_rng(rng)
    layers = []
    for idx, spec in enumerate(specs):
        if mode == "analytic" or not spec.is_linear:
            counts = _analytic_counts(spec, params)
            verified = False
        elif spec.kind == "fc":
            counts = _executed_fc(spec, params, model, rng)
            verified = True
        else:
            counts = _executed_conv(spec, params, model, rng)
            verified = True
        layers.append(LayerProfile(
            index=idx, kind=spec.kind,
            label=spec.label or spec.kind, counts=counts, verified=verified,
        ))
    return ProfileReport(layers=layers, params=params, cost_model=model, mode=mode)
