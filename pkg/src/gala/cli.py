"""Command-line front end.

Subcommands:
  mv-bench    operation-count table for the dot-product schemes
  conv-bench  operation-count table for the convolution schemes
  noise       closed-form output-noise table
  verify      run the oracle-equivalence suite (exit 1 on any mismatch)
  profile     per-layer network cost report
  calibrate   load a cost/parameter config and echo the effective values

All output is deterministic for a fixed seed and config.  Exit codes:
0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .analytics import (
    CONV_SCHEMES,
    MV_SCHEMES,
    OpCounts,
    count_conv,
    count_mv,
    estimate_time,
    predict_noise,
)
from .backend import CostMeter, CostModel, HEParams, load_cost_config, with_overrides
from .conv import ConvTask, encrypt_inputs, mimo_kernel_grouping, mimo_output_rotation, unpack_channels
from .backend import decrypt
from .errors import GalaError
from .matvec import MvTask, column_blocks, run_mv
from .oracle import conv2d_mod_p, dot_mod_p
from .profiler import load_network, profile_network

ENV_CONFIG = "GALA_COST_CONFIG"

MV_BENCH_DIMS = [(1, 2048), (2, 1024), (16, 128)]
CONV_BENCH_DIMS = [
    (16, 16, 128, 1, 1, 128),
    (16, 16, 128, 3, 3, 128),
    (16, 16, 2048, 5, 5, 64),
]
# oracle-equivalence grid: (n_o, n_i) cells, run under each slot count
VERIFY_MV_GRID = [(1, 2048), (2, 1024), (16, 128), (8, 256), (4, 16)]
VERIFY_NS = (2048, 256)
VERIFY_CONV_GRID = [
    (4, 4, c_i, k, k, c_o)
    for c_i in (4, 8)
    for c_o in (4, 8)
    for k in (1, 3)
]


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        n_o, n_i = (int(v) for v in text.lower().split("x"))
        return n_o, n_i
    except ValueError:
        raise GalaError(f"bad --dims value {text!r}, expected AxB like 2x1024") from None


def _parse_conv_dims(text: str) -> tuple[int, int, int, int, int, int]:
    # "16x16@128:3x3@128" -> (u_w, u_h, c_i, k_w, k_h, c_o)
    try:
        img, ker = text.lower().split(":")
        uwh, c_i = img.split("@")
        u_w, u_h = (int(v) for v in uwh.split("x"))
        kwh, c_o = ker.split("@")
        k_w, k_h = (int(v) for v in kwh.split("x"))
        return u_w, u_h, int(c_i), k_w, k_h, int(c_o)
    except ValueError:
        raise GalaError(
            f"bad --conv value {text!r}, expected UxH@CI:KWxKH@CO like 16x16@128:3x3@128"
        ) from None


def _emit(rows: list[dict], fmt: str, out, title: str | None = None) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    columns = list(rows[0]) if rows else []
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    # markdown
    if title:
        out.write(f"### {title}\n\n")
    out.write("| " + " | ".join(columns) + " |\n")
    out.write("|" + "|".join("---" for _ in columns) + "|\n")
    for row in rows:
        out.write("| " + " | ".join(str(row[c]) for c in columns) + " |\n")


def _fmt_ms(x: float) -> float:
    return round(x, 6)


def _count_row(counts: OpCounts, model: CostModel) -> dict:
    return {
        "perm": counts.perm,
        "dec_perm": counts.dec_perm,
        "hst_perm": counts.hst_perm,
        "sc_mult": counts.sc_mult,
        "add": counts.add,
        "est_ms": _fmt_ms(estimate_time(counts, model)),
    }


def cmd_mv_bench(args, params: HEParams, model: CostModel, out) -> int:
    dims = [_parse_dims(d) for d in args.dims] if args.dims else MV_BENCH_DIMS
    rows = []
    for n_o, n_i in dims:
        for scheme in MV_SCHEMES:
            counts = count_mv(scheme, n_i, n_o, params.n)
            rows.append({"dims": f"{n_o}x{n_i}", "scheme": scheme, **_count_row(counts, model)})
    _emit(rows, args.format, out, title=f"dot-product operation counts (n={params.n})")
    return 0


def cmd_conv_bench(args, params: HEParams, model: CostModel, out) -> int:
    dims = [_parse_conv_dims(d) for d in args.conv] if args.conv else CONV_BENCH_DIMS
    rows = []
    for u_w, u_h, c_i, k_w, k_h, c_o in dims:
        for scheme in CONV_SCHEMES:
            counts = count_conv(scheme, u_w, u_h, c_i, c_o, k_w, k_h, params.n).paired()
            row = {"input": f"{u_w}x{u_h}@{c_i}", "kernel": f"{k_w}x{k_h}@{c_o}", "scheme": scheme}
            row.update(_count_row(counts, model))
            del row["perm"]  # paired view: full rotations folded into the pair columns
            rows.append(row)
    _emit(rows, args.format, out, title=f"convolution operation counts (n={params.n})")
    return 0


def cmd_noise(args, params: HEParams, model: CostModel, out) -> int:
    rows = []
    dims = [_parse_dims(d) for d in args.dims] if args.dims else MV_BENCH_DIMS
    for n_o, n_i in dims:
        for scheme in ("naive", "gazelle", "gala"):
            eta = predict_noise(f"mv_{scheme}", (n_i, n_o), params)
            rows.append({
                "kind": "mv", "dims": f"{n_o}x{n_i}", "scheme": scheme,
                "noise": f"{eta:.6g}", "budget": f"{params.noise_budget:.6g}",
                "decryptable": eta < params.noise_budget,
            })
    conv_dims = [_parse_conv_dims(d) for d in args.conv] if args.conv else CONV_BENCH_DIMS
    for u_w, u_h, c_i, k_w, k_h, c_o in conv_dims:
        for scheme in CONV_SCHEMES:
            eta = predict_noise(f"conv_{scheme}", (u_w, u_h, c_i, c_o, k_w, k_h), params)
            rows.append({
                "kind": "conv", "dims": f"{u_w}x{u_h}@{c_i}:{k_w}x{k_h}@{c_o}",
                "scheme": scheme, "noise": f"{eta:.6g}",
                "budget": f"{params.noise_budget:.6g}",
                "decryptable": eta < params.noise_budget,
            })
    _emit(rows, args.format, out, title="predicted output noise")
    return 0


def _verify_mv_cell(n, n_o, n_i, scheme, base_params, rng, tasks) -> list[str]:
    problems = []
    params = with_overrides(base_params, n=n)
    p = params.p
    for _ in range(tasks):
        w = rng.integers(0, p, (n_o, n_i), dtype=np.int64)
        x = rng.integers(0, p, n_i, dtype=np.int64)
        want = dot_mod_p(w, x, p)
        meter = CostMeter()
        got = np.zeros(n_o, dtype=np.int64)
        blocks = 0
        noise_ok = True
        for wb, xb in column_blocks(w, x, n):
            task = MvTask(wb.shape[1], n_o, wb, params)
            outcome = run_mv(scheme, task, xb, meter, rng=int(rng.integers(2**31)))
            got = (got + outcome.server_share.slots + outcome.client_share.slots) % p
            blocks += 1
            if scheme != "diagonal":
                eta = predict_noise(f"mv_{scheme}", (task.n_i, task.n_o), params)
                cts = outcome.output_cipher
                cts = cts if isinstance(cts, list) else [cts]
                noise_ok = noise_ok and all(ct.noise == eta for ct in cts)
        if not np.array_equal(got, want):
            problems.append(f"payload mismatch for {scheme} {n_o}x{n_i} n={n}")
        expect = OpCounts()
        for wb, _ in column_blocks(w, x, n):
            expect = expect + count_mv(scheme, wb.shape[1], n_o, n)
        if OpCounts.from_meter(meter) != expect:
            problems.append(f"meter mismatch for {scheme} {n_o}x{n_i} n={n}")
        if not noise_ok:
            problems.append(f"noise mismatch for {scheme} {n_o}x{n_i} n={n}")
    return problems


def _verify_conv_cell(dims, base_params, rng, tasks) -> list[str]:
    problems = []
    u_w, u_h, c_i, k_w, k_h, c_o = dims
    params = with_overrides(base_params, n=64)
    p = params.p
    for _ in range(tasks):
        kernels = rng.integers(0, p, (c_o, c_i, k_h, k_w), dtype=np.int64)
        channels = rng.integers(0, p, (c_i, u_h, u_w), dtype=np.int64)
        task = ConvTask(u_w, u_h, c_i, k_w, k_h, c_o, kernels, params)
        want = conv2d_mod_p(channels, kernels, p)
        results = {}
        for scheme, fn in (("gazelle", mimo_output_rotation), ("gala", mimo_kernel_grouping)):
            meter = CostMeter()
            outs = fn(task, encrypt_inputs(task, channels), meter)
            got = np.concatenate([unpack_channels(decrypt(ct), task) for ct in outs])
            results[scheme] = got
            if not np.array_equal(got, want):
                problems.append(f"{scheme} payload mismatch for conv {dims}")
            if OpCounts.from_meter(meter) != count_conv(scheme, u_w, u_h, c_i, c_o, k_w, k_h, params.n):
                problems.append(f"{scheme} meter mismatch for conv {dims}")
            eta = predict_noise(f"conv_{scheme}", (u_w, u_h, c_i, c_o, k_w, k_h), params)
            if any(ct.noise != eta for ct in outs):
                problems.append(f"{scheme} noise mismatch for conv {dims}")
        if not np.array_equal(results["gazelle"], results["gala"]):
            problems.append(f"scheme payloads disagree for conv {dims}")
    return problems


def cmd_verify(args, params: HEParams, model: CostModel, out) -> int:
    rng = np.random.default_rng(args.seed)
    tasks = args.tasks
    failures = 0
    checks = 0
    out.write(f"verification suite: seed={args.seed} tasks-per-cell={tasks} p={params.p}\n")
    for n in VERIFY_NS:
        for n_o, n_i in VERIFY_MV_GRID:
            for scheme in MV_SCHEMES:
                problems = _verify_mv_cell(n, n_o, n_i, scheme, params, rng, tasks)
                checks += 1
                if problems:
                    failures += 1
                    for msg in problems:
                        out.write(f"FAIL mv {scheme} {n_o}x{n_i} n={n}: {msg}\n")
                else:
                    out.write(f"ok mv {scheme} {n_o}x{n_i} n={n}\n")
    for dims in VERIFY_CONV_GRID:
        problems = _verify_conv_cell(dims, params, rng, tasks)
        checks += 1
        u_w, u_h, c_i, k_w, k_h, c_o = dims
        label = f"{u_w}x{u_h}@{c_i}:{k_w}x{k_h}@{c_o}"
        if problems:
            failures += 1
            for msg in problems:
                out.write(f"FAIL conv {label} n=64: {msg}\n")
        else:
            out.write(f"ok conv gazelle+gala {label} n=64\n")
    out.write(f"summary: {checks} checks, {failures} failures\n")
    return 1 if failures else 0


def cmd_profile(args, params: HEParams, model: CostModel, out) -> int:
    specs = load_network(args.network)
    report = profile_network(specs, params, mode=args.mode, cost_model=model,
                             rng=args.seed)
    if args.format == "csv":
        out.write(report.to_csv())
        return 0
    rows = report.rows()
    if args.format == "json":
        totals = {
            s: {"perm": c.perm, "dec_perm": c.dec_perm, "hst_perm": c.hst_perm,
                "sc_mult": c.sc_mult, "add": c.add,
                "est_ms": _fmt_ms(estimate_time(c, model))}
            for s, c in report.totals().items()
        }
        payload = {
            "mode": report.mode,
            "rows": rows,
            "totals": totals,
            "perm_reduction": round(report.perm_reduction(), 4),
            "total_speedup": round(report.total_speedup(), 4),
        }
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0
    _emit(rows, "markdown", out, title=f"network profile ({args.network}, {args.mode} mode)")
    t = report.totals()
    out.write(
        f"\ntotal full rotations: baseline {t['gazelle'].perm}, grouped {t['gala'].perm} "
        f"({report.perm_reduction():.1f}x fewer); "
        f"estimated speedup {report.total_speedup():.2f}x\n"
    )
    return 0


def cmd_calibrate(args, params: HEParams, model: CostModel, out) -> int:
    rows = [
        {"key": "n", "value": params.n},
        {"key": "p", "value": params.p},
        {"key": "q_bits", "value": params.q_bits},
        {"key": "sigma", "value": params.sigma},
        {"key": "eta0", "value": params.eta0},
        {"key": "eta_mult", "value": params.eta_mult},
        {"key": "eta_rot", "value": params.eta_rot},
        {"key": "noise_budget", "value": f"{params.noise_budget:.6g}"},
        {"key": "t_perm", "value": model.t_perm},
        {"key": "t_scmult", "value": model.t_scmult},
        {"key": "t_add", "value": model.t_add},
        {"key": "t_decperm", "value": model.t_decperm},
        {"key": "t_hstperm", "value": model.t_hstperm},
    ]
    _emit(rows, args.format, out, title="effective parameters")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gala",
        description="Rotation-minimizing packed-HE linear algebra: benchmarks, "
                    "verification, and network profiling over a metered mock backend.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0, help="PRNG seed (default 0)")
        sp.add_argument("--n", type=int, default=None, help="slot count override")
        sp.add_argument("--p", type=int, default=None, help="plaintext modulus override")
        sp.add_argument("--format", choices=("csv", "json", "markdown"),
                        default="markdown", help="output format")
        sp.add_argument("--out", default=None, help="write the report to this path")
        sp.add_argument("--config", default=None,
                        help=f"cost/parameter config file (fallback: ${ENV_CONFIG})")

    sp = sub.add_parser("mv-bench", help="dot-product operation-count table")
    common(sp)
    sp.add_argument("--dims", action="append", metavar="AxB",
                    help="n_o x n_i dimension, repeatable (default: 1x2048 2x1024 16x128)")
    sp.set_defaults(fn=cmd_mv_bench)

    sp = sub.add_parser("conv-bench", help="convolution operation-count table")
    common(sp)
    sp.add_argument("--conv", action="append", metavar="UxH@CI:KWxKH@CO",
                    help="convolution shape, repeatable")
    sp.set_defaults(fn=cmd_conv_bench)

    sp = sub.add_parser("noise", help="closed-form output-noise table")
    common(sp)
    sp.add_argument("--dims", action="append", metavar="AxB")
    sp.add_argument("--conv", action="append", metavar="UxH@CI:KWxKH@CO")
    sp.set_defaults(fn=cmd_noise)

    sp = sub.add_parser("verify", help="oracle-equivalence suite; exit 1 on mismatch")
    common(sp)
    sp.add_argument("--tasks", type=int, default=2, help="random tasks per grid cell")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("profile", help="per-layer network cost report")
    common(sp)
    sp.add_argument("--network", required=True,
                    help="network file path or shipped name (e.g. resnet18.net)")
    sp.add_argument("--mode", choices=("analytic", "executed"), default="analytic")
    sp.set_defaults(fn=cmd_profile)

    sp = sub.add_parser("calibrate", help="load a config and echo effective parameters")
    common(sp)
    sp.set_defaults(fn=cmd_calibrate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config_path = args.config or os.environ.get(ENV_CONFIG)
        if config_path:
            params, model = load_cost_config(config_path)
        else:
            params, model = HEParams(), CostModel()
        params = with_overrides(params, n=args.n, p=args.p)
        if args.out:
            with open(args.out, "w", newline="") as f:
                return args.fn(args, params, model, f)
        return args.fn(args, params, model, sys.stdout)
    except (GalaError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
