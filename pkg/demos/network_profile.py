#!/usr/bin/env python3
"""Whole-network cost profile from a shipped layer description.

Profiles the ResNet-18-style config layer by layer, prints the accumulated
time estimate for both schemes, and the per-layer speedup.  Nonlinear layers
carry no HE cost, so their speedup is 1.
"""
from gala import load_network, profile_network


def main():
    specs = load_network("resnet18.net")
    report = profile_network(specs)

    print(f"{'layer':>5}  {'kind':<9} {'baseline ms':>12} {'grouped ms':>11} {'speedup':>8}")
    cum = {"gazelle": 0.0, "gala": 0.0}
    rows = report.rows()
    for i in range(0, len(rows), 2):
        base, grouped = rows[i], rows[i + 1]
        print(f"{base['layer_index']:>5}  {base['kind']:<9} "
              f"{base['cum_ms']:>12.3f} {grouped['cum_ms']:>11.3f} "
              f"{base['speedup']:>8.2f}")

    totals = report.totals()
    print(f"\nfull rotations: {totals['gazelle'].perm} -> {totals['gala'].perm} "
          f"({report.perm_reduction():.1f}x fewer)")
    print(f"estimated end-to-end linear-layer speedup: {report.total_speedup():.2f}x")
    print("\n(run with mode='executed' to re-derive every count from a real "
          "scheme execution, oracle-checked)")


if __name__ == "__main__":
    main()
