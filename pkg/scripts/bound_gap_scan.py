#!/usr/bin/env python3
"""Scan the RMSE-dB gap between the analytic bound and the ZZB versus SNR.

Prints, for each K, the gap 5*log10(WWB/ZZB) on a fine SNR grid, the peak
gap in the threshold region, and the SNR at which the sign changes.  This
is the diagnostic behind the crossover acceptance check.

Usage:
    python3 scripts/bound_gap_scan.py [--k 20,40,60] [--kappa 1]
                                      [--snr-min -12] [--snr-max 0] [--step 0.25]
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from circbound.benchmarks import zzb
from circbound.prior import VonMisesPrior
from circbound.signal_model import SignalConfig
from circbound.testpoints import TestPointConfig, build
from circbound.wwb import wwb_value


def run(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", default="20,40,60")
    ap.add_argument("--kappa", type=float, default=1.0)
    ap.add_argument("--snr-min", type=float, default=-12.0)
    ap.add_argument("--snr-max", type=float, default=0.0)
    ap.add_argument("--step", type=float, default=0.25)
    args = ap.parse_args(argv)

    prior = VonMisesPrior(mu=0.0, kappa=args.kappa)
    grid = np.arange(args.snr_min, args.snr_max + 1e-9, args.step)

    for K in (int(v) for v in args.k.split(",")):
        points = build(TestPointConfig(c_count=2, s_count=9, e_count=10), K)
        print(f"\nK={K}, kappa={args.kappa}")
        print(f"{'snr_db':>8} {'wwb_db':>10} {'zzb_db':>10} {'gap_rmse_db':>12}")
        gaps = []
        for snr_db in grid:
            config = SignalConfig(K=K, snr=10.0 ** (snr_db / 10.0))
            w = wwb_value(prior, config, points).mse_bound
            z = zzb(prior, config.K, config.snr)
            gap = 5.0 * math.log10(w / z)
            gaps.append(gap)
            print(f"{snr_db:8.2f} {5 * math.log10(w):10.3f}"
                  f" {5 * math.log10(z):10.3f} {gap:12.3f}")
        gaps = np.asarray(gaps)
        i = int(np.argmax(gaps))
        print(f"peak gap {gaps[i]:.3f} RMSE-dB at {grid[i]:g} dB SNR")
        for j in range(len(grid) - 1):
            if gaps[j] > 0.0 >= gaps[j + 1]:
                frac = gaps[j] / (gaps[j] - gaps[j + 1])
                print(f"sign change near {grid[j] + frac * args.step:.2f} dB SNR")
                break
        else:
            print("no sign change on this grid")
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
