#!/usr/bin/env python3
"""Recover flammable-limit curves from a fitted logistic probability surface.

Synthesizes a corpus whose explosive band spans the oxygen window, fits the
logistic model to it, inverts the fitted surface into an explosive HC
interval at each requested oxygen level, and tabulates the fitted endpoints
against the generating limit curves.  The oxygen window is pinned to the
anchor span (15..20) so the limits vary everywhere: the logistic feature set
(hc, o2, o2/hc) cannot represent the flat extrapolation tails of the wider
default window.

On a noiseless corpus the classes are separable, so the fit emits a
"separation suspected" warning; the recovered intervals stay well-defined
because the ridge pin keeps the coefficients finite.
"""

from __future__ import annotations

import argparse

from gasgate.data import atomic_write_text, featurize, fit_normalization
from gasgate.logistic import explosion_interval, fit_logistic, intervals_csv
from gasgate.synth import DEFAULT_LIMIT_KNOTS, OracleRegion, generate


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--n", type=int, default=500, help="synthetic corpus size")
    parser.add_argument("--seed", type=int, default=42, help="synthesis seed")
    parser.add_argument(
        "--noise", type=float, default=0.0, help="label flip probability"
    )
    parser.add_argument(
        "--ridge", type=float, default=1e-6, help="L2 penalty for the logistic fit"
    )
    parser.add_argument(
        "--levels",
        default="15,16,17,18,19,20",
        help="comma-separated oxygen levels to invert at",
    )
    parser.add_argument("--out", help="also write the intervals as CSV to this path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    o2s, lows, highs = zip(*DEFAULT_LIMIT_KNOTS)
    region = OracleRegion(o2s, lows, highs, o2_window=(min(o2s), max(o2s)))
    data = generate(region, n=args.n, seed=args.seed, noise=args.noise)
    params = fit_normalization(data)
    model = fit_logistic(
        featurize(params, data),
        data.exploded.astype(float),
        ridge=args.ridge,
        normalization=params,
    )
    print(f"corpus: {data.provenance} ({int(data.exploded.sum())} explosive)")
    print(f"fitted coefficients: {model.beta}\n")

    levels = [float(tok) for tok in args.levels.split(",")]
    print("   o2   true lower  fit lower   true upper  fit upper   max err")
    intervals = []
    for o2 in levels:
        iv = explosion_interval(model, o2)
        intervals.append(iv)
        if not iv.present:
            print(f"{o2:>5.1f}   (no explosive interval found)")
            continue
        true_lo, true_hi = float(region.lower(o2)), float(region.upper(o2))
        err = max(abs(iv.lower - true_lo), abs(iv.upper - true_hi))
        print(
            f"{o2:>5.1f}   {true_lo:>10.4f} {iv.lower:>10.4f}   "
            f"{true_hi:>10.4f} {iv.upper:>10.4f}   {err:>7.4f}"
        )
    if args.out:
        atomic_write_text(args.out, intervals_csv(intervals))
        print(f"\nwrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
