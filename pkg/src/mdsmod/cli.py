"""Command line entry point: ``mdsmod sweep | plot | selftest``."""
from __future__ import annotations

import argparse
import logging
import sys

from .errors import ConfigurationError

FLAG_KEYS = (
    "pipeline", "n", "q", "m1", "mapping", "scheme", "fec", "seed", "workers",
    "min_errors", "max_frames", "frame_bits", "spc_method",
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mdsmod", description="MDS-IQM / MDS-PSK link simulator")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="run a BER sweep and write a CSV")
    s.add_argument("--config", help="key=value file, or a previous sweep CSV; flags override it")
    s.add_argument("--pipeline", choices=["uncoded_ml", "coded_hard", "coded_lc_soft", "coded_opt_soft", "coded_lc_soft_spc"])
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    s.add_argument("--m1", type=int)
    s.add_argument("--mapping", choices=["gray", "natural"])
    s.add_argument("--scheme", choices=["iqm", "psk"])
    s.add_argument("--fec", choices=["k7", "k3", "none"])
    s.add_argument("--snr-db", nargs="+", help="symbol SNR points in dB (space or comma separated)")
    s.add_argument("--seed", type=int)
    s.add_argument("--workers", type=int)
    s.add_argument("--min-errors", type=int)
    s.add_argument("--max-frames", type=int)
    s.add_argument("--frame-bits", type=int)
    s.add_argument("--spc-method", choices=["tanh", "minsum"])
    s.add_argument("--out", required=True, help="output CSV path")

    pl = sub.add_parser("plot", help="plot BER curves from sweep CSVs")
    pl.add_argument("--in", dest="inputs", nargs="+", required=True)
    pl.add_argument("--out", required=True)

    sub.add_parser("selftest", help="run the built-in oracle checks")
    return p


def _sweep(args) -> int:
    from .io import config_from_dict, load_config
    from .sim import run_sweep

    values = load_config(args.config) if args.config else {}
    for key in FLAG_KEYS:
        v = getattr(args, key)
        if v is not None:
            values[key] = str(v)
    if args.snr_db is not None:
        values["snr_db"] = ",".join(args.snr_db)
    cfg = config_from_dict(values)
    for r in run_sweep(cfg, args.out):
        print(f"{r.pipeline} snr={r.snr_db:.6g} dB ber={r.ber:.6g} errors={r.bit_errors} frames={r.frames}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        if args.command == "sweep":
            return _sweep(args)
        if args.command == "plot":
            from .plotting import plot

            n = plot(args.inputs, args.out)
            print(f"wrote {n} curve(s) to {args.out}")
            return 0
        from .selftest import run

        return 0 if run() else 1
    except (ConfigurationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
