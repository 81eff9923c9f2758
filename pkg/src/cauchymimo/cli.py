"""Command-line experiment runner.

    cauchymimo run --config cfg.json [--experiment X --seed N --paper-scale --out DIR ...]

The config file is a JSON object whose keys mirror the CLI flags one to one
(flags use dashes, keys use underscores); flags override file values.  Writes
<out>/<experiment>.csv and <out>/<experiment>.svg.  Exit code 0 on success,
2 on configuration errors.
"""

import argparse
import json
import sys
from pathlib import Path

from .harness import ConfigError, config_from_dict, emit_plot, run

PAPER_SCALE_BLOCKS = 500

_PLOT_STYLE = {
    "ser_vs_sdr": "ser",
    "detector_robustness": "ser",
    "ber_uplink": "ber",
    "ber_downlink": "ber",
    "dispersion_mismatch": "ber",
    "uplink_rate": "rate",
    "downlink_rate": "rate",
    "mismatched_rate": "rate",
}


def _float_list(text: str) -> list:
    return [float(tok) for tok in text.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cauchymimo")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run one experiment and write CSV + SVG")
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    p.add_argument("--paper-scale", action="store_true",
                   help=f"use {PAPER_SCALE_BLOCKS} coherence blocks per grid point")
    p.add_argument("--experiment")
    p.add_argument("--seed", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--tau", type=int)
    p.add_argument("--T", type=int)
    p.add_argument("--sdr-grid-db", type=_float_list, metavar="DB[,DB...]")
    p.add_argument("--noise-alpha", type=float)
    p.add_argument("--noise-gamma", type=float)
    p.add_argument("--pilot-kind", choices=("dft", "identity"))
    p.add_argument("--estimator", choices=("raw_ml", "despread_ml"))
    p.add_argument("--init", choices=("zero", "despread"))
    p.add_argument("--n-blocks", type=int)
    p.add_argument("--n-symbols-per-block", type=int)
    p.add_argument("--n-trials", type=int)
    p.add_argument("--n-calibration", type=int)
    p.add_argument("--gamma-likelihood-override", type=float)
    p.add_argument("--gamma-adjust", choices=("off", "on", "both"))
    p.add_argument("--fixed-powers-db", type=_float_list, metavar="DB[,DB...]")
    return parser


_OVERRIDE_KEYS = (
    "experiment", "seed", "M", "K", "tau", "T", "sdr_grid_db", "noise_alpha",
    "noise_gamma", "pilot_kind", "estimator", "init", "n_blocks",
    "n_symbols_per_block", "n_trials", "n_calibration",
    "gamma_likelihood_override", "gamma_adjust", "fixed_powers_db",
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    raw = {}
    if args.config is not None:
        try:
            raw = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
            return 2
        if not isinstance(raw, dict):
            print("config error: top level must be a JSON object", file=sys.stderr)
            return 2
    for key in _OVERRIDE_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    if args.paper_scale:
        raw["n_blocks"] = PAPER_SCALE_BLOCKS
    try:
        cfg = config_from_dict(raw)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except TypeError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    rows = run(cfg, out_dir=args.out)
    emit_plot(rows, _PLOT_STYLE[cfg.experiment], args.out / f"{cfg.experiment}.svg")
    print(f"wrote {args.out / cfg.experiment}.csv ({len(rows)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
