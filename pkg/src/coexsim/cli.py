"""Batch front end: closed-form tables, simulations, verification, PSD curves.

Commands (exit codes: 0 success, 1 check failure, 2 usage/config error):

    coexsim table    --config cfg.yaml --direction s2i --lmin -50 --lmax 50 --lstep 1 --out t.csv
    coexsim simulate --config cfg.yaml --direction s2i --symbols 10000 --out s.csv
    coexsim verify   --config cfg.yaml
    coexsim psd      --config cfg.yaml --lmin -10 --lmax 10 --lstep 0.1 --out psd.csv

The config file is YAML with exactly the scenario keys (unknown keys are
rejected to catch typos in physics parameters):

    M: 512
    cp_ratio: 1/8            # rational string or number
    incumbent_set: {range: [-25, 25]}   # or an explicit list
    secondary_set: [0]
    var_qam: 1.0
    var_pam: 0.5
    delta_f: 0.0
    seed: 12345

Flags override config values.  All output is deterministic given
(config, seed): fixed column order, C-locale decimal points, LF line
endings; dB values carry 6 decimals, linear values full precision.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np
import yaml

from .checks import run_all_checks
from .closedform import build_table, power_db
from .filterbank import phydyas_k4
from .montecarlo import estimate_ofdm_to_ofdm, estimate_ofdm_to_oqam, estimate_oqam_to_ofdm
from .psdmodel import psd_interference, psd_ofdm_subcarrier, psd_oqam_subcarrier
from .txrx import CoexConfig

__all__ = ["main", "load_config", "ConfigError"]

_CONFIG_KEYS = ("M", "cp_ratio", "incumbent_set", "secondary_set",
                "var_qam", "var_pam", "delta_f", "seed")

_DIRECTIONS = {"s2i": "oqam_to_ofdm", "i2s": "ofdm_to_oqam", "o2o": "ofdm_to_ofdm_mc"}


class ConfigError(ValueError):
    pass


def _parse_subcarrier_set(value, name: str) -> frozenset:
    if isinstance(value, dict):
        if set(value) != {"range"} or len(value["range"]) != 2:
            raise ConfigError(f"{name}: expected {{range: [lo, hi]}} or a list of integers")
        lo, hi = value["range"]
        return frozenset(range(int(lo), int(hi) + 1))
    if isinstance(value, (list, tuple)):
        return frozenset(int(m) for m in value)
    raise ConfigError(f"{name}: expected a list or {{range: [lo, hi]}}")


def load_config(path: str) -> CoexConfig:
    """Read and validate a YAML scenario file; unknown keys are errors."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a mapping")
    unknown = set(raw) - set(_CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kw = {}
    for key in _CONFIG_KEYS:
        if key not in raw:
            continue
        value = raw[key]
        if key in ("incumbent_set", "secondary_set"):
            value = _parse_subcarrier_set(value, key)
        elif key == "cp_ratio":
            value = Fraction(str(value))
        elif key in ("M", "seed"):
            value = int(value)
        else:
            value = float(value)
        kw[key] = value
    try:
        return CoexConfig(**kw)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _apply_overrides(config: CoexConfig, args) -> CoexConfig:
    kw = {}
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    if getattr(args, "delta_f", None) is not None:
        kw["delta_f"] = args.delta_f
    if getattr(args, "cp_ratio", None) is not None:
        kw["cp_ratio"] = Fraction(args.cp_ratio)
    return config.with_(**kw) if kw else config


def _l_grid(args) -> np.ndarray:
    if args.lstep <= 0:
        raise ConfigError("--lstep must be positive")
    if args.lmax < args.lmin:
        raise ConfigError("--lmax must be >= --lmin")
    count = int(round((args.lmax - args.lmin) / args.lstep)) + 1
    return args.lmin + args.lstep * np.arange(count)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _fmt_l(x: float) -> str:
    return f"{x:.10g}"


def _fmt_lin(x: float) -> str:
    return f"{x:.17e}"


def _fmt_db(x: float) -> str:
    return f"{x:.6f}"


def cmd_table(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    if args.direction not in ("s2i", "i2s"):
        raise ConfigError("table computes closed forms: --direction must be s2i or i2s")
    table = build_table(_DIRECTIONS[args.direction], _l_grid(args), config, phydyas_k4())
    _write_csv(args.out, ["l", "power_linear", "power_db"],
               ((_fmt_l(l), _fmt_lin(p), _fmt_db(db)) for l, p, db in table.entries))
    return 0


def cmd_simulate(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    filt = phydyas_k4()
    if args.direction == "s2i":
        est = estimate_oqam_to_ofdm(config, args.symbols)
    elif args.direction == "i2s":
        est = estimate_ofdm_to_oqam(config, args.symbols)
    elif args.direction == "o2o":
        est = estimate_ofdm_to_ofdm(config, args.symbols)
    else:
        raise ConfigError(f"unknown direction {args.direction!r}")
    # closed-form overlay: the o2o baseline is compared against the
    # OQAM-secondary closed form (same victim, OQAM interferer)
    closed_dir = "oqam_to_ofdm" if args.direction in ("s2i", "o2o") else "ofdm_to_oqam"
    closed = build_table(closed_dir, est.l_values, config, filt)
    psd_dir = _DIRECTIONS[args.direction]
    rows = []
    for (l, p, err), (_, pc, _) in zip(est.per_l, closed.entries):
        ppsd = psd_interference(psd_dir, l, config, filt)
        rows.append((_fmt_l(l), _fmt_lin(p), _fmt_lin(err), _fmt_lin(pc), _fmt_lin(ppsd)))
    _write_csv(args.out, ["l", "power_mc", "std_err", "power_closed", "power_psd"], rows)
    return 0


def cmd_verify(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    results = run_all_checks(phydyas_k4(), config.cp_ratio)
    width = max(len(r.name) for r in results)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.detail}")
        ok &= r.passed
    print(f"{'all checks passed' if ok else 'CHECKS FAILED'}")
    return 0 if ok else 1


def cmd_psd(args) -> int:
    config = _apply_overrides(load_config(args.config), args)
    filt = phydyas_k4()
    rows = []
    for f in _l_grid(args):
        po = psd_ofdm_subcarrier(f, config.cp_ratio)
        pq = psd_oqam_subcarrier(f, filt)
        rows.append((_fmt_l(f), _fmt_lin(po), _fmt_lin(pq),
                     _fmt_db(float(power_db(po))), _fmt_db(float(power_db(pq)))))
    _write_csv(args.out, ["f_norm", "psd_cpofdm", "psd_oqam", "psd_cpofdm_db", "psd_oqam_db"], rows)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coexsim",
                                description="cross-interference tables, simulations and checks")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=False, direction=False, symbols=False):
        sp.add_argument("--config", required=True, help="YAML scenario file")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--delta-f", dest="delta_f", type=float, default=None)
        sp.add_argument("--cp-ratio", dest="cp_ratio", default=None,
                        help="prefix ratio as P/Q or decimal")
        if grid:
            sp.add_argument("--lmin", type=float, default=-20.0)
            sp.add_argument("--lmax", type=float, default=20.0)
            sp.add_argument("--lstep", type=float, default=1.0)
            sp.add_argument("--out", required=True)
        if direction:
            sp.add_argument("--direction", choices=("s2i", "i2s", "o2o"), required=True)
        if symbols:
            sp.add_argument("--symbols", type=int, default=10000,
                            help="victim windows/slots to measure")

    sp = sub.add_parser("table", help="closed-form interference table -> CSV")
    common(sp, grid=True, direction=True)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("simulate", help="Monte-Carlo estimate with closed-form/PSD overlay -> CSV")
    common(sp, direction=True, symbols=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="oracle/closed-form cross-validation report")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("psd", help="subcarrier PSD curves -> CSV")
    common(sp, grid=True)
    sp.set_defaults(func=cmd_psd)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
