"""
Command-line front end.

Exit codes: 0 success, 1 usage or config error, 2 gain-constraint
violation, 3 resource cap exceeded. Every CSV written to a file gets a
``<name>.manifest.json`` sibling holding the resolved configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .channel import parse_seed, sigma_for_metric
from .constellation import (
    MAX_BITS,
    GainProfile,
    average_symbol_energy,
    enumerate_points,
    margins,
    papr,
)
from .errors import HqamError, InvalidConfig
from .harness import SweepConfig, equivalence_scan, profile_from_config, run_sweep, snr_gap_at_ber
from .oracle import analytic_bit_ber

BER_COLUMNS = ["detector", "snr_db", "bit_index", "errors", "trials", "ber", "ci_lo", "ci_hi", "analytic_ber"]
ANALYTIC_COLUMNS = ["detector", "snr_db", "bit_index", "ber", "ci_lo", "ci_hi", "analytic_ber"]
POINT_COLUMNS = ["codeword", "i", "q"]


def _num(x) -> str:
    # repr gives the shortest string that round-trips a float exactly
    return repr(float(x))


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InvalidConfig("config must be a JSON object")
    return cfg


def _write_csv(rows: list[dict], columns: list[str], out) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)
    return text


def manifest_path(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + ".manifest.json")


def _write_manifest(command: str, config: dict, out, extra: dict | None = None) -> None:
    outputs = {"csv": str(out)}
    outputs.update(extra or {})
    manifest = {
        "tool": "hqam",
        "version": __version__,
        "command": command,
        "config": config,
        "seed": config.get("seed"),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": outputs,
    }
    manifest_path(out).write_text(json.dumps(manifest, indent=2) + "\n")


def _figure_path(out) -> Path:
    return Path(out).with_suffix(".png")


def _apply_overrides(cfg: dict, args) -> dict:
    cfg = dict(cfg)
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = parse_seed(args.seed)
    if getattr(args, "symbols", None) is not None:
        cfg["symbols_per_point"] = args.symbols
    if getattr(args, "workers", None) is not None:
        cfg["workers"] = args.workers
    return cfg


def _out(args, cfg):
    return args.out if args.out is not None else cfg.get("output")


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    profile = profile_from_config(cfg)

    def fmt(ms):
        return "[" + ", ".join("-" if v is None else f"{v:g}" for v in ms) + "]"

    print(f"profile: {profile}")
    print(f"i margins: {fmt(margins(profile.i_gains))}")
    print(f"q margins: {fmt(margins(profile.q_gains))}")
    print("valid")
    return 0


def cmd_points(args) -> int:
    cfg = load_config(args.config)
    profile = profile_from_config(cfg)
    points = enumerate_points(profile, int(cfg.get("max_bits", MAX_BITS)))
    out = _out(args, cfg)
    rows = [{"codeword": p.codeword, "i": _num(p.i), "q": _num(p.q)} for p in points]
    _write_csv(rows, POINT_COLUMNS, out)
    print(f"points: {len(points)}", file=sys.stderr)
    print(f"Es: {average_symbol_energy(profile)!r}", file=sys.stderr)
    print(f"PAPR: {papr(profile)!r}", file=sys.stderr)
    if out is not None:
        extra = {}
        if args.plot:
            from .plotting import plot_constellation

            fig = _figure_path(out)
            plot_constellation(points, fig, title=str(profile))
            extra["figure"] = str(fig)
        resolved = dict(cfg, profile=profile.to_dict())
        _write_manifest("points", resolved, out, extra)
    return 0


def _ber_rows(records) -> list[dict]:
    rows = []
    for rec in records:
        for j, (e, b, (lo, hi)) in enumerate(zip(rec.errors, rec.ber, rec.ci), start=1):
            rows.append({
                "detector": rec.detector,
                "snr_db": _num(rec.snr_db),
                "bit_index": j,
                "errors": e,
                "trials": rec.trials,
                "ber": _num(b),
                "ci_lo": _num(lo),
                "ci_hi": _num(hi),
                "analytic_ber": _num(rec.analytic[j - 1]),
            })
    return rows


def _plot_rows(rows, cfg, path, xlabel, title):
    from .plotting import plot_ber

    bits = cfg.get("plot_bits")
    if bits:
        rows = [r for r in rows if int(r["bit_index"]) in set(bits)]
    plot_ber(rows, path, xlabel=xlabel, title=title)


_AXIS_LABEL = {"esn0": "Es/N0 (dB)", "ebn0": "Eb/N0 (dB)", "sigma": "-20 log10(sigma) (dB)"}


def cmd_ber(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    config = SweepConfig.from_dict(cfg)
    records = run_sweep(config)
    out = _out(args, cfg)
    rows = _ber_rows(records)
    _write_csv(rows, BER_COLUMNS, out)
    if out is not None:
        extra = {}
        if args.plot:
            fig = _figure_path(out)
            _plot_rows(rows, cfg, fig, _AXIS_LABEL[config.snr_metric], str(config.profile))
            extra["figure"] = str(fig)
        resolved = config.to_dict()
        resolved.pop("workers")  # results do not depend on it
        _write_manifest("ber", resolved, out, extra)
    return 0


def cmd_equiv(args) -> int:
    cfg = load_config(args.config)
    if args.unchecked:
        p = cfg.get("profile") or {}
        profile = GainProfile.unchecked(p.get("i_gains", []), p.get("q_gains", []))
    else:
        profile = profile_from_config(cfg)
    scan = dict(cfg.get("scan") or {})
    mode = args.mode or scan.get("mode", "grid")
    count = args.count or int(scan.get("count", 401 if mode == "grid" else 1_000_000))
    seed = parse_seed(args.seed if args.seed is not None else cfg.get("seed", 0))
    mismatches, compared = equivalence_scan(
        profile, mode, count, seed, max_bits=int(cfg.get("max_bits", MAX_BITS))
    )
    print(f"profile: {profile}")
    print(f"scan: {mode}, {compared} samples compared")
    print(f"{len(mismatches)} mismatches")
    for mm in mismatches[: args.show]:
        print(
            f"  y=({mm.i!r}, {mm.q!r}) sic={mm.sic} (d2={mm.sic_distance!r}) "
            f"ml={mm.ml} (d2={mm.ml_distance!r})"
        )
    return 0 if not mismatches else 4


def cmd_analytic(args) -> int:
    cfg = load_config(args.config)
    profile = profile_from_config(cfg)
    snr = cfg.get("snr") or {}
    points = [float(s) for s in snr.get("points_db", [])]
    metric = snr.get("metric", "esn0")
    if not points:
        raise InvalidConfig("snr.points_db must be non-empty")
    profiles = [("analytic", profile)]
    reference = None
    if "reference" in cfg:
        reference = profile_from_config(cfg["reference"])
        profiles.append(("analytic:reference", reference))

    rows = []
    for label, prof in profiles:
        for s in points:
            ber = analytic_bit_ber(prof, sigma_for_metric(prof, metric, s))
            for j, p in enumerate(ber.p, start=1):
                v = _num(p)
                rows.append({"detector": label, "snr_db": _num(s), "bit_index": j,
                             "ber": v, "ci_lo": v, "ci_hi": v, "analytic_ber": v})
    out = _out(args, cfg)
    _write_csv(rows, ANALYTIC_COLUMNS, out)

    resolved = dict(cfg, profile=profile.to_dict())
    if reference is not None:
        gap_cfg = cfg.get("gap") or {}
        target = float(gap_cfg.get("target_ber", 1e-5))
        bit = int(gap_cfg.get("bit_index", profile.m + 1))
        gap = snr_gap_at_ber(reference, profile, target, bit, metric)
        print(f"gap at BER {target:g}, bit {bit}, metric {metric}: {gap:.4f} dB", file=sys.stderr)
        resolved["reference"] = reference.to_dict()
        resolved["gap_db"] = gap
    if out is not None:
        extra = {}
        if args.plot:
            fig = _figure_path(out)
            _plot_rows(rows, cfg, fig, _AXIS_LABEL.get(metric, "SNR (dB)"), str(profile))
            extra["figure"] = str(fig)
        _write_manifest("analytic", resolved, out, extra)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hqam", description="Hierarchical 2^n-QAM modem toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a gain profile and print per-branch margins")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("points", help="list constellation points as CSV")
    p.add_argument("config")
    p.add_argument("-o", "--out")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("ber", help="Monte Carlo BER sweep")
    p.add_argument("config")
    p.add_argument("-o", "--out")
    p.add_argument("--seed")
    p.add_argument("--symbols", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("equiv", help="compare SIC and ML decisions over a scan")
    p.add_argument("config")
    p.add_argument("--mode", choices=["grid", "random"])
    p.add_argument("--count", type=int)
    p.add_argument("--seed")
    p.add_argument("--show", type=int, default=10, help="mismatches to print")
    p.add_argument("--unchecked", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("analytic", help="exact per-bit BER curves as CSV")
    p.add_argument("config")
    p.add_argument("-o", "--out")
    p.add_argument("--plot", action="store_true", help="render a PNG next to the CSV")
    p.set_defaults(func=cmd_analytic)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HqamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
