"""Command-line interface: screen / batch / bench verbs.

Flag values override config-file values, which override built-in defaults.
The config file is a flat JSON document whose keys match the flag names
(alpha, alpha_l, alpha_u, k, seed, resamples, threads).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from .data import load_csv
from .driver import ScreenConfig, run_batch, screen_phenotype, write_report, _has_header, _fmt
from .errors import ScreenTrexError
from .simbench import SimSpec, mc_campaign

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_CFG_KEYS = ("alpha", "alpha_l", "alpha_u", "k", "seed", "resamples", "threads")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="screentrex",
        description="Self-calibrating FDR-controlled variable selection",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--alpha", type=float, help="target FDR for the fallback")
        p.add_argument("--alpha-l", dest="alpha_l", type=float,
                       help="lower acceptance bound")
        p.add_argument("--alpha-u", dest="alpha_u", type=float,
                       help="upper acceptance bound")
        p.add_argument("--k", type=int, help="number of random experiments (default 20)")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--resamples", type=int, help="bootstrap resamples (default 1000)")
        p.add_argument("--threads", type=int, help="parallelism hint")
        p.add_argument("--out", help="output prefix (writes <out>.csv and <out>.json)")

    p_screen = sub.add_parser("screen", help="screen a single phenotype")
    p_screen.add_argument("--x", required=True, help="predictor CSV")
    p_screen.add_argument("--y", required=True, help="response CSV (one column)")
    common(p_screen)

    p_batch = sub.add_parser("batch", help="screen a manifest of phenotypes")
    p_batch.add_argument("--manifest", required=True,
                         help="CSV with columns x_path,y_path,phenotype_id")
    common(p_batch)

    p_bench = sub.add_parser("bench", help="Monte Carlo benchmark")
    p_bench.add_argument("--spec", required=True,
                         help="simulation spec: inline JSON or a path to one")
    p_bench.add_argument("--reps", type=int, default=10)
    p_bench.add_argument("--methods", default="ordinary",
                         help="comma-separated: ordinary,confidence,fallback")
    p_bench.add_argument("--snr-grid", dest="snr_grid",
                         help="comma-separated SNR values")
    common(p_bench)
    return parser


def _load_config(args) -> ScreenConfig:
    values = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)
        for key in _CFG_KEYS:
            if key in file_cfg:
                values[key] = file_cfg[key]
    for key in _CFG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if "seed" in values:
        values["master_seed"] = int(values.pop("seed"))
    return ScreenConfig(**values)


def _read_manifest(path):
    entries = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0].strip().lower() == "x_path":
                continue
            if len(row) < 3:
                raise ScreenTrexError(f"manifest row needs 3 columns: {row}")
            entries.append((row[0].strip(), row[1].strip(), row[2].strip()))
    return entries


def _cmd_screen(args) -> int:
    cfg = _load_config(args)
    d = load_csv(args.x, args.y, header=_has_header(args.x))
    dec = screen_phenotype(d, cfg, phenotype_id=args.x)
    out = {
        "phenotype_id": dec.phenotype_id,
        "branch": dec.branch,
        "alpha_hat": _fmt(dec.alpha_hat),
        "alpha_hat_c": _fmt(dec.alpha_hat_c),
        "n_selected": len(dec.final_set),
        "selected_labels": [d.labels[j] for j in sorted(dec.final_set)],
        "wall_time": _fmt(dec.wall_time),
    }
    text = json.dumps(out, indent=2)
    if args.out:
        with open(f"{args.out}.json", "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def _cmd_batch(args) -> int:
    cfg = _load_config(args)
    manifest = _read_manifest(args.manifest)
    rows, summary = run_batch(manifest, cfg)
    prefix = args.out or "screentrex_batch"
    write_report(rows, summary, f"{prefix}.csv", f"{prefix}.json")
    print(json.dumps(summary, indent=2))
    return EXIT_FAILURE if summary["errors"] == len(manifest) else EXIT_OK


def _cmd_bench(args) -> int:
    cfg = _load_config(args)
    raw = args.spec
    if not raw.lstrip().startswith("{"):
        with open(raw) as fh:
            raw = fh.read()
    spec_dict = json.loads(raw)
    if "maf_range" in spec_dict:
        spec_dict["maf_range"] = tuple(spec_dict["maf_range"])
    spec = SimSpec(**spec_dict)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    snr_grid = None
    if args.snr_grid:
        snr_grid = [float(s) for s in args.snr_grid.split(",")]
    result = mc_campaign(spec, args.reps, methods, cfg, snr_grid=snr_grid)
    summary = [vars(s) for s in result.summaries]
    if args.out:
        with open(f"{args.out}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["rep", "method", "fdp", "tpp", "alpha_hat",
                             "n_selected", "wall_time"])
            for r in result.rows:
                writer.writerow([r.rep, r.method, _fmt(r.fdp), _fmt(r.tpp),
                                 _fmt(r.alpha_hat), r.n_selected, _fmt(r.wall_time)])
        with open(f"{args.out}.json", "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.verb == "screen":
            return _cmd_screen(args)
        if args.verb == "batch":
            return _cmd_batch(args)
        return _cmd_bench(args)
    except (ScreenTrexError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
