"""Command-line front end: ``lanczoslab {spectrum,run,bounds,predict,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Output files without an explicit directory go to $LANCZOSLAB_OUTDIR when set.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import bounds, experiments, orthopoly, spectra, verify

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
OUTDIR_ENV = "LANCZOSLAB_OUTDIR"

# run flags that may also come from a JSON config file
RUN_KEYS = {
    "kind": "spectrum_kind", "n": "n", "m_max": "m_max", "trials": "trials", "seed": "seed",
    "path": "path", "index": "eigen_index", "m": "hard_m", "spectrum_file": "spectrum_path",
    "threads": "threads",
}


class UsageError(Exception):
    pass


def _out_path(name: str | None) -> Path | None:
    if name is None:
        return None
    p = Path(name)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not p.is_absolute() and p.parent == Path("."):
        p = Path(outdir) / p
    return p


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    spec = spectra.make_spectrum(args.kind, args.n, args.m, args.spectrum_file)
    out = _out_path(args.out)
    if out is None:
        sys.stdout.write(spec.to_text())
    else:
        _write(out, spec.to_text())
    return EXIT_OK


def _load_run_config(args) -> experiments.ExperimentConfig:
    fields: dict = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
        if "config" in data and isinstance(data["config"], dict):  # a run manifest
            fields.update(data["config"])
        else:
            for key, value in data.items():
                key = key.replace("-", "_")
                if key not in RUN_KEYS:
                    raise UsageError(f"unknown config key {key!r}")
                fields[RUN_KEYS[key]] = value
    for flag, field in RUN_KEYS.items():
        value = getattr(args, flag)
        if value is not None:
            fields[field] = value
    if "spectrum_kind" not in fields:
        raise UsageError("run needs --kind (or a config file providing it)")
    return experiments.ExperimentConfig(**fields)


def cmd_run(args) -> int:
    cfg = _load_run_config(args)
    t0 = time.perf_counter()
    stats = experiments.run_experiment(cfg)
    elapsed = time.perf_counter() - t0
    csv = stats.to_csv()
    outputs = {}
    csv_path = _out_path(args.csv)
    if csv_path is None:
        sys.stdout.write(csv)
    else:
        _write(csv_path, csv)
        outputs["csv"] = str(csv_path)
    if args.svg:
        from .plotting import box_plot, line_plot

        stem = _out_path(args.svg)
        line_path = stem.with_name(stem.stem + "_mean.svg")
        box_path = stem.with_name(stem.stem + "_box.svg")
        stem.parent.mkdir(parents=True, exist_ok=True)
        n = cfg.n if cfg.n is not None else cfg.spectrum().n
        line_plot({n: stats}, line_path, title=cfg.spectrum_kind)
        box_plot(stats, box_path, title=f"{cfg.spectrum_kind}, n = {n}", every=max(1, cfg.m_max // 50))
        outputs["svg"] = [str(line_path), str(box_path)]
    json_path = _out_path(args.json)
    if json_path is not None:
        outputs["json"] = str(json_path)
        man = experiments.manifest(cfg, outputs, elapsed, argv=args.argv)
        _write(json_path, json.dumps(man, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_bounds(args) -> int:
    params = {k: getattr(args, k) for k in
              ("n", "m", "p", "eps", "gamma", "tan_angle_sq", "alpha", "i", "delta", "kappa_bar", "k", "x")}
    result = bounds.evaluate(args.name, **params)
    reports = result if isinstance(result, list) else [result]
    payload = [r.to_dict() for r in reports]
    if args.name.replace("_", "-") in ("clustered", "clustered-prob") and (args.kind or args.spectrum_file):
        spec = spectra.make_spectrum(args.kind or "file", args.spectrum_n, None, args.spectrum_file)
        flag = bounds.cluster_hypothesis(spec, args.m, args.p or 1, args.alpha,
                                         probabilistic=args.name.endswith("prob"))
        payload[0]["hypotheses"].append({"name": "cluster-count", "met": flag})
    print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
    return EXIT_OK


def cmd_predict(args) -> int:
    ms = [args.m] if args.m is not None else list(range(args.m_min, args.m_max + 1))
    K = max(ms)
    if args.spectrum_file:
        spec = spectra.Spectrum.load(args.spectrum_file)
        rec = orthopoly.recurrence_from_discrete_measure(spec.values, spec.mults.astype(float), K)
        a = spec.lamn if args.a is None else args.a
        b = spec.lam1 if args.b is None else args.b
    elif args.density:
        rec, a, b = experiments.limiting_recurrence(args.density, K, args.a, args.b)
    else:
        raise UsageError("predict needs --density or --spectrum-file")
    print("m,predictor,m2_predictor")
    for m in ms:
        v = bounds.asymptotic_predictor(rec, m, a, b)
        print(f"{m},{v:.17g},{m * m * v:.17g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    ok = verify.run_checks(args.level)
    print("verification " + ("passed" if ok else "FAILED"))
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lanczoslab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", help="write a spectrum as 'value multiplicity' lines")
    s.add_argument("--kind", required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int, help="m of the hard-instance spectra")
    s.add_argument("--spectrum-file")
    s.add_argument("--out", help="output file (default: stdout)")
    s.set_defaults(func=cmd_spectrum)

    r = sub.add_parser("run", help="random-start Lanczos experiment")
    r.add_argument("--config", help="flat JSON config or a run manifest; flags override it")
    r.add_argument("--kind")
    r.add_argument("--n", type=int)
    r.add_argument("--m-max", type=int)
    r.add_argument("--trials", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--path", choices=("matrix", "measure"))
    r.add_argument("--index", type=int, help="eigenvalue index i (default 1)")
    r.add_argument("--m", type=int, help="m of the hard-instance spectra")
    r.add_argument("--spectrum-file")
    r.add_argument("--threads", type=int)
    r.add_argument("--csv", help="CSV output (default: stdout)")
    r.add_argument("--json", help="run manifest output")
    r.add_argument("--svg", help="SVG stem; writes <stem>_mean.svg and <stem>_box.svg")
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("bounds", help="evaluate a closed-form bound as JSON")
    b.add_argument("--name", required=True, choices=bounds.BOUND_NAMES)
    for flag, typ in (("n", int), ("m", int), ("p", float), ("eps", float), ("gamma", float),
                      ("tan-angle-sq", float), ("alpha", float), ("i", int), ("delta", float),
                      ("kappa-bar", float), ("k", int), ("x", float)):
        b.add_argument(f"--{flag}", type=typ)
    b.add_argument("--kind", help="spectrum kind for the cluster hypothesis")
    b.add_argument("--spectrum-n", type=int, help="dimension of --kind")
    b.add_argument("--spectrum-file")
    b.set_defaults(func=cmd_bounds)

    q = sub.add_parser("predict", help="limiting relative error (b - xi(m)) / (b - a)")
    q.add_argument("--density", choices=sorted(experiments.LIMITING_DENSITIES))
    q.add_argument("--spectrum-file")
    q.add_argument("--a", type=float)
    q.add_argument("--b", type=float)
    q.add_argument("--m", type=int)
    q.add_argument("--m-min", type=int, default=1)
    q.add_argument("--m-max", type=int, default=30)
    q.set_defaults(func=cmd_predict)

    v = sub.add_parser("verify", help="run the built-in invariant checks")
    v.add_argument("--level", choices=("quick", "full"), default="quick")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        args.argv = argv
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
