"""Command-line interface.

Exit codes: 0 success, 1 invalid configuration or input data, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import calibration, fixtures, runner
from .metrics import component_census, giant_component_pct, interdisciplinary_pct
from .params import ConfigError, Culture, InvalidParams, ModelParams, load_config, validate_params

log = logging.getLogger("teamassembly")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_params(path: str, overrides: list[str]) -> ModelParams:
    try:
        params = load_config(path, overrides)
    except OSError as e:
        raise CliError(f"cannot read config {path}: {e.strerror or e}", EXIT_IO) from e
    except (ConfigError, UnicodeDecodeError) as e:
        raise CliError(f"invalid config: {e}", EXIT_INVALID) from e
    try:
        return validate_params(params)
    except InvalidParams as e:
        raise CliError("invalid parameters:\n" + "\n".join(f"  {v}" for v in e.violations), EXIT_INVALID) from e


def _mixing_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mixing list {text!r}") from None


def _write_io(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except OSError as e:
        raise CliError(f"I/O failure: {e}", EXIT_IO) from e


def _run(spec: runner.ExperimentSpec, jobs: int) -> runner.ExperimentResult:
    try:
        return runner.run_experiment(spec, jobs=jobs)
    except (ValueError, InvalidParams) as e:
        raise CliError(f"invalid experiment: {e}", EXIT_INVALID) from e


def cmd_simulate(args) -> int:
    params = _load_params(args.config, args.set)
    spec = runner.ExperimentSpec(params, args.ticks, 1, (params.mixing,), args.window)
    result = _run(spec, 1)
    _write_io(runner.write_experiment, result, args.out, summary=False)
    label = runner.mixing_label(params.mixing)
    print(f"wrote {Path(args.out) / f'series_{label}_0.csv'} ({args.ticks} rows)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    params = _load_params(args.config, args.set)
    spec = runner.ExperimentSpec(params, args.ticks, args.replicates, args.mixing, args.window)
    if args.burn_in < 0:
        raise CliError("--burn-in must be >= 0", EXIT_INVALID)
    result = _run(spec, args.jobs)
    written = _write_io(runner.write_experiment, result, args.out, burn_in=args.burn_in)
    for m, per in runner.summarize(result, min(args.burn_in, args.ticks - 1)).items():
        s = per["pct_interdisciplinary"]
        g = per["pct_giant"]
        print(f"mixing={runner.mixing_label(m)}: interdisciplinary {s.mean:.2f}% (sd {s.sd:.2f}), "
              f"giant {g.mean:.2f}% (sd {g.sd:.2f})")
    print(f"wrote {len(written)} files to {args.out}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    try:
        text = Path(args.bibliography).read_text(encoding="utf-8")
    except OSError as e:
        raise CliError(f"cannot read {args.bibliography}: {e.strerror or e}", EXIT_IO) from e
    if not text.strip():
        raise CliError("no records", EXIT_INVALID)
    try:
        records = calibration.parse_bibliography(text)
    except calibration.BibliographyError as e:
        raise CliError(f"malformed bibliography:\n{e}", EXIT_INVALID) from e
    if not records:
        raise CliError("no records", EXIT_INVALID)
    defaults = _load_params(args.defaults, args.set)
    profiles = calibration.team_profiles(records)
    sys.stdout.write(calibration.format_profiles(profiles))
    try:
        params = calibration.profiles_to_params(profiles, defaults)
    except InvalidParams as e:
        raise CliError("calibrated parameters are invalid:\n" + "\n".join(f"  {v}" for v in e.violations),
                       EXIT_INVALID) from e
    except ValueError as e:
        raise CliError(str(e), EXIT_INVALID) from e
    _write_io(Path(args.out).write_text, calibration.format_calibrated_config(params), encoding="utf-8")
    return EXIT_OK


def _read_csv(path: str, header: tuple[str, ...]) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", EXIT_IO) from e
    if not rows:
        return []
    if tuple(h.strip() for h in rows[0]) != header:
        raise CliError(f"{path}: expected header {','.join(header)}", EXIT_INVALID)
    body = [r for r in rows[1:] if r]
    for i, r in enumerate(body, 2):
        if len(r) != len(header):
            raise CliError(f"{path}:{i}: expected {len(header)} fields", EXIT_INVALID)
    return body


def cmd_metrics(args) -> int:
    cultures: dict[str, Culture] = {}
    for node, tag in _read_csv(args.cultures, ("node", "culture")):
        try:
            cultures[node.strip()] = Culture.parse(tag)
        except ValueError as e:
            raise CliError(f"{args.cultures}: {e}", EXIT_INVALID) from e
    graph: dict[str, dict[str, int]] = {n: {} for n in cultures}
    for a, b, w in _read_csv(args.edges, ("source", "target", "weight")):
        a, b = a.strip(), b.strip()
        try:
            weight = int(w)
        except ValueError:
            raise CliError(f"{args.edges}: bad weight {w!r}", EXIT_INVALID) from None
        for n in (a, b):
            if n not in cultures:
                raise CliError(f"{args.edges}: node {n!r} has no culture", EXIT_INVALID)
        if a == b:
            raise CliError(f"{args.edges}: self loop on {a!r}", EXIT_INVALID)
        graph[a][b] = graph[a].get(b, 0) + weight
        graph[b][a] = graph[b].get(a, 0) + weight
    print(f"nodes: {len(graph)}")
    print(f"giant_component_pct: {giant_component_pct(graph):.2f}")
    print(f"interdisciplinary_pct: {interdisciplinary_pct(graph, cultures):.2f}")
    print("census (size,basic,clinical):")
    for size, basic, clinical in component_census(graph, cultures):
        print(f"  {size},{basic},{clinical}")
    return EXIT_OK


def cmd_fixtures(args) -> int:
    if args.manifest:
        try:
            manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        except OSError as e:
            raise CliError(f"cannot read {args.manifest}: {e.strerror or e}", EXIT_IO) from e
        except json.JSONDecodeError as e:
            raise CliError(f"{args.manifest}: {e}", EXIT_INVALID) from e
    else:
        manifest = fixtures.PRESETS[args.preset]
    if args.seed is not None:
        manifest = {**manifest, "seed": args.seed}
    try:
        text, realized = fixtures.generate_csv(manifest)
    except (KeyError, TypeError, RuntimeError) as e:
        raise CliError(f"bad manifest: {e}", EXIT_INVALID) from e
    out = Path(args.out)
    _write_io(out.write_text, text, encoding="utf-8")
    manifest_out = Path(args.manifest_out) if args.manifest_out else out.with_suffix(".manifest.json")
    _write_io(manifest_out.write_text, json.dumps(realized, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {realized['realized']['records']} records to {out}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid input (exit 1); exit 2 is reserved for I/O
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="teamassembly", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log one line per replicate")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_set(p):
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable, last wins)")

    p = sub.add_parser("simulate", help="single run: metrics series and final edge list")
    p.add_argument("config")
    p.add_argument("--ticks", type=int, default=1500)
    p.add_argument("--out", default=".")
    p.add_argument("--window", type=int, default=runner.DEFAULT_WINDOW, help="team-size window")
    add_set(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="replicated runs over several mixing values")
    p.add_argument("config")
    p.add_argument("--mixing", type=_mixing_list, default=(0.14, 0.46, 0.79))
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--ticks", type=int, default=1500)
    p.add_argument("--out", default=".")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--window", type=int, default=runner.DEFAULT_WINDOW)
    add_set(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("calibrate", help="team profiles from a bibliography -> params file")
    p.add_argument("bibliography")
    p.add_argument("defaults")
    p.add_argument("--out", required=True)
    add_set(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("metrics", help="giant component, interdisciplinarity, census of a static graph")
    p.add_argument("edges")
    p.add_argument("cultures")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("fixtures", help="generate a synthetic bibliography from a manifest")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(fixtures.PRESETS), default="inger")
    src.add_argument("--manifest")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--manifest-out")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
