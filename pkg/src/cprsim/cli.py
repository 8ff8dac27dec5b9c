"""Command line: ``run``, ``experiment``, ``replay`` and ``validate``.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import Simulation
from .experiment import load_spec, replay, run_experiment, run_row
from .scenario import ConfigError, load_scenario

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def _print(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_run(a) -> int:
    cfg = load_scenario(a.scenario)
    if a.max_ticks:
        cfg = cfg.replace(max_ticks=a.max_ticks)
    r = Simulation(cfg, a.seed).run()
    if a.transcript:
        Path(a.transcript).write_text(r.log.to_jsonl())
    _print(run_row(cfg.name, r))
    return EXIT_OK


def cmd_experiment(a) -> int:
    spec = load_spec(a.spec, a.reps, a.out)
    if a.workers:
        from dataclasses import replace

        spec = replace(spec, workers=a.workers)
    report = run_experiment(spec)
    _print({"out": str(spec.out), "report": report})
    return EXIT_OK


def cmd_replay(a) -> int:
    try:
        metrics = replay(a.transcript)
    except ValueError as e:
        raise ConfigError(str(e), a.transcript) from None
    _print(metrics)
    return EXIT_OK


def cmd_validate(a) -> int:
    cfg = load_scenario(a.scenario)
    _print({"scenario": cfg.name, "agents": list(cfg.team.ids), "plans": len(cfg.plans), "rules": len(cfg.rules), "valid": True})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cprsim", description="Resuscitation team communication simulator")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario with one seed")
    r.add_argument("scenario", help="shipped scenario name or JSON path")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-ticks", type=int, default=None)
    r.add_argument("--transcript", help="write the JSONL transcript here")
    r.set_defaults(fn=cmd_run)

    e = sub.add_parser("experiment", help="run a replication batch from an experiment spec")
    e.add_argument("spec")
    e.add_argument("--reps", type=int, default=None)
    e.add_argument("--out", default=None)
    e.add_argument("--workers", type=int, default=None)
    e.set_defaults(fn=cmd_experiment)

    rp = sub.add_parser("replay", help="recompute metrics from a transcript")
    rp.add_argument("transcript")
    rp.set_defaults(fn=cmd_replay)

    v = sub.add_parser("validate", help="check a scenario file without running it")
    v.add_argument("scenario")
    v.set_defaults(fn=cmd_validate)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
