"""Seeded replication batches, CSV/JSON outputs, protocol comparisons and transcript replay.

Output directory layout::

    runs.csv                one row per (scenario, seed), columns RUN_COLUMNS
    msa.csv                 one row per MSA snapshot, columns MSA_COLUMNS
    transcripts/<scenario>_<seed>.jsonl
    report.json             per-scenario summary statistics and paired deltas
    manifest.json           written last; its presence marks a complete batch
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .engine import TRANSCRIPT_SCHEMA, EventLog, RunResult, Simulation
from .msa import comm_metrics, protocol_deviations, replay_belief_sets, replay_no_flow, snapshot_sets, wrong_addressee_actions
from .scenario import ConfigError, ScenarioConfig, load_scenario

RUN_COLUMNS = (
    "scenario",
    "seed",
    "outcome",
    "rosc",
    "reason",
    "ticks",
    "no_flow_ticks",
    "no_flow_fraction",
    "shocks",
    "adrenaline_mg",
    "amiodarone",
    "rhythm_checks",
    "messages",
    "repetitions",
    "resends",
    "mean_time_to_confirmation",
    "msa_mean",
    "msa_final",
    "max_contradictions",
    "deviations",
    "wrong_addressee_actions",
)
MSA_COLUMNS = ("scenario", "seed", "tick", "score", "shared", "union", "contradictions", "missing")
REPORT_METRICS = ("rosc", "no_flow_ticks", "messages", "repetitions", "msa_final", "deviations", "wrong_addressee_actions")


@dataclass(frozen=True)
class ExperimentSpec:
    scenarios: Sequence[tuple[str, ScenarioConfig]]
    replications: int
    base_seed: int = 0
    out: Path = Path("results")
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        names = [n for n, _ in self.scenarios]
        if not names:
            raise ConfigError("experiment needs at least one scenario")
        if len(set(names)) != len(names):
            raise ConfigError("scenario names must be unique")

    def seeds(self) -> range:
        return range(self.base_seed, self.base_seed + self.replications)


def load_spec(path: str | Path, replications: int | None = None, out: str | Path | None = None) -> ExperimentSpec:
    """Read an experiment spec: ``{"scenarios": [...], "replications": N, "base_seed": S, "out": DIR}``.

    Scenario entries are shipped names, paths relative to the spec file, or
    ``{"name": ..., "scenario": <name or path>, "protocol": {...overrides}}``.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, str(path), e.lineno) from None
    scen = []
    for entry in data.get("scenarios", ()):
        if isinstance(entry, str):
            entry = {"scenario": entry}
        src = entry["scenario"]
        local = path.parent / src
        cfg = load_scenario(local if local.suffix == ".json" and local.exists() else src)
        if entry.get("protocol"):
            cfg = cfg.with_protocol(**entry["protocol"])
        scen.append((entry.get("name", cfg.name), cfg))
    reps = replications if replications is not None else int(data.get("replications", 1))
    out_dir = Path(out) if out is not None else path.parent / data.get("out", "results")
    return ExperimentSpec(tuple(scen), reps, int(data.get("base_seed", 0)), out_dir, int(data.get("workers", 1)))


def _run_one(args: tuple[str, ScenarioConfig, int]) -> tuple[str, int, dict, list[dict], str]:
    name, cfg, seed = args
    r = Simulation(cfg, seed).run()
    row = run_row(name, r)
    msa_rows = [{"scenario": name, "seed": seed, **s.to_row()} for s in r.snapshots]
    return name, seed, row, msa_rows, r.log.to_jsonl()


def run_row(name: str, r: RunResult) -> dict:
    row = r.summary()
    row["scenario"] = name
    row["msa_final"] = round(r.snapshots[-1].score, 6) if r.snapshots else ""
    return {k: row[k] for k in RUN_COLUMNS}


def _csv_text(rows: list[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def summarize(values: Sequence[float], confidence: float = 0.95) -> dict:
    x = np.asarray(values, dtype=float)
    n = len(x)
    mean = float(x.mean()) if n else float("nan")
    sd = float(x.std(ddof=1)) if n > 1 else 0.0
    half = float(stats.t.ppf(0.5 + confidence / 2, n - 1) * sd / np.sqrt(n)) if n > 1 else 0.0
    return {"n": n, "mean": mean, "std": sd, "ci_low": mean - half, "ci_high": mean + half}


def paired_delta(a: Sequence[float], b: Sequence[float]) -> dict:
    """Paired comparison b - a: mean delta with a two-sided sign test over non-tied pairs."""
    d = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    up, down = int((d > 0).sum()), int((d < 0).sum())
    p = float(stats.binomtest(up, up + down, 0.5).pvalue) if up + down else 1.0
    return {"mean_delta": float(d.mean()) if len(d) else 0.0, "higher": up, "lower": down, "ties": len(d) - up - down, "sign_test_p": p}


def build_report(names: Sequence[str], rows: list[dict]) -> dict:
    by: dict[str, list[dict]] = {n: [] for n in names}
    for r in rows:
        by[r["scenario"]].append(r)

    def col(name, metric):
        return [float(r[metric]) if r[metric] != "" else np.nan for r in by[name]]

    report: dict = {"scenarios": {}, "paired": {}}
    for n in names:
        if len(by[n]) == 1:
            report["scenarios"][n] = {"single_run": by[n][0]}
            continue
        report["scenarios"][n] = {m: summarize([v for v in col(n, m) if not np.isnan(v)]) for m in REPORT_METRICS}
    ref = names[0]
    for n in names[1:]:
        report["paired"][f"{n}-{ref}"] = {m: paired_delta(col(ref, m), col(n, m)) for m in REPORT_METRICS}
    return report


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def run_experiment(spec: ExperimentSpec) -> dict:
    """Run every scenario for every seed and write the output directory; returns the report."""
    out = Path(spec.out)
    manifest = out / "manifest.json"
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "transcripts").mkdir(exist_ok=True)
        if manifest.exists():
            manifest.unlink()
    except OSError as e:
        raise IOError(f"cannot prepare output directory {out}: {e}") from e
    jobs = [(name, cfg, seed) for name, cfg in spec.scenarios for seed in spec.seeds()]
    if spec.workers > 1:
        with ProcessPoolExecutor(spec.workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=4))
    else:
        results = [_run_one(j) for j in jobs]
    results.sort(key=lambda r: ([n for n, _ in spec.scenarios].index(r[0]), r[1]))
    files: dict[str, str] = {}
    rows, msa_rows = [], []
    for name, seed, row, mrows, transcript in results:
        rows.append(row)
        msa_rows.extend(mrows)
        rel = f"transcripts/{name}_{seed}.jsonl"
        (out / rel).write_text(transcript)
        files[rel] = _sha(transcript)
    names = [n for n, _ in spec.scenarios]
    report = build_report(names, rows)
    outputs = {
        "runs.csv": _csv_text(rows, RUN_COLUMNS),
        "msa.csv": _csv_text(msa_rows, MSA_COLUMNS),
        "report.json": json.dumps(report, indent=2, sort_keys=True) + "\n",
    }
    for rel, text in outputs.items():
        (out / rel).write_text(text)
        files[rel] = _sha(text)
    meta = {
        "complete": True,
        "schema": TRANSCRIPT_SCHEMA,
        "scenarios": names,
        "replications": spec.replications,
        "base_seed": spec.base_seed,
        "files": dict(sorted(files.items())),
    }
    manifest.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return report


def replay(transcript: str | Path | EventLog) -> dict:
    """Recompute a run's metrics from its transcript alone."""
    if isinstance(transcript, EventLog):
        log = transcript
    else:
        log = EventLog.from_jsonl(Path(transcript).read_text())
    head = log.records[0] if log.records else {}
    if head.get("kind") != "header" or head.get("schema") != TRANSCRIPT_SCHEMA:
        raise ValueError("not a transcript: missing or unknown header")
    end = next((r for r in reversed(log.records) if r["kind"] == "run_end"), None)
    if end is None:
        raise ValueError("transcript has no run_end record")
    comm = comm_metrics(log)
    devs = protocol_deviations(log)
    sets = replay_belief_sets(log)
    snap = snapshot_sets(sets, end["tick"])
    no_flow = replay_no_flow(log)
    return {
        "scenario": head["scenario"],
        "seed": head["seed"],
        "reason": end["reason"],
        "no_flow_ticks": no_flow,
        "recorded_no_flow_ticks": end["patient"]["no_flow_ticks"],
        "messages": comm.total,
        "by_performative": dict(comm.by_performative),
        "repetitions": comm.repetitions,
        "resends": comm.resends,
        "confirmation_times": list(comm.confirmation_times),
        "deviations": [{"kind": d.kind, "tick": d.tick, "agent": d.agent, "detail": d.detail} for d in devs],
        "wrong_addressee_actions": wrong_addressee_actions(log),
        "msa_final": snap.score,
        "contradictions": len(snap.contradictions),
        "consistent": no_flow == end["patient"]["no_flow_ticks"],
    }


def compare_rows(rows: Sequence[Mapping], metric: str, a: str, b: str) -> dict:
    """Paired delta of ``metric`` between scenarios ``a`` and ``b`` from runs.csv rows."""
    va = {int(r["seed"]): float(r[metric]) for r in rows if r["scenario"] == a}
    vb = {int(r["seed"]): float(r[metric]) for r in rows if r["scenario"] == b}
    seeds = sorted(set(va) & set(vb))
    return paired_delta([va[s] for s in seeds], [vb[s] for s in seeds])


__all__ = [
    "ExperimentSpec",
    "MSA_COLUMNS",
    "RUN_COLUMNS",
    "build_report",
    "compare_rows",
    "load_spec",
    "paired_delta",
    "replay",
    "run_experiment",
    "summarize",
]
