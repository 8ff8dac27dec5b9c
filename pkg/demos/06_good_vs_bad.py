"""
Good versus bad communication
=============================

Paired-seed replications of the structured and the unstructured team, written
to disk with a per-scenario report.
"""

# %%
import json
import sys
from pathlib import Path

from cprsim.experiment import load_spec, run_experiment

here = Path(__file__).parent
reps = int(sys.argv[1]) if len(sys.argv) > 1 else 20
out = Path(sys.argv[2]) if len(sys.argv) > 2 else here / "results"
spec = load_spec(here / "good_vs_bad.json", replications=reps, out=out)
report = run_experiment(spec)

# %%
for name, metrics in report["scenarios"].items():
    print(name)
    for key in ("rosc", "no_flow_ticks", "messages", "repetitions", "msa_final", "wrong_addressee_actions"):
        m = metrics[key]
        print(f"  {key:24s} {m['mean']:8.3f}  [{m['ci_low']:.3f}, {m['ci_high']:.3f}]")

# %%
print(json.dumps(report["paired"]["bad-good"]["no_flow_ticks"], indent=2))
