"""
Replaying a transcript
======================

Every run writes a JSONL transcript, and all metrics can be recomputed from it
alone.
"""

# %%
import tempfile
from pathlib import Path

from cprsim.engine import run_scenario
from cprsim.experiment import replay

r = run_scenario("bad", seed=11)
path = Path(tempfile.mkdtemp()) / "bad_11.jsonl"
path.write_text(r.log.to_jsonl())
print(len(r.log), "records written to", path)

# %%
m = replay(path)
print("no-flow (recorded, replayed):", r.patient.no_flow_ticks, m["no_flow_ticks"])
print("messages:", m["messages"], "repetitions:", m["repetitions"])
print("deviations:", sorted({d["kind"] for d in m["deviations"]}))
print("consistent:", m["consistent"])
